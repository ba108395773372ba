#include "rte/baselines.hpp"

#include <cmath>
#include <numeric>

#include "rte/errors.hpp"

namespace rte {

namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double l2_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double tail_contraction(const std::vector<double>& history) {
  if (history.size() < 3) return 0.0;
  const std::size_t span = std::min<std::size_t>(10, history.size() - 1);
  const double first = history[history.size() - 1 - span];
  const double last = history.back();
  if (first <= 0.0 || last <= 0.0) return 0.0;
  return std::pow(last / first, 1.0 / static_cast<double>(span));
}

}  // namespace

SweepOperator::SweepOperator(const SpatialMesh& mesh, const AngularQuadrature& quad,
                             const CrossSection& sigma, double epsilon, double dt)
    : mesh_(mesh), quad_(quad), epsilon_(epsilon), dt_(dt) {
  if (mesh.dimension() != 1 || quad.dimension() != 1) {
    throw UnsupportedCombinationError("legacy baselines are implemented for slab geometry only");
  }
  if (!sigma.is_isotropic()) throw UnsupportedCombinationError("baselines need isotropic scattering");
  if (sigma.cells() != mesh.cells()) throw InvalidArgumentError("cross section does not match mesh");
  SchemeScalars{epsilon, dt}.validate();
  const std::size_t nx = mesh.cells();
  coupling_.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) coupling_[i] = sigma[i] * dt / (epsilon * epsilon);
  advect_.resize(quad.size());
  per_angle_.reserve(quad.size());
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double a = quad.direction_x(k) * dt / (2.0 * epsilon * mesh.dx());
    advect_[k] = a;
    std::vector<double> lo(nx, -a), up(nx, a), d(nx);
    for (std::size_t i = 0; i < nx; ++i) d[i] = 1.0 + coupling_[i];
    per_angle_.emplace_back(std::move(lo), std::move(d), std::move(up));
  }
}

KineticField SweepOperator::apply_L(const KineticField& g) const {
  if (g.cells != mesh_.cells() || g.nodes != quad_.size()) {
    throw InvalidArgumentError("apply_L: field shape mismatch");
  }
  KineticField out(g.cells, g.nodes);
  const int nx = mesh_.nx();
  for (int i = 0; i < nx; ++i) {
    const std::size_t e = mesh_.cell(i + 1), w = mesh_.cell(i - 1);
    for (std::size_t k = 0; k < g.nodes; ++k) {
      out(i, k) = (1.0 + coupling_[i]) * g(i, k) + advect_[k] * (g(e, k) - g(w, k));
    }
  }
  return out;
}

KineticField SweepOperator::apply_L_inverse(const KineticField& g) const {
  if (g.cells != mesh_.cells() || g.nodes != quad_.size()) {
    throw InvalidArgumentError("apply_L_inverse: field shape mismatch");
  }
  KineticField out(g.cells, g.nodes);
  std::vector<double> line(g.cells);
  for (std::size_t k = 0; k < g.nodes; ++k) {
    for (std::size_t i = 0; i < g.cells; ++i) line[i] = g(i, k);
    per_angle_[k].solve(std::span<double>(line));
    for (std::size_t i = 0; i < g.cells; ++i) out(i, k) = line[i];
  }
  return out;
}

KineticField SweepOperator::transport(std::span<const double> rho, const KineticField& source) const {
  KineticField rhs = source;
  for (std::size_t i = 0; i < rhs.cells; ++i) {
    const double add = coupling_[i] * rho[i];
    for (std::size_t k = 0; k < rhs.nodes; ++k) rhs(i, k) += add;
  }
  return apply_L_inverse(rhs);
}

// ---------------------------------------------------------------------------

WideDiffusionSolver::WideDiffusionSolver(const SpatialMesh& mesh, std::span<const double> kappa)
    : mesh_(mesh), kappa_(kappa.begin(), kappa.end()) {
  const int n = mesh.nx();
  if (mesh.dimension() != 1 || kappa.size() != mesh.cells()) {
    throw InvalidArgumentError("WideDiffusionSolver: slab mesh and matching coefficient required");
  }
  const double r = 1.0 / (4.0 * mesh.dx() * mesh.dx());
  const int ncycles = std::gcd(n, 2);
  for (int s = 0; s < ncycles; ++s) {
    std::vector<std::size_t> idx;
    for (int i = s;; i = (i + 2) % n) {
      idx.push_back(static_cast<std::size_t>(i));
      if ((i + 2) % n == s) break;
    }
    std::vector<double> lo(idx.size()), d(idx.size()), up(idx.size());
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const int i = static_cast<int>(idx[m]);
      const double kp = kappa_[mesh.cell(i + 1)] * r;
      const double km = kappa_[mesh.cell(i - 1)] * r;
      lo[m] = -km;
      up[m] = -kp;
      d[m] = 1.0 + kp + km;
    }
    systems_.emplace_back(std::move(lo), std::move(d), std::move(up));
    cycles_.push_back(std::move(idx));
  }
}

std::vector<double> WideDiffusionSolver::solve(std::span<const double> rhs) const {
  std::vector<double> out(rhs.size());
  for (std::size_t c = 0; c < cycles_.size(); ++c) {
    std::vector<double> line(cycles_[c].size());
    for (std::size_t m = 0; m < line.size(); ++m) line[m] = rhs[cycles_[c][m]];
    systems_[c].solve(std::span<double>(line));
    for (std::size_t m = 0; m < line.size(); ++m) out[cycles_[c][m]] = line[m];
  }
  return out;
}

std::vector<double> WideDiffusionSolver::apply(std::span<const double> u) const {
  const int n = mesh_.nx();
  const double h = 2.0 * mesh_.dx();
  std::vector<double> grad(n), out(n);
  for (int i = 0; i < n; ++i) {
    grad[i] = kappa_[i] * (u[mesh_.cell(i + 1)] - u[mesh_.cell(i - 1)]) / h;
  }
  for (int i = 0; i < n; ++i) {
    out[i] = u[i] - (grad[mesh_.cell(i + 1)] - grad[mesh_.cell(i - 1)]) / h;
  }
  return out;
}

std::vector<double> dsa_coefficient(const CrossSection& sigma, double epsilon, double dt) {
  std::vector<double> k(sigma.cells());
  for (std::size_t i = 0; i < k.size(); ++i) {
    k[i] = dt * dt / (3.0 * (epsilon * epsilon + sigma[i] * dt));
  }
  return k;
}

// ---------------------------------------------------------------------------

std::pair<KineticField, std::vector<double>> si_iterate(const KineticField& f_n,
                                                        std::span<const double> rho,
                                                        const SweepOperator& sweep) {
  KineticField f = sweep.transport(rho, f_n);
  auto next = density(f, sweep.quad());
  return {std::move(f), std::move(next)};
}

std::pair<KineticField, std::vector<double>> si_dsa_step(const KineticField& f_n,
                                                         std::span<const double> rho,
                                                         const SweepOperator& sweep,
                                                         const WideDiffusionSolver& dsa) {
  auto [f, half] = si_iterate(f_n, rho, sweep);
  const auto c = sweep.coupling();
  std::vector<double> rhs(half.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = c[i] * (half[i] - rho[i]);
  const auto delta = dsa.solve(rhs);
  for (std::size_t i = 0; i < half.size(); ++i) half[i] += delta[i];
  return {std::move(f), std::move(half)};
}

namespace {

template <typename Step>
IterationResult iterate(const KineticField& f_n, const SweepOperator& sweep, double tol,
                        std::size_t max_iter, Step step) {
  IterationResult res;
  res.rho = density(f_n, sweep.quad());
  while (res.iterations < max_iter) {
    auto [f, next] = step(res.rho);
    const double change = l2_diff(next, res.rho) / std::max(l2(next), 1e-300);
    res.history.push_back(change);
    res.f = std::move(f);
    res.rho = std::move(next);
    ++res.iterations;
    if (change <= tol) {
      res.converged = true;
      break;
    }
  }
  // f consistent with the final density
  res.f = sweep.transport(res.rho, f_n);
  res.contraction = tail_contraction(res.history);
  return res;
}

}  // namespace

IterationResult si_solve(const KineticField& f_n, const SweepOperator& sweep, double tol,
                         std::size_t max_iter) {
  return iterate(f_n, sweep, tol, max_iter,
                 [&](std::span<const double> rho) { return si_iterate(f_n, rho, sweep); });
}

IterationResult si_dsa_solve(const KineticField& f_n, const SweepOperator& sweep, double tol,
                             std::size_t max_iter) {
  const CrossSection sigma = [&] {
    std::vector<double> s(sweep.coupling().begin(), sweep.coupling().end());
    const double e2 = sweep.epsilon() * sweep.epsilon();
    for (double& v : s) v = v * e2 / sweep.dt();
    return CrossSection::isotropic(std::move(s));
  }();
  const WideDiffusionSolver dsa(sweep.mesh(), dsa_coefficient(sigma, sweep.epsilon(), sweep.dt()));
  return iterate(f_n, sweep, tol, max_iter,
                 [&](std::span<const double> rho) { return si_dsa_step(f_n, rho, sweep, dsa); });
}

DensityKrylovResult dsa_krylov_solve(const KineticField& f_n, const SweepOperator& sweep,
                                     const KrylovOptions& options, bool dsa) {
  const std::size_t nx = sweep.mesh().cells();
  const auto c = sweep.coupling();
  const KineticField zero(f_n.cells, f_n.nodes);
  const std::vector<double> no_rho(nx, 0.0);
  const auto b = density(sweep.transport(no_rho, f_n), sweep.quad());

  std::vector<double> sigma_values(c.begin(), c.end());
  const double e2 = sweep.epsilon() * sweep.epsilon();
  for (double& v : sigma_values) v = v * e2 / sweep.dt();
  const WideDiffusionSolver wide(
      sweep.mesh(),
      dsa_coefficient(CrossSection::isotropic(sigma_values), sweep.epsilon(), sweep.dt()));

  LinearOperator op;
  op.n = nx;
  op.apply = [&](std::span<const double> rho, std::span<double> out) {
    const auto p = density(sweep.transport(rho, zero), sweep.quad());
    for (std::size_t i = 0; i < nx; ++i) out[i] = rho[i] - p[i];
  };
  if (dsa) {
    op.precondition = [&](std::span<const double> r, std::span<double> out) {
      std::vector<double> cr(nx);
      for (std::size_t i = 0; i < nx; ++i) cr[i] = c[i] * r[i];
      const auto d = wide.solve(cr);
      for (std::size_t i = 0; i < nx; ++i) out[i] = r[i] + d[i];
    };
  }
  DensityKrylovResult res;
  res.rho.assign(nx, 0.0);
  res.report = gmres_solve(op, b, res.rho, options);
  res.f = sweep.transport(res.rho, f_n);
  return res;
}

}  // namespace rte
