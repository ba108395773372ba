#include "rte/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rte/dense.hpp"
#include "rte/errors.hpp"
#include "rte/krylov.hpp"

namespace rte {

namespace {

void finish(ConditionReport& r) {
  if (!(r.lambda_min > 1e-14 * std::abs(r.lambda_max))) {
    r.singular = true;
    r.kappa = std::numeric_limits<double>::infinity();
  } else {
    r.kappa = r.lambda_max / r.lambda_min;
  }
}

double dot_w(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

// Self-adjoint operator Op = M^{-1} K in the M inner product, where K and M
// are both self-adjoint in the w inner product (M = I for the plain system).
struct PencilOps {
  std::size_t n;
  std::span<const double> w;
  ApplyFn k;
  ApplyFn m;          // empty: identity
  ApplyFn m_inverse;  // empty: identity
  ApplyFn k_precond;  // preconditioner for inner solves with K
};

double rayleigh(const PencilOps& p, std::span<const double> v, std::vector<double>& kv,
                std::vector<double>& mv) {
  p.k(v, kv);
  if (p.m) {
    p.m(v, mv);
  } else {
    std::copy(v.begin(), v.end(), mv.begin());
  }
  return dot_w(v, kv, p.w) / dot_w(v, mv, p.w);
}

// ||K v - lambda M v||_w / (|lambda| ||M v||_w).
double pencil_residual(const PencilOps& p, std::span<const double> v, double lambda) {
  std::vector<double> kv(p.n), mv(p.n), r(p.n);
  rayleigh(p, v, kv, mv);
  for (std::size_t i = 0; i < p.n; ++i) r[i] = kv[i] - lambda * mv[i];
  return std::sqrt(dot_w(r, r, p.w)) / (std::abs(lambda) * std::sqrt(dot_w(mv, mv, p.w)));
}

void normalize(std::vector<double>& v, std::span<const double> w) {
  const double n = std::sqrt(dot_w(v, v, w));
  for (double& x : v) x /= n;
}

constexpr std::size_t kPowerMaxIter = 20000;
constexpr double kPowerTol = 1e-12;

std::vector<double> start_vector(std::size_t n) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::pair<double, std::vector<double>> power_max(const PencilOps& p) {
  auto v = start_vector(p.n);
  normalize(v, p.w);
  std::vector<double> kv(p.n), mv(p.n);
  double lambda = rayleigh(p, v, kv, mv);
  for (std::size_t it = 0; it < kPowerMaxIter; ++it) {
    if (p.m_inverse) {
      p.m_inverse(kv, v);
    } else {
      v = kv;
    }
    normalize(v, p.w);
    const double next = rayleigh(p, v, kv, mv);
    const bool done = std::abs(next - lambda) <= kPowerTol * std::abs(next);
    lambda = next;
    if (done) break;
  }
  return {lambda, v};
}

std::pair<double, std::vector<double>> inverse_power_min(const PencilOps& p) {
  auto v = start_vector(p.n);
  normalize(v, p.w);
  std::vector<double> kv(p.n), mv(p.n), rhs(p.n);
  double lambda = rayleigh(p, v, kv, mv);
  const LinearOperator op{p.n, p.k, p.k_precond};
  KrylovOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 5000;
  for (std::size_t it = 0; it < kPowerMaxIter; ++it) {
    // K y = M v
    std::vector<double> y(p.n, 0.0);
    pcg_solve(op, mv, y, opts, p.w);
    v = std::move(y);
    normalize(v, p.w);
    const double next = rayleigh(p, v, kv, mv);
    const bool done = std::abs(next - lambda) <= kPowerTol * std::abs(next);
    lambda = next;
    if (done) break;
  }
  return {lambda, v};
}

ConditionReport base_report(ConditionTarget target, const SpatialMesh& mesh,
                            const AngularQuadrature& quad, const SchemeScalars& s,
                            ConditionMethod method) {
  ConditionReport r;
  r.name = to_string(target);
  r.nx = mesh.nx();
  r.nv = static_cast<int>(quad.size());
  r.epsilon = s.epsilon;
  r.dt = s.dt;
  r.method = method;
  return r;
}

}  // namespace

std::string to_string(ConditionTarget target) {
  return target == ConditionTarget::system ? "A+B" : "B^-1A+I";
}

std::string to_string(ConditionMethod method) {
  return method == ConditionMethod::dense ? "dense" : "iterative";
}

ConditionReport symmetric_condition(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                          Eigen::EigenvaluesOnly);
  ConditionReport r;
  r.lambda_min = es.eigenvalues().minCoeff();
  r.lambda_max = es.eigenvalues().maxCoeff();
  finish(r);
  return r;
}

ConditionReport generalized_condition(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m) {
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (k + k.transpose()), 0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SingularOperatorError("generalized eigensolve failed (mass matrix not definite)");
  }
  ConditionReport r;
  r.lambda_min = es.eigenvalues().minCoeff();
  r.lambda_max = es.eigenvalues().maxCoeff();
  finish(r);
  return r;
}

ConditionReport condition_number(ConditionTarget target, const SpatialMesh& mesh,
                                 const AngularQuadrature& quad, const CrossSection& sigma,
                                 const SchemeScalars& s, ConditionMethod method,
                                 EvenStencil stencil) {
  ConditionReport out = base_report(target, mesh, quad, s, method);
  if (method == ConditionMethod::dense) {
    const ParityOperators ops(mesh, quad, sigma, s, stencil);
    const auto& w = ops.inner_weights();
    const Eigen::VectorXd wv = Eigen::VectorXd::Map(w.data(), static_cast<Eigen::Index>(w.size()));
    const auto system = dense_assemble(DenseOperator::parity_system, mesh, quad, sigma, s, stencil);
    ConditionReport r;
    if (target == ConditionTarget::system) {
      const Eigen::VectorXd root = wv.cwiseSqrt();
      r = symmetric_condition(root.asDiagonal() * system * root.cwiseInverse().asDiagonal());
    } else {
      const auto b = dense_assemble(DenseOperator::collision_half, mesh, quad, sigma, s, stencil);
      r = generalized_condition(wv.asDiagonal() * system, wv.asDiagonal() * b);
    }
    out.lambda_min = r.lambda_min;
    out.lambda_max = r.lambda_max;
    finish(out);
    return out;
  }

  const ParityOperators ops(mesh, quad, sigma, s, stencil);
  PencilOps p;
  p.n = ops.size();
  p.w = ops.inner_weights();
  p.k = [&ops](std::span<const double> x, std::span<double> y) { ops.apply_system(x, y); };
  p.k_precond = [&ops](std::span<const double> x, std::span<double> y) {
    ops.apply_collision_shift_inverse(x, y);
  };
  if (target == ConditionTarget::preconditioned) {
    p.m = [&ops](std::span<const double> x, std::span<double> y) { ops.apply_collision_shift(x, y); };
    p.m_inverse = p.k_precond;
  }
  const auto [lmax, vmax] = power_max(p);
  const auto [lmin, vmin] = inverse_power_min(p);
  out.lambda_max = lmax;
  out.lambda_min = lmin;
  out.residual_max = pencil_residual(p, vmax, lmax);
  out.residual_min = pencil_residual(p, vmin, lmin);
  finish(out);
  return out;
}

double resolve_dt(DtRule rule, double dx) {
  switch (rule) {
    case DtRule::dx_over_3: return dx / 3.0;
    case DtRule::dx: return dx;
    case DtRule::fixed_1e_2: return 1e-2;
    case DtRule::fixed_1e_1: return 1e-1;
    case DtRule::fixed_1: return 1.0;
  }
  throw InvalidArgumentError("unknown dt rule");
}

std::string to_string(DtRule rule) {
  switch (rule) {
    case DtRule::dx_over_3: return "dx/3";
    case DtRule::dx: return "dx";
    case DtRule::fixed_1e_2: return "1e-2";
    case DtRule::fixed_1e_1: return "1e-1";
    case DtRule::fixed_1: return "1";
  }
  return "?";
}

std::vector<CalibrationRow> calibration_sweep(double epsilon, std::span<const int> nx,
                                              std::span<const int> nv,
                                              std::span<const DtRule> rules,
                                              ConditionMethod method) {
  std::vector<CalibrationRow> rows;
  for (DtRule rule : rules) {
    for (int n : nx) {
      const auto mesh = SpatialMesh::line(0.0, 2.0, n);
      const auto sigma = CrossSection::isotropic(std::vector<double>(static_cast<std::size_t>(n), 1.0));
      const SchemeScalars s{epsilon, resolve_dt(rule, mesh.dx())};
      for (int v : nv) {
        const auto quad = build_midpoint_quadrature(v);
        CalibrationRow row;
        row.rule = rule;
        row.system = condition_number(ConditionTarget::system, mesh, quad, sigma, s, method);
        row.preconditioned =
            condition_number(ConditionTarget::preconditioned, mesh, quad, sigma, s, method);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

double ConditionReference::at(int nx_value, int nv_value) const {
  const auto i = std::find(nx.begin(), nx.end(), nx_value);
  const auto j = std::find(nv.begin(), nv.end(), nv_value);
  if (i == nx.end() || j == nv.end()) return 0.0;
  return values[static_cast<std::size_t>(i - nx.begin()) * nv.size() +
                static_cast<std::size_t>(j - nv.begin())];
}

const ConditionReference& reference_kinetic_system() {
  static const ConditionReference ref{
      {20, 40, 60, 80, 100},
      {10, 20, 30},
      {1.34748186880472, 1.38654551078317, 1.40000848404069,
       1.35413818003715, 1.39425840610708, 1.40810090542130,
       1.35618972627881, 1.39664857130697, 1.41061251454211,
       1.35718028325749, 1.39780546942190, 1.41182902863886,
       1.35776282383554, 1.39848680698068, 1.41254576051502}};
  return ref;
}

const ConditionReference& reference_diffusive_system() {
  static const ConditionReference ref{
      {20, 40, 60, 80, 100},
      {10, 20, 30},
      {1.59e8, 1.59e8, 1.59e8, 8.12e7, 8.12e7, 8.12e7, 5.46e7, 5.46e7, 5.46e7,
       4.11e7, 4.11e7, 4.11e7, 3.30e7, 3.30e7, 3.30e7}};
  return ref;
}

const ConditionReference& reference_diffusive_preconditioned() {
  static const ConditionReference ref{
      {20, 40, 60, 80, 100},
      {10, 20, 30},
      {15.88, 16.14, 16.19, 31.50, 32.04, 32.14, 47.12, 47.94, 48.09,
       62.74, 63.84, 64.05, 78.37, 79.75, 80.00}};
  return ref;
}

DtRule best_rule(const std::vector<CalibrationRow>& rows, const ConditionReference& reference,
                 bool preconditioned, double* score) {
  double best = std::numeric_limits<double>::infinity();
  DtRule chosen = DtRule::dx_over_3;
  for (DtRule rule : kAllDtRules) {
    double sum = 0.0;
    int count = 0;
    for (const auto& row : rows) {
      if (row.rule != rule) continue;
      const auto& r = preconditioned ? row.preconditioned : row.system;
      const double ref = reference.at(r.nx, r.nv);
      if (ref <= 0.0 || !std::isfinite(r.kappa)) continue;
      sum += std::abs(std::log(r.kappa / ref));
      ++count;
    }
    if (count == 0) continue;
    const double mean = sum / count;
    if (mean < best) {
      best = mean;
      chosen = rule;
    }
  }
  if (!std::isfinite(best)) throw InvalidArgumentError("best_rule: no row has a reference value");
  if (score) *score = best;
  return chosen;
}

double weighted_l2_norm(const KineticField& f, const SpatialMesh& mesh,
                        const AngularQuadrature& quad) {
  if (f.cells != mesh.cells() || f.nodes != quad.size()) {
    throw InvalidArgumentError("weighted_l2_norm: field shape mismatch");
  }
  double s = 0.0;
  for (std::size_t c = 0; c < f.cells; ++c) {
    for (std::size_t k = 0; k < f.nodes; ++k) s += quad.weights()[k] * f(c, k) * f(c, k);
  }
  return std::sqrt(s * mesh.cell_volume());
}

double total_mass(std::span<const double> rho, const SpatialMesh& mesh) {
  if (rho.size() != mesh.cells()) throw InvalidArgumentError("total_mass: density size mismatch");
  double s = 0.0;
  for (double r : rho) s += r;
  return s * mesh.cell_volume();
}

double total_mass(const KineticField& f, const SpatialMesh& mesh, const AngularQuadrature& quad) {
  return total_mass(density(f, quad), mesh);
}

double ap_distance_f_rho(const KineticField& f, const SpatialMesh& mesh,
                         const AngularQuadrature& quad) {
  if (f.cells != mesh.cells() || f.nodes != quad.size()) {
    throw InvalidArgumentError("ap_distance_f_rho: field shape mismatch");
  }
  const double dmu = (quad.dimension() == 1 ? 2.0 : 2.0 * std::numbers::pi) / static_cast<double>(quad.size());
  double s = 0.0;
  for (std::size_t c = 0; c < f.cells; ++c) {
    const double rho = angular_average(f.cell_values(c), quad);
    for (std::size_t k = 0; k < f.nodes; ++k) s += (f(c, k) - rho) * (f(c, k) - rho);
  }
  return std::sqrt(s * mesh.cell_volume() * dmu);
}

double rho_distance(std::span<const double> a, std::span<const double> b, const SpatialMesh& mesh) {
  if (a.size() != mesh.cells() || b.size() != mesh.cells()) {
    throw InvalidArgumentError("rho_distance: densities do not match the mesh");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s * mesh.cell_volume());
}

StabilityMonitor::StabilityMonitor(const SpatialMesh& mesh, const AngularQuadrature& quad,
                                   const KineticField& f0, double threshold)
    : mesh_(mesh), quad_(quad), threshold_(threshold) {
  record(0, 0.0, f0);
}

void StabilityMonitor::record(std::size_t step, double t, const KineticField& f) {
  MonitorRecord r;
  r.step = step;
  r.t = t;
  r.norm = weighted_l2_norm(f, mesh_, quad_);
  r.mass = total_mass(f, mesh_, quad_);
  if (!records_.empty()) {
    const double prev = records_.back().norm * records_.back().norm;
    const double now = r.norm * r.norm;
    r.relative_increase = prev > 0.0 ? (now - prev) / prev : now;
    r.flagged = r.relative_increase > threshold_;
  }
  records_.push_back(r);
}

StepObserver StabilityMonitor::observer() {
  return [this](const SimulationState& state, const StepReport&) {
    record(state.step, state.t, state.f);
  };
}

std::size_t StabilityMonitor::flag_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.flagged; }));
}

double StabilityMonitor::max_relative_increase() const noexcept {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < records_.size(); ++i) m = std::max(m, records_[i].relative_increase);
  return records_.size() > 1 ? m : 0.0;
}

double StabilityMonitor::max_mass_drift() const noexcept {
  const double m0 = records_.front().mass;
  double d = 0.0;
  for (const auto& r : records_) {
    d = std::max(d, m0 != 0.0 ? std::abs(r.mass - m0) / std::abs(m0) : std::abs(r.mass));
  }
  return d;
}

}  // namespace rte
