#include "rte/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rte/errors.hpp"
#include "rte/krylov.hpp"
#include "rte/stepper.hpp"

namespace rte {

double explicit_admissible_dt(const CrossSection& sigma, double epsilon, const SpatialMesh& mesh,
                              const AngularQuadrature& quad) {
  if (!(epsilon > 0.0)) throw InvalidArgumentError("explicit solver needs eps > 0");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k) {
    mx = std::max(mx, std::abs(quad.direction_x(k)));
    my = std::max(my, std::abs(quad.direction_y(k)));
  }
  double rate = mx / mesh.dx();
  if (mesh.dimension() == 2) rate += my / mesh.dy();
  // Positivity of the forward-Euler update: 1 - dt rate/eps - dt sigma/eps^2 >= 0.
  const double total = rate / epsilon + sigma.max() / (epsilon * epsilon);
  if (!(total > 0.0)) return std::numeric_limits<double>::infinity();
  return 0.9 / total;
}

KineticField explicit_step(const KineticField& f, const CrossSection& sigma, double epsilon,
                           double dt, const SpatialMesh& mesh, const AngularQuadrature& quad) {
  if (f.cells != mesh.cells() || f.nodes != quad.size() || sigma.cells() != mesh.cells()) {
    throw InvalidArgumentError("explicit_step: shapes do not match");
  }
  const double admissible = explicit_admissible_dt(sigma, epsilon, mesh, quad);
  if (!(dt > 0.0) || dt > admissible * (1.0 + 1e-12)) {
    throw CflError("explicit step dt = " + std::to_string(dt) + " exceeds the admissible " +
                       std::to_string(admissible),
                   admissible);
  }
  const std::size_t n = quad.size();
  // Scattered part P^sigma f per cell and node; rho for isotropic models.
  KineticField scattered(f.cells, n);
  if (sigma.is_isotropic()) {
    const auto rho = density(f, quad);
    for (std::size_t c = 0; c < f.cells; ++c) {
      for (std::size_t k = 0; k < n; ++k) scattered(c, k) = rho[c];
    }
  } else {
    const auto& kernel = sigma.kernel();
    const auto w = quad.weights();
    for (std::size_t c = 0; c < f.cells; ++c) {
      for (std::size_t m = 0; m < kernel.rank(); ++m) {
        const auto& v = kernel.eigenvectors[m];
        double proj = 0.0;
        for (std::size_t k = 0; k < n; ++k) proj += w[k] * v[k] * f(c, k);
        proj *= kernel.eigenvalues[m];
        for (std::size_t k = 0; k < n; ++k) scattered(c, k) += proj * v[k];
      }
    }
  }
  KineticField out(f.cells, n);
  const double ax = dt / (epsilon * mesh.dx());
  const double ay = mesh.dimension() == 2 ? dt / (epsilon * mesh.dy()) : 0.0;
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const std::size_t c = mesh.cell(i, j);
      const std::size_t e = mesh.cell(i + 1, j), w = mesh.cell(i - 1, j);
      const std::size_t nn = mesh.cell(i, j + 1), s = mesh.cell(i, j - 1);
      const double r = dt * sigma[c] / (epsilon * epsilon);
      for (std::size_t k = 0; k < n; ++k) {
        const double xi = quad.direction_x(k);
        const double fc = f(c, k);
        double flux = xi > 0.0 ? xi * (fc - f(w, k)) : xi * (f(e, k) - fc);
        double v = fc - ax * flux;
        if (mesh.dimension() == 2) {
          const double eta = quad.direction_y(k);
          flux = eta > 0.0 ? eta * (fc - f(s, k)) : eta * (f(nn, k) - fc);
          v -= ay * flux;
        }
        out(c, k) = v + r * (scattered(c, k) - fc);
      }
    }
  }
  return out;
}

KineticField explicit_solve(KineticField f0, const CrossSection& sigma, double epsilon,
                            const SpatialMesh& mesh, const AngularQuadrature& quad, double t_max,
                            double dt) {
  if (t_max == 0.0) return f0;
  if (dt <= 0.0) {
    const double admissible = explicit_admissible_dt(sigma, epsilon, mesh, quad);
    const double steps = std::ceil(t_max / admissible - 1e-12);
    dt = t_max / steps;
  }
  const StepPlan plan = plan_steps(dt, t_max);
  for (std::size_t n = 0; n < plan.steps; ++n) {
    const double h = n + 1 == plan.steps ? plan.last_dt : dt;
    f0 = explicit_step(f0, sigma, epsilon, h, mesh, quad);
  }
  return f0;
}

// ---------------------------------------------------------------------------

DiffusionSolver1D::DiffusionSolver1D(const SpatialMesh& mesh, std::span<const double> coefficient,
                                     double dt)
    : dt_(dt) {
  if (mesh.dimension() != 1) throw InvalidArgumentError("DiffusionSolver1D needs a 1D mesh");
  if (coefficient.size() != mesh.cells()) {
    throw InvalidArgumentError("diffusion coefficient length does not match the mesh");
  }
  if (!(dt > 0.0)) throw InvalidArgumentError("diffusion dt must be positive");
  const int nx = mesh.nx();
  const double r = dt / (mesh.dx() * mesh.dx());
  std::vector<double> lo(nx), d(nx), up(nx);
  for (int i = 0; i < nx; ++i) {
    const double kp = 0.5 * (coefficient[i] + coefficient[mesh.cell(i + 1)]);
    const double km = 0.5 * (coefficient[i] + coefficient[mesh.cell(i - 1)]);
    lo[i] = -r * km;
    up[i] = -r * kp;
    d[i] = 1.0 + r * (kp + km);
  }
  if (nx == 1) {
    lo[0] = up[0] = 0.0;
    d[0] = 1.0;
  }
  system_ = CyclicTridiagonal(std::move(lo), std::move(d), std::move(up));
}

std::vector<double> DiffusionSolver1D::step(std::span<const double> rho) const {
  return system_.solve(rho);
}

std::vector<double> limit_coefficient(const CrossSection& sigma, int dimension) {
  std::vector<double> k(sigma.cells());
  const double factor = !sigma.is_isotropic() ? 2.0 : (dimension == 1 ? 3.0 : 2.0);
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (!(sigma[c] > 0.0)) {
      throw SingularOperatorError("diffusion limit needs sigma > 0 in every cell (cell " +
                                  std::to_string(c) + ")");
    }
    k[c] = 1.0 / (factor * sigma[c]);
  }
  return k;
}

std::vector<double> diffusion_step_1d(std::span<const double> rho, const CrossSection& sigma,
                                      double dt, const SpatialMesh& mesh) {
  if (!sigma.is_isotropic()) throw UnsupportedCombinationError("use diffusion_step_aniso");
  const auto k = limit_coefficient(sigma, 1);
  return DiffusionSolver1D(mesh, k, dt).step(rho);
}

std::vector<double> diffusion_step_aniso(std::span<const double> rho, const CrossSection& sigma0,
                                         double dt, const SpatialMesh& mesh) {
  std::vector<double> k(sigma0.cells());
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (!(sigma0[c] > 0.0)) throw SingularOperatorError("anisotropic limit needs sigma0 > 0");
    k[c] = 1.0 / (2.0 * sigma0[c]);
  }
  return DiffusionSolver1D(mesh, k, dt).step(rho);
}

namespace {

class Diffusion2D {
 public:
  Diffusion2D(const SpatialMesh& mesh, std::span<const double> k, double dt) : mesh_(mesh) {
    const std::size_t nc = mesh.cells();
    ex_.resize(nc);
    ny_.resize(nc);
    diag_.resize(nc);
    const double rx = dt / (mesh.dx() * mesh.dx());
    const double ry = dt / (mesh.dy() * mesh.dy());
    for (int j = 0; j < mesh.ny(); ++j) {
      for (int i = 0; i < mesh.nx(); ++i) {
        const std::size_t c = mesh.cell(i, j);
        ex_[c] = rx * 0.5 * (k[c] + k[mesh.cell(i + 1, j)]);
        ny_[c] = ry * 0.5 * (k[c] + k[mesh.cell(i, j + 1)]);
      }
    }
    for (int j = 0; j < mesh.ny(); ++j) {
      for (int i = 0; i < mesh.nx(); ++i) {
        const std::size_t c = mesh.cell(i, j);
        diag_[c] = 1.0 + ex_[c] + ex_[mesh.cell(i - 1, j)] + ny_[c] + ny_[mesh.cell(i, j - 1)];
      }
    }
  }

  void apply(std::span<const double> x, std::span<double> y) const {
    for (int j = 0; j < mesh_.ny(); ++j) {
      for (int i = 0; i < mesh_.nx(); ++i) {
        const std::size_t c = mesh_.cell(i, j);
        const std::size_t w = mesh_.cell(i - 1, j), s = mesh_.cell(i, j - 1);
        y[c] = diag_[c] * x[c] - ex_[c] * x[mesh_.cell(i + 1, j)] - ex_[w] * x[w] -
               ny_[c] * x[mesh_.cell(i, j + 1)] - ny_[s] * x[s];
      }
    }
  }

  std::span<const double> diagonal() const { return diag_; }

 private:
  SpatialMesh mesh_;
  std::vector<double> ex_, ny_, diag_;
};

}  // namespace

std::vector<double> diffusion_step_2d(std::span<const double> rho, const CrossSection& sigma,
                                      double dt, const SpatialMesh& mesh, double tol) {
  if (mesh.dimension() != 2) throw InvalidArgumentError("diffusion_step_2d needs a 2D mesh");
  if (rho.size() != mesh.cells()) throw InvalidArgumentError("density length does not match mesh");
  const auto k = limit_coefficient(sigma, 2);
  const Diffusion2D sys(mesh, k, dt);
  LinearOperator op;
  op.n = mesh.cells();
  op.apply = [&sys](std::span<const double> x, std::span<double> y) { sys.apply(x, y); };
  op.precondition = [&sys](std::span<const double> x, std::span<double> y) {
    const auto d = sys.diagonal();
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / d[i];
  };
  std::vector<double> x(rho.begin(), rho.end());
  const auto rep = pcg_solve(op, rho, x, {tol, 10 * mesh.cells() + 100, 30});
  if (!rep.converged) throw SolverError("2D diffusion solve did not converge: " + rep.diagnostic, 0);
  return x;
}

std::vector<double> diffusion_solve(std::vector<double> rho0, const CrossSection& sigma,
                                    const SpatialMesh& mesh, double dt, double t_max) {
  const StepPlan plan = plan_steps(dt, t_max);
  if (mesh.dimension() == 1) {
    const auto k = limit_coefficient(sigma, 1);
    const DiffusionSolver1D full(mesh, k, dt);
    for (std::size_t n = 0; n < plan.steps; ++n) {
      if (n + 1 == plan.steps && std::abs(plan.last_dt - dt) > 1e-12 * dt) {
        rho0 = DiffusionSolver1D(mesh, k, plan.last_dt).step(rho0);
      } else {
        rho0 = full.step(rho0);
      }
    }
    return rho0;
  }
  for (std::size_t n = 0; n < plan.steps; ++n) {
    rho0 = diffusion_step_2d(rho0, sigma, n + 1 == plan.steps ? plan.last_dt : dt, mesh);
  }
  return rho0;
}

}  // namespace rte
