#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rte/cross_section.hpp"
#include "rte/fields.hpp"
#include "rte/krylov.hpp"
#include "rte/linalg.hpp"
#include "rte/mesh.hpp"
#include "rte/quadrature.hpp"

namespace rte {

/// L = (1 + c_i) I + (mu dt / eps) G per direction, with c_i = sigma_i dt / eps^2
/// and G the periodic centered difference. Every direction is one cyclic
/// tridiagonal system, factored once. Slab geometry, isotropic scattering.
class SweepOperator {
 public:
  SweepOperator(const SpatialMesh& mesh, const AngularQuadrature& quad, const CrossSection& sigma,
                double epsilon, double dt);

  KineticField apply_L(const KineticField& g) const;
  KineticField apply_L_inverse(const KineticField& g) const;

  /// c_i = sigma_i dt / eps^2.
  std::span<const double> coupling() const noexcept { return coupling_; }
  const SpatialMesh& mesh() const noexcept { return mesh_; }
  const AngularQuadrature& quad() const noexcept { return quad_; }
  double epsilon() const noexcept { return epsilon_; }
  double dt() const noexcept { return dt_; }

  /// f = L^{-1}( c E rho + source ): the transport half-step.
  KineticField transport(std::span<const double> rho, const KineticField& source) const;

 private:
  SpatialMesh mesh_;
  AngularQuadrature quad_;
  std::vector<double> coupling_;
  std::vector<double> advect_;  // mu_k dt / (2 eps dx)
  std::vector<CyclicTridiagonal> per_angle_;
  double epsilon_, dt_;
};

/// (I + D_h) on a periodic slab with D_h u = -G(kappa G u), G centered.
/// The stencil couples i with i+-2, so the system splits into the cycles of
/// i -> i+2 (mod N_x), each solved as a cyclic tridiagonal system.
class WideDiffusionSolver {
 public:
  WideDiffusionSolver(const SpatialMesh& mesh, std::span<const double> kappa);
  std::vector<double> solve(std::span<const double> rhs) const;
  std::vector<double> apply(std::span<const double> u) const;

 private:
  SpatialMesh mesh_;
  std::vector<double> kappa_;
  std::vector<std::vector<std::size_t>> cycles_;
  std::vector<CyclicTridiagonal> systems_;
};

/// kappa_i = dt^2 / (3 (eps^2 + sigma_i dt)); tends to dt/(3 sigma_i) as eps -> 0
/// and stays finite where sigma vanishes.
std::vector<double> dsa_coefficient(const CrossSection& sigma, double epsilon, double dt);

struct IterationResult {
  KineticField f;
  std::vector<double> rho;
  std::size_t iterations = 0;
  bool converged = false;
  /// Relative density increment per iteration.
  std::vector<double> history;
  /// Geometric mean of the increment ratio over the last iterations.
  double contraction = 0.0;
};

/// One source iteration: f = L^{-1}(c E rho + f^n), rho' = P f.
std::pair<KineticField, std::vector<double>> si_iterate(const KineticField& f_n,
                                                        std::span<const double> rho,
                                                        const SweepOperator& sweep);

/// One SI step followed by the diffusion correction
/// (I + D_h) d = c (rho^{l+1/2} - rho^l), rho^{l+1} = rho^{l+1/2} + d.
std::pair<KineticField, std::vector<double>> si_dsa_step(const KineticField& f_n,
                                                         std::span<const double> rho,
                                                         const SweepOperator& sweep,
                                                         const WideDiffusionSolver& dsa);

/// Iterates until ||rho^{l+1} - rho^l|| <= tol ||rho^{l+1}|| (discrete L2).
IterationResult si_solve(const KineticField& f_n, const SweepOperator& sweep, double tol,
                         std::size_t max_iter);
IterationResult si_dsa_solve(const KineticField& f_n, const SweepOperator& sweep, double tol,
                             std::size_t max_iter);

struct DensityKrylovResult {
  std::vector<double> rho;
  KineticField f;
  KrylovReport report;
};

/// GMRES on (I - P L^{-1} c E) rho = P L^{-1} f^n, left preconditioned by
/// I + (I + D_h)^{-1} c when `dsa` is set, unpreconditioned otherwise.
/// f^{n+1} = L^{-1}(c E rho + f^n).
DensityKrylovResult dsa_krylov_solve(const KineticField& f_n, const SweepOperator& sweep,
                                     const KrylovOptions& options, bool dsa = true);

}  // namespace rte
