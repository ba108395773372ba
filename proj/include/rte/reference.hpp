#pragma once

#include <span>
#include <vector>

#include "rte/cross_section.hpp"
#include "rte/fields.hpp"
#include "rte/linalg.hpp"
#include "rte/mesh.hpp"
#include "rte/quadrature.hpp"

namespace rte {

// ---------------------------------------------------------------------------
// Explicit kinetic reference: forward Euler, first-order upwind transport.
// ---------------------------------------------------------------------------

/// Largest admissible explicit step:
/// 0.9 / ( (max|xi|/dx + max|eta|/dy) / eps + max sigma / eps^2 ).
double explicit_admissible_dt(const CrossSection& sigma, double epsilon, const SpatialMesh& mesh,
                              const AngularQuadrature& quad);

/// f - (dt/eps) Omega.grad_upwind f + (dt sigma / eps^2)(P f - f), where P f = rho
/// for isotropic scattering and P^sigma f for a kernel.
/// Throws CflError (carrying the admissible dt) when dt is too large.
KineticField explicit_step(const KineticField& f, const CrossSection& sigma, double epsilon,
                           double dt, const SpatialMesh& mesh, const AngularQuadrature& quad);

/// Explicit run to t_max with the largest admissible uniform step that lands
/// on t_max (or the given dt, which must be admissible).
KineticField explicit_solve(KineticField f0, const CrossSection& sigma, double epsilon,
                            const SpatialMesh& mesh, const AngularQuadrature& quad, double t_max,
                            double dt = 0.0);

// ---------------------------------------------------------------------------
// Implicit diffusion-limit solvers: backward Euler, periodic flux form.
// ---------------------------------------------------------------------------

/// (I + dt D_h) rho^{n+1} = rho^n on a 1D periodic mesh, where
/// D_h rho = -(1/dx^2)[k_{i+1/2}(rho_{i+1}-rho_i) - k_{i-1/2}(rho_i-rho_{i-1})]
/// and face coefficients are arithmetic means of the cell values k_i.
/// The cyclic tridiagonal factorization is computed once.
class DiffusionSolver1D {
 public:
  DiffusionSolver1D(const SpatialMesh& mesh, std::span<const double> coefficient, double dt);
  std::vector<double> step(std::span<const double> rho) const;
  double dt() const noexcept { return dt_; }

 private:
  CyclicTridiagonal system_;
  double dt_;
};

/// rho_t = d_x( 1/(3 sigma) d_x rho ). Throws SingularOperatorError if any sigma_i = 0.
std::vector<double> diffusion_step_1d(std::span<const double> rho, const CrossSection& sigma,
                                      double dt, const SpatialMesh& mesh);

/// rho_t = d_x( 1/(2 sigma0) d_x rho ), the reduced limit of the degree-one
/// anisotropic kernel (diffusive sign).
std::vector<double> diffusion_step_aniso(std::span<const double> rho, const CrossSection& sigma0,
                                         double dt, const SpatialMesh& mesh);

/// rho_t = (1/2) div( sigma^{-1} grad rho ) with the five-point flux stencil,
/// solved by Jacobi-preconditioned CG to relative residual `tol`.
std::vector<double> diffusion_step_2d(std::span<const double> rho, const CrossSection& sigma,
                                      double dt, const SpatialMesh& mesh, double tol = 1e-13);

/// Diffusion coefficient of the limit equation per cell: 1/(3 sigma) in a
/// slab, 1/(2 sigma) in the plane, 1/(2 sigma0) for the anisotropic kernel.
std::vector<double> limit_coefficient(const CrossSection& sigma, int dimension);

/// Backward-Euler diffusion run to t_max with step dt (last step shortened).
std::vector<double> diffusion_solve(std::vector<double> rho0, const CrossSection& sigma,
                                    const SpatialMesh& mesh, double dt, double t_max);

}  // namespace rte
