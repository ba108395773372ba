#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rte/cross_section.hpp"
#include "rte/fields.hpp"
#include "rte/mesh.hpp"
#include "rte/quadrature.hpp"

namespace rte {

// ---------------------------------------------------------------------------
// Per-cell collision kernels. `weights` are the quadrature weights of the node
// set `g` lives on (full set, or the renormalized positive half).
// ---------------------------------------------------------------------------

/// (eps^2/dt + sigma) g - sigma (P g) 1.
void collision_shift(std::span<const double> g, double sigma, const SchemeScalars& s,
                     std::span<const double> weights, std::span<double> out);

/// Inverse of collision_shift: the mean is divided by eps^2/dt, the
/// fluctuation by eps^2/dt + sigma. One weighted reduction and one pass.
/// Throws StiffLimitError when eps = 0.
void collision_shift_inverse(std::span<const double> g, double sigma, const SchemeScalars& s,
                             std::span<const double> weights, std::span<double> out);

/// sum_m xi_m (v_m^t W g) v_m.
void aniso_projector(std::span<const double> g, const ScatteringKernel& kernel,
                     std::span<const double> weights, std::span<double> out);

/// (eps^2/dt + sigma0) g - sigma0 P^sigma g.
void aniso_shift(std::span<const double> g, double sigma0, const ScatteringKernel& kernel,
                 const SchemeScalars& s, std::span<const double> weights, std::span<double> out);

/// Inverse of aniso_shift through the kernel eigenbasis: component m is
/// divided by eps^2/dt + sigma0 (1 - xi_m), the complement by eps^2/dt + sigma0.
void aniso_shift_inverse(std::span<const double> g, double sigma0, const ScatteringKernel& kernel,
                         const SchemeScalars& s, std::span<const double> weights,
                         std::span<double> out);

namespace instrumentation {
/// Number of vector entries read or written by collision_shift_inverse on this
/// thread since the last reset.
std::size_t collision_inverse_touches() noexcept;
void reset_collision_inverse_touches() noexcept;
}  // namespace instrumentation

// ---------------------------------------------------------------------------
// Even-parity (symmetric) path.
// ---------------------------------------------------------------------------

/// Discretization of the even elliptic operator -div(D (Omega.grad f) Omega).
///   compact: flux form with arithmetic face means of D (three-point in each
///            axis, four-corner stencil for the mixed 2D term).
///   wide:    centered difference applied twice; this is exactly the parity
///            reduction of the centered non-symmetric system.
enum class EvenStencil { compact, wide };

/// Matrix-free operators of the even-odd parity scheme on the positive half
/// of the quadrature. Grid functions are cell-major with the half-node index
/// running fastest.
class ParityOperators {
 public:
  ParityOperators(const SpatialMesh& mesh, const AngularQuadrature& quad, const CrossSection& sigma,
                  const SchemeScalars& scalars, EvenStencil stencil = EvenStencil::compact);

  std::size_t size() const noexcept { return mesh_.cells() * half_.size(); }
  const SpatialMesh& mesh() const noexcept { return mesh_; }
  const HalfQuadrature& half() const noexcept { return half_; }
  const SchemeScalars& scalars() const noexcept { return scalars_; }
  EvenStencil stencil() const noexcept { return stencil_; }

  /// w_k * cell volume per entry; A and B are self-adjoint in this inner product.
  const std::vector<double>& inner_weights() const noexcept { return inner_weights_; }
  double inner(std::span<const double> a, std::span<const double> b) const;

  void apply_even_elliptic(std::span<const double> fe, std::span<double> out) const;
  void apply_collision_shift(std::span<const double> g, std::span<double> out) const;
  void apply_collision_shift_inverse(std::span<const double> g, std::span<double> out) const;
  /// (A + B) f.
  void apply_system(std::span<const double> fe, std::span<double> out) const;

  /// (eps^2/dt) [ f_E - Omega.grad( eps dt / (eps^2 + sigma dt) f_O ) ].
  std::vector<double> assemble_rhs(std::span<const double> fe_old,
                                   std::span<const double> fo_old) const;

  /// eps^2/(eps^2 + sigma dt) (f_O - (dt/eps) Omega.grad f_E).
  std::vector<double> update_odd(std::span<const double> fe_new,
                                 std::span<const double> fo_old) const;

 private:
  // out[c,k] = (dir_x_k d/dx + dir_y_k d/dy)(coef * u) with centered differences.
  void directional_derivative(std::span<const double> u, std::span<const double> coef,
                              std::span<double> out) const;
  void apply_compact(std::span<const double> fe, std::span<double> out) const;

  SpatialMesh mesh_;
  HalfQuadrature half_;
  std::vector<double> sigma_;
  SchemeScalars scalars_;
  EvenStencil stencil_;
  std::vector<double> diffusion_;    // D_i per cell
  std::vector<double> face_x_;       // D at face i+1/2 (x)
  std::vector<double> face_y_;       // D at face j+1/2 (y)
  std::vector<double> rhs_coef_;     // eps dt/(eps^2 + sigma dt)
  std::vector<double> damping_;      // eps^2/(eps^2 + sigma dt)
  std::vector<double> inner_weights_;
};

// ---------------------------------------------------------------------------
// Full-node (non-symmetric) path.
// ---------------------------------------------------------------------------

/// Operators of the centered implicit system (B + C) f^{n+1} = (eps^2/dt) f^n on
/// the full node set. B is the isotropic or anisotropic collision shift.
class TransportOperators {
 public:
  TransportOperators(const SpatialMesh& mesh, const AngularQuadrature& quad,
                     const CrossSection& sigma, const SchemeScalars& scalars);

  std::size_t size() const noexcept { return mesh_.cells() * nodes_; }
  std::size_t nodes() const noexcept { return nodes_; }
  const SchemeScalars& scalars() const noexcept { return scalars_; }

  /// C g = eps Omega.grad g, centered differences.
  void apply_streaming(std::span<const double> g, std::span<double> out) const;
  void apply_collision_shift(std::span<const double> g, std::span<double> out) const;
  void apply_collision_shift_inverse(std::span<const double> g, std::span<double> out) const;
  /// (B + C) f.
  void apply_system(std::span<const double> f, std::span<double> out) const;

 private:
  SpatialMesh mesh_;
  std::size_t nodes_;
  std::vector<double> dir_x_;
  std::vector<double> dir_y_;
  std::vector<double> weights_;
  CrossSection sigma_;
  SchemeScalars scalars_;
};

// Convenience single-call forms.

std::vector<double> apply_even_elliptic(std::span<const double> fe, const CrossSection& sigma,
                                        const SchemeScalars& s, const SpatialMesh& mesh,
                                        const AngularQuadrature& quad,
                                        EvenStencil stencil = EvenStencil::compact);

std::vector<double> assemble_parity_rhs(const ParityPair& pair, const CrossSection& sigma,
                                        const SchemeScalars& s, const SpatialMesh& mesh,
                                        const AngularQuadrature& quad);

std::vector<double> update_odd(std::span<const double> fe_new, std::span<const double> fo_old,
                               const CrossSection& sigma, const SchemeScalars& s,
                               const SpatialMesh& mesh, const AngularQuadrature& quad);

KineticField apply_streaming(const KineticField& g, const SchemeScalars& s, const SpatialMesh& mesh,
                             const AngularQuadrature& quad);

}  // namespace rte
