#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rte/quadrature.hpp"

namespace rte {

/// Low-rank scattering kernel in eigenform: P^sigma g = sum_m xi_m (v_m^t W g) v_m.
///
/// eigenvectors[m] holds v_m sampled on the full node set; the set is
/// orthonormal in the w-weighted inner product, v_0 is the constant vector and
/// eigenvalues[0] = 1.
struct ScatteringKernel {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;

  std::size_t rank() const noexcept { return eigenvalues.size(); }
};

/// sigma(mu . mu') = 1 + mu mu' on a 1D quadrature: v_1 = 1, v_2 = mu / sqrt(<mu^2>),
/// xi_2 = <mu^2> (1/3 up to quadrature error).
ScatteringKernel linear_anisotropic_kernel(const AngularQuadrature& q);

enum class ScatteringKind { isotropic, anisotropic };

/// Per-cell scattering cross section, optionally with an anisotropic kernel
/// (then the per-cell values are sigma_0).
class CrossSection {
 public:
  static CrossSection isotropic(std::vector<double> sigma);
  static CrossSection anisotropic(std::vector<double> sigma0, ScatteringKernel kernel,
                                  const AngularQuadrature& q);

  ScatteringKind kind() const noexcept { return kernel_ ? ScatteringKind::anisotropic
                                                        : ScatteringKind::isotropic; }
  bool is_isotropic() const noexcept { return !kernel_; }
  std::size_t cells() const noexcept { return sigma_.size(); }
  std::span<const double> values() const noexcept { return sigma_; }
  double operator[](std::size_t cell) const noexcept { return sigma_[cell]; }
  double max() const noexcept;
  double min() const noexcept;

  /// Throws UnsupportedCombinationError for isotropic models.
  const ScatteringKernel& kernel() const;

 private:
  std::vector<double> sigma_;
  std::optional<ScatteringKernel> kernel_;
};

/// eps and dt together with the derived per-cell coefficients of the implicit scheme.
struct SchemeScalars {
  double epsilon = 1.0;
  double dt = 1.0;

  /// eps^2 / dt, the collision-shift eigenvalue on isotropic functions.
  double shift() const noexcept { return epsilon * epsilon / dt; }
  /// eps^2 dt / (eps^2 + sigma dt), coefficient of the even elliptic operator.
  double even_diffusion(double sigma) const noexcept {
    const double e2 = epsilon * epsilon;
    return e2 * dt / (e2 + sigma * dt);
  }
  /// eps^2 / (eps^2 + sigma dt), damping factor of the odd update.
  double odd_damping(double sigma) const noexcept {
    const double e2 = epsilon * epsilon;
    return e2 / (e2 + sigma * dt);
  }

  void validate() const;
};

}  // namespace rte
