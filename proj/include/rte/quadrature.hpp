#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rte {

/// Discrete ordinates on mu in (-1,1) (slab) or on the unit circle (planar).
///
/// Weights are normalized to sum to one, so the angular average of a
/// per-node sequence is a plain weighted sum. Every node has an antipodal
/// partner given by parity(k); the partner direction is the exact negation.
class AngularQuadrature {
 public:
  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return weights_.size(); }

  /// mu_k in 1D, theta_k in 2D.
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t parity(std::size_t k) const { return parity_.at(k); }

  /// Components of the flight direction Omega_k. In 1D direction_y is zero.
  double direction_x(std::size_t k) const noexcept { return dir_x_[k]; }
  double direction_y(std::size_t k) const noexcept { return dir_y_[k]; }

  /// Nodes carrying the parity pair: mu > 0 in 1D, theta in [0, pi) in 2D.
  bool is_positive(std::size_t k) const noexcept { return positive_[k]; }

 private:
  friend AngularQuadrature build_midpoint_quadrature(int);
  friend AngularQuadrature build_gauss_quadrature(int);
  friend AngularQuadrature build_circle_quadrature(int);

  int dimension_ = 1;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<std::size_t> parity_;
  std::vector<double> dir_x_;
  std::vector<double> dir_y_;
  std::vector<bool> positive_;
};

/// mu_k = -1 + (k + 1/2) 2/N, w_k = 1/N.
AngularQuadrature build_midpoint_quadrature(int n);

/// Gauss-Legendre nodes on (-1,1), weights rescaled to sum to one.
AngularQuadrature build_gauss_quadrature(int n);

/// theta_j = 2 pi j / N on the unit circle, w_j = 1/N.
AngularQuadrature build_circle_quadrature(int n);

/// sum_k w_k g_k.
double angular_average(std::span<const double> g, const AngularQuadrature& q);

/// The positive half of a quadrature used for parity storage. Weights are
/// renormalized to sum to one so that <f_E> over the half equals <f> over
/// the full set for even functions.
struct HalfQuadrature {
  std::vector<std::size_t> full_index;    // index of the positive node
  std::vector<std::size_t> mirror_index;  // index of its negation
  std::vector<double> dir_x;
  std::vector<double> dir_y;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

HalfQuadrature positive_half(const AngularQuadrature& q);

}  // namespace rte
