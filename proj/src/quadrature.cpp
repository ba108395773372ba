#include "rte/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rte/errors.hpp"

namespace rte {

namespace {

void require_even(int n, int minimum, const char* what) {
  if (n < minimum || n % 2 != 0) {
    throw InvalidArgumentError(std::string(what) + ": node count must be even and >= " +
                               std::to_string(minimum) + ", got " + std::to_string(n));
  }
}

// Legendre nodes and weights on (-1,1) by Newton iteration on P_n, only the
// positive roots are computed; the negative half is mirrored exactly.
void gauss_legendre_positive(int n, std::vector<double>& x, std::vector<double>& w) {
  const int half = n / 2;
  x.assign(half, 0.0);
  w.assign(half, 0.0);
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

AngularQuadrature build_midpoint_quadrature(int n) {
  require_even(n, 2, "midpoint quadrature");
  AngularQuadrature q;
  q.dimension_ = 1;
  const auto size = static_cast<std::size_t>(n);
  q.nodes_.resize(size);
  q.weights_.assign(size, 1.0 / n);
  q.parity_.resize(size);
  const double h = 2.0 / n;
  for (std::size_t k = 0; k < size / 2; ++k) {
    const double mu = 1.0 - (k + 0.5) * h;  // positive, from the top down
    q.nodes_[size - 1 - k] = mu;
    q.nodes_[k] = -mu;
  }
  for (std::size_t k = 0; k < size; ++k) q.parity_[k] = size - 1 - k;
  q.dir_x_ = q.nodes_;
  q.dir_y_.assign(size, 0.0);
  q.positive_.resize(size);
  for (std::size_t k = 0; k < size; ++k) q.positive_[k] = q.nodes_[k] > 0.0;
  return q;
}

AngularQuadrature build_gauss_quadrature(int n) {
  require_even(n, 2, "gauss quadrature");
  std::vector<double> x, w;
  gauss_legendre_positive(n, x, w);
  AngularQuadrature q;
  q.dimension_ = 1;
  const auto size = static_cast<std::size_t>(n);
  q.nodes_.resize(size);
  q.weights_.resize(size);
  q.parity_.resize(size);
  double total = 0.0;
  for (double wi : w) total += 2.0 * wi;
  // x[0] is the root closest to 1; store ascending.
  for (std::size_t i = 0; i < size / 2; ++i) {
    q.nodes_[size - 1 - i] = x[i];
    q.nodes_[i] = -x[i];
    q.weights_[size - 1 - i] = w[i] / total;
    q.weights_[i] = w[i] / total;
  }
  for (std::size_t k = 0; k < size; ++k) q.parity_[k] = size - 1 - k;
  q.dir_x_ = q.nodes_;
  q.dir_y_.assign(size, 0.0);
  q.positive_.resize(size);
  for (std::size_t k = 0; k < size; ++k) q.positive_[k] = q.nodes_[k] > 0.0;
  return q;
}

AngularQuadrature build_circle_quadrature(int n) {
  require_even(n, 4, "circle quadrature");
  AngularQuadrature q;
  q.dimension_ = 2;
  const auto size = static_cast<std::size_t>(n);
  const std::size_t half = size / 2;
  q.nodes_.resize(size);
  q.weights_.assign(size, 1.0 / n);
  q.parity_.resize(size);
  q.dir_x_.resize(size);
  q.dir_y_.resize(size);
  q.positive_.resize(size);
  for (std::size_t j = 0; j < size; ++j) {
    q.nodes_[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
    q.parity_[j] = (j + half) % size;
    q.positive_[j] = j < half;
  }
  for (std::size_t j = 0; j < half; ++j) {
    q.dir_x_[j] = std::cos(q.nodes_[j]);
    q.dir_y_[j] = std::sin(q.nodes_[j]);
    q.dir_x_[j + half] = -q.dir_x_[j];
    q.dir_y_[j + half] = -q.dir_y_[j];
  }
  return q;
}

double angular_average(std::span<const double> g, const AngularQuadrature& q) {
  if (g.size() != q.size()) {
    throw InvalidArgumentError("angular_average: sequence has " + std::to_string(g.size()) +
                               " entries, quadrature has " + std::to_string(q.size()));
  }
  const auto w = q.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) sum += w[k] * g[k];
  return sum;
}

HalfQuadrature positive_half(const AngularQuadrature& q) {
  HalfQuadrature h;
  double total = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!q.is_positive(k)) continue;
    h.full_index.push_back(k);
    h.mirror_index.push_back(q.parity(k));
    h.dir_x.push_back(q.direction_x(k));
    h.dir_y.push_back(q.direction_y(k));
    h.weights.push_back(q.weights()[k]);
    total += q.weights()[k];
  }
  for (double& w : h.weights) w /= total;
  return h;
}

}  // namespace rte
