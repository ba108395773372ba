#include "rte/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rte/errors.hpp"

namespace rte {

namespace {

void check_sigma(std::span<const double> sigma) {
  if (sigma.empty()) throw InvalidArgumentError("cross section: no cells");
  for (double s : sigma) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw InvalidArgumentError("cross section: values must be finite and >= 0");
    }
  }
}

}  // namespace

ScatteringKernel linear_anisotropic_kernel(const AngularQuadrature& q) {
  if (q.dimension() != 1) {
    throw UnsupportedCombinationError("linear anisotropic kernel is defined for slab quadratures");
  }
  const auto w = q.weights();
  double second_moment = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) second_moment += w[k] * q.nodes()[k] * q.nodes()[k];
  ScatteringKernel kernel;
  kernel.eigenvalues = {1.0, second_moment};
  kernel.eigenvectors.emplace_back(q.size(), 1.0);
  std::vector<double> v2(q.size());
  const double norm = std::sqrt(second_moment);
  for (std::size_t k = 0; k < q.size(); ++k) v2[k] = q.nodes()[k] / norm;
  kernel.eigenvectors.push_back(std::move(v2));
  return kernel;
}

CrossSection CrossSection::isotropic(std::vector<double> sigma) {
  check_sigma(sigma);
  CrossSection cs;
  cs.sigma_ = std::move(sigma);
  return cs;
}

CrossSection CrossSection::anisotropic(std::vector<double> sigma0, ScatteringKernel kernel,
                                       const AngularQuadrature& q) {
  check_sigma(sigma0);
  const std::size_t rank = kernel.rank();
  if (rank == 0 || kernel.eigenvectors.size() != rank) {
    throw InvalidArgumentError("kernel: eigenvalue and eigenvector counts differ or are zero");
  }
  if (rank >= q.size()) {
    throw InvalidArgumentError("kernel: rank must be smaller than the node count");
  }
  if (std::abs(kernel.eigenvalues[0] - 1.0) > 1e-12) {
    throw InvalidArgumentError("kernel: leading eigenvalue must be 1");
  }
  for (std::size_t m = 1; m < rank; ++m) {
    if (!(std::abs(kernel.eigenvalues[m]) < 1.0)) {
      throw InvalidArgumentError("kernel: eigenvalues beyond the first must satisfy |xi| < 1");
    }
  }
  const auto w = q.weights();
  for (const auto& v : kernel.eigenvectors) {
    if (v.size() != q.size()) throw InvalidArgumentError("kernel: eigenvector length mismatch");
  }
  for (double v0 : kernel.eigenvectors[0]) {
    if (std::abs(v0 - kernel.eigenvectors[0][0]) > 1e-12) {
      throw InvalidArgumentError("kernel: first eigenvector must be constant");
    }
  }
  for (std::size_t a = 0; a < rank; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double dot = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        dot += kernel.eigenvectors[a][k] * w[k] * kernel.eigenvectors[b][k];
      }
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(dot - expected) > 1e-10) {
        throw InvalidArgumentError("kernel: eigenvectors are not w-orthonormal");
      }
    }
  }
  CrossSection cs;
  cs.sigma_ = std::move(sigma0);
  cs.kernel_ = std::move(kernel);
  return cs;
}

double CrossSection::max() const noexcept { return *std::max_element(sigma_.begin(), sigma_.end()); }
double CrossSection::min() const noexcept { return *std::min_element(sigma_.begin(), sigma_.end()); }

const ScatteringKernel& CrossSection::kernel() const {
  if (!kernel_) throw UnsupportedCombinationError("isotropic cross section has no kernel");
  return *kernel_;
}

void SchemeScalars::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("epsilon must be positive, got " + std::to_string(epsilon));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgumentError("dt must be positive, got " + std::to_string(dt));
  }
}

}  // namespace rte
