#include "rte/linalg.hpp"

#include <cmath>

#include "rte/errors.hpp"

namespace rte {

namespace {

void check_pivot(double p) {
  if (p == 0.0 || !std::isfinite(p)) {
    throw SingularOperatorError("cyclic tridiagonal: zero pivot");
  }
}

}  // namespace

CyclicTridiagonal::CyclicTridiagonal(std::vector<double> lower, std::vector<double> diag,
                                     std::vector<double> upper)
    : n_(diag.size()), lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
  if (n_ == 0 || lower_.size() != n_ || upper_.size() != n_) {
    throw InvalidArgumentError("cyclic tridiagonal: band lengths must be equal and nonzero");
  }
  if (n_ == 1) {
    schur_ = lower_[0] + diag_[0] + upper_[0];
    check_pivot(schur_);
    return;
  }
  if (n_ == 2) {
    // [d0, l0+u0; l1+u1, d1]
    schur_ = diag_[0] * diag_[1] - (lower_[0] + upper_[0]) * (lower_[1] + upper_[1]);
    check_pivot(schur_);
    return;
  }
  const std::size_t m = n_ - 1;
  cprime_.resize(m);
  denom_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = diag_[i] - (i > 0 ? lower_[i] * cprime_[i - 1] : 0.0);
    check_pivot(d);
    denom_[i] = d;
    cprime_[i] = i + 1 < m ? upper_[i] / d : 0.0;
  }
  border_.assign(m, 0.0);
  border_[0] = lower_[0];
  border_[m - 1] += upper_[m - 1];
  thomas(border_);
  // Last row: upper[n-1] x[0] + lower[n-1] x[n-2] + diag[n-1] x[n-1].
  schur_ = diag_[m] - upper_[m] * border_[0] - lower_[m] * border_[m - 1];
  check_pivot(schur_);
}

void CyclicTridiagonal::thomas(std::span<double> x) const {
  const std::size_t m = n_ - 1;
  x[0] /= denom_[0];
  for (std::size_t i = 1; i < m; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) / denom_[i];
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= cprime_[i] * x[i + 1];
}

void CyclicTridiagonal::solve(std::span<double> x) const {
  if (x.size() != n_) throw InvalidArgumentError("cyclic tridiagonal: rhs length mismatch");
  if (n_ == 1) {
    x[0] /= schur_;
    return;
  }
  if (n_ == 2) {
    const double a = diag_[0], b = lower_[0] + upper_[0];
    const double c = lower_[1] + upper_[1], d = diag_[1];
    const double r0 = x[0], r1 = x[1];
    x[0] = (d * r0 - b * r1) / schur_;
    x[1] = (a * r1 - c * r0) / schur_;
    return;
  }
  const std::size_t m = n_ - 1;
  thomas(x.first(m));
  const double last = (x[m] - upper_[m] * x[0] - lower_[m] * x[m - 1]) / schur_;
  for (std::size_t i = 0; i < m; ++i) x[i] -= border_[i] * last;
  x[m] = last;
}

std::vector<double> CyclicTridiagonal::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve(std::span<double>(x));
  return x;
}

void CyclicTridiagonal::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw InvalidArgumentError("cyclic tridiagonal: length mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t l = (i + n_ - 1) % n_;
    const std::size_t r = (i + 1) % n_;
    y[i] = lower_[i] * x[l] + diag_[i] * x[i] + upper_[i] * x[r];
  }
}

}  // namespace rte
