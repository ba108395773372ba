#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rte {

/// Periodic tridiagonal system
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i],  indices mod n.
///
/// Factored once by bordering: the leading (n-1) block is eliminated with the
/// Thomas algorithm and the corner unknown is recovered from a scalar Schur
/// complement. No pivoting; intended for diagonally dominant or SPD systems.
class CyclicTridiagonal {
 public:
  CyclicTridiagonal() = default;
  CyclicTridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);

  std::size_t size() const noexcept { return n_; }

  /// Solves in place: on entry x holds the right-hand side.
  void solve(std::span<double> x) const;
  std::vector<double> solve(std::span<const double> rhs) const;

  /// y = M x, for residual checks.
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  void thomas(std::span<double> x) const;  // on the leading (n-1) block

  std::size_t n_ = 0;
  std::vector<double> lower_, diag_, upper_;
  std::vector<double> cprime_;   // Thomas forward sweep factors
  std::vector<double> denom_;
  std::vector<double> border_;   // T^{-1} times the last column
  double schur_ = 0.0;
};

}  // namespace rte
