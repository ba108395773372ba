#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rte {

/// y = Op(x); both spans have the operator dimension.
using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Matrix-free square operator with an optional preconditioner.
struct LinearOperator {
  std::size_t n = 0;
  ApplyFn apply;
  ApplyFn precondition;  // may be empty (identity)
};

struct KrylovOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  std::size_t restart = 30;  // GMRES only
};

struct KrylovReport {
  std::size_t iterations = 0;
  std::size_t matvec_count = 0;
  std::size_t precond_count = 0;
  bool converged = false;
  /// Relative (preconditioned) residual: entry 0 is the initial guess.
  std::vector<double> residual_history;
  std::string diagnostic;

  double final_residual() const noexcept {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

/// Preconditioned conjugate gradients in the inner product sum_i w_i a_i b_i
/// (plain Euclidean when `weights` is empty). The stopping test is on the
/// relative preconditioned residual sqrt(<r, M r>_w / <b, M b>_w).
///
/// `x` holds the initial guess on entry. Throws IndefiniteOperatorError on
/// nonpositive curvature below -1e-12 of the current scale.
KrylovReport pcg_solve(const LinearOperator& op, std::span<const double> b, std::span<double> x,
                       const KrylovOptions& options, std::span<const double> weights = {});

/// Restarted GMRES with left preconditioning, modified Gram-Schmidt and Givens
/// rotations. The stopping test is on ||M(b - Ax)|| / ||M b||.
KrylovReport gmres_solve(const LinearOperator& op, std::span<const double> b, std::span<double> x,
                         const KrylovOptions& options);

}  // namespace rte
