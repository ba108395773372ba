#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "rte/cross_section.hpp"
#include "rte/mesh.hpp"
#include "rte/operators.hpp"
#include "rte/quadrature.hpp"

namespace rte {

/// Which operator to assemble.
///   even_elliptic    A on the positive half
///   collision_half   B on the positive half (isotropic only)
///   parity_system    A + B
///   streaming        C on the full node set
///   collision_full   B or B^sigma on the full node set
///   transport_system B + C (or B^sigma + C)
enum class DenseOperator {
  even_elliptic,
  collision_half,
  parity_system,
  streaming,
  collision_full,
  transport_system
};

inline constexpr std::size_t kDenseRowCap = 4096;

/// Explicit matrix of an operator, built from difference matrices and
/// Kronecker products rather than by probing the matrix-free code.
/// Throws CapacityError when the row count exceeds `row_cap`.
Eigen::MatrixXd dense_assemble(DenseOperator which, const SpatialMesh& mesh,
                               const AngularQuadrature& quad, const CrossSection& sigma,
                               const SchemeScalars& s, EvenStencil stencil = EvenStencil::compact,
                               std::size_t row_cap = kDenseRowCap);

/// Periodic centered first difference (f_{i+1} - f_{i-1}) / (2 h) on the
/// mesh's cell ordering, along x (axis 0) or y (axis 1).
Eigen::MatrixXd centered_difference_matrix(const SpatialMesh& mesh, int axis);

/// Dense B_mu for one cell: (eps^2/dt + sigma) I - sigma 1 w^t.
Eigen::MatrixXd dense_collision_block(std::span<const double> weights, double sigma,
                                      const SchemeScalars& s);

/// A (x) B.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace rte
