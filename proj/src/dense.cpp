#include "rte/dense.hpp"

#include <string>

#include "rte/errors.hpp"

namespace rte {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Forward difference f_{i+1} - f_i (unscaled) along an axis.
MatrixXd forward_difference(const SpatialMesh& mesh, int axis) {
  const auto n = static_cast<Eigen::Index>(mesh.cells());
  MatrixXd d = MatrixXd::Zero(n, n);
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const auto c = static_cast<Eigen::Index>(mesh.cell(i, j));
      const auto nb = static_cast<Eigen::Index>(axis == 0 ? mesh.cell(i + 1, j) : mesh.cell(i, j + 1));
      d(c, nb) += 1.0;
      d(c, c) -= 1.0;
    }
  }
  return d;
}

MatrixXd diag(const std::vector<double>& v) {
  return VectorXd::Map(v.data(), static_cast<Eigen::Index>(v.size())).asDiagonal();
}

std::vector<double> half_component(const HalfQuadrature& h, int axis, int power) {
  std::vector<double> out(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double d = axis == 0 ? h.dir_x[k] : h.dir_y[k];
    out[k] = power == 1 ? d : d * d;
  }
  return out;
}

MatrixXd elliptic(const SpatialMesh& mesh, const HalfQuadrature& half, const CrossSection& sigma,
                  const SchemeScalars& s, EvenStencil stencil) {
  const std::size_t nc = mesh.cells();
  std::vector<double> d(nc);
  for (std::size_t c = 0; c < nc; ++c) d[c] = s.even_diffusion(sigma[c]);
  const MatrixXd gx = centered_difference_matrix(mesh, 0);
  const MatrixXd dmat = diag(d);
  std::vector<double> xi(half.size()), eta(half.size()), xe(half.size());
  for (std::size_t k = 0; k < half.size(); ++k) {
    xi[k] = half.dir_x[k];
    eta[k] = half.dir_y[k];
    xe[k] = xi[k] * eta[k];
  }
  if (stencil == EvenStencil::wide) {
    MatrixXd grad = kronecker(gx, diag(xi));
    if (mesh.dimension() == 2) grad += kronecker(centered_difference_matrix(mesh, 1), diag(eta));
    const MatrixXd dk = kronecker(dmat, MatrixXd::Identity(half.size(), half.size()));
    return -grad * dk * grad;
  }
  auto axis_term = [&](int axis, double h) {
    const MatrixXd dp = forward_difference(mesh, axis);
    std::vector<double> face(nc);
    for (int j = 0; j < mesh.ny(); ++j) {
      for (int i = 0; i < mesh.nx(); ++i) {
        const std::size_t c = mesh.cell(i, j);
        const std::size_t nb = axis == 0 ? mesh.cell(i + 1, j) : mesh.cell(i, j + 1);
        face[c] = 0.5 * (d[c] + d[nb]);
      }
    }
    return MatrixXd(dp.transpose() * diag(face) * dp / (h * h));
  };
  MatrixXd a = kronecker(axis_term(0, mesh.dx()), diag(half_component(half, 0, 2)));
  if (mesh.dimension() == 2) {
    const MatrixXd gy = centered_difference_matrix(mesh, 1);
    a += kronecker(axis_term(1, mesh.dy()), diag(half_component(half, 1, 2)));
    const MatrixXd mixed = -(gx * dmat * gy + gy * dmat * gx);
    a += kronecker(mixed, diag(xe));
  }
  return a;
}

MatrixXd block_diagonal_collision(const SpatialMesh& mesh, std::span<const double> weights,
                                  const CrossSection& sigma, const SchemeScalars& s) {
  const auto nv = static_cast<Eigen::Index>(weights.size());
  const auto nc = static_cast<Eigen::Index>(mesh.cells());
  MatrixXd b = MatrixXd::Zero(nc * nv, nc * nv);
  const auto full_weights = std::vector<double>(weights.begin(), weights.end());
  for (Eigen::Index c = 0; c < nc; ++c) {
    MatrixXd block;
    if (sigma.is_isotropic()) {
      block = dense_collision_block(weights, sigma[static_cast<std::size_t>(c)], s);
    } else {
      const auto& kernel = sigma.kernel();
      const double s0 = sigma[static_cast<std::size_t>(c)];
      MatrixXd p = MatrixXd::Zero(nv, nv);
      for (std::size_t m = 0; m < kernel.rank(); ++m) {
        const VectorXd v = VectorXd::Map(kernel.eigenvectors[m].data(), nv);
        const VectorXd wv = v.cwiseProduct(VectorXd::Map(full_weights.data(), nv));
        p += kernel.eigenvalues[m] * v * wv.transpose();
      }
      block = (s.shift() + s0) * MatrixXd::Identity(nv, nv) - s0 * p;
    }
    b.block(c * nv, c * nv, nv, nv) = block;
  }
  return b;
}

MatrixXd streaming(const SpatialMesh& mesh, const AngularQuadrature& quad, const SchemeScalars& s) {
  std::vector<double> xi(quad.size()), eta(quad.size());
  for (std::size_t k = 0; k < quad.size(); ++k) {
    xi[k] = quad.direction_x(k);
    eta[k] = quad.direction_y(k);
  }
  MatrixXd c = kronecker(centered_difference_matrix(mesh, 0), diag(xi));
  if (mesh.dimension() == 2) c += kronecker(centered_difference_matrix(mesh, 1), diag(eta));
  return s.epsilon * c;
}

}  // namespace

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

Eigen::MatrixXd centered_difference_matrix(const SpatialMesh& mesh, int axis) {
  const MatrixXd fwd = forward_difference(mesh, axis);
  const double h = axis == 0 ? mesh.dx() : mesh.dy();
  return (fwd - fwd.transpose()) / (2.0 * h);
}

Eigen::MatrixXd dense_collision_block(std::span<const double> weights, double sigma,
                                      const SchemeScalars& s) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  const VectorXd w = VectorXd::Map(weights.data(), n);
  return (s.shift() + sigma) * MatrixXd::Identity(n, n) - sigma * VectorXd::Ones(n) * w.transpose();
}

Eigen::MatrixXd dense_assemble(DenseOperator which, const SpatialMesh& mesh,
                               const AngularQuadrature& quad, const CrossSection& sigma,
                               const SchemeScalars& s, EvenStencil stencil, std::size_t row_cap) {
  s.validate();
  const bool half_grid = which == DenseOperator::even_elliptic ||
                         which == DenseOperator::collision_half ||
                         which == DenseOperator::parity_system;
  const std::size_t rows = mesh.cells() * (half_grid ? quad.size() / 2 : quad.size());
  if (rows > row_cap) {
    throw CapacityError("dense assembly of " + std::to_string(rows) + " rows exceeds the cap of " +
                        std::to_string(row_cap));
  }
  if (sigma.cells() != mesh.cells()) {
    throw InvalidArgumentError("dense_assemble: cross section does not match the mesh");
  }
  if (half_grid && !sigma.is_isotropic()) {
    throw UnsupportedCombinationError("dense_assemble: parity operators need isotropic scattering");
  }
  const HalfQuadrature half = positive_half(quad);
  switch (which) {
    case DenseOperator::even_elliptic:
      return elliptic(mesh, half, sigma, s, stencil);
    case DenseOperator::collision_half:
      return block_diagonal_collision(mesh, half.weights, sigma, s);
    case DenseOperator::parity_system:
      return elliptic(mesh, half, sigma, s, stencil) +
             block_diagonal_collision(mesh, half.weights, sigma, s);
    case DenseOperator::streaming:
      return streaming(mesh, quad, s);
    case DenseOperator::collision_full:
      return block_diagonal_collision(mesh, quad.weights(), sigma, s);
    case DenseOperator::transport_system:
      return streaming(mesh, quad, s) + block_diagonal_collision(mesh, quad.weights(), sigma, s);
  }
  throw InvalidArgumentError("dense_assemble: unknown operator");
}

}  // namespace rte
