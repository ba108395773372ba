#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rte/quadrature.hpp"

namespace rte {

/// f(x, Omega) sampled per (cell, node); node index runs fastest.
struct KineticField {
  std::size_t cells = 0;
  std::size_t nodes = 0;
  std::vector<double> values;

  KineticField() = default;
  KineticField(std::size_t n_cells, std::size_t n_nodes, double fill = 0.0)
      : cells(n_cells), nodes(n_nodes), values(n_cells * n_nodes, fill) {}

  double& operator()(std::size_t cell, std::size_t k) { return values[cell * nodes + k]; }
  double operator()(std::size_t cell, std::size_t k) const { return values[cell * nodes + k]; }

  std::span<double> cell_values(std::size_t cell) { return {values.data() + cell * nodes, nodes}; }
  std::span<const double> cell_values(std::size_t cell) const {
    return {values.data() + cell * nodes, nodes};
  }
};

/// Even and odd parts stored on the positive half of the quadrature.
/// On a positive node f = even + odd, on its mirror f = even - odd.
struct ParityPair {
  std::size_t cells = 0;
  std::size_t half_nodes = 0;
  std::vector<double> even;
  std::vector<double> odd;

  ParityPair() = default;
  ParityPair(std::size_t n_cells, std::size_t n_half)
      : cells(n_cells), half_nodes(n_half), even(n_cells * n_half, 0.0),
        odd(n_cells * n_half, 0.0) {}
};

ParityPair split_parity(const KineticField& f, const HalfQuadrature& half);
KineticField merge_parity(const ParityPair& p, const HalfQuadrature& half, std::size_t full_nodes);

/// Per-cell density rho_i = sum_k w_k f_ik.
std::vector<double> density(const KineticField& f, const AngularQuadrature& q);
/// Density of a parity pair, rho = <f_E> over the half set.
std::vector<double> density(const ParityPair& p, const HalfQuadrature& half);

bool all_finite(std::span<const double> v);

}  // namespace rte
