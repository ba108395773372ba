#include "rte/fields.hpp"

#include <cmath>

#include "rte/errors.hpp"

namespace rte {

ParityPair split_parity(const KineticField& f, const HalfQuadrature& half) {
  if (f.nodes != 2 * half.size()) {
    throw InvalidArgumentError("split_parity: field node count does not match quadrature");
  }
  ParityPair p(f.cells, half.size());
  for (std::size_t c = 0; c < f.cells; ++c) {
    for (std::size_t k = 0; k < half.size(); ++k) {
      const double plus = f(c, half.full_index[k]);
      const double minus = f(c, half.mirror_index[k]);
      p.even[c * half.size() + k] = 0.5 * (plus + minus);
      p.odd[c * half.size() + k] = 0.5 * (plus - minus);
    }
  }
  return p;
}

KineticField merge_parity(const ParityPair& p, const HalfQuadrature& half, std::size_t full_nodes) {
  if (p.half_nodes != half.size() || full_nodes != 2 * half.size()) {
    throw InvalidArgumentError("merge_parity: pair does not match quadrature");
  }
  KineticField f(p.cells, full_nodes);
  for (std::size_t c = 0; c < p.cells; ++c) {
    for (std::size_t k = 0; k < half.size(); ++k) {
      const double e = p.even[c * half.size() + k];
      const double o = p.odd[c * half.size() + k];
      f(c, half.full_index[k]) = e + o;
      f(c, half.mirror_index[k]) = e - o;
    }
  }
  return f;
}

std::vector<double> density(const KineticField& f, const AngularQuadrature& q) {
  if (f.nodes != q.size()) {
    throw InvalidArgumentError("density: field node count does not match quadrature");
  }
  std::vector<double> rho(f.cells);
  for (std::size_t c = 0; c < f.cells; ++c) rho[c] = angular_average(f.cell_values(c), q);
  return rho;
}

std::vector<double> density(const ParityPair& p, const HalfQuadrature& half) {
  std::vector<double> rho(p.cells, 0.0);
  for (std::size_t c = 0; c < p.cells; ++c) {
    double s = 0.0;
    for (std::size_t k = 0; k < half.size(); ++k) s += half.weights[k] * p.even[c * half.size() + k];
    rho[c] = s;
  }
  return rho;
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace rte
