#include "rte/operators.hpp"

#include <cmath>

#include "rte/errors.hpp"

namespace rte {

namespace {

thread_local std::size_t g_inverse_touches = 0;

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgumentError(std::string(what) + ": length mismatch");
}

double weighted_sum(std::span<const double> g, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += w[k] * g[k];
  return s;
}

// Projection coefficients c_m = v_m^t W g.
std::vector<double> kernel_coefficients(std::span<const double> g, const ScatteringKernel& kernel,
                                        std::span<const double> w) {
  std::vector<double> c(kernel.rank(), 0.0);
  for (std::size_t m = 0; m < kernel.rank(); ++m) {
    const auto& v = kernel.eigenvectors[m];
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) s += v[k] * w[k] * g[k];
    c[m] = s;
  }
  return c;
}

void check_kernel_size(const ScatteringKernel& kernel, std::size_t n) {
  for (const auto& v : kernel.eigenvectors) {
    if (v.size() != n) throw InvalidArgumentError("kernel: eigenvector length does not match field");
  }
}

}  // namespace

void collision_shift(std::span<const double> g, double sigma, const SchemeScalars& s,
                     std::span<const double> weights, std::span<double> out) {
  check_lengths(g.size(), weights.size(), "collision_shift");
  check_lengths(g.size(), out.size(), "collision_shift");
  if (!(sigma >= 0.0)) throw InvalidArgumentError("collision_shift: sigma must be >= 0");
  // shift g + sigma (g - Pg), with the fluctuation re-centred so that its
  // weighted mean is exact to rounding relative to the fluctuation itself.
  const double mean = weighted_sum(g, weights);
  double drift = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) drift += weights[k] * (g[k] - mean);
  const double shift = s.shift();
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = shift * g[k] + sigma * (g[k] - mean - drift);
}

void collision_shift_inverse(std::span<const double> g, double sigma, const SchemeScalars& s,
                             std::span<const double> weights, std::span<double> out) {
  check_lengths(g.size(), weights.size(), "collision_shift_inverse");
  check_lengths(g.size(), out.size(), "collision_shift_inverse");
  if (s.epsilon == 0.0) {
    throw StiffLimitError("collision inverse is singular at eps = 0; use the diffusion solver");
  }
  const double shift = s.shift();
  const double mean = weighted_sum(g, weights);
  const double inv_fluct = 1.0 / (shift + sigma);
  const double mean_part = mean / shift - mean * inv_fluct;
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = inv_fluct * g[k] + mean_part;
  g_inverse_touches += 3 * g.size();
}

void aniso_projector(std::span<const double> g, const ScatteringKernel& kernel,
                     std::span<const double> weights, std::span<double> out) {
  check_lengths(g.size(), weights.size(), "aniso_projector");
  check_lengths(g.size(), out.size(), "aniso_projector");
  check_kernel_size(kernel, g.size());
  const auto c = kernel_coefficients(g, kernel, weights);
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = 0.0;
  for (std::size_t m = 0; m < kernel.rank(); ++m) {
    const double a = kernel.eigenvalues[m] * c[m];
    const auto& v = kernel.eigenvectors[m];
    for (std::size_t k = 0; k < g.size(); ++k) out[k] += a * v[k];
  }
}

void aniso_shift(std::span<const double> g, double sigma0, const ScatteringKernel& kernel,
                 const SchemeScalars& s, std::span<const double> weights, std::span<double> out) {
  check_lengths(g.size(), weights.size(), "aniso_shift");
  check_lengths(g.size(), out.size(), "aniso_shift");
  check_kernel_size(kernel, g.size());
  const auto c = kernel_coefficients(g, kernel, weights);
  const double diag = s.shift() + sigma0;
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = diag * g[k];
  for (std::size_t m = 0; m < kernel.rank(); ++m) {
    const double a = sigma0 * kernel.eigenvalues[m] * c[m];
    const auto& v = kernel.eigenvectors[m];
    for (std::size_t k = 0; k < g.size(); ++k) out[k] -= a * v[k];
  }
}

void aniso_shift_inverse(std::span<const double> g, double sigma0, const ScatteringKernel& kernel,
                         const SchemeScalars& s, std::span<const double> weights,
                         std::span<double> out) {
  check_lengths(g.size(), weights.size(), "aniso_shift_inverse");
  check_lengths(g.size(), out.size(), "aniso_shift_inverse");
  check_kernel_size(kernel, g.size());
  if (s.epsilon == 0.0) {
    throw StiffLimitError("collision inverse is singular at eps = 0; use the diffusion solver");
  }
  const auto c = kernel_coefficients(g, kernel, weights);
  const double shift = s.shift();
  const double inv_comp = 1.0 / (shift + sigma0);
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = inv_comp * g[k];
  for (std::size_t m = 0; m < kernel.rank(); ++m) {
    const double lam = shift + sigma0 * (1.0 - kernel.eigenvalues[m]);
    if (lam == 0.0) throw SingularOperatorError("anisotropic collision shift has a zero eigenvalue");
    const double a = c[m] * (1.0 / lam - inv_comp);
    const auto& v = kernel.eigenvectors[m];
    for (std::size_t k = 0; k < g.size(); ++k) out[k] += a * v[k];
  }
}

namespace instrumentation {
std::size_t collision_inverse_touches() noexcept { return g_inverse_touches; }
void reset_collision_inverse_touches() noexcept { g_inverse_touches = 0; }
}  // namespace instrumentation

// ---------------------------------------------------------------------------

ParityOperators::ParityOperators(const SpatialMesh& mesh, const AngularQuadrature& quad,
                                 const CrossSection& sigma, const SchemeScalars& scalars,
                                 EvenStencil stencil)
    : mesh_(mesh), half_(positive_half(quad)), scalars_(scalars), stencil_(stencil) {
  scalars_.validate();
  if (!sigma.is_isotropic()) {
    throw UnsupportedCombinationError(
        "the symmetric parity path requires isotropic scattering; use the anisotropic scheme");
  }
  if (sigma.cells() != mesh.cells()) {
    throw InvalidArgumentError("cross section cell count does not match the mesh");
  }
  if (quad.dimension() != mesh.dimension()) {
    throw InvalidArgumentError("quadrature and mesh dimensions differ");
  }
  const std::size_t nc = mesh.cells();
  sigma_.assign(sigma.values().begin(), sigma.values().end());
  diffusion_.resize(nc);
  rhs_coef_.resize(nc);
  damping_.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    diffusion_[c] = scalars_.even_diffusion(sigma_[c]);
    damping_[c] = scalars_.odd_damping(sigma_[c]);
    rhs_coef_[c] = scalars_.epsilon * damping_[c];
  }
  face_x_.resize(nc);
  face_y_.assign(nc, 0.0);
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const std::size_t c = mesh.cell(i, j);
      face_x_[c] = 0.5 * (diffusion_[c] + diffusion_[mesh.cell(i + 1, j)]);
      if (mesh.dimension() == 2) face_y_[c] = 0.5 * (diffusion_[c] + diffusion_[mesh.cell(i, j + 1)]);
    }
  }
  const std::size_t h = half_.size();
  inner_weights_.resize(nc * h);
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t k = 0; k < h; ++k) inner_weights_[c * h + k] = half_.weights[k] * mesh.cell_volume();
  }
}

double ParityOperators::inner(std::span<const double> a, std::span<const double> b) const {
  check_lengths(a.size(), size(), "inner");
  check_lengths(b.size(), size(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += inner_weights_[i] * a[i] * b[i];
  return s;
}

void ParityOperators::directional_derivative(std::span<const double> u,
                                             std::span<const double> coef,
                                             std::span<double> out) const {
  const std::size_t h = half_.size();
  const double hx = 0.5 / mesh_.dx();
  const double hy = mesh_.dimension() == 2 ? 0.5 / mesh_.dy() : 0.0;
  for (int j = 0; j < mesh_.ny(); ++j) {
    for (int i = 0; i < mesh_.nx(); ++i) {
      const std::size_t c = mesh_.cell(i, j);
      const std::size_t e = mesh_.cell(i + 1, j);
      const std::size_t w = mesh_.cell(i - 1, j);
      const double ce = coef.empty() ? 1.0 : coef[e];
      const double cw = coef.empty() ? 1.0 : coef[w];
      double* o = out.data() + c * h;
      const double* ue = u.data() + e * h;
      const double* uw = u.data() + w * h;
      for (std::size_t k = 0; k < h; ++k) o[k] = half_.dir_x[k] * hx * (ce * ue[k] - cw * uw[k]);
      if (mesh_.dimension() == 2) {
        const std::size_t n = mesh_.cell(i, j + 1);
        const std::size_t s = mesh_.cell(i, j - 1);
        const double cn = coef.empty() ? 1.0 : coef[n];
        const double cs = coef.empty() ? 1.0 : coef[s];
        const double* un = u.data() + n * h;
        const double* us = u.data() + s * h;
        for (std::size_t k = 0; k < h; ++k) o[k] += half_.dir_y[k] * hy * (cn * un[k] - cs * us[k]);
      }
    }
  }
}

void ParityOperators::apply_compact(std::span<const double> fe, std::span<double> out) const {
  const std::size_t h = half_.size();
  const double ix2 = 1.0 / (mesh_.dx() * mesh_.dx());
  for (int j = 0; j < mesh_.ny(); ++j) {
    for (int i = 0; i < mesh_.nx(); ++i) {
      const std::size_t c = mesh_.cell(i, j);
      const std::size_t e = mesh_.cell(i + 1, j);
      const std::size_t w = mesh_.cell(i - 1, j);
      const double dp = face_x_[c] * ix2;
      const double dm = face_x_[w] * ix2;
      const double* fc = fe.data() + c * h;
      const double* fe_ = fe.data() + e * h;
      const double* fw = fe.data() + w * h;
      double* o = out.data() + c * h;
      for (std::size_t k = 0; k < h; ++k) {
        const double m2 = half_.dir_x[k] * half_.dir_x[k];
        o[k] = -m2 * (dp * (fe_[k] - fc[k]) - dm * (fc[k] - fw[k]));
      }
    }
  }
  if (mesh_.dimension() == 1) return;

  const double iy2 = 1.0 / (mesh_.dy() * mesh_.dy());
  for (int j = 0; j < mesh_.ny(); ++j) {
    for (int i = 0; i < mesh_.nx(); ++i) {
      const std::size_t c = mesh_.cell(i, j);
      const std::size_t n = mesh_.cell(i, j + 1);
      const std::size_t s = mesh_.cell(i, j - 1);
      const double dp = face_y_[c] * iy2;
      const double dm = face_y_[s] * iy2;
      const double* fc = fe.data() + c * h;
      const double* fn = fe.data() + n * h;
      const double* fs = fe.data() + s * h;
      double* o = out.data() + c * h;
      for (std::size_t k = 0; k < h; ++k) {
        const double e2 = half_.dir_y[k] * half_.dir_y[k];
        o[k] -= e2 * (dp * (fn[k] - fc[k]) - dm * (fc[k] - fs[k]));
      }
    }
  }

  // Mixed term -xi eta [dx(D dy f) + dy(D dx f)] with centered differences.
  std::vector<double> tx(fe.size()), ty(fe.size());
  const double hx = 0.5 / mesh_.dx();
  const double hy = 0.5 / mesh_.dy();
  for (int j = 0; j < mesh_.ny(); ++j) {
    for (int i = 0; i < mesh_.nx(); ++i) {
      const std::size_t c = mesh_.cell(i, j);
      const double d = diffusion_[c];
      const double* fe_ = fe.data() + mesh_.cell(i + 1, j) * h;
      const double* fw = fe.data() + mesh_.cell(i - 1, j) * h;
      const double* fn = fe.data() + mesh_.cell(i, j + 1) * h;
      const double* fs = fe.data() + mesh_.cell(i, j - 1) * h;
      for (std::size_t k = 0; k < h; ++k) {
        tx[c * h + k] = d * hx * (fe_[k] - fw[k]);
        ty[c * h + k] = d * hy * (fn[k] - fs[k]);
      }
    }
  }
  for (int j = 0; j < mesh_.ny(); ++j) {
    for (int i = 0; i < mesh_.nx(); ++i) {
      const std::size_t c = mesh_.cell(i, j);
      const double* tye = ty.data() + mesh_.cell(i + 1, j) * h;
      const double* tyw = ty.data() + mesh_.cell(i - 1, j) * h;
      const double* txn = tx.data() + mesh_.cell(i, j + 1) * h;
      const double* txs = tx.data() + mesh_.cell(i, j - 1) * h;
      double* o = out.data() + c * h;
      for (std::size_t k = 0; k < h; ++k) {
        const double xe = half_.dir_x[k] * half_.dir_y[k];
        o[k] -= xe * (hx * (tye[k] - tyw[k]) + hy * (txn[k] - txs[k]));
      }
    }
  }
}

void ParityOperators::apply_even_elliptic(std::span<const double> fe, std::span<double> out) const {
  check_lengths(fe.size(), size(), "apply_even_elliptic");
  check_lengths(out.size(), size(), "apply_even_elliptic");
  if (stencil_ == EvenStencil::compact) {
    apply_compact(fe, out);
    return;
  }
  std::vector<double> t(fe.size());
  directional_derivative(fe, {}, t);
  directional_derivative(t, diffusion_, out);
  for (double& v : out) v = -v;
}

void ParityOperators::apply_collision_shift(std::span<const double> g, std::span<double> out) const {
  check_lengths(g.size(), size(), "apply_collision_shift");
  check_lengths(out.size(), size(), "apply_collision_shift");
  const std::size_t h = half_.size();
  for (std::size_t c = 0; c < mesh_.cells(); ++c) {
    collision_shift(g.subspan(c * h, h), sigma_[c], scalars_, half_.weights, out.subspan(c * h, h));
  }
}

void ParityOperators::apply_collision_shift_inverse(std::span<const double> g,
                                                    std::span<double> out) const {
  check_lengths(g.size(), size(), "apply_collision_shift_inverse");
  check_lengths(out.size(), size(), "apply_collision_shift_inverse");
  const std::size_t h = half_.size();
  for (std::size_t c = 0; c < mesh_.cells(); ++c) {
    collision_shift_inverse(g.subspan(c * h, h), sigma_[c], scalars_, half_.weights,
                            out.subspan(c * h, h));
  }
}

void ParityOperators::apply_system(std::span<const double> fe, std::span<double> out) const {
  apply_even_elliptic(fe, out);
  std::vector<double> b(fe.size());
  apply_collision_shift(fe, b);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
}

std::vector<double> ParityOperators::assemble_rhs(std::span<const double> fe_old,
                                                  std::span<const double> fo_old) const {
  check_lengths(fe_old.size(), size(), "assemble_rhs");
  check_lengths(fo_old.size(), size(), "assemble_rhs");
  std::vector<double> rhs(size());
  directional_derivative(fo_old, rhs_coef_, rhs);
  const double shift = scalars_.shift();
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = shift * fe_old[i] - rhs[i];
  return rhs;
}

std::vector<double> ParityOperators::update_odd(std::span<const double> fe_new,
                                                std::span<const double> fo_old) const {
  check_lengths(fe_new.size(), size(), "update_odd");
  check_lengths(fo_old.size(), size(), "update_odd");
  std::vector<double> fo(size());
  directional_derivative(fe_new, {}, fo);
  const double ratio = scalars_.dt / scalars_.epsilon;
  const std::size_t h = half_.size();
  for (std::size_t c = 0; c < mesh_.cells(); ++c) {
    for (std::size_t k = 0; k < h; ++k) {
      const std::size_t i = c * h + k;
      fo[i] = damping_[c] * (fo_old[i] - ratio * fo[i]);
    }
  }
  return fo;
}

// ---------------------------------------------------------------------------

TransportOperators::TransportOperators(const SpatialMesh& mesh, const AngularQuadrature& quad,
                                       const CrossSection& sigma, const SchemeScalars& scalars)
    : mesh_(mesh), nodes_(quad.size()), sigma_(sigma), scalars_(scalars) {
  scalars_.validate();
  if (sigma.cells() != mesh.cells()) {
    throw InvalidArgumentError("cross section cell count does not match the mesh");
  }
  if (quad.dimension() != mesh.dimension()) {
    throw InvalidArgumentError("quadrature and mesh dimensions differ");
  }
  if (!sigma.is_isotropic()) check_kernel_size(sigma.kernel(), nodes_);
  dir_x_.resize(nodes_);
  dir_y_.resize(nodes_);
  for (std::size_t k = 0; k < nodes_; ++k) {
    dir_x_[k] = quad.direction_x(k);
    dir_y_[k] = quad.direction_y(k);
  }
  weights_.assign(quad.weights().begin(), quad.weights().end());
}

void TransportOperators::apply_streaming(std::span<const double> g, std::span<double> out) const {
  check_lengths(g.size(), size(), "apply_streaming");
  check_lengths(out.size(), size(), "apply_streaming");
  const std::size_t n = nodes_;
  const double hx = 0.5 * scalars_.epsilon / mesh_.dx();
  const double hy = mesh_.dimension() == 2 ? 0.5 * scalars_.epsilon / mesh_.dy() : 0.0;
  for (int j = 0; j < mesh_.ny(); ++j) {
    for (int i = 0; i < mesh_.nx(); ++i) {
      const std::size_t c = mesh_.cell(i, j);
      const double* ge = g.data() + mesh_.cell(i + 1, j) * n;
      const double* gw = g.data() + mesh_.cell(i - 1, j) * n;
      double* o = out.data() + c * n;
      for (std::size_t k = 0; k < n; ++k) o[k] = dir_x_[k] * hx * (ge[k] - gw[k]);
      if (mesh_.dimension() == 2) {
        const double* gn = g.data() + mesh_.cell(i, j + 1) * n;
        const double* gs = g.data() + mesh_.cell(i, j - 1) * n;
        for (std::size_t k = 0; k < n; ++k) o[k] += dir_y_[k] * hy * (gn[k] - gs[k]);
      }
    }
  }
}

void TransportOperators::apply_collision_shift(std::span<const double> g,
                                               std::span<double> out) const {
  check_lengths(g.size(), size(), "apply_collision_shift");
  check_lengths(out.size(), size(), "apply_collision_shift");
  const std::size_t n = nodes_;
  for (std::size_t c = 0; c < mesh_.cells(); ++c) {
    if (sigma_.is_isotropic()) {
      collision_shift(g.subspan(c * n, n), sigma_[c], scalars_, weights_, out.subspan(c * n, n));
    } else {
      aniso_shift(g.subspan(c * n, n), sigma_[c], sigma_.kernel(), scalars_, weights_,
                  out.subspan(c * n, n));
    }
  }
}

void TransportOperators::apply_collision_shift_inverse(std::span<const double> g,
                                                       std::span<double> out) const {
  check_lengths(g.size(), size(), "apply_collision_shift_inverse");
  check_lengths(out.size(), size(), "apply_collision_shift_inverse");
  const std::size_t n = nodes_;
  for (std::size_t c = 0; c < mesh_.cells(); ++c) {
    if (sigma_.is_isotropic()) {
      collision_shift_inverse(g.subspan(c * n, n), sigma_[c], scalars_, weights_,
                              out.subspan(c * n, n));
    } else {
      aniso_shift_inverse(g.subspan(c * n, n), sigma_[c], sigma_.kernel(), scalars_, weights_,
                          out.subspan(c * n, n));
    }
  }
}

void TransportOperators::apply_system(std::span<const double> f, std::span<double> out) const {
  apply_streaming(f, out);
  std::vector<double> b(f.size());
  apply_collision_shift(f, b);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
}

// ---------------------------------------------------------------------------

std::vector<double> apply_even_elliptic(std::span<const double> fe, const CrossSection& sigma,
                                        const SchemeScalars& s, const SpatialMesh& mesh,
                                        const AngularQuadrature& quad, EvenStencil stencil) {
  ParityOperators ops(mesh, quad, sigma, s, stencil);
  std::vector<double> out(ops.size());
  ops.apply_even_elliptic(fe, out);
  return out;
}

std::vector<double> assemble_parity_rhs(const ParityPair& pair, const CrossSection& sigma,
                                        const SchemeScalars& s, const SpatialMesh& mesh,
                                        const AngularQuadrature& quad) {
  ParityOperators ops(mesh, quad, sigma, s);
  return ops.assemble_rhs(pair.even, pair.odd);
}

std::vector<double> update_odd(std::span<const double> fe_new, std::span<const double> fo_old,
                               const CrossSection& sigma, const SchemeScalars& s,
                               const SpatialMesh& mesh, const AngularQuadrature& quad) {
  ParityOperators ops(mesh, quad, sigma, s);
  return ops.update_odd(fe_new, fo_old);
}

KineticField apply_streaming(const KineticField& g, const SchemeScalars& s, const SpatialMesh& mesh,
                             const AngularQuadrature& quad) {
  const CrossSection zero = CrossSection::isotropic(std::vector<double>(mesh.cells(), 0.0));
  TransportOperators ops(mesh, quad, zero, s);
  if (g.cells != mesh.cells() || g.nodes != quad.size()) {
    throw InvalidArgumentError("apply_streaming: field shape does not match mesh and quadrature");
  }
  KineticField out(g.cells, g.nodes);
  ops.apply_streaming(g.values, out.values);
  return out;
}

}  // namespace rte
