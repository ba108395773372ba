#include "rte/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rte/errors.hpp"

namespace rte {

namespace {

double dot(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  double s = 0.0;
  if (w.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  }
  return s;
}

void check_operator(const LinearOperator& op, std::size_t nb, std::size_t nx) {
  if (!op.apply) throw InvalidArgumentError("krylov: operator has no apply");
  if (op.n != nb || op.n != nx) throw InvalidArgumentError("krylov: dimension mismatch");
}

void precondition(const LinearOperator& op, std::span<const double> r, std::span<double> z,
                  KrylovReport& rep) {
  if (op.precondition) {
    op.precondition(r, z);
    ++rep.precond_count;
  } else {
    std::copy(r.begin(), r.end(), z.begin());
  }
}

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

bool all_zero(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

}  // namespace

KrylovReport pcg_solve(const LinearOperator& op, std::span<const double> b, std::span<double> x,
                       const KrylovOptions& options, std::span<const double> weights) {
  check_operator(op, b.size(), x.size());
  if (!weights.empty() && weights.size() != op.n) {
    throw InvalidArgumentError("pcg: weight length mismatch");
  }
  const std::size_t n = op.n;
  KrylovReport rep;
  const bool zero_guess = all_zero(x);

  std::vector<double> r(n), z(n), p(n), ap(n);
  if (zero_guess) {
    std::copy(b.begin(), b.end(), r.begin());
  } else {
    op.apply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  }
  ++rep.matvec_count;
  precondition(op, r, z, rep);
  double rz = dot(r, z, weights);

  double bmb = rz;
  if (!zero_guess) {
    std::vector<double> mb(n);
    precondition(op, b, mb, rep);
    bmb = dot(b, mb, weights);
  }
  if (bmb < 0.0 || rz < 0.0) {
    throw IndefiniteOperatorError("pcg: preconditioner is not positive definite");
  }
  if (bmb == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.residual_history.push_back(0.0);
    rep.converged = true;
    return rep;
  }
  double rel = std::sqrt(rz / bmb);
  rep.residual_history.push_back(rel);
  if (rel <= options.tol) {
    rep.converged = true;
    return rep;
  }

  p = z;
  while (rep.iterations < options.max_iter) {
    op.apply(p, ap);
    ++rep.matvec_count;
    const double pap = dot(p, ap, weights);
    const double scale = std::sqrt(dot(p, p, weights) * dot(ap, ap, weights));
    if (pap < -1e-12 * scale) {
      throw IndefiniteOperatorError("pcg: negative curvature at iteration " +
                                    std::to_string(rep.iterations));
    }
    if (pap <= 0.0) {
      rep.diagnostic = "pcg: curvature vanished (breakdown)";
      break;
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    precondition(op, r, z, rep);
    const double rz_new = dot(r, z, weights);
    ++rep.iterations;
    rel = std::sqrt(std::max(rz_new, 0.0) / bmb);
    rep.residual_history.push_back(rel);
    if (rel <= options.tol) {
      rep.converged = true;
      break;
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (!rep.converged && rep.diagnostic.empty()) {
    rep.diagnostic = "pcg: reached max_iter = " + std::to_string(options.max_iter);
  }
  return rep;
}

KrylovReport gmres_solve(const LinearOperator& op, std::span<const double> b, std::span<double> x,
                         const KrylovOptions& options) {
  check_operator(op, b.size(), x.size());
  const std::size_t n = op.n;
  const std::size_t m = std::max<std::size_t>(1, std::min(options.restart, n));
  KrylovReport rep;
  const std::span<const double> none;

  std::vector<double> tmp(n), r(n);
  auto residual = [&]() {
    op.apply(x, tmp);
    ++rep.matvec_count;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = b[i] - tmp[i];
    precondition(op, tmp, r, rep);
    return std::sqrt(dot(r, r, none));
  };

  std::vector<double> mb(n);
  precondition(op, b, mb, rep);
  const double bnorm = std::sqrt(dot(mb, mb, none));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.residual_history.push_back(0.0);
    rep.converged = true;
    return rep;
  }
  double beta = residual();
  double rel = beta / bnorm;
  rep.residual_history.push_back(rel);
  if (rel <= options.tol) {
    rep.converged = true;
    return rep;
  }

  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<double> h((m + 1) * m, 0.0);
  auto H = [&](std::size_t i, std::size_t j) -> double& { return h[i * m + j]; };
  std::vector<double> cs(m), sn(m), g(m + 1), y(m), w(n);

  while (rep.iterations < options.max_iter) {
    const double cycle_start = rel;
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    std::size_t k = 0;
    bool lucky = false;
    for (; k < m && rep.iterations < options.max_iter; ++k) {
      op.apply(v[k], tmp);
      ++rep.matvec_count;
      precondition(op, tmp, w, rep);
      for (std::size_t i = 0; i <= k; ++i) {
        const double hik = dot(w, v[i], none);
        H(i, k) = hik;
        for (std::size_t t = 0; t < n; ++t) w[t] -= hik * v[i][t];
      }
      const double hnext = std::sqrt(dot(w, w, none));
      H(k + 1, k) = hnext;
      for (std::size_t i = 0; i < k; ++i) {
        const double a = H(i, k), c = H(i + 1, k);
        H(i, k) = cs[i] * a + sn[i] * c;
        H(i + 1, k) = -sn[i] * a + cs[i] * c;
      }
      const double a = H(k, k), c = H(k + 1, k);
      const double rho = std::hypot(a, c);
      cs[k] = rho == 0.0 ? 1.0 : a / rho;
      sn[k] = rho == 0.0 ? 0.0 : c / rho;
      H(k, k) = rho;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++rep.iterations;
      rep.residual_history.push_back(std::abs(g[k + 1]) / bnorm);
      if (hnext <= 1e-14 * std::abs(rho) || hnext == 0.0) {
        lucky = true;
        ++k;
        break;
      }
      for (std::size_t t = 0; t < n; ++t) v[k + 1][t] = w[t] / hnext;
      if (std::abs(g[k + 1]) / bnorm <= options.tol) {
        ++k;
        break;
      }
    }
    // Back substitution for the k x k triangular system.
    for (std::size_t i = k; i-- > 0;) {
      double s = g[i];
      for (std::size_t j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      if (H(i, i) == 0.0) throw SingularOperatorError("gmres: singular Hessenberg matrix");
      y[i] = s / H(i, i);
    }
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t t = 0; t < n; ++t) x[t] += y[j] * v[j][t];
    }
    beta = residual();
    rel = beta / bnorm;
    rep.residual_history.back() = rel;
    if (rel <= options.tol) {
      rep.converged = true;
      break;
    }
    if (lucky || rel >= cycle_start * (1.0 - 1e-12)) {
      rep.diagnostic = "gmres: stagnation over a full restart cycle (relative residual " +
                       format_residual(rel) + ")";
      return rep;
    }
  }
  if (!rep.converged && rep.diagnostic.empty()) {
    rep.diagnostic = "gmres: reached max_iter = " + std::to_string(options.max_iter);
  }
  return rep;
}

}  // namespace rte
