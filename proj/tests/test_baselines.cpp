#include <gtest/gtest.h>

#include <cmath>

#include "rte/baselines.hpp"
#include "rte/dense.hpp"
#include "rte/errors.hpp"
#include "test_util.hpp"

using namespace rte;
using testutil::as_eigen;
using testutil::max_abs_diff;
using testutil::random_vector;

namespace {

struct Slab {
  SpatialMesh mesh;
  AngularQuadrature quad;
  CrossSection sigma;
};

Slab small_slab(unsigned seed, int nx = 8, int nv = 4) {
  return {SpatialMesh::line(0, 2, nx), build_midpoint_quadrature(nv),
          CrossSection::isotropic(random_vector(static_cast<std::size_t>(nx), seed, 0.2, 2.0))};
}

Slab striped(int nx, int nv) {
  const auto mesh = SpatialMesh::line(0, 2, nx);
  std::vector<double> s(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    const double x = mesh.x_center(i);
    const bool thin = (x >= 0.35 && x <= 0.65) || (x >= 1.35 && x <= 1.65);
    s[static_cast<std::size_t>(i)] = thin ? 0.02 : 1.0;
  }
  return {mesh, build_midpoint_quadrature(nv), CrossSection::isotropic(std::move(s))};
}

KineticField box(const Slab& p) {
  KineticField f(p.mesh.cells(), p.quad.size());
  for (int i = 0; i < p.mesh.nx(); ++i) {
    const double x = p.mesh.x_center(i);
    for (std::size_t k = 0; k < p.quad.size(); ++k) f(i, k) = (x > 0.8 && x < 1.2) ? 2.0 : 0.0;
  }
  return f;
}

KineticField random_field(const Slab& p, unsigned seed) {
  KineticField f(p.mesh.cells(), p.quad.size());
  f.values = random_vector(f.values.size(), seed, 0.0, 1.0);
  return f;
}

// Dense solution of the centered implicit system, the common fixed point.
Eigen::VectorXd dense_implicit(const Slab& p, const KineticField& fn, double eps, double dt) {
  const SchemeScalars s{eps, dt};
  const auto m = dense_assemble(DenseOperator::transport_system, p.mesh, p.quad, p.sigma, s);
  return m.partialPivLu().solve(s.shift() * as_eigen(fn.values));
}

}  // namespace

TEST(Sweep, InverseOnConstants) {
  const Slab p{SpatialMesh::line(0, 2, 12), build_midpoint_quadrature(6),
               CrossSection::isotropic(std::vector<double>(12, 1.0))};
  const double eps = 0.3, dt = 0.05;
  const SweepOperator sweep(p.mesh, p.quad, p.sigma, eps, dt);
  const auto out = sweep.apply_L_inverse(KineticField(12, 6, 3.0));
  for (double v : out.values) EXPECT_NEAR(v, 3.0 / (1.0 + dt / (eps * eps)), 1e-14);
}

TEST(Sweep, MatchesDenseAndRoundTrips) {
  const auto p = small_slab(1);
  const double eps = 0.2, dt = 0.1;
  const SweepOperator sweep(p.mesh, p.quad, p.sigma, eps, dt);
  // L = (dt/eps^2)(B_diag + C) where B_diag is the collision shift without the projection.
  const auto g = random_field(p, 2);
  const auto grad = centered_difference_matrix(p.mesh, 0);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(32, 32);
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 4; ++k) {
      const int row = i * 4 + k;
      dense(row, row) += 1.0 + p.sigma[i] * dt / (eps * eps);
      for (int j = 0; j < 8; ++j) dense(row, j * 4 + k) += p.quad.nodes()[k] * dt / eps * grad(i, j);
    }
  }
  EXPECT_LT(max_abs_diff(sweep.apply_L(g).values, dense * as_eigen(g.values)), 1e-12);
  EXPECT_LT(max_abs_diff(sweep.apply_L_inverse(g).values, dense.lu().solve(as_eigen(g.values))),
            1e-12);
  const auto back = sweep.apply_L(sweep.apply_L_inverse(g));
  EXPECT_LT(max_abs_diff(back.values, as_eigen(g.values)), 1e-12);
}

TEST(Sweep, RejectsPlanarAndAnisotropicInput) {
  const auto q = build_midpoint_quadrature(4);
  const auto mesh = SpatialMesh::line(0, 2, 8);
  const auto aniso = CrossSection::anisotropic(std::vector<double>(8, 1.0),
                                               linear_anisotropic_kernel(q), q);
  EXPECT_THROW(SweepOperator(mesh, q, aniso, 0.1, 0.1), UnsupportedCombinationError);
  const auto plane = SpatialMesh::plane(0, 2, 4, 0, 2, 4);
  EXPECT_THROW(SweepOperator(plane, build_circle_quadrature(4),
                             CrossSection::isotropic(std::vector<double>(16, 1.0)), 0.1, 0.1),
               UnsupportedCombinationError);
}

TEST(WideDiffusion, SolveInvertsApply) {
  for (int nx : {7, 8, 12}) {
    const auto mesh = SpatialMesh::line(0, 2, nx);
    const auto kappa = random_vector(static_cast<std::size_t>(nx), 3, 0.1, 1.0);
    const WideDiffusionSolver solver(mesh, kappa);
    const auto u = random_vector(static_cast<std::size_t>(nx), 4);
    const auto back = solver.solve(solver.apply(u));
    EXPECT_LT(max_abs_diff(back, as_eigen(u)), 1e-12);
    // Dense oracle: I - G diag(kappa) G.
    const auto g = centered_difference_matrix(mesh, 0);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(nx, nx) - g * as_eigen(kappa).asDiagonal() * g;
    EXPECT_LT(max_abs_diff(solver.apply(u), m * as_eigen(u)), 1e-12);
  }
}

TEST(SourceIteration, NoCouplingConvergesInOneIteration) {
  const Slab p{SpatialMesh::line(0, 2, 10), build_midpoint_quadrature(4),
               CrossSection::isotropic(std::vector<double>(10, 0.0))};
  const SweepOperator sweep(p.mesh, p.quad, p.sigma, 0.1, 0.05);
  const auto fn = random_field(p, 5);
  const auto res = si_solve(fn, sweep, 1e-12, 10);
  EXPECT_TRUE(res.converged);
  // The first iterate is already exact; the second only confirms it.
  EXPECT_LE(res.iterations, 2u);
  EXPECT_LT(max_abs_diff(res.f.values, as_eigen(sweep.apply_L_inverse(fn).values)), 1e-14);
  const auto [f1, rho1] = si_iterate(fn, std::vector<double>(10, 0.0), sweep);
  EXPECT_LT(max_abs_diff(f1.values, as_eigen(res.f.values)), 1e-14);

  KrylovOptions opts;
  opts.tol = 1e-12;
  const auto kr = dsa_krylov_solve(fn, sweep, opts);
  EXPECT_LE(kr.report.iterations, 1u);
  EXPECT_LT(max_abs_diff(kr.rho, as_eigen(density(sweep.apply_L_inverse(fn), p.quad))), 1e-13);
}

TEST(SourceIteration, FixedPointsMatchDenseImplicitSystem) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto p = small_slab(10 + seed);
    const double eps = 0.5, dt = 0.05;
    const SweepOperator sweep(p.mesh, p.quad, p.sigma, eps, dt);
    const auto fn = random_field(p, 20 + seed);
    const auto exact = dense_implicit(p, fn, eps, dt);
    const auto si = si_solve(fn, sweep, 1e-13, 5000);
    ASSERT_TRUE(si.converged);
    EXPECT_LT(max_abs_diff(si.f.values, exact), 1e-11);
    const auto dsa = si_dsa_solve(fn, sweep, 1e-13, 500);
    ASSERT_TRUE(dsa.converged);
    EXPECT_LT(max_abs_diff(dsa.f.values, exact), 1e-10);
    KrylovOptions opts;
    opts.tol = 1e-12;
    const auto kr = dsa_krylov_solve(fn, sweep, opts);
    ASSERT_TRUE(kr.report.converged);
    EXPECT_LT(max_abs_diff(kr.f.values, exact), 1e-9);
  }
}

TEST(SourceIteration, DsaCorrectionVanishesAtFixedPoint) {
  const auto p = small_slab(30);
  const SweepOperator sweep(p.mesh, p.quad, p.sigma, 0.1, 0.05);
  const auto fn = random_field(p, 31);
  const auto converged = si_dsa_solve(fn, sweep, 1e-14, 500);
  const WideDiffusionSolver dsa(p.mesh, dsa_coefficient(p.sigma, 0.1, 0.05));
  const auto [f, rho] = si_dsa_step(fn, converged.rho, sweep, dsa);
  EXPECT_LT(max_abs_diff(rho, as_eigen(converged.rho)), 1e-12);
}

TEST(SourceIteration, ContractionDegradesAsEpsilonShrinks) {
  const auto p = striped(100, 8);
  const auto fn = box(p);
  double previous = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const SweepOperator sweep(p.mesh, p.quad, p.sigma, eps, p.mesh.dx() / 3.0);
    const auto res = si_solve(fn, sweep, 1e-8, 50000);
    EXPECT_GT(res.contraction, previous);
    previous = res.contraction;
  }
  EXPECT_GT(previous, 0.95);
}

TEST(SourceIteration, DsaContractsInDiffusiveRegime) {
  const auto p = striped(100, 8);
  const auto fn = box(p);
  const SweepOperator sweep(p.mesh, p.quad, p.sigma, 1e-3, p.mesh.dx() / 3.0);
  const auto res = si_dsa_solve(fn, sweep, 1e-10, 200);
  ASSERT_TRUE(res.converged);
  EXPECT_LE(res.contraction, 0.5);
  EXPECT_LE(res.iterations, 40u);
}

TEST(DensityKrylov, DsaPreconditioningBoundsIterations) {
  const auto p = striped(100, 16);
  const auto fn = box(p);
  const SweepOperator sweep(p.mesh, p.quad, p.sigma, 1e-4, p.mesh.dx() / 3.0);
  KrylovOptions opts;
  opts.tol = 1e-8;
  opts.max_iter = 2000;
  const auto pre = dsa_krylov_solve(fn, sweep, opts, true);
  const auto plain = dsa_krylov_solve(fn, sweep, opts, false);
  ASSERT_TRUE(pre.report.converged);
  EXPECT_LE(pre.report.iterations, 30u);
  EXPECT_GT(plain.report.iterations, pre.report.iterations);
  EXPECT_GT(plain.report.iterations, 30u);
}
