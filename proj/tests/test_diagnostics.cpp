#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rte/diagnostics.hpp"
#include "rte/errors.hpp"
#include "test_util.hpp"

using namespace rte;
using testutil::random_vector;

TEST(Condition, TrivialMatrices) {
  EXPECT_DOUBLE_EQ(symmetric_condition(Eigen::MatrixXd::Identity(5, 5)).kappa, 1.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  EXPECT_NEAR(symmetric_condition(d).kappa, 2.0, 1e-15);
  // K v = lambda M v with K = diag(2, 6), M = diag(1, 2): lambdas {2, 3}.
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2, 2), m = Eigen::MatrixXd::Zero(2, 2);
  k(0, 0) = 2.0;
  k(1, 1) = 6.0;
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  EXPECT_NEAR(generalized_condition(k, m).kappa, 1.5, 1e-15);
  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
  singular(1, 1) = 1.0;
  const auto r = symmetric_condition(singular);
  EXPECT_TRUE(r.singular);
  EXPECT_TRUE(std::isinf(r.kappa));
}

TEST(Condition, SystemMinimumIsCollisionShift) {
  // The constant is the lowest mode of A + B; the highest is bounded by
  // shift + sigma + 4 D max(mu^2) / dx^2.
  const auto mesh = SpatialMesh::line(0, 2, 20);
  const auto q = build_midpoint_quadrature(10);
  const auto sigma = CrossSection::isotropic(std::vector<double>(20, 1.0));
  const SchemeScalars s{1e-2, 0.05};
  const auto r = condition_number(ConditionTarget::system, mesh, q, sigma, s, ConditionMethod::dense);
  EXPECT_NEAR(r.lambda_min, s.shift(), 1e-12 * r.lambda_max);
  const double mu_max = q.nodes()[9];
  EXPECT_LE(r.lambda_max, s.shift() + 1.0 + 4.0 * s.even_diffusion(1.0) * mu_max * mu_max /
                                                (mesh.dx() * mesh.dx()) + 1e-12);
  EXPECT_GT(r.lambda_max, s.shift() + 1.0 - 1e-12);
}

TEST(Condition, PreconditionedSpectrumStartsAtOne) {
  // B^{-1}(A + B) = I + B^{-1}A with A semidefinite: lambda_min = 1 exactly.
  const auto mesh = SpatialMesh::line(0, 2, 16);
  const auto q = build_midpoint_quadrature(8);
  const auto sigma = CrossSection::isotropic(random_vector(16, 3, 0.1, 2.0));
  const auto r = condition_number(ConditionTarget::preconditioned, mesh, q, sigma,
                                  SchemeScalars{1e-3, 0.02}, ConditionMethod::dense);
  EXPECT_NEAR(r.lambda_min, 1.0, 1e-10);
  EXPECT_GT(r.kappa, 1.0);
}

TEST(Condition, IterativeAgreesWithDense) {
  const auto q = build_midpoint_quadrature(10);
  struct Case {
    int nx;
    double eps, dt;
    bool striped;
  };
  for (const auto& c : {Case{20, 1.0, 0.1 / 3.0, false}, Case{20, 1e-5, 0.1, false},
                        Case{40, 1e-2, 0.05, true}}) {
    const auto mesh = SpatialMesh::line(0, 2, c.nx);
    std::vector<double> s(static_cast<std::size_t>(c.nx), 1.0);
    if (c.striped) {
      for (int i = 0; i < c.nx; i += 4) s[static_cast<std::size_t>(i)] = 0.02;
    }
    const auto sigma = CrossSection::isotropic(s);
    for (auto target : {ConditionTarget::system, ConditionTarget::preconditioned}) {
      const SchemeScalars sc{c.eps, c.dt};
      const auto d = condition_number(target, mesh, q, sigma, sc, ConditionMethod::dense);
      const auto it = condition_number(target, mesh, q, sigma, sc, ConditionMethod::iterative);
      EXPECT_NEAR(it.kappa / d.kappa, 1.0, 0.05) << to_string(target) << " nx=" << c.nx;
      EXPECT_EQ(it.method, ConditionMethod::iterative);
    }
  }
}

TEST(Condition, DenseRefusesLargeSystems) {
  const auto mesh = SpatialMesh::line(0, 2, 400);
  const auto q = build_midpoint_quadrature(30);
  const auto sigma = CrossSection::isotropic(std::vector<double>(400, 1.0));
  EXPECT_THROW(condition_number(ConditionTarget::system, mesh, q, sigma, SchemeScalars{1, 0.01},
                                ConditionMethod::dense),
               CapacityError);
}

TEST(Calibration, RulesAndSelection) {
  EXPECT_DOUBLE_EQ(resolve_dt(DtRule::dx_over_3, 0.03), 0.01);
  EXPECT_DOUBLE_EQ(resolve_dt(DtRule::dx, 0.03), 0.03);
  EXPECT_DOUBLE_EQ(resolve_dt(DtRule::fixed_1e_1, 0.03), 0.1);
  const int nx[] = {20};
  const int nv[] = {10};
  const auto rows = calibration_sweep(1.0, nx, nv, kAllDtRules);
  ASSERT_EQ(rows.size(), std::size(kAllDtRules));
  // The scored rule is the one whose kappa is closest in log distance.
  const ConditionReference ref{{20}, {10}, {rows[1].system.kappa * 1.01}};
  double score = 0.0;
  EXPECT_EQ(best_rule(rows, ref, false, &score), rows[1].rule);
  EXPECT_NEAR(score, std::log(1.01), 1e-12);
  EXPECT_DOUBLE_EQ(reference_kinetic_system().at(100, 30), 1.41254576051502);
  EXPECT_DOUBLE_EQ(reference_diffusive_preconditioned().at(20, 10), 15.88);
  EXPECT_EQ(reference_diffusive_system().at(30, 10), 0.0);
}

TEST(Metrics, HandEvaluations) {
  const auto cell = SpatialMesh::line(0, 1, 1);
  const auto q2 = build_midpoint_quadrature(2);
  KineticField f(1, 2);
  f(0, 0) = 0.0;
  f(0, 1) = 2.0;
  EXPECT_NEAR(ap_distance_f_rho(f, cell, q2), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(ap_distance_f_rho(KineticField(1, 2, 3.0), cell, q2), 0.0);

  const auto two = SpatialMesh::line(0, 2, 2);
  const std::vector<double> a{3.0, 4.0}, z{0.0, 0.0};
  EXPECT_NEAR(rho_distance(a, z, two), 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(rho_distance(a, a, two), 0.0);
  const auto line = SpatialMesh::line(0, 2, 50);
  const std::vector<double> c(50, 0.7), zero(50, 0.0);
  EXPECT_NEAR(rho_distance(c, zero, line), 0.7 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(rho_distance(a, c, line), InvalidArgumentError);

  const auto q = build_gauss_quadrature(6);
  EXPECT_NEAR(weighted_l2_norm(KineticField(50, 6, 1.0), line, q), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(total_mass(KineticField(50, 6, 1.0), line, q), 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(weighted_l2_norm(KineticField(50, 6), line, q), 0.0);
  EXPECT_DOUBLE_EQ(total_mass(KineticField(50, 6), line, q), 0.0);

  const auto circle = build_circle_quadrature(4);
  const auto plane = SpatialMesh::plane(0, 1, 1, 0, 1, 1);
  KineticField g(1, 4);
  g(0, 0) = 1.0;
  // rho = 1/4; sum of squared deviations = 9/16 + 3/16 = 3/4; dmu = pi/2.
  EXPECT_NEAR(ap_distance_f_rho(g, plane, circle), std::sqrt(0.75 * std::numbers::pi / 2.0), 1e-15);
}

TEST(Metrics, RandomFieldAgainstReversedSummation) {
  const auto mesh = SpatialMesh::plane(0, 1, 7, 0, 2, 5);
  const auto q = build_circle_quadrature(8);
  KineticField f(35, 8);
  f.values = random_vector(280, 41);
  double norm2 = 0.0, mass = 0.0;
  for (std::size_t n = f.values.size(); n-- > 0;) {
    const double w = q.weights()[n % 8] * mesh.cell_volume();
    norm2 += w * f.values[n] * f.values[n];
    mass += w * f.values[n];
  }
  EXPECT_NEAR(weighted_l2_norm(f, mesh, q), std::sqrt(norm2), 1e-14);
  EXPECT_NEAR(total_mass(f, mesh, q), mass, 1e-14);
}

TEST(Monitor, ConstantRunIsFlat) {
  const Problem p{SpatialMesh::line(0, 2, 20), build_midpoint_quadrature(8),
                  CrossSection::isotropic(std::vector<double>(20, 1.0))};
  const KineticField f0(20, 8, 1.0);
  StabilityMonitor monitor(p.mesh, p.quad, f0);
  SolverConfig cfg;
  cfg.epsilon = 0.1;
  cfg.dt = 0.01;
  run_simulation(p, f0, cfg, 0.1, {monitor.observer()});
  ASSERT_EQ(monitor.records().size(), 11u);
  for (const auto& r : monitor.records()) {
    EXPECT_NEAR(r.norm, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(r.mass, 2.0, 1e-12);
  }
  EXPECT_EQ(monitor.flag_count(), 0u);
  EXPECT_LT(monitor.max_mass_drift(), 1e-13);
}

TEST(Monitor, InjectedBumpIsFlagged) {
  const auto mesh = SpatialMesh::line(0, 2, 10);
  const auto q = build_midpoint_quadrature(4);
  KineticField f(10, 4, 1.0);
  StabilityMonitor monitor(mesh, q, f);
  monitor.record(1, 0.1, f);
  f.values[3] += 1e-3;
  monitor.record(2, 0.2, f);
  monitor.record(3, 0.3, f);
  EXPECT_EQ(monitor.flag_count(), 1u);
  EXPECT_TRUE(monitor.records()[2].flagged);
  EXPECT_GT(monitor.max_relative_increase(), 1e-5);
}

TEST(Monitor, VanishingCrossSectionRunHasNoFlags) {
  const int nx = 100;
  const auto mesh = SpatialMesh::line(0, 2, nx);
  std::vector<double> sigma(nx);
  KineticField f0(nx, 16);
  for (int i = 0; i < nx; ++i) {
    const double x = mesh.x_center(i);
    sigma[i] = 100.0 * std::pow(x - 1.0, 4);
    for (int k = 0; k < 16; ++k) f0(i, k) = (x > 0.8 && x < 1.2) ? 2.0 : 0.0;
  }
  const Problem p{mesh, build_midpoint_quadrature(16), CrossSection::isotropic(sigma)};
  StabilityMonitor monitor(mesh, p.quad, f0);
  SolverConfig cfg;
  cfg.epsilon = 1.0;
  cfg.dt = 10.0 * mesh.dx();
  run_simulation(p, f0, cfg, 30 * cfg.dt, {monitor.observer()});
  EXPECT_EQ(monitor.flag_count(), 0u);
  EXPECT_LT(monitor.max_mass_drift(), 1e-12);
}
