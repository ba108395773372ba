#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rte/errors.hpp"
#include "rte/reference.hpp"
#include "rte/stepper.hpp"
#include "test_util.hpp"

using namespace rte;
using testutil::random_vector;

namespace {

constexpr double pi = std::numbers::pi;

double mass(std::span<const double> rho, double cell_volume) {
  double m = 0.0;
  for (double r : rho) m += r * cell_volume;
  return m;
}

// Amplitude of cos(pi x) (or cos(pi x) cos(pi y)) by discrete projection.
double cosine_amplitude(std::span<const double> rho, const SpatialMesh& mesh) {
  double num = 0.0, den = 0.0;
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      double phi = std::cos(pi * mesh.x_center(i));
      if (mesh.dimension() == 2) phi *= std::cos(pi * mesh.y_center(j));
      num += phi * rho[mesh.cell(i, j)];
      den += phi * phi;
    }
  }
  return num / den;
}

std::vector<double> cosine_profile(const SpatialMesh& mesh) {
  std::vector<double> rho(mesh.cells());
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      double phi = std::cos(pi * mesh.x_center(i));
      if (mesh.dimension() == 2) phi *= std::cos(pi * mesh.y_center(j));
      rho[mesh.cell(i, j)] = 1.0 + phi;
    }
  }
  return rho;
}

}  // namespace

TEST(Explicit, EquilibriumIsFixedPoint) {
  const auto mesh = SpatialMesh::line(0, 2, 20);
  const auto q = build_midpoint_quadrature(8);
  const auto sigma = CrossSection::isotropic(random_vector(20, 3, 0.0, 5.0));
  const double dt = explicit_admissible_dt(sigma, 0.1, mesh, q);
  const auto f = explicit_step(KineticField(20, 8, 0.6), sigma, 0.1, dt, mesh, q);
  for (double v : f.values) EXPECT_NEAR(v, 0.6, 1e-15);
}

TEST(Explicit, UpwindFormulaWithoutScattering) {
  const auto mesh = SpatialMesh::line(0, 1, 10);
  const auto q = build_midpoint_quadrature(2);
  const auto sigma = CrossSection::isotropic(std::vector<double>(10, 0.0));
  KineticField f0(10, 2);
  f0.values = random_vector(20, 5);
  const double dt = 0.1;
  const auto f1 = explicit_step(f0, sigma, 1.0, dt, mesh, q);
  const double nu = dt * 0.5 / mesh.dx();
  for (int i = 0; i < 10; ++i) {
    // mu = -1/2 looks right, mu = +1/2 looks left.
    const auto left = static_cast<std::size_t>(mesh.wrap_x(i - 1));
    const auto right = static_cast<std::size_t>(mesh.wrap_x(i + 1));
    EXPECT_NEAR(f1(i, 1), f0(i, 1) - nu * (f0(i, 1) - f0(left, 1)), 1e-15);
    EXPECT_NEAR(f1(i, 0), f0(i, 0) + nu * (f0(right, 0) - f0(i, 0)), 1e-15);
  }
}

TEST(Explicit, CflGuardReportsAdmissibleStep) {
  const auto mesh = SpatialMesh::line(0, 2, 100);
  const auto q = build_midpoint_quadrature(4);
  const auto sigma = CrossSection::isotropic(std::vector<double>(100, 2.0));
  const double eps = 0.1;
  const double expected = 0.9 / (0.75 / (eps * mesh.dx()) + 2.0 / (eps * eps));
  EXPECT_NEAR(explicit_admissible_dt(sigma, eps, mesh, q), expected, 1e-15);
  try {
    explicit_step(KineticField(100, 4, 1.0), sigma, eps, 2.0 * expected, mesh, q);
    FAIL() << "expected CflError";
  } catch (const CflError& e) {
    EXPECT_NEAR(e.admissible_dt(), expected, 1e-15);
  }
}

TEST(Explicit, StrongScatteringStaysWithinInitialBounds) {
  // Transport and collision both near their own limits: the update must stay
  // a convex combination, so values never leave [min f0, max f0].
  const auto mesh = SpatialMesh::line(0, 2, 100);
  const auto q = build_midpoint_quadrature(20);
  const auto sigma = CrossSection::isotropic(random_vector(100, 31, 50.0, 100.0));
  KineticField f0(100, 20);
  f0.values = random_vector(2000, 32, 0.0, 2.0);
  const auto f = explicit_solve(f0, sigma, 1.0, mesh, q, 0.5);
  const auto [lo, hi] = std::minmax_element(f0.values.begin(), f0.values.end());
  for (double v : f.values) {
    EXPECT_GE(v, *lo - 1e-14);
    EXPECT_LE(v, *hi + 1e-14);
  }
}

TEST(Explicit, FreeTranslationIsFirstOrder) {
  std::vector<double> errors;
  for (int nx : {100, 200, 400}) {
    const auto mesh = SpatialMesh::line(0, 2, nx);
    const auto q = build_midpoint_quadrature(4);
    const auto sigma = CrossSection::isotropic(std::vector<double>(nx, 0.0));
    KineticField f0(nx, 4);
    for (int i = 0; i < nx; ++i) {
      for (int k = 0; k < 4; ++k) f0(i, k) = std::sin(pi * mesh.x_center(i));
    }
    const auto f = explicit_solve(f0, sigma, 1.0, mesh, q, 0.25);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) {
      for (int k = 0; k < 4; ++k) {
        const double exact = std::sin(pi * (mesh.x_center(i) - q.nodes()[k] * 0.25));
        err = std::max(err, std::abs(f(i, k) - exact));
      }
    }
    errors.push_back(err);
  }
  for (std::size_t r = 1; r < errors.size(); ++r) {
    const double order = std::log2(errors[r - 1] / errors[r]);
    EXPECT_GT(order, 0.8);
    EXPECT_LT(order, 1.2);
  }
}

TEST(Explicit, ConservesMass) {
  const auto mesh = SpatialMesh::line(0, 2, 60);
  const auto q = build_gauss_quadrature(8);
  const auto sigma = CrossSection::isotropic(random_vector(60, 7, 0.0, 3.0));
  KineticField f0(60, 8);
  f0.values = random_vector(480, 8, 0.0, 1.0);
  const auto f = explicit_solve(f0, sigma, 0.3, mesh, q, 0.05);
  const double m0 = mass(density(f0, q), mesh.dx());
  EXPECT_NEAR(mass(density(f, q), mesh.dx()), m0, 1e-13 * m0);
}

TEST(Explicit, AnisotropicCollisionMatchesDirectKernelSum) {
  // No streaming (one cell): f' = f + (dt sigma0 / eps^2)(sum_k' w_k' (1 + mu mu') f_k' - f).
  const auto mesh = SpatialMesh::line(0, 1, 1);
  const auto q = build_midpoint_quadrature(10);
  const auto sigma = CrossSection::anisotropic({1.7}, linear_anisotropic_kernel(q), q);
  KineticField f(1, 10);
  f.values = random_vector(10, 21, 0.0, 1.0);
  const double eps = 0.5, dt = 0.9 * explicit_admissible_dt(sigma, eps, mesh, q);
  const auto out = explicit_step(f, sigma, eps, dt, mesh, q);
  const auto mu = q.nodes();
  const auto w = q.weights();
  for (std::size_t k = 0; k < 10; ++k) {
    double pf = 0.0;
    for (std::size_t j = 0; j < 10; ++j) pf += w[j] * (1.0 + mu[k] * mu[j]) * f(0, j);
    EXPECT_NEAR(out(0, k), f(0, k) + dt * 1.7 / (eps * eps) * (pf - f(0, k)), 1e-14);
  }
}

TEST(Explicit, RankOneKernelIsIsotropic) {
  const auto mesh = SpatialMesh::line(0, 2, 30);
  const auto q = build_gauss_quadrature(6);
  const auto s = random_vector(30, 22, 0.1, 2.0);
  ScatteringKernel constant;
  constant.eigenvalues = {1.0};
  constant.eigenvectors = {std::vector<double>(6, 1.0)};
  KineticField f0(30, 6);
  f0.values = random_vector(180, 23, 0.0, 1.0);
  const auto a = explicit_solve(f0, CrossSection::isotropic(s), 0.2, mesh, q, 0.02);
  const auto b = explicit_solve(f0, CrossSection::anisotropic(s, constant, q), 0.2, mesh, q, 0.02);
  for (std::size_t n = 0; n < a.values.size(); ++n) EXPECT_NEAR(a.values[n], b.values[n], 1e-14);
}

TEST(Explicit, ApproachesImplicitUnderJointRefinement) {
  // Explicit upwind and implicit centered differ by O(dt + dx); refining both
  // together roughly halves the gap.
  std::vector<double> gaps;
  for (int nx : {50, 100, 200}) {
    const auto mesh = SpatialMesh::line(0, 2, nx);
    const auto q = build_midpoint_quadrature(8);
    const auto sigma = CrossSection::isotropic(std::vector<double>(nx, 1.0));
    KineticField f0(nx, 8);
    for (int i = 0; i < nx; ++i) {
      for (int k = 0; k < 8; ++k) f0(i, k) = 1.0 + std::sin(pi * mesh.x_center(i)) * (1.0 + q.nodes()[k]);
    }
    SolverConfig cfg;
    cfg.epsilon = 1.0;
    cfg.dt = 0.5 * mesh.dx();
    cfg.tol = 1e-12;
    const Problem p{mesh, q, sigma};
    const auto implicit = run_simulation(p, f0, cfg, 0.5).f;
    const auto explicit_f = explicit_solve(f0, sigma, 1.0, mesh, q, 0.5, 0.25 * mesh.dx());
    double gap = 0.0;
    for (std::size_t n = 0; n < implicit.values.size(); ++n) {
      gap = std::max(gap, std::abs(implicit.values[n] - explicit_f.values[n]));
    }
    gaps.push_back(gap);
  }
  for (std::size_t r = 1; r < gaps.size(); ++r) {
    EXPECT_NEAR(gaps[r - 1] / gaps[r], 2.0, 0.4);
  }
}

TEST(Diffusion, ConstantIsFixedPoint) {
  const auto line = SpatialMesh::line(0, 2, 30);
  const auto sigma = CrossSection::isotropic(random_vector(30, 11, 0.5, 3.0));
  for (double v : diffusion_step_1d(std::vector<double>(30, 2.5), sigma, 0.3, line)) {
    EXPECT_NEAR(v, 2.5, 1e-14);
  }
  for (double v : diffusion_step_aniso(std::vector<double>(30, 2.5), sigma, 0.3, line)) {
    EXPECT_NEAR(v, 2.5, 1e-14);
  }
  const auto plane = SpatialMesh::plane(0, 2, 12, 0, 2, 10);
  const auto sigma2 = CrossSection::isotropic(random_vector(120, 12, 0.5, 3.0));
  for (double v : diffusion_step_2d(std::vector<double>(120, 2.5), sigma2, 0.3, plane)) {
    EXPECT_NEAR(v, 2.5, 1e-12);
  }
}

TEST(Diffusion, CosineModeDecayRates) {
  // Analytic decay exp(-k t) with k = pi^2/3 (slab), pi^2/2 (anisotropic
  // reduction), pi^2 (plane); backward Euler and O(dx^2) errors stay below 1e-3.
  const double t = 0.2, dt = 1e-4;
  const auto line = SpatialMesh::line(0, 2, 200);
  const auto unit = CrossSection::isotropic(std::vector<double>(200, 1.0));
  auto slab = cosine_profile(line);
  auto aniso = slab;
  const DiffusionSolver1D slab_solver(line, limit_coefficient(unit, 1), dt);
  std::vector<double> half(200, 0.5);
  const DiffusionSolver1D aniso_solver(line, half, dt);
  for (int n = 0; n < 2000; ++n) {
    slab = slab_solver.step(slab);
    aniso = aniso_solver.step(aniso);
  }
  EXPECT_NEAR(cosine_amplitude(slab, line), std::exp(-pi * pi * t / 3.0), 1e-3);
  EXPECT_NEAR(cosine_amplitude(aniso, line), std::exp(-pi * pi * t / 2.0), 1e-3);

  const auto plane = SpatialMesh::plane(0, 2, 40, 0, 2, 40);
  const auto unit2 = CrossSection::isotropic(std::vector<double>(1600, 1.0));
  auto rho = cosine_profile(plane);
  for (int n = 0; n < 200; ++n) rho = diffusion_step_2d(rho, unit2, 1e-3, plane);
  EXPECT_NEAR(cosine_amplitude(rho, plane), std::exp(-pi * pi * t), 5e-3);
}

TEST(Diffusion, FreeFunctionsMatchSolverClass) {
  const auto line = SpatialMesh::line(0, 2, 40);
  const auto sigma0 = CrossSection::isotropic(random_vector(40, 13, 0.5, 2.0));
  const auto rho = random_vector(40, 14, 0.0, 1.0);
  std::vector<double> k3(40), k2(40);
  for (int i = 0; i < 40; ++i) {
    k3[i] = 1.0 / (3.0 * sigma0[i]);
    k2[i] = 1.0 / (2.0 * sigma0[i]);
  }
  const auto a = diffusion_step_1d(rho, sigma0, 0.05, line);
  const auto b = DiffusionSolver1D(line, k3, 0.05).step(rho);
  const auto c = diffusion_step_aniso(rho, sigma0, 0.05, line);
  const auto d = DiffusionSolver1D(line, k2, 0.05).step(rho);
  for (int i = 0; i < 40; ++i) {
    EXPECT_NEAR(a[i], b[i], 1e-14);
    EXPECT_NEAR(c[i], d[i], 1e-14);
  }
}

TEST(Diffusion, AnisotropicCoincidesWithSlabUnderRescaledSigma) {
  const auto line = SpatialMesh::line(0, 2, 40);
  auto s0 = random_vector(40, 15, 0.5, 2.0);
  std::vector<double> s(40);
  for (int i = 0; i < 40; ++i) s[i] = 2.0 / 3.0 * s0[i];
  const auto rho = random_vector(40, 16, 0.0, 1.0);
  const auto a = diffusion_step_aniso(rho, CrossSection::isotropic(s0), 0.1, line);
  const auto b = diffusion_step_1d(rho, CrossSection::isotropic(s), 0.1, line);
  for (int i = 0; i < 40; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}

TEST(Diffusion, MassMaximumPrincipleAndStability) {
  const auto line = SpatialMesh::line(0, 2, 50);
  const auto sigma = CrossSection::isotropic(random_vector(50, 17, 0.1, 5.0));
  const auto plane = SpatialMesh::plane(0, 2, 16, 0, 2, 12);
  const auto sigma2 = CrossSection::isotropic(random_vector(192, 18, 0.1, 5.0));
  for (double ratio : {1.0, 10.0, 100.0}) {
    auto rho = random_vector(50, 19, 0.0, 1.0);
    auto rho2 = random_vector(192, 20, 0.0, 1.0);
    const double m0 = mass(rho, line.dx()), m02 = mass(rho2, plane.cell_volume());
    for (int n = 0; n < 10; ++n) {
      const auto next = diffusion_step_1d(rho, sigma, ratio * line.dx(), line);
      const auto next2 = diffusion_step_2d(rho2, sigma2, ratio * plane.dx(), plane);
      const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
      const auto [lo2, hi2] = std::minmax_element(rho2.begin(), rho2.end());
      double n_old = 0.0, n_new = 0.0;
      for (int i = 0; i < 50; ++i) {
        EXPECT_GE(next[i], *lo - 1e-14);
        EXPECT_LE(next[i], *hi + 1e-14);
        n_old += rho[i] * rho[i];
        n_new += next[i] * next[i];
      }
      EXPECT_LE(n_new, n_old * (1.0 + 1e-12));
      for (std::size_t i = 0; i < 192; ++i) {
        EXPECT_GE(next2[i], *lo2 - 1e-10);
        EXPECT_LE(next2[i], *hi2 + 1e-10);
      }
      rho = next;
      rho2 = next2;
    }
    EXPECT_NEAR(mass(rho, line.dx()), m0, 1e-12 * m0);
    EXPECT_NEAR(mass(rho2, plane.cell_volume()), m02, 1e-12 * m02);
  }
}

TEST(Diffusion, VanishingSigmaIsRejected) {
  const auto line = SpatialMesh::line(0, 2, 10);
  std::vector<double> s(10, 1.0);
  s[4] = 0.0;
  EXPECT_THROW(diffusion_step_1d(std::vector<double>(10, 1.0), CrossSection::isotropic(s), 0.1, line),
               SingularOperatorError);
}

TEST(Diffusion, SolveLandsOnFinalTime) {
  const auto line = SpatialMesh::line(0, 2, 64);
  const auto unit = CrossSection::isotropic(std::vector<double>(64, 1.0));
  const auto rho0 = cosine_profile(line);
  // 0.1 = 3 full steps of 0.03 and one of 0.01.
  auto manual = rho0;
  for (int n = 0; n < 3; ++n) manual = diffusion_step_1d(manual, unit, 0.03, line);
  manual = diffusion_step_1d(manual, unit, 0.01, line);
  const auto rho = diffusion_solve(rho0, unit, line, 0.03, 0.1);
  for (int i = 0; i < 64; ++i) EXPECT_NEAR(rho[i], manual[i], 1e-14);
}
