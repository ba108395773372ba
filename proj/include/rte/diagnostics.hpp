#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rte/cross_section.hpp"
#include "rte/fields.hpp"
#include "rte/mesh.hpp"
#include "rte/operators.hpp"
#include "rte/quadrature.hpp"
#include "rte/stepper.hpp"

namespace rte {

// ---------------------------------------------------------------------------
// Condition numbers.
// ---------------------------------------------------------------------------

/// system: A + B in the w dx inner product.
/// preconditioned: B^{-1}A + I = B^{-1}(A + B), self-adjoint in the B inner product.
enum class ConditionTarget { system, preconditioned };
enum class ConditionMethod { dense, iterative };

std::string to_string(ConditionTarget target);
std::string to_string(ConditionMethod method);

struct ConditionReport {
  std::string name;
  int nx = 0;
  int nv = 0;
  double epsilon = 0.0;
  double dt = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  ConditionMethod method = ConditionMethod::dense;
  /// lambda_min below 1e-14 lambda_max; kappa is then +inf.
  bool singular = false;
  /// Iterative method only: ||Op v - lambda v|| / (|lambda| ||v||) at the
  /// final iterate of each extreme.
  double residual_min = 0.0;
  double residual_max = 0.0;
};

/// Spectrum extremes of a symmetric matrix.
ConditionReport symmetric_condition(const Eigen::MatrixXd& m);

/// Extremes of the generalized problem K v = lambda M v, K symmetric, M SPD.
ConditionReport generalized_condition(const Eigen::MatrixXd& k, const Eigen::MatrixXd& m);

/// Condition number of the parity system on the positive half. The dense
/// method assembles explicit matrices (subject to the row cap); the iterative
/// method uses power iteration for the largest eigenvalue and inverse power
/// iteration with an inner PCG solve for the smallest.
ConditionReport condition_number(ConditionTarget target, const SpatialMesh& mesh,
                                 const AngularQuadrature& quad, const CrossSection& sigma,
                                 const SchemeScalars& s, ConditionMethod method,
                                 EvenStencil stencil = EvenStencil::compact);

/// Step-size rules of the calibration sweep.
enum class DtRule { dx_over_3, dx, fixed_1e_2, fixed_1e_1, fixed_1 };

inline constexpr DtRule kAllDtRules[] = {DtRule::dx_over_3, DtRule::dx, DtRule::fixed_1e_2,
                                         DtRule::fixed_1e_1, DtRule::fixed_1};

double resolve_dt(DtRule rule, double dx);
std::string to_string(DtRule rule);

struct CalibrationRow {
  DtRule rule = DtRule::dx_over_3;
  ConditionReport system;
  ConditionReport preconditioned;
};

/// kappa(A + B) and kappa(B^{-1}A + I) on [0, 2], sigma = 1, midpoint
/// quadrature, for every (rule, N_x, N_v) combination.
std::vector<CalibrationRow> calibration_sweep(double epsilon, std::span<const int> nx,
                                              std::span<const int> nv,
                                              std::span<const DtRule> rules,
                                              ConditionMethod method = ConditionMethod::dense);

/// Reference value lookup used to score a rule; returns <= 0 when a grid has
/// no reference.
struct ConditionReference {
  std::vector<int> nx;
  std::vector<int> nv;
  /// values[i * nv.size() + j] for (nx[i], nv[j]).
  std::vector<double> values;
  double at(int nx_value, int nv_value) const;
};

/// Reference condition numbers for sigma = 1: kappa(A + B) at eps = 1 and
/// kappa(B^{-1}A + I) at eps = 1e-5, N_x in {20..100}, N_v in {10, 20, 30}.
const ConditionReference& reference_kinetic_system();
const ConditionReference& reference_diffusive_system();
const ConditionReference& reference_diffusive_preconditioned();

/// Rule minimizing the mean |log(kappa / reference)| over the rows that have
/// a reference. `preconditioned` selects which column of the rows is scored.
DtRule best_rule(const std::vector<CalibrationRow>& rows, const ConditionReference& reference,
                 bool preconditioned, double* score = nullptr);

// ---------------------------------------------------------------------------
// Norms, mass and asymptotic distances.
// ---------------------------------------------------------------------------

/// sqrt( sum_i sum_k w_k f_ik^2 |cell| ).
double weighted_l2_norm(const KineticField& f, const SpatialMesh& mesh,
                        const AngularQuadrature& quad);

/// sum_i rho_i |cell|.
double total_mass(std::span<const double> rho, const SpatialMesh& mesh);
double total_mass(const KineticField& f, const SpatialMesh& mesh, const AngularQuadrature& quad);

/// sqrt( sum_i sum_k |f_ik - rho_i|^2 |cell| dmu ), dmu = 2/N_v in a slab and
/// 2 pi / N_v in the plane.
double ap_distance_f_rho(const KineticField& f, const SpatialMesh& mesh,
                         const AngularQuadrature& quad);

/// sqrt( sum_i |a_i - b_i|^2 |cell| ).
double rho_distance(std::span<const double> a, std::span<const double> b, const SpatialMesh& mesh);

// ---------------------------------------------------------------------------
// Stability monitor.
// ---------------------------------------------------------------------------

struct MonitorRecord {
  std::size_t step = 0;
  double t = 0.0;
  double norm = 0.0;
  double mass = 0.0;
  /// (norm^2 - previous norm^2) / previous norm^2.
  double relative_increase = 0.0;
  bool flagged = false;
};

/// Records the weighted norm and mass per step and flags any squared-norm
/// increase above `threshold` relative to the previous step.
class StabilityMonitor {
 public:
  StabilityMonitor(const SpatialMesh& mesh, const AngularQuadrature& quad, const KineticField& f0,
                   double threshold = 1e-12);

  void record(std::size_t step, double t, const KineticField& f);
  /// Observer for run_simulation; the monitor must outlive the run.
  StepObserver observer();

  const std::vector<MonitorRecord>& records() const noexcept { return records_; }
  std::size_t flag_count() const noexcept;
  double max_relative_increase() const noexcept;
  /// max |mass - mass_0| / |mass_0| (absolute when mass_0 = 0).
  double max_mass_drift() const noexcept;

 private:
  SpatialMesh mesh_;
  AngularQuadrature quad_;
  double threshold_;
  std::vector<MonitorRecord> records_;
};

}  // namespace rte
