#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "rte/config.hpp"
#include "rte/cross_section.hpp"
#include "rte/fields.hpp"
#include "rte/mesh.hpp"
#include "rte/quadrature.hpp"
#include "rte/stepper.hpp"

namespace rte {

inline constexpr const char* kVersion = "1.0.0";

/// example1, example1_kinetic, example2, example2_kinetic, example3,
/// example3_kinetic, example5, example6.
std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
ExperimentConfig preset_config(const std::string& name);

/// Cell values of a cross-section profile, scaled by `scale`:
///   constant           scale
///   vanishing_quartic  100 scale (x - 1)^4
///   striped            0.02 scale on [0.35, 0.65] and [1.35, 1.65], scale elsewhere
///   blocks2d           0.02 scale on [0.25, 0.35]^2 and [0.65, 0.75]^2, scale elsewhere
/// Coordinates are absolute; membership is decided at cell centres.
std::vector<double> sigma_profile(SigmaPreset preset, double scale, const SpatialMesh& mesh);

SpatialMesh build_mesh(const ExperimentConfig& config);
AngularQuadrature build_quadrature(const ExperimentConfig& config);
Problem build_problem(const ExperimentConfig& config);

/// Initial kinetic field:
///   box        initial_value where 0.8 < x < 1.2 (and 0.8 < y < 1.2), 0 elsewhere
///   gaussian2d 1 + initial_value exp(-40 |x - c|^2), c the domain centre
///   constant   initial_value
///   custom     CSV with a `rho` column (isotropic) or columns f0..f{N_v-1}, one row per cell
KineticField initial_field(const ExperimentConfig& config, const Problem& problem);

/// Headline results of one run_experiment call.
struct ExperimentOutcome {
  std::vector<std::string> files;
  std::size_t steps = 0;
  std::size_t stability_flags = 0;
  double max_mass_drift = 0.0;
  /// Mode-specific numbers, also written as CSV metadata.
  std::vector<std::pair<std::string, double>> summary;

  /// Value of a summary entry; throws InvalidArgumentError if absent.
  double get(const std::string& key) const;
};

/// Runs one experiment and writes its CSV files into config.dir:
///   run       <prefix>_rho.csv (cell centres, sigma, rho at every snapshot and at
///             t_max, optional reference) and <prefix>_steps.csv (per-step report)
///   condition <prefix>_condition.csv over the step-size calibration sweep
///   bench     <prefix>_bench.csv: one implicit step by dense LU versus PCG
///   ap_sweep  <prefix>_ap_eps<i>.csv per epsilon: ap_distance and rho_distance per step
/// Every file starts with `version` and the config echo. Solver failures
/// propagate as SolverError, write failures as IoError.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Process exit code for an exception: 2 config or argument errors, 3 I/O
/// errors, 1 anything else.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace rte
