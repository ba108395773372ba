#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rte/operators.hpp"
#include "rte/stepper.hpp"

namespace rte {

enum class Geometry { slab1d, planar2d };
enum class QuadratureKind { midpoint, gauss, circle };
enum class SigmaPreset { constant, vanishing_quartic, striped, blocks2d, aniso_degree1 };
enum class InitialPreset { box, gaussian2d, constant, custom };
enum class ReferenceKind { none, automatic, explicit_kinetic, diffusion };
enum class Mode { run, condition, bench, ap_sweep };

/// Fully resolved experiment description. Every field has a key in the
/// sectioned text format (see parse_config); to_config_text writes them all.
struct ExperimentConfig {
  // [grid]
  Geometry geometry = Geometry::slab1d;
  double x_min = 0.0, x_max = 2.0;
  double y_min = 0.0, y_max = 2.0;
  int nx = 0;
  int ny = 0;  // 0: same as nx (planar only)
  int nv = 0;
  QuadratureKind quadrature = QuadratureKind::midpoint;

  // [physics]
  double epsilon = 0.0;
  double t_max = 0.0;
  SigmaPreset sigma = SigmaPreset::constant;
  double sigma_value = 1.0;
  /// Profile of sigma0 for aniso_degree1 (constant, vanishing_quartic or striped).
  SigmaPreset sigma0 = SigmaPreset::constant;
  InitialPreset initial = InitialPreset::box;
  double initial_value = 1.0;
  std::string initial_file;

  // [solver]
  Scheme scheme = Scheme::parity_cg;
  int time_order = 1;
  /// dt <= 0 means the dx/3 rule.
  double dt = 0.0;
  double tol = 1e-10;
  std::size_t max_iter = 2000;
  std::size_t restart = 30;
  bool warm_start = false;
  EvenStencil stencil = EvenStencil::compact;

  // [output]
  Mode mode = Mode::run;
  std::string dir = "out";
  std::string prefix = "run";
  std::vector<double> snapshot_times;
  ReferenceKind reference = ReferenceKind::automatic;
  /// ap_sweep ladder.
  std::vector<double> epsilons;
  /// condition and bench sweeps.
  std::vector<int> sweep_nx;
  std::vector<int> sweep_nv;
  std::vector<double> sweep_epsilons;

  bool uses_dx_over_3() const noexcept { return dt <= 0.0; }
  int cells_y() const noexcept { return geometry == Geometry::planar2d ? (ny > 0 ? ny : nx) : 1; }
  double dx() const noexcept { return (x_max - x_min) / nx; }
  /// dt after applying the dx/3 rule.
  double resolved_dt() const noexcept { return uses_dx_over_3() ? dx() / 3.0 : dt; }
  SolverConfig solver() const;
  void validate() const;
};

/// Parses the sectioned key = value format:
///
///   # comment
///   [grid]      geometry, x_min, x_max, y_min, y_max, nx, ny, nv, quadrature
///   [physics]   epsilon, t_max, sigma, sigma_value, sigma0, initial,
///               initial_value, initial_file
///   [solver]    scheme, time_order, dt (number or dx_over_3), tol, max_iter,
///               restart, warm_start, stencil
///   [output]    mode, dir, prefix, snapshot_times, reference, epsilons,
///               sweep_nx, sweep_nv, sweep_epsilons
///
/// Required keys: grid.nx, grid.nv, physics.epsilon, physics.t_max. Lists are
/// comma separated. Unknown sections or keys, duplicates, malformed values and
/// missing keys raise ConfigError with the offending line number; unknown keys
/// name the closest valid key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text of every key; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& config);

/// (section.key, value) pairs of the canonical text, for CSV metadata.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& config);

/// Rebuilds a config from `section.key = value` pairs as written by config_echo.
ExperimentConfig config_from_echo(const std::vector<std::pair<std::string, std::string>>& echo);

/// Levenshtein distance, used for key suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

std::string to_string(Geometry g);
std::string to_string(QuadratureKind q);
std::string to_string(SigmaPreset s);
std::string to_string(InitialPreset i);
std::string to_string(ReferenceKind r);
std::string to_string(Mode m);
std::string to_string(Scheme s);
std::string to_string(EvenStencil s);

}  // namespace rte
