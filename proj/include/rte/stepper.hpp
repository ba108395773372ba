#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "rte/cross_section.hpp"
#include "rte/fields.hpp"
#include "rte/krylov.hpp"
#include "rte/mesh.hpp"
#include "rte/operators.hpp"
#include "rte/quadrature.hpp"

namespace rte {

enum class Scheme { parity_cg, nonsym_gmres, aniso_gmres };

struct SolverConfig {
  double epsilon = 1.0;
  double dt = 1e-2;
  Scheme scheme = Scheme::parity_cg;
  int time_order = 1;
  double tol = 1e-10;
  std::size_t max_iter = 2000;
  std::size_t restart = 30;
  bool warm_start = false;
  EvenStencil stencil = EvenStencil::compact;

  void validate() const;
};

/// Geometry, angles and scattering of one run.
struct Problem {
  SpatialMesh mesh;
  AngularQuadrature quad;
  CrossSection sigma;
};

struct StepReport {
  std::size_t step = 0;  // 1-based index of the completed step
  double t = 0.0;
  double dt = 0.0;
  KrylovReport krylov;
  double seconds = 0.0;
};

/// f^n on the full node set, plus f^{n-1} once a second level exists.
struct SimulationState {
  double t = 0.0;
  std::size_t step = 0;
  KineticField f;
  std::optional<KineticField> previous;
  std::vector<StepReport> reports;
};

SimulationState initial_state(KineticField f0);

/// Applies the fully implicit schemes. Operators are built lazily per step
/// size and cached, so a run with a constant dt assembles coefficients once.
class ImplicitStepper {
 public:
  ImplicitStepper(Problem problem, SolverConfig config);

  const Problem& problem() const noexcept { return problem_; }
  const SolverConfig& config() const noexcept { return config_; }

  /// Solves the backward-Euler system of step `dt` whose old level is
  /// `source`: (eps^2/dt)(f - source) + eps Omega.grad f = sigma (P f - f).
  /// `guess` seeds the Krylov solve when warm starting is enabled. The Krylov
  /// iterate is corrected along the constant mode so that mass is conserved
  /// to rounding independently of the tolerance.
  KineticField solve_implicit(const KineticField& source, double dt, const KineticField* guess,
                              KrylovReport& report) const;

  /// One backward-Euler step of size dt (defaults to config dt).
  void step_be(SimulationState& state, std::optional<double> dt = std::nullopt) const;

  /// One BDF2 step of size config dt: backward Euler with dt' = 2dt/3 on the
  /// old level (4 f^n - f^{n-1}) / 3. Throws BootstrapRequiredError without
  /// a previous level.
  void step_bdf2(SimulationState& state) const;

  /// Step according to the configured order; BDF2 bootstraps with one
  /// backward-Euler step and falls back to it for a shortened final step.
  void advance(SimulationState& state, double dt) const;

 private:
  const ParityOperators& parity_ops(double dt) const;
  const TransportOperators& transport_ops(double dt) const;
  void record(SimulationState& state, KineticField next, double dt, KrylovReport report,
              double seconds) const;

  Problem problem_;
  SolverConfig config_;
  HalfQuadrature half_;
  std::vector<double> node_weights_;
  mutable std::map<double, std::unique_ptr<ParityOperators>> parity_cache_;
  mutable std::map<double, std::unique_ptr<TransportOperators>> transport_cache_;
};

// Single-step entry points.
void step_parity_be(SimulationState& state, const Problem& problem, const SolverConfig& config);
void step_parity_bdf2(SimulationState& state, const Problem& problem, const SolverConfig& config);
void step_nonsym_gmres(SimulationState& state, const Problem& problem, const SolverConfig& config);
void step_aniso(SimulationState& state, const Problem& problem, const SolverConfig& config);

/// Called after every step with the new state and its report.
using StepObserver = std::function<void(const SimulationState&, const StepReport&)>;

/// Steps from f0 until t_max; the final step is shortened to land on t_max.
SimulationState run_simulation(const Problem& problem, KineticField f0, const SolverConfig& config,
                               double t_max, const std::vector<StepObserver>& observers = {});

/// Number of steps and size of the last one for a run to t_max.
struct StepPlan {
  std::size_t steps = 0;
  double last_dt = 0.0;
};
StepPlan plan_steps(double dt, double t_max);

}  // namespace rte
