#include "rte/stepper.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "rte/errors.hpp"

namespace rte {

namespace {

// The constant vector is an eigenvector (eigenvalue eps^2/dt) of every system
// matrix, and the weighted mean is a left eigenvector. Shifting x along the
// constant removes the mean of the residual exactly and leaves the rest of it
// unchanged, so the discrete mass balance holds to rounding.
void correct_mean(std::span<double> x, std::span<const double> b, std::span<const double> weights,
                  double shift) {
  double wb = 0.0, wx = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    wb += weights[i] * b[i];
    wx += weights[i] * x[i];
    wsum += weights[i];
  }
  const double c = (wb / shift - wx) / wsum;
  for (double& v : x) v += c;
}

}  // namespace

void SolverConfig::validate() const {
  SchemeScalars{epsilon, dt}.validate();
  if (time_order != 1 && time_order != 2) {
    throw InvalidArgumentError("time_order must be 1 or 2");
  }
  if (!(tol > 0.0)) throw InvalidArgumentError("tol must be positive");
  if (max_iter == 0) throw InvalidArgumentError("max_iter must be positive");
  if (restart == 0) throw InvalidArgumentError("restart must be positive");
}

SimulationState initial_state(KineticField f0) {
  if (!all_finite(f0.values)) throw InvalidArgumentError("initial field has non-finite entries");
  SimulationState s;
  s.f = std::move(f0);
  return s;
}

ImplicitStepper::ImplicitStepper(Problem problem, SolverConfig config)
    : problem_(std::move(problem)), config_(config), half_(positive_half(problem_.quad)) {
  node_weights_.resize(problem_.mesh.cells() * problem_.quad.size());
  for (std::size_t c = 0; c < problem_.mesh.cells(); ++c) {
    for (std::size_t k = 0; k < problem_.quad.size(); ++k) {
      node_weights_[c * problem_.quad.size() + k] = problem_.quad.weights()[k] * problem_.mesh.cell_volume();
    }
  }
  config_.validate();
  const bool iso = problem_.sigma.is_isotropic();
  if (config_.scheme == Scheme::parity_cg && !iso) {
    throw UnsupportedCombinationError("parity_cg requires isotropic scattering; use aniso_gmres");
  }
  if (config_.scheme == Scheme::nonsym_gmres && !iso) {
    throw UnsupportedCombinationError("nonsym_gmres requires isotropic scattering; use aniso_gmres");
  }
  if (config_.scheme == Scheme::aniso_gmres && iso) {
    throw UnsupportedCombinationError("aniso_gmres requires an anisotropic kernel");
  }
  if (problem_.sigma.cells() != problem_.mesh.cells()) {
    throw InvalidArgumentError("cross section cell count does not match the mesh");
  }
}

const ParityOperators& ImplicitStepper::parity_ops(double dt) const {
  auto& slot = parity_cache_[dt];
  if (!slot) {
    slot = std::make_unique<ParityOperators>(problem_.mesh, problem_.quad, problem_.sigma,
                                             SchemeScalars{config_.epsilon, dt}, config_.stencil);
  }
  return *slot;
}

const TransportOperators& ImplicitStepper::transport_ops(double dt) const {
  auto& slot = transport_cache_[dt];
  if (!slot) {
    slot = std::make_unique<TransportOperators>(problem_.mesh, problem_.quad, problem_.sigma,
                                                SchemeScalars{config_.epsilon, dt});
  }
  return *slot;
}

KineticField ImplicitStepper::solve_implicit(const KineticField& source, double dt,
                                             const KineticField* guess,
                                             KrylovReport& report) const {
  if (source.cells != problem_.mesh.cells() || source.nodes != problem_.quad.size()) {
    throw InvalidArgumentError("field shape does not match mesh and quadrature");
  }
  const KrylovOptions opts{config_.tol, config_.max_iter, config_.restart};
  const bool warm = config_.warm_start && guess != nullptr;

  if (config_.scheme == Scheme::parity_cg) {
    const auto& ops = parity_ops(dt);
    const ParityPair old = split_parity(source, half_);
    const auto b = ops.assemble_rhs(old.even, old.odd);
    ParityPair next(old.cells, old.half_nodes);
    if (warm) next.even = split_parity(*guess, half_).even;
    LinearOperator op;
    op.n = ops.size();
    op.apply = [&ops](std::span<const double> in, std::span<double> out) { ops.apply_system(in, out); };
    op.precondition = [&ops](std::span<const double> in, std::span<double> out) {
      ops.apply_collision_shift_inverse(in, out);
    };
    report = pcg_solve(op, b, next.even, opts, ops.inner_weights());
    correct_mean(next.even, b, ops.inner_weights(), ops.scalars().shift());
    next.odd = ops.update_odd(next.even, old.odd);
    return merge_parity(next, half_, problem_.quad.size());
  }

  const auto& ops = transport_ops(dt);
  std::vector<double> b(source.values);
  const double shift = config_.epsilon * config_.epsilon / dt;
  for (double& v : b) v *= shift;
  KineticField next(source.cells, source.nodes);
  if (warm) next.values = guess->values;
  LinearOperator op;
  op.n = ops.size();
  op.apply = [&ops](std::span<const double> in, std::span<double> out) { ops.apply_system(in, out); };
  op.precondition = [&ops](std::span<const double> in, std::span<double> out) {
    ops.apply_collision_shift_inverse(in, out);
  };
  report = gmres_solve(op, b, next.values, opts);
  correct_mean(next.values, b, node_weights_, shift);
  return next;
}

void ImplicitStepper::record(SimulationState& state, KineticField next, double dt,
                             KrylovReport report, double seconds) const {
  const std::size_t index = state.step + 1;
  if (!report.converged) {
    throw SolverError("step " + std::to_string(index) + " did not converge: " + report.diagnostic,
                      index);
  }
  if (!all_finite(next.values)) {
    throw SolverError("step " + std::to_string(index) + " produced non-finite values", index);
  }
  state.previous = std::move(state.f);
  state.f = std::move(next);
  state.step = index;
  state.t += dt;
  state.reports.push_back({index, state.t, dt, std::move(report), seconds});
}

void ImplicitStepper::step_be(SimulationState& state, std::optional<double> dt) const {
  const double h = dt.value_or(config_.dt);
  const auto start = std::chrono::steady_clock::now();
  KrylovReport report;
  KineticField next = solve_implicit(state.f, h, &state.f, report);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  record(state, std::move(next), h, std::move(report), secs);
}

void ImplicitStepper::step_bdf2(SimulationState& state) const {
  if (!state.previous) {
    throw BootstrapRequiredError("BDF2 needs two levels; take one backward-Euler step first");
  }
  const auto start = std::chrono::steady_clock::now();
  KineticField source(state.f.cells, state.f.nodes);
  for (std::size_t i = 0; i < source.values.size(); ++i) {
    source.values[i] = (4.0 * state.f.values[i] - state.previous->values[i]) / 3.0;
  }
  KrylovReport report;
  KineticField next = solve_implicit(source, 2.0 * config_.dt / 3.0, &state.f, report);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  record(state, std::move(next), config_.dt, std::move(report), secs);
}

void ImplicitStepper::advance(SimulationState& state, double dt) const {
  const bool full = std::abs(dt - config_.dt) <= 1e-12 * config_.dt;
  if (config_.time_order == 2 && state.previous && full) {
    step_bdf2(state);
  } else {
    step_be(state, dt);
  }
}

namespace {

void check_scheme(const SolverConfig& config, Scheme expected, const char* name) {
  if (config.scheme != expected) {
    throw InvalidArgumentError(std::string(name) + " called with a different configured scheme");
  }
}

}  // namespace

void step_parity_be(SimulationState& state, const Problem& problem, const SolverConfig& config) {
  check_scheme(config, Scheme::parity_cg, "step_parity_be");
  ImplicitStepper(problem, config).step_be(state);
}

void step_parity_bdf2(SimulationState& state, const Problem& problem, const SolverConfig& config) {
  check_scheme(config, Scheme::parity_cg, "step_parity_bdf2");
  ImplicitStepper(problem, config).step_bdf2(state);
}

void step_nonsym_gmres(SimulationState& state, const Problem& problem, const SolverConfig& config) {
  check_scheme(config, Scheme::nonsym_gmres, "step_nonsym_gmres");
  ImplicitStepper(problem, config).step_be(state);
}

void step_aniso(SimulationState& state, const Problem& problem, const SolverConfig& config) {
  check_scheme(config, Scheme::aniso_gmres, "step_aniso");
  ImplicitStepper(problem, config).step_be(state);
}

StepPlan plan_steps(double dt, double t_max) {
  if (!(t_max >= 0.0)) throw InvalidArgumentError("t_max must be non-negative");
  if (!(dt > 0.0)) throw InvalidArgumentError("dt must be positive");
  StepPlan plan;
  if (t_max == 0.0) return plan;
  const double ratio = t_max / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  if (n == 0) n = 1;
  plan.steps = n;
  plan.last_dt = t_max - static_cast<double>(n - 1) * dt;
  return plan;
}

SimulationState run_simulation(const Problem& problem, KineticField f0, const SolverConfig& config,
                               double t_max, const std::vector<StepObserver>& observers) {
  const ImplicitStepper stepper(problem, config);
  SimulationState state = initial_state(std::move(f0));
  const StepPlan plan = plan_steps(config.dt, t_max);
  for (std::size_t n = 0; n < plan.steps; ++n) {
    const bool last = n + 1 == plan.steps;
    stepper.advance(state, last ? plan.last_dt : config.dt);
    if (last) {
      state.t = t_max;
      state.reports.back().t = t_max;
    }
    for (const auto& obs : observers) obs(state, state.reports.back());
  }
  return state;
}

}  // namespace rte
