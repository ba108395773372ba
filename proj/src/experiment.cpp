#include "rte/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "rte/csv.hpp"
#include "rte/dense.hpp"
#include "rte/diagnostics.hpp"
#include "rte/errors.hpp"
#include "rte/reference.hpp"

namespace rte {

namespace {

constexpr double kSigmaFloor = 1e-6;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool inside(double v, double lo, double hi) { return v >= lo && v <= hi; }

ExperimentConfig slab_example(SigmaPreset sigma, double epsilon, double t_max,
                              const std::string& prefix) {
  ExperimentConfig c;
  c.geometry = Geometry::slab1d;
  c.x_min = 0.0;
  c.x_max = 2.0;
  c.nx = 200;
  c.nv = 100;
  c.quadrature = QuadratureKind::midpoint;
  c.epsilon = epsilon;
  c.t_max = t_max;
  c.sigma = sigma;
  c.initial = InitialPreset::box;
  c.initial_value = 2.0;
  c.dt = 0.0;
  c.reference = ReferenceKind::automatic;
  c.prefix = prefix;
  return c;
}

ExperimentConfig planar_example(const std::string& prefix) {
  ExperimentConfig c;
  c.geometry = Geometry::planar2d;
  c.x_min = c.y_min = 0.0;
  c.x_max = c.y_max = 1.0;
  c.nx = 80;
  c.ny = 80;
  c.quadrature = QuadratureKind::circle;
  c.sigma = SigmaPreset::constant;
  c.sigma_value = 1.0;
  c.initial = InitialPreset::gaussian2d;
  c.initial_value = 1.0;
  c.dt = 0.0;
  c.prefix = prefix;
  return c;
}

CrossSection floored(const CrossSection& sigma, const AngularQuadrature& quad) {
  std::vector<double> v(sigma.values().begin(), sigma.values().end());
  for (double& s : v) s = std::max(s, kSigmaFloor);
  if (sigma.is_isotropic()) return CrossSection::isotropic(std::move(v));
  return CrossSection::anisotropic(std::move(v), sigma.kernel(), quad);
}

/// Backward-Euler diffusion limit advanced step by step alongside a kinetic run.
class DiffusionTracker {
 public:
  DiffusionTracker(const Problem& p, std::vector<double> rho0)
      : mesh_(p.mesh), sigma_(floored(p.sigma, p.quad)), rho_(std::move(rho0)),
        coefficient_(limit_coefficient(sigma_, p.mesh.dimension())) {}

  void step(double dt) {
    if (mesh_.dimension() == 2) {
      rho_ = diffusion_step_2d(rho_, sigma_, dt, mesh_);
      return;
    }
    auto it = solvers_.find(dt);
    if (it == solvers_.end()) it = solvers_.emplace(dt, DiffusionSolver1D(mesh_, coefficient_, dt)).first;
    rho_ = it->second.step(rho_);
  }
  const std::vector<double>& rho() const noexcept { return rho_; }

 private:
  SpatialMesh mesh_;
  CrossSection sigma_;
  std::vector<double> rho_;
  std::vector<double> coefficient_;
  std::map<double, DiffusionSolver1D> solvers_;
};

/// Steps until state.t reaches `target`, shortening the last step.
void advance_to(const ImplicitStepper& stepper, SimulationState& state, double target,
                const std::vector<StepObserver>& observers) {
  const double span = target - state.t;
  if (!(span > 0.0)) return;
  const double dt = stepper.config().dt;
  const StepPlan plan = plan_steps(dt, span);
  for (std::size_t n = 0; n < plan.steps; ++n) {
    const bool last = n + 1 == plan.steps;
    stepper.advance(state, last ? plan.last_dt : dt);
    if (last) {
      state.t = target;
      state.reports.back().t = target;
    }
    for (const auto& obs : observers) obs(state, state.reports.back());
  }
}

std::vector<std::pair<std::string, std::string>> header(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> meta{{"version", kVersion}};
  for (auto& kv : config_echo(c)) meta.push_back(std::move(kv));
  return meta;
}

std::string output_path(const ExperimentConfig& c, const std::string& suffix) {
  std::error_code ec;
  std::filesystem::create_directories(c.dir, ec);
  if (ec) throw IoError("cannot create output directory '" + c.dir + "': " + ec.message());
  return (std::filesystem::path(c.dir) / (c.prefix + suffix)).string();
}

void add_summary(CsvTable& table, const ExperimentOutcome& outcome) {
  for (const auto& [k, v] : outcome.summary) table.metadata.emplace_back("summary." + k, format_real(v));
}

std::vector<double> sigma_column(const Problem& p) {
  return {p.sigma.values().begin(), p.sigma.values().end()};
}

ReferenceKind resolve_reference(const ExperimentConfig& c) {
  if (c.reference != ReferenceKind::automatic) return c.reference;
  if (c.t_max == 0.0) return ReferenceKind::none;
  return c.epsilon >= 0.1 ? ReferenceKind::explicit_kinetic : ReferenceKind::diffusion;
}

// ---------------------------------------------------------------------------

ExperimentOutcome run_mode(const ExperimentConfig& c) {
  const Problem p = build_problem(c);
  const KineticField f0 = initial_field(c, p);
  const ImplicitStepper stepper(p, c.solver());
  StabilityMonitor monitor(p.mesh, p.quad, f0);

  std::set<double> times(c.snapshot_times.begin(), c.snapshot_times.end());
  times.erase(c.t_max);

  CsvTable steps;
  steps.columns = {"step", "t", "dt", "iterations", "matvecs", "residual", "converged",
                   "norm", "mass", "increase", "flagged"};
  const StepObserver log = [&](const SimulationState& s, const StepReport& r) {
    monitor.record(s.step, s.t, s.f);
    const auto& m = monitor.records().back();
    steps.rows.push_back({static_cast<double>(r.step), r.t, r.dt,
                          static_cast<double>(r.krylov.iterations),
                          static_cast<double>(r.krylov.matvec_count), r.krylov.final_residual(),
                          r.krylov.converged ? 1.0 : 0.0, m.norm, m.mass, m.relative_increase,
                          m.flagged ? 1.0 : 0.0});
  };

  SimulationState state = initial_state(f0);
  std::vector<std::vector<double>> snapshots;
  for (double t : times) {
    advance_to(stepper, state, t, {log});
    snapshots.push_back(density(state.f, p.quad));
  }
  advance_to(stepper, state, c.t_max, {log});
  const auto rho = density(state.f, p.quad);

  ExperimentOutcome out;
  out.steps = state.step;
  out.stability_flags = monitor.flag_count();
  out.max_mass_drift = monitor.max_mass_drift();
  out.summary = {{"steps", static_cast<double>(out.steps)},
                 {"stability_flags", static_cast<double>(out.stability_flags)},
                 {"max_mass_drift", out.max_mass_drift}};

  std::vector<double> ref;
  const ReferenceKind kind = resolve_reference(c);
  if (kind == ReferenceKind::explicit_kinetic) {
    ref = density(explicit_solve(f0, p.sigma, c.epsilon, p.mesh, p.quad, c.t_max), p.quad);
  } else if (kind == ReferenceKind::diffusion) {
    ref = c.t_max > 0.0 ? diffusion_solve(density(f0, p.quad), floored(p.sigma, p.quad), p.mesh,
                                          c.resolved_dt(), c.t_max)
                        : density(f0, p.quad);
  }
  if (!ref.empty()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) worst = std::max(worst, std::abs(rho[i] - ref[i]));
    out.summary.emplace_back("reference_distance", rho_distance(rho, ref, p.mesh));
    out.summary.emplace_back("reference_max_difference", worst);
  }

  CsvTable profile;
  profile.metadata = header(c);
  profile.metadata.emplace_back("reference_used", to_string(kind));
  std::size_t i = 0;
  for (double t : times) profile.metadata.emplace_back("snapshot_" + std::to_string(i++), format_real(t));
  add_summary(profile, out);
  const bool planar = p.mesh.dimension() == 2;
  profile.columns = {"x"};
  if (planar) profile.columns.push_back("y");
  profile.columns.push_back("sigma");
  for (std::size_t s = 0; s < snapshots.size(); ++s) profile.columns.push_back("rho_" + std::to_string(s));
  profile.columns.push_back("rho");
  if (!ref.empty()) profile.columns.push_back("rho_ref");
  const auto sig = sigma_column(p);
  for (int jy = 0; jy < p.mesh.ny(); ++jy) {
    for (int ix = 0; ix < p.mesh.nx(); ++ix) {
      const std::size_t cell = p.mesh.cell(ix, jy);
      std::vector<double> row{p.mesh.x_center(ix)};
      if (planar) row.push_back(p.mesh.y_center(jy));
      row.push_back(sig[cell]);
      for (const auto& snap : snapshots) row.push_back(snap[cell]);
      row.push_back(rho[cell]);
      if (!ref.empty()) row.push_back(ref[cell]);
      profile.rows.push_back(std::move(row));
    }
  }
  steps.metadata = header(c);
  add_summary(steps, out);

  out.files.push_back(output_path(c, "_rho.csv"));
  write_csv(out.files.back(), profile);
  out.files.push_back(output_path(c, "_steps.csv"));
  write_csv(out.files.back(), steps);
  return out;
}

ExperimentOutcome condition_mode(const ExperimentConfig& c) {
  const std::vector<int> nx = c.sweep_nx.empty() ? std::vector<int>{c.nx} : c.sweep_nx;
  const std::vector<int> nv = c.sweep_nv.empty() ? std::vector<int>{c.nv} : c.sweep_nv;
  const std::vector<double> eps =
      c.sweep_epsilons.empty() ? std::vector<double>{c.epsilon} : c.sweep_epsilons;
  const int max_nx = *std::max_element(nx.begin(), nx.end());
  const int max_nv = *std::max_element(nv.begin(), nv.end());
  const bool dense = static_cast<std::size_t>(max_nx) * static_cast<std::size_t>(max_nv / 2) <= 2000;
  const ConditionMethod method = dense ? ConditionMethod::dense : ConditionMethod::iterative;

  CsvTable table;
  table.metadata = header(c);
  table.metadata.emplace_back("method", to_string(method));
  for (std::size_t r = 0; r < std::size(kAllDtRules); ++r) {
    table.metadata.emplace_back("rule_" + std::to_string(r), to_string(kAllDtRules[r]));
  }
  table.columns = {"epsilon", "nx", "nv", "rule", "dt", "kappa_system", "lambda_min_system",
                   "lambda_max_system", "kappa_preconditioned", "lambda_min_preconditioned",
                   "lambda_max_preconditioned"};
  ExperimentOutcome out;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    const auto rows = calibration_sweep(eps[e], nx, nv, kAllDtRules, method);
    for (const auto& row : rows) {
      const auto rule = static_cast<double>(
          std::find(std::begin(kAllDtRules), std::end(kAllDtRules), row.rule) - std::begin(kAllDtRules));
      table.rows.push_back({eps[e], static_cast<double>(row.system.nx),
                            static_cast<double>(row.system.nv), rule, row.system.dt,
                            row.system.kappa, row.system.lambda_min, row.system.lambda_max,
                            row.preconditioned.kappa, row.preconditioned.lambda_min,
                            row.preconditioned.lambda_max});
    }
    const ConditionReference* ref = nullptr;
    bool preconditioned = false;
    if (eps[e] == 1.0) ref = &reference_kinetic_system();
    if (eps[e] == 1e-5) {
      ref = &reference_diffusive_preconditioned();
      preconditioned = true;
    }
    bool scored = false;
    for (const auto& row : rows) scored = scored || (ref && ref->at(row.system.nx, row.system.nv) > 0.0);
    if (scored) {
      double score = 0.0;
      const DtRule best = best_rule(rows, *ref, preconditioned, &score);
      table.metadata.emplace_back("best_rule_" + std::to_string(e), to_string(best));
      out.summary.emplace_back("best_rule_score_" + std::to_string(e), score);
    }
  }
  add_summary(table, out);
  out.files.push_back(output_path(c, "_condition.csv"));
  write_csv(out.files.back(), table);
  return out;
}

template <class F>
double best_time(F&& work, double budget = 0.2, int max_reps = 25) {
  double best = 1e300, total = 0.0;
  for (int r = 0; r < max_reps && (r == 0 || total < budget); ++r) {
    const auto start = std::chrono::steady_clock::now();
    work();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    best = std::min(best, s);
    total += s;
  }
  return best;
}

ExperimentOutcome bench_mode(const ExperimentConfig& c) {
  if (c.scheme != Scheme::parity_cg) {
    throw UnsupportedCombinationError("bench compares dense LU with the parity PCG path; use scheme = parity_cg");
  }
  const std::vector<int> nxs = c.sweep_nx.empty() ? std::vector<int>{c.nx} : c.sweep_nx;
  const std::vector<int> nvs = c.sweep_nv.empty() ? std::vector<int>{c.nv} : c.sweep_nv;
  CsvTable table;
  table.metadata = header(c);
  table.metadata.emplace_back("timing", "best of repeated runs; dense excludes assembly");
  table.columns = {"nx", "nv", "unknowns", "pcg_seconds", "dense_seconds", "ratio", "iterations",
                   "relative_difference"};
  ExperimentOutcome out;
  for (int nx : nxs) {
    for (int nv : nvs) {
      ExperimentConfig cc = c;
      cc.nx = nx;
      cc.nv = nv;
      cc.validate();
      const Problem p = build_problem(cc);
      const KineticField f0 = initial_field(cc, p);
      const SolverConfig sc = cc.solver();
      const ImplicitStepper stepper(p, sc);
      KrylovReport report;
      KineticField pcg = stepper.solve_implicit(f0, sc.dt, nullptr, report);
      const double t_pcg = best_time([&] { pcg = stepper.solve_implicit(f0, sc.dt, nullptr, report); });

      const SchemeScalars s{sc.epsilon, sc.dt};
      const ParityOperators ops(p.mesh, p.quad, p.sigma, s, sc.stencil);
      const std::size_t n = ops.size();
      double t_dense = std::nan(""), diff = std::nan("");
      if (n <= kDenseRowCap) {
        const Eigen::MatrixXd k = dense_assemble(DenseOperator::parity_system, p.mesh, p.quad,
                                                 p.sigma, s, sc.stencil);
        const ParityPair old = split_parity(f0, ops.half());
        const auto b = ops.assemble_rhs(old.even, old.odd);
        const Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(n));
        Eigen::VectorXd x;
        t_dense = best_time([&] {
          const Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
          x = lu.solve(bv);
        });
        const auto even = split_parity(pcg, ops.half()).even;
        const Eigen::Map<const Eigen::VectorXd> ev(even.data(), static_cast<Eigen::Index>(n));
        diff = (x - ev).norm() / x.norm();
      }
      const double ratio = t_dense / t_pcg;
      table.rows.push_back({static_cast<double>(nx), static_cast<double>(nv), static_cast<double>(n),
                            t_pcg, t_dense, ratio, static_cast<double>(report.iterations), diff});
      const std::string tag = "nx" + std::to_string(nx) + "_nv" + std::to_string(nv);
      out.summary.emplace_back("pcg_seconds_" + tag, t_pcg);
      out.summary.emplace_back("ratio_" + tag, ratio);
    }
  }
  add_summary(table, out);
  out.files.push_back(output_path(c, "_bench.csv"));
  write_csv(out.files.back(), table);
  return out;
}

ExperimentOutcome ap_sweep_mode(const ExperimentConfig& c) {
  ExperimentOutcome out;
  for (std::size_t e = 0; e < c.epsilons.size(); ++e) {
    ExperimentConfig ce = c;
    ce.epsilon = c.epsilons[e];
    const Problem p = build_problem(ce);
    const KineticField f0 = initial_field(ce, p);
    const ImplicitStepper stepper(p, ce.solver());
    StabilityMonitor monitor(p.mesh, p.quad, f0);
    DiffusionTracker diffusion(p, density(f0, p.quad));

    CsvTable table;
    table.metadata = header(c);
    table.metadata.emplace_back("epsilon", format_real(ce.epsilon));
    table.columns = {"step", "t", "ap_distance", "rho_distance"};
    table.rows.push_back({0.0, 0.0, ap_distance_f_rho(f0, p.mesh, p.quad),
                          rho_distance(density(f0, p.quad), diffusion.rho(), p.mesh)});
    const StepObserver obs = [&](const SimulationState& s, const StepReport& r) {
      monitor.record(s.step, s.t, s.f);
      diffusion.step(r.dt);
      table.rows.push_back({static_cast<double>(s.step), s.t, ap_distance_f_rho(s.f, p.mesh, p.quad),
                            rho_distance(density(s.f, p.quad), diffusion.rho(), p.mesh)});
    };
    SimulationState state = initial_state(f0);
    advance_to(stepper, state, ce.t_max, {obs});

    const std::string tag = std::to_string(e);
    out.steps += state.step;
    out.stability_flags += monitor.flag_count();
    out.max_mass_drift = std::max(out.max_mass_drift, monitor.max_mass_drift());
    out.summary.emplace_back("epsilon_" + tag, ce.epsilon);
    out.summary.emplace_back("final_ap_distance_" + tag, table.rows.back()[2]);
    out.summary.emplace_back("final_rho_distance_" + tag, table.rows.back()[3]);
    table.metadata.emplace_back("summary.final_ap_distance", format_real(table.rows.back()[2]));
    table.metadata.emplace_back("summary.final_rho_distance", format_real(table.rows.back()[3]));
    table.metadata.emplace_back("summary.max_mass_drift", format_real(monitor.max_mass_drift()));
    out.files.push_back(output_path(c, "_ap_eps" + tag + ".csv"));
    write_csv(out.files.back(), table);
  }
  out.summary.emplace_back("max_mass_drift", out.max_mass_drift);
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example1", "example1_kinetic", "example2", "example2_kinetic",
          "example3", "example3_kinetic", "example5", "example6"};
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  if (name == "example1") {
    c = slab_example(SigmaPreset::vanishing_quartic, 1e-3, 0.1, name);
    c.max_iter = 10000;
  } else if (name == "example1_kinetic") {
    c = slab_example(SigmaPreset::vanishing_quartic, 1.0, 1.0, name);
  } else if (name == "example2") {
    c = slab_example(SigmaPreset::striped, 1e-3, 0.1, name);
  } else if (name == "example2_kinetic") {
    c = slab_example(SigmaPreset::striped, 1.0, 1.0, name);
  } else if (name == "example3" || name == "example3_kinetic") {
    const bool kinetic = name == "example3_kinetic";
    c = slab_example(SigmaPreset::aniso_degree1, kinetic ? 1.0 : 1e-3, kinetic ? 1.0 : 0.1, name);
    c.sigma0 = SigmaPreset::striped;
    c.scheme = Scheme::aniso_gmres;
  } else if (name == "example5") {
    c = planar_example(name);
    c.nv = 16;
    c.epsilon = 1e-3;
    c.t_max = 0.05;
    c.mode = Mode::ap_sweep;
    c.epsilons = {1e-1, 1e-2, 1e-3};
    c.reference = ReferenceKind::diffusion;
  } else if (name == "example6") {
    c = planar_example(name);
    c.nv = 10;
    c.sigma = SigmaPreset::blocks2d;
    c.epsilon = 1e-4;
    c.t_max = 0.1;
    c.reference = ReferenceKind::diffusion;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")", 0);
  }
  c.validate();
  return c;
}

std::vector<double> sigma_profile(SigmaPreset preset, double scale, const SpatialMesh& mesh) {
  std::vector<double> s(mesh.cells());
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const double x = mesh.x_center(i), y = mesh.y_center(j);
      double v = 1.0;
      switch (preset) {
        case SigmaPreset::constant:
          break;
        case SigmaPreset::vanishing_quartic:
          v = 100.0 * std::pow(x - 1.0, 4);
          break;
        case SigmaPreset::striped:
          if (inside(x, 0.35, 0.65) || inside(x, 1.35, 1.65)) v = 0.02;
          break;
        case SigmaPreset::blocks2d:
          if ((inside(x, 0.25, 0.35) && inside(y, 0.25, 0.35)) ||
              (inside(x, 0.65, 0.75) && inside(y, 0.65, 0.75))) {
            v = 0.02;
          }
          break;
        case SigmaPreset::aniso_degree1:
          throw InvalidArgumentError("aniso_degree1 is a kernel, not a profile; pass its sigma0 preset");
      }
      s[mesh.cell(i, j)] = scale * v;
    }
  }
  return s;
}

SpatialMesh build_mesh(const ExperimentConfig& c) {
  if (c.geometry == Geometry::planar2d) {
    return SpatialMesh::plane(c.x_min, c.x_max, c.nx, c.y_min, c.y_max, c.cells_y());
  }
  return SpatialMesh::line(c.x_min, c.x_max, c.nx);
}

AngularQuadrature build_quadrature(const ExperimentConfig& c) {
  switch (c.quadrature) {
    case QuadratureKind::midpoint:
      return build_midpoint_quadrature(c.nv);
    case QuadratureKind::gauss:
      return build_gauss_quadrature(c.nv);
    case QuadratureKind::circle:
      break;
  }
  return build_circle_quadrature(c.nv);
}

Problem build_problem(const ExperimentConfig& c) {
  c.validate();
  SpatialMesh mesh = build_mesh(c);
  AngularQuadrature quad = build_quadrature(c);
  if (c.sigma == SigmaPreset::aniso_degree1) {
    auto sigma0 = sigma_profile(c.sigma0, c.sigma_value, mesh);
    auto kernel = linear_anisotropic_kernel(quad);
    CrossSection sigma = CrossSection::anisotropic(std::move(sigma0), std::move(kernel), quad);
    return Problem{std::move(mesh), std::move(quad), std::move(sigma)};
  }
  CrossSection sigma = CrossSection::isotropic(sigma_profile(c.sigma, c.sigma_value, mesh));
  return Problem{std::move(mesh), std::move(quad), std::move(sigma)};
}

KineticField initial_field(const ExperimentConfig& c, const Problem& p) {
  const auto& mesh = p.mesh;
  const std::size_t nv = p.quad.size();
  KineticField f(mesh.cells(), nv);
  if (c.initial == InitialPreset::custom) {
    const CsvTable table = read_csv(c.initial_file);
    if (table.rows.size() != mesh.cells()) {
      throw InvalidArgumentError("initial_file has " + std::to_string(table.rows.size()) +
                                 " rows, the mesh has " + std::to_string(mesh.cells()) + " cells");
    }
    const bool isotropic =
        std::find(table.columns.begin(), table.columns.end(), "rho") != table.columns.end();
    std::vector<std::size_t> cols;
    if (isotropic) {
      cols.assign(nv, table.column("rho"));
    } else {
      for (std::size_t k = 0; k < nv; ++k) cols.push_back(table.column("f" + std::to_string(k)));
    }
    for (std::size_t cell = 0; cell < mesh.cells(); ++cell) {
      for (std::size_t k = 0; k < nv; ++k) f(cell, k) = table.rows[cell][cols[k]];
    }
    return f;
  }
  const double cx = 0.5 * (c.x_min + c.x_max);
  const double cy = 0.5 * (c.y_min + c.y_max);
  const bool planar = mesh.dimension() == 2;
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const double x = mesh.x_center(i), y = mesh.y_center(j);
      double v = c.initial_value;
      if (c.initial == InitialPreset::box) {
        const bool in = x > 0.8 && x < 1.2 && (!planar || (y > 0.8 && y < 1.2));
        v = in ? c.initial_value : 0.0;
      } else if (c.initial == InitialPreset::gaussian2d) {
        const double r2 = (x - cx) * (x - cx) + (planar ? (y - cy) * (y - cy) : 0.0);
        v = 1.0 + c.initial_value * std::exp(-40.0 * r2);
      }
      const std::size_t cell = mesh.cell(i, j);
      for (std::size_t k = 0; k < nv; ++k) f(cell, k) = v;
    }
  }
  return f;
}

double ExperimentOutcome::get(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw InvalidArgumentError("no summary entry '" + key + "'");
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.mode) {
    case Mode::run:
      return run_mode(config);
    case Mode::condition:
      return condition_mode(config);
    case Mode::bench:
      return bench_mode(config);
    case Mode::ap_sweep:
      break;
  }
  return ap_sweep_mode(config);
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgumentError*>(&e) ||
      dynamic_cast<const UnsupportedCombinationError*>(&e)) {
    return 2;
  }
  return 1;
}

}  // namespace rte
