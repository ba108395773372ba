#include "rte/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rte/errors.hpp"

namespace rte {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& v, const std::string& key, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError("key '" + key + "' expects a real number, got '" + v + "'", line);
  }
  return x;
}

long parse_integer(const std::string& v, const std::string& key, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'", line);
  }
  return x;
}

std::size_t parse_count(const std::string& v, const std::string& key, std::size_t line) {
  const long x = parse_integer(v, key, line);
  if (x <= 0) throw ConfigError("key '" + key + "' must be positive", line);
  return static_cast<std::size_t>(x);
}

bool parse_flag(const std::string& v, const std::string& key, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + v + "'", line);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> items;
  if (trim(v).empty()) return items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<double> parse_reals(const std::string& v, const std::string& key, std::size_t line) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(parse_real(s, key, line));
  return out;
}

std::vector<int> parse_ints(const std::string& v, const std::string& key, std::size_t line) {
  std::vector<int> out;
  for (const auto& s : split_list(v)) out.push_back(static_cast<int>(parse_count(s, key, line)));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      s += format_real(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

template <typename E>
E parse_enum(const std::string& v, const std::vector<std::pair<std::string, E>>& names,
             const std::string& key, std::size_t line) {
  for (const auto& [name, value] : names) {
    if (name == v) return value;
  }
  std::string options;
  for (const auto& [name, value] : names) options += (options.empty() ? "" : ", ") + name;
  throw ConfigError("key '" + key + "' has invalid value '" + v + "' (expected one of: " + options + ")",
                    line);
}

const std::vector<std::pair<std::string, Geometry>> kGeometries = {
    {"slab1d", Geometry::slab1d}, {"planar2d", Geometry::planar2d}};
const std::vector<std::pair<std::string, QuadratureKind>> kQuadratures = {
    {"midpoint", QuadratureKind::midpoint}, {"gauss", QuadratureKind::gauss},
    {"circle", QuadratureKind::circle}};
const std::vector<std::pair<std::string, SigmaPreset>> kSigmas = {
    {"constant", SigmaPreset::constant}, {"vanishing_quartic", SigmaPreset::vanishing_quartic},
    {"striped", SigmaPreset::striped}, {"blocks2d", SigmaPreset::blocks2d},
    {"aniso_degree1", SigmaPreset::aniso_degree1}};
const std::vector<std::pair<std::string, InitialPreset>> kInitials = {
    {"box", InitialPreset::box}, {"gaussian2d", InitialPreset::gaussian2d},
    {"constant", InitialPreset::constant}, {"custom", InitialPreset::custom}};
const std::vector<std::pair<std::string, ReferenceKind>> kReferences = {
    {"none", ReferenceKind::none}, {"auto", ReferenceKind::automatic},
    {"explicit", ReferenceKind::explicit_kinetic}, {"diffusion", ReferenceKind::diffusion}};
const std::vector<std::pair<std::string, Mode>> kModes = {
    {"run", Mode::run}, {"condition", Mode::condition}, {"bench", Mode::bench},
    {"ap_sweep", Mode::ap_sweep}};
const std::vector<std::pair<std::string, Scheme>> kSchemes = {
    {"parity_cg", Scheme::parity_cg}, {"nonsym_gmres", Scheme::nonsym_gmres},
    {"aniso_gmres", Scheme::aniso_gmres}};
const std::vector<std::pair<std::string, EvenStencil>> kStencils = {
    {"compact", EvenStencil::compact}, {"wide", EvenStencil::wide}};

template <typename E>
std::string enum_name(E value, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

struct KeySpec {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&, std::size_t)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define REAL_KEY(sec, name)                                                              \
  KeySpec {                                                                              \
    sec, #name,                                                                          \
        [](ExperimentConfig& c, const std::string& v, std::size_t l) {                   \
          c.name = parse_real(v, #name, l);                                              \
        },                                                                               \
        [](const ExperimentConfig& c) { return format_real(c.name); }                    \
  }
#define ENUM_KEY(sec, name, table)                                                       \
  KeySpec {                                                                              \
    sec, #name,                                                                          \
        [](ExperimentConfig& c, const std::string& v, std::size_t l) {                   \
          c.name = parse_enum(v, table, #name, l);                                       \
        },                                                                               \
        [](const ExperimentConfig& c) { return enum_name(c.name, table); }               \
  }
#define STRING_KEY(sec, name)                                                            \
  KeySpec {                                                                              \
    sec, #name, [](ExperimentConfig& c, const std::string& v, std::size_t) { c.name = v; }, \
        [](const ExperimentConfig& c) { return c.name; }                                 \
  }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      ENUM_KEY("grid", geometry, kGeometries),
      REAL_KEY("grid", x_min),
      REAL_KEY("grid", x_max),
      REAL_KEY("grid", y_min),
      REAL_KEY("grid", y_max),
      {"grid", "nx",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.nx = static_cast<int>(parse_count(v, "nx", l));
       },
       [](const ExperimentConfig& c) { return std::to_string(c.nx); }},
      {"grid", "ny",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         // 0 keeps ny equal to nx.
         const long n = parse_integer(v, "ny", l);
         if (n < 0) throw ConfigError("key 'ny' must be >= 0", l);
         c.ny = static_cast<int>(n);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.ny); }},
      {"grid", "nv",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.nv = static_cast<int>(parse_count(v, "nv", l));
       },
       [](const ExperimentConfig& c) { return std::to_string(c.nv); }},
      ENUM_KEY("grid", quadrature, kQuadratures),

      REAL_KEY("physics", epsilon),
      REAL_KEY("physics", t_max),
      ENUM_KEY("physics", sigma, kSigmas),
      REAL_KEY("physics", sigma_value),
      ENUM_KEY("physics", sigma0, kSigmas),
      ENUM_KEY("physics", initial, kInitials),
      REAL_KEY("physics", initial_value),
      STRING_KEY("physics", initial_file),

      ENUM_KEY("solver", scheme, kSchemes),
      {"solver", "time_order",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.time_order = static_cast<int>(parse_integer(v, "time_order", l));
       },
       [](const ExperimentConfig& c) { return std::to_string(c.time_order); }},
      {"solver", "dt",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         if (v == "dx_over_3") {
           c.dt = 0.0;
           return;
         }
         c.dt = parse_real(v, "dt", l);
         if (!(c.dt > 0.0)) throw ConfigError("key 'dt' must be positive or dx_over_3", l);
       },
       [](const ExperimentConfig& c) {
         return c.uses_dx_over_3() ? std::string("dx_over_3") : format_real(c.dt);
       }},
      REAL_KEY("solver", tol),
      {"solver", "max_iter",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.max_iter = parse_count(v, "max_iter", l);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.max_iter); }},
      {"solver", "restart",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.restart = parse_count(v, "restart", l);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.restart); }},
      {"solver", "warm_start",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.warm_start = parse_flag(v, "warm_start", l);
       },
       [](const ExperimentConfig& c) { return std::string(c.warm_start ? "true" : "false"); }},
      ENUM_KEY("solver", stencil, kStencils),

      ENUM_KEY("output", mode, kModes),
      STRING_KEY("output", dir),
      STRING_KEY("output", prefix),
      {"output", "snapshot_times",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.snapshot_times = parse_reals(v, "snapshot_times", l);
       },
       [](const ExperimentConfig& c) { return join(c.snapshot_times); }},
      ENUM_KEY("output", reference, kReferences),
      {"output", "epsilons",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.epsilons = parse_reals(v, "epsilons", l);
       },
       [](const ExperimentConfig& c) { return join(c.epsilons); }},
      {"output", "sweep_nx",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.sweep_nx = parse_ints(v, "sweep_nx", l);
       },
       [](const ExperimentConfig& c) { return join(c.sweep_nx); }},
      {"output", "sweep_nv",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.sweep_nv = parse_ints(v, "sweep_nv", l);
       },
       [](const ExperimentConfig& c) { return join(c.sweep_nv); }},
      {"output", "sweep_epsilons",
       [](ExperimentConfig& c, const std::string& v, std::size_t l) {
         c.sweep_epsilons = parse_reals(v, "sweep_epsilons", l);
       },
       [](const ExperimentConfig& c) { return join(c.sweep_epsilons); }},
  };
  return table;
}

#undef REAL_KEY
#undef ENUM_KEY
#undef STRING_KEY

const KeySpec* find_key(const std::string& section, const std::string& key) {
  for (const auto& spec : key_table()) {
    if (spec.section == section && spec.key == key) return &spec;
  }
  return nullptr;
}

std::string nearest_key(const std::string& section, const std::string& key) {
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (const auto& spec : key_table()) {
    // Keys of the current section win ties.
    const std::size_t d = 2 * edit_distance(key, spec.key) + (spec.section == section ? 0 : 1);
    if (d < best_d) {
      best_d = d;
      best = spec.section == section ? spec.key : spec.section + "." + spec.key;
    }
  }
  return best;
}

const std::set<std::string> kSections = {"grid", "physics", "solver", "output"};
const std::vector<std::pair<std::string, std::string>> kRequired = {
    {"grid", "nx"}, {"grid", "nv"}, {"physics", "epsilon"}, {"physics", "t_max"}};

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s;
  s.epsilon = epsilon;
  s.dt = resolved_dt();
  s.scheme = scheme;
  s.time_order = time_order;
  s.tol = tol;
  s.max_iter = max_iter;
  s.restart = restart;
  s.warm_start = warm_start;
  s.stencil = stencil;
  return s;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what, 0); };
  if (nx <= 0) fail("grid.nx must be positive");
  if (nv <= 0 || nv % 2 != 0) fail("grid.nv must be a positive even number");
  if (!(x_max > x_min)) fail("grid.x_max must exceed grid.x_min");
  if (geometry == Geometry::planar2d) {
    if (!(y_max > y_min)) fail("grid.y_max must exceed grid.y_min");
    if (quadrature != QuadratureKind::circle) fail("planar2d requires quadrature = circle");
    if (nv < 4) fail("circle quadrature needs nv >= 4");
  } else if (quadrature == QuadratureKind::circle) {
    fail("slab1d requires quadrature = midpoint or gauss");
  }
  if (!(epsilon > 0.0)) fail("physics.epsilon must be positive");
  if (!(t_max >= 0.0)) fail("physics.t_max must be >= 0");
  if (!(sigma_value >= 0.0)) fail("physics.sigma_value must be >= 0");
  if (sigma == SigmaPreset::blocks2d && geometry != Geometry::planar2d) {
    fail("sigma = blocks2d requires geometry = planar2d");
  }
  if (sigma == SigmaPreset::aniso_degree1) {
    if (geometry != Geometry::slab1d) fail("sigma = aniso_degree1 requires geometry = slab1d");
    if (sigma0 == SigmaPreset::aniso_degree1 || sigma0 == SigmaPreset::blocks2d) {
      fail("sigma0 must be constant, vanishing_quartic or striped");
    }
    if (scheme != Scheme::aniso_gmres) fail("sigma = aniso_degree1 requires scheme = aniso_gmres");
  } else if (scheme == Scheme::aniso_gmres) {
    fail("scheme = aniso_gmres requires sigma = aniso_degree1");
  }
  if (initial == InitialPreset::custom && initial_file.empty()) {
    fail("initial = custom requires physics.initial_file");
  }
  if (time_order != 1 && time_order != 2) fail("solver.time_order must be 1 or 2");
  if (!(tol > 0.0)) fail("solver.tol must be positive");
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= t_max)) fail("output.snapshot_times must lie in [0, t_max]");
  }
  for (double e : epsilons) {
    if (!(e > 0.0)) fail("output.epsilons must be positive");
  }
  for (double e : sweep_epsilons) {
    if (!(e > 0.0)) fail("output.sweep_epsilons must be positive");
  }
  if (mode == Mode::ap_sweep && epsilons.empty()) fail("mode = ap_sweep requires output.epsilons");
  if (prefix.empty()) fail("output.prefix must not be empty");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::string section;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    const auto raw = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
    ++line_no;
    std::string line(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!kSections.count(section)) {
        throw ConfigError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value, got '" + line + "'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' appears before any section", line_no);
    const KeySpec* spec = find_key(section, key);
    if (!spec) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]; did you mean '" +
                            nearest_key(section, key) + "'?",
                        line_no);
    }
    const std::string full = section + "." + key;
    if (const auto it = seen.find(full); it != seen.end()) {
      throw ConfigError("duplicate key '" + full + "' (first set on line " +
                            std::to_string(it->second) + ")",
                        line_no);
    }
    seen[full] = line_no;
    spec->set(c, value, line_no);
  }
  for (const auto& [sec, key] : kRequired) {
    if (!seen.count(sec + "." + key)) {
      throw ConfigError("missing required key '" + key + "' in [" + sec + "]", line_no);
    }
  }
  if (!seen.count("grid.quadrature") && c.geometry == Geometry::planar2d) {
    c.quadrature = QuadratureKind::circle;
  }
  if (!seen.count("grid.y_min") && c.geometry == Geometry::planar2d) c.y_min = c.x_min;
  if (!seen.count("grid.y_max") && c.geometry == Geometry::planar2d) c.y_max = c.x_max;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& spec : key_table()) out.emplace_back(spec.section + "." + spec.key, spec.get(config));
  return out;
}

std::string to_config_text(const ExperimentConfig& config) {
  std::string text, section;
  for (const auto& spec : key_table()) {
    if (spec.section != section) {
      section = spec.section;
      text += (text.empty() ? "[" : "\n[") + section + "]\n";
    }
    text += spec.key + " = " + spec.get(config) + "\n";
  }
  return text;
}

ExperimentConfig config_from_echo(const std::vector<std::pair<std::string, std::string>>& echo) {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> by_section;
  for (const auto& [full, value] : echo) {
    const auto dot = full.find('.');
    if (dot == std::string::npos) continue;
    by_section[full.substr(0, dot)].emplace_back(full.substr(dot + 1), value);
  }
  std::string text;
  for (const auto& [section, entries] : by_section) {
    if (!kSections.count(section)) continue;
    text += "[" + section + "]\n";
    for (const auto& [key, value] : entries) text += key + " = " + value + "\n";
  }
  return parse_config(text);
}

std::string to_string(Geometry g) { return enum_name(g, kGeometries); }
std::string to_string(QuadratureKind q) { return enum_name(q, kQuadratures); }
std::string to_string(SigmaPreset s) { return enum_name(s, kSigmas); }
std::string to_string(InitialPreset i) { return enum_name(i, kInitials); }
std::string to_string(ReferenceKind r) { return enum_name(r, kReferences); }
std::string to_string(Mode m) { return enum_name(m, kModes); }
std::string to_string(Scheme s) { return enum_name(s, kSchemes); }
std::string to_string(EvenStencil s) { return enum_name(s, kStencils); }

}  // namespace rte
