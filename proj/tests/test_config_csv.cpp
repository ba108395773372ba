#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rte/config.hpp"
#include "rte/csv.hpp"
#include "rte/errors.hpp"

using namespace rte;

namespace {

const char* kMinimal =
    "[grid]\n"
    "nx = 200\n"
    "nv = 20\n"
    "[physics]\n"
    "epsilon = 1\n"
    "t_max = 0.1\n";

std::filesystem::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() /
             ("rte_" + std::string(info->test_suite_name()) + "_" + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return std::numeric_limits<std::size_t>::max();
}

std::string error_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, MinimalConfigGetsDefaults) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.geometry, Geometry::slab1d);
  EXPECT_EQ(c.quadrature, QuadratureKind::midpoint);
  EXPECT_EQ(c.scheme, Scheme::parity_cg);
  EXPECT_DOUBLE_EQ(c.tol, 1e-10);
  EXPECT_EQ(c.time_order, 1);
  EXPECT_EQ(c.mode, Mode::run);
  EXPECT_EQ(c.nx, 200);
  EXPECT_EQ(c.nv, 20);
  EXPECT_DOUBLE_EQ(c.x_min, 0.0);
  EXPECT_DOUBLE_EQ(c.x_max, 2.0);
  EXPECT_TRUE(c.uses_dx_over_3());
}

TEST(Config, DxOverThreeRule) {
  const auto c = parse_config(std::string(kMinimal) + "[solver]\ndt = dx_over_3\n");
  EXPECT_TRUE(c.uses_dx_over_3());
  EXPECT_DOUBLE_EQ(c.resolved_dt(), (2.0 / 200.0) / 3.0);
  EXPECT_DOUBLE_EQ(c.solver().dt, 1.0 / 300.0);
  const auto fixed = parse_config(std::string(kMinimal) + "[solver]\ndt = 0.25\n");
  EXPECT_FALSE(fixed.uses_dx_over_3());
  EXPECT_DOUBLE_EQ(fixed.resolved_dt(), 0.25);
}

TEST(Config, PlanarDefaults) {
  const auto c = parse_config(
      "[grid]\ngeometry = planar2d\nx_max = 1\nnx = 10\nnv = 8\n[physics]\nepsilon = 0.1\nt_max = 1\n");
  EXPECT_EQ(c.quadrature, QuadratureKind::circle);
  EXPECT_DOUBLE_EQ(c.y_min, 0.0);
  EXPECT_DOUBLE_EQ(c.y_max, 1.0);
  EXPECT_EQ(c.cells_y(), 10);
}

TEST(Config, CommentsAndWhitespace) {
  const auto c = parse_config(
      "# leading comment\n\n  [grid]  \n nx=16 # trailing\nnv =4\n[physics]\nepsilon= 0.5\nt_max=1\n"
      "[output]\nsnapshot_times = 0.25, 0.5\nsweep_nx = 20,40\n");
  EXPECT_EQ(c.nx, 16);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.5);
  EXPECT_EQ(c.snapshot_times, (std::vector<double>{0.25, 0.5}));
  EXPECT_EQ(c.sweep_nx, (std::vector<int>{20, 40}));
}

TEST(Config, MisspelledKeyNamesNearestValidKey) {
  const std::string text = "[grid]\nnx = 10\nnv = 4\n[physics]\nepsilonn = 1\nt_max = 1\n";
  EXPECT_EQ(error_line(text), 5u);
  const std::string msg = error_message(text);
  EXPECT_NE(msg.find("'epsilonn'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("did you mean 'epsilon'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 5"), std::string::npos) << msg;
}

TEST(Config, RejectionPaths) {
  EXPECT_NE(error_message("[grid]\nnx = 10\n[physics]\nepsilon = 1\nt_max = 1\n")
                .find("missing required key 'nv' in [grid]"),
            std::string::npos);
  EXPECT_EQ(error_line("[grid]\nnx = ten\n"), 2u);
  EXPECT_EQ(error_line("[grid]\nnx = 10\nnx = 12\n"), 3u);
  EXPECT_EQ(error_line("[grids]\nnx = 10\n"), 1u);
  EXPECT_EQ(error_line("nx = 10\n"), 1u);
  EXPECT_EQ(error_line("[grid]\nnx 10\n"), 2u);
  EXPECT_EQ(error_line(std::string(kMinimal) + "[solver]\nscheme = cg\n"), 8u);
  EXPECT_EQ(error_line(std::string(kMinimal) + "[solver]\nwarm_start = maybe\n"), 8u);
  // Semantic checks run after parsing.
  EXPECT_THROW(parse_config("[grid]\nnx = 10\nnv = 5\n[physics]\nepsilon = 1\nt_max = 1\n"),
               ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[physics]\nsigma = blocks2d\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[solver]\nscheme = aniso_gmres\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[output]\nmode = ap_sweep\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[output]\nsnapshot_times = 0.5\n"), ConfigError);
}

TEST(Config, EditDistance) {
  EXPECT_EQ(edit_distance("epsilonn", "epsilon"), 1u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(edit_distance("same", "same"), 0u);
}

TEST(Config, TextAndEchoRoundTrip) {
  ExperimentConfig c = parse_config(kMinimal);
  c.sigma = SigmaPreset::aniso_degree1;
  c.sigma0 = SigmaPreset::striped;
  c.scheme = Scheme::aniso_gmres;
  c.sigma_value = 0.1;
  c.dt = 1.0 / 3.0;
  c.tol = 3e-9;
  c.time_order = 2;
  c.warm_start = true;
  c.stencil = EvenStencil::wide;
  c.snapshot_times = {0.01, 0.1};
  c.epsilons = {0.1, 1e-3};
  c.sweep_nv = {10, 20};
  c.prefix = "case_a";
  c.dir = "some/dir";
  c.validate();

  const auto again = parse_config(to_config_text(c));
  EXPECT_EQ(config_echo(again), config_echo(c));
  EXPECT_EQ(again.dt, c.dt);
  EXPECT_EQ(again.sigma_value, c.sigma_value);
  const auto from_echo = config_from_echo(config_echo(c));
  EXPECT_EQ(config_echo(from_echo), config_echo(c));
  EXPECT_EQ(from_echo.snapshot_times, c.snapshot_times);
}

TEST(Config, LoadReportsMissingFile) {
  EXPECT_THROW(load_config("/nonexistent/rte/config.ini"), IoError);
  const auto dir = scratch_dir();
  std::ofstream(dir / "c.ini") << kMinimal;
  EXPECT_EQ(load_config((dir / "c.ini").string()).nx, 200);
}

TEST(Csv, EmptyRowSetIsMetadataAndColumnLine) {
  CsvTable t;
  t.metadata = {{"version", "1"}, {"grid.nx", "20"}};
  t.columns = {"x", "rho"};
  EXPECT_EQ(format_csv(t), "# version=1\n# grid.nx=20\nx,rho\n");
  const auto back = parse_csv(format_csv(t));
  EXPECT_TRUE(back.rows.empty());
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.metadata, t.metadata);
}

TEST(Csv, ValuesRoundTripExactly) {
  CsvTable t;
  t.columns = {"v"};
  const double values[] = {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 4.9e-324,
                           std::numeric_limits<double>::max(), 0.0};
  for (double v : values) t.rows.push_back({v});
  const auto path = (scratch_dir() / "v.csv").string();
  write_csv(path, t);
  const auto back = read_csv(path);
  ASSERT_EQ(back.rows.size(), std::size(values));
  for (std::size_t i = 0; i < std::size(values); ++i) EXPECT_EQ(back.rows[i][0], values[i]);
  EXPECT_EQ(format_csv(back), format_csv(t));
}

TEST(Csv, MetadataValuesMayContainEquals) {
  CsvTable t;
  t.metadata = {{"note", "a=b"}};
  t.columns = {"x"};
  EXPECT_EQ(parse_csv(format_csv(t)).meta("note"), "a=b");
}

TEST(Csv, RejectsMalformedTables) {
  CsvTable ragged;
  ragged.columns = {"a", "b"};
  ragged.rows = {{1.0}};
  EXPECT_THROW(format_csv(ragged), InvalidArgumentError);
  CsvTable bad_key;
  bad_key.metadata = {{"a=b", "c"}};
  bad_key.columns = {"x"};
  EXPECT_THROW(format_csv(bad_key), InvalidArgumentError);
  EXPECT_THROW(parse_csv("x,y\n1,2\n3\n"), InvalidArgumentError);
  EXPECT_THROW(parse_csv("x\nabc\n"), InvalidArgumentError);
  EXPECT_THROW(parse_csv("# only=metadata\n"), InvalidArgumentError);
  EXPECT_THROW(parse_csv("x\n1\n").column("y"), InvalidArgumentError);
}

TEST(Csv, IoFailures) {
  CsvTable t;
  t.columns = {"x"};
  EXPECT_THROW(write_csv("/nonexistent/rte/dir/out.csv", t), IoError);
  EXPECT_THROW(read_csv("/nonexistent/rte/in.csv"), IoError);
}
