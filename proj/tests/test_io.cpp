#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "xcflab/error.hpp"
#include "xcflab/flow.hpp"
#include "xcflab/io.hpp"
#include "xcflab/runner.hpp"
#include "xcflab/verify.hpp"

using namespace xcf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "xcflab_test_io" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorCode config_code(const nlohmann::json& j, std::string* what = nullptr) {
  try {
    parse_run_config(j);
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.code();
  }
  FAIL("config accepted");
  return ErrorCode::IoError;
}

nlohmann::json small_grid_config() {
  return nlohmann::json::parse(R"({
    "family": {"name": "hyperbolic_halfspace", "K0": -1.0},
    "grid": {"dims": 9, "h": 0.0625, "origin": [0, 0, 1]},
    "flow": {"t_end": 0.001, "dt": 0.00025}
  })");
}

nlohmann::json frame_config() {
  return nlohmann::json::parse(R"({
    "backend": "frame",
    "family": {"name": "frame_solvable", "m0": "identity"},
    "flow": {"t_end": 0.5, "dt": 0.01}
  })");
}

}  // namespace

TEST_CASE("json output: sorted keys, round-trip reals, null for non-finite") {
  const nlohmann::json j{{"b", 0.1}, {"a", {1, 2, 3}}, {"c", std::nan("")}, {"d", {{"y", 1.0 / 3}, {"x", true}}}};
  CHECK(dump_json(j) == R"({"a":[1,2,3],"b":0.10000000000000001,"c":null,"d":{"x":true,"y":0.33333333333333331}})");
  const std::string pretty = dump_json(j, 2);
  CHECK(pretty.find("\"a\": [1,2,3]") != std::string::npos);
  CHECK(nlohmann::json::parse(pretty)["d"]["y"].get<double>() == 1.0 / 3);
}

TEST_CASE("grid snapshot round trip is exact") {
  const auto fam = std::make_shared<PerturbedHyperbolic>(-1.0, 0.05, Vec3{0.1, 0.2, 1.2}, 0.4);
  MetricGrid g = MetricGrid::from_family(fam, {5, 6, 7}, {0.1, 0.11, 0.12}, {0.0, 0.0, 1.0});
  g.time = 0.25;
  const MetricGrid back = grid_from_json(nlohmann::json::parse(dump_json(grid_to_json(g))));
  CHECK(back.dims == g.dims);
  CHECK(back.spacing == g.spacing);
  CHECK(back.time == 0.25);
  REQUIRE(back.values.size() == g.values.size());
  for (std::size_t n = 0; n < g.values.size(); ++n) CHECK(back.values[n].c == g.values[n].c);
  REQUIRE(back.family);
  CHECK(back.family->to_json() == fam->to_json());
  CHECK(back.sample({-1, 2, 3}).c == g.sample({-1, 2, 3}).c);

  MetricGrid n = g;
  n.family = std::make_shared<NormalizedBoundaryFamily>(fam, -1.0);
  const MetricGrid nb = grid_from_json(grid_to_json(n));
  CHECK(nb.family->to_json() == n.family->to_json());
  CHECK(nb.sample({-1, 0, 0}).c == n.sample({-1, 0, 0}).c);
}

TEST_CASE("malformed snapshots are config errors") {
  nlohmann::json j = grid_to_json(MetricGrid::from_family(std::make_shared<HyperbolicHalfspace>(-1.0), {5, 5, 5},
                                                          {0.1, 0.1, 0.1}, {0, 0, 1}));
  nlohmann::json bad = j;
  bad["kind"] = "frame";
  CHECK_THROWS_AS(grid_from_json(bad), Error);
  bad = j;
  bad["g"].erase(0);
  CHECK_THROWS_AS(grid_from_json(bad), Error);
  bad = j;
  bad["g"][0] = -1.0;
  try {
    grid_from_json(bad);
    FAIL("negative metric accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveMetric);
  }
  CHECK_THROWS_AS(read_json_file("/nonexistent/xcflab.json"), Error);
}

TEST_CASE("run config guards name the offending field") {
  std::string what;
  nlohmann::json j = small_grid_config();
  j["flow"]["cfl"] = 0.1;
  CHECK(config_code(j, &what) == ErrorCode::ConfigError);
  CHECK(what.find("flow.dt") != std::string::npos);

  j = small_grid_config();
  j["flow"].erase("dt");
  CHECK(config_code(j, &what) == ErrorCode::ConfigError);
  CHECK(what.find("flow.cfl") != std::string::npos);

  j = small_grid_config();
  j["grid"]["stencil"] = 4;
  config_code(j, &what);
  CHECK(what.find("grid.stencil") != std::string::npos);

  j = small_grid_config();
  j["grid"]["stencil_order"] = 3;
  config_code(j, &what);
  CHECK(what.find("grid.stencil_order") != std::string::npos);

  j = small_grid_config();
  j.erase("family");
  config_code(j, &what);
  CHECK(what.find("family") != std::string::npos);

  j = frame_config();
  j["flow"].erase("dt");
  j["flow"]["cfl"] = 0.1;
  config_code(j, &what);
  CHECK(what.find("flow.cfl") != std::string::npos);

  j = frame_config();
  j["family"]["name"] = "frame_custom";
  j["family"]["c"] = std::vector<double>(26, 0.0);
  config_code(j, &what);
  CHECK(what.find("family.c") != std::string::npos);

  j = small_grid_config();
  j["flow"]["variant"] = {{"normalized", {{"K", 1.0}}}};
  config_code(j, &what);
  CHECK(what.find("flow.K") != std::string::npos);

  j = small_grid_config();
  j["embed"] = {{"path_order", {0, 0, 2}}};
  config_code(j, &what);
  CHECK(what.find("embed.path_order") != std::string::npos);

  j = small_grid_config();
  j["outputs"] = {{"monitor_csv", "/proc/xcflab_not_writable/m.csv"}};
  try {
    execute_run(parse_run_config(j));
    FAIL("unwritable path accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("outputs.monitor_csv") != std::string::npos);
  }
}

TEST_CASE("frame run writes floor(t_end/dt)+1 rows, deterministically") {
  const fs::path dir = scratch("frame");
  nlohmann::json j = frame_config();
  j["outputs"] = {{"monitor_csv", (dir / "a.csv").string()}, {"snapshot_dir", (dir / "snap").string()}};
  j["flow"]["snapshot_cadence"] = 20;
  const RunOutcome out = execute_run(parse_run_config(j));
  CHECK(out.status_line == "completed");
  CHECK(out.rows == 51);
  const std::string csv = slurp(dir / "a.csv");
  CHECK(csv.rfind(std::string(monitor_csv_header()) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 52);
  for (const char* f : {"snapshot_000000.json", "snapshot_000020.json", "snapshot_000040.json", "snapshot_000050.json"})
    CHECK(fs::exists(dir / "snap" / f));
  CHECK_FALSE(fs::exists(dir / "snap" / "snapshot_000010.json"));

  j["outputs"]["monitor_csv"] = (dir / "b.csv").string();
  execute_run(parse_run_config(j));
  CHECK(slurp(dir / "b.csv") == csv);
}

TEST_CASE("grid run follows the scale factor and restarts from its snapshot") {
  const fs::path dir = scratch("grid");
  nlohmann::json j = small_grid_config();
  j["outputs"] = {{"monitor_csv", (dir / "m.csv").string()}, {"snapshot_dir", (dir / "snap").string()}};
  j["flow"]["snapshot_cadence"] = 2;
  const RunConfig c = parse_run_config(j);
  const RunOutcome out = execute_run(c);
  CHECK(out.status_line == "completed");
  CHECK(out.rows == 5);
  const MetricGrid last = grid_from_json(read_json_file(dir / "snap" / "snapshot_000004.json"));
  CHECK(last.time == doctest::Approx(0.001));
  const double s = std::sqrt(4 * 0.001 + 1);
  for (std::size_t n = 0; n < last.values.size(); ++n)
    CHECK(max_abs(last.values[n] - s * c.grid.values[n]) <= 1e-4 * max_abs(c.grid.values[n]));  // O(h²) at h = 1/16

  // continue from the snapshot: boundary data keeps following the family in time
  nlohmann::json k{{"family", {{"name", "snapshot"}, {"path", (dir / "snap" / "snapshot_000004.json").string()}}},
                   {"flow", {{"t_end", 0.001}, {"dt", 0.00025}}}};
  const RunConfig c2 = parse_run_config(k);
  CHECK(c2.grid.time == doctest::Approx(0.001));
  CHECK(execute_run(c2).status_line == "completed");
}

TEST_CASE("runs with an oversized dt stop with a cfl stall") {
  nlohmann::json j = small_grid_config();
  j["flow"]["dt"] = 0.01;
  j["flow"]["t_end"] = 0.05;
  const RunOutcome out = execute_run(parse_run_config(j));
  CHECK(out.status == RunStatus::CflStall);
  CHECK(out.status_line == "cfl-stall");
}

TEST_CASE("embed and curvature commands") {
  nlohmann::json j = small_grid_config();
  const nlohmann::json e = embed_command(parse_run_config(j));
  CHECK(e.at("quadric").at("deviation").get<double>() < 1e-2);
  CHECK(e.at("residuals").contains("pathResidual"));
  CHECK(e.at("F").size() == 4 * 9 * 9 * 9);
  const nlohmann::json c = curvature_command(parse_run_config(j));
  CHECK(c.at("sc").size() == 7 * 7 * 7);
  CHECK(c.at("rm").size() == 81 * 7 * 7 * 7);
  CHECK(c.at("residuals").at("cross_via_ricci").get<double>() < 1e-10);
  const nlohmann::json f = curvature_command(parse_run_config(frame_config()));
  CHECK(f.at("sc").get<double>() == doctest::Approx(-6.0));
}

TEST_CASE("verify front door") {
  const VerifyOptions opt{1.0, 7};
  const std::vector<Check> a = run_suite("algebraic", opt);
  CHECK(all_pass(a));
  const nlohmann::json r = verify_report("algebraic", opt, a);
  CHECK(r.at("pass").get<bool>());
  CHECK(r.at("checks").size() == a.size());
  CHECK(dump_json(r) == dump_json(verify_report("algebraic", opt, run_suite("algebraic", opt))));
  // a tolerance scale of 1e-30 must fail something that is not exactly zero
  CHECK_FALSE(all_pass(run_suite("algebraic", {1e-30, 7})));
  CHECK_THROWS_AS(run_suite("nope", opt), Error);
  CHECK_THROWS_AS(run_suite("algebraic", {0.0, 7}), Error);
}
