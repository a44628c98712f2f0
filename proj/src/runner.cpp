#include "xcflab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "xcflab/curvature.hpp"
#include "xcflab/error.hpp"
#include "xcflab/io.hpp"
#include "xcflab/minkowski.hpp"
#include "xcflab/monitors.hpp"

namespace xcf {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, field + ": " + what);
}

void allow_keys(const nlohmann::json& j, const std::string& where, std::set<std::string> keys) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) bad(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

const nlohmann::json& object_at(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_object()) bad(where, "must be an object");
  return j.at(key);
}

double number(const nlohmann::json& j, const std::string& key, const std::string& field) {
  if (!j.contains(key) || !j.at(key).is_number()) bad(field, "must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) bad(field, "must be finite");
  return v;
}

Vec3 triple(const nlohmann::json& v, const std::string& field) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x, x};
  }
  if (!v.is_array() || v.size() != 3) bad(field, "must be a number or an array of 3 numbers");
  Vec3 r;
  for (int a = 0; a < 3; ++a) {
    if (!v[a].is_number()) bad(field, "must hold numbers");
    r[a] = v[a].get<double>();
  }
  return r;
}

SymMat3 sym_matrix(const nlohmann::json& v, const std::string& field) {
  if (v.is_string() && v.get<std::string>() == "identity") return SymMat3::identity();
  SymMat3 m;
  if (v.is_array() && v.size() == 6) {
    for (int s = 0; s < 6; ++s) {
      if (!v[s].is_number()) bad(field, "must hold numbers");
      m[s] = v[s].get<double>();
    }
    return m;
  }
  if (v.is_array() && v.size() == 3) {
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_array() || v[i].size() != 3) bad(field, "3x3 form needs three rows of three");
      for (int j = 0; j < 3; ++j)
        if (j >= i) m(i, j) = v[i][j].get<double>();
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j)
        if (v[i][j].get<double>() != m(j, i)) bad(field, "must be symmetric");
    return m;
  }
  bad(field, "must be \"identity\", 6 packed reals or a symmetric 3x3 array");
}

std::array<double, 2> ad_pair(const nlohmann::json& f) {
  if (!f.contains("a")) return {1.0, 1.0};
  const nlohmann::json& a = f.at("a");
  if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
    bad("family.a", "must be an array of 2 numbers");
  return {a[0].get<double>(), a[1].get<double>()};
}

FrameMetric frame_family(const nlohmann::json& f) {
  const std::string name = f.value("name", "");
  if (name == "frame_solvable") {
    allow_keys(f, "family", {"name", "m0", "a"});
    if (!f.contains("m0")) bad("family.m0", "missing");
    const auto a = ad_pair(f);
    return solvable_frame(a[0], a[1], sym_matrix(f.at("m0"), "family.m0"));
  }
  if (name == "frame_custom") {
    allow_keys(f, "family", {"name", "c", "m0"});
    if (!f.contains("c") || !f.at("c").is_array() || f.at("c").size() != 27)
      bad("family.c", "must hold 27 structure constants");
    if (!f.contains("m0")) bad("family.m0", "missing");
    FrameMetric fm;
    for (int n = 0; n < 27; ++n) fm.c[n] = f.at("c")[n].get<double>();
    fm.m = sym_matrix(f.at("m0"), "family.m0");
    validate(fm);
    return fm;
  }
  if (name == "snapshot") {
    if (!f.contains("path") || !f.at("path").is_string()) bad("family.path", "must be a string");
    return frame_from_json(read_json_file(f.at("path").get<std::string>()));
  }
  bad("family.name", "the frame backend takes frame_solvable, frame_custom or snapshot");
}

FamilyPtr grid_family(const nlohmann::json& f) {
  const std::string name = f.value("name", "");
  if (name == "frame_solvable") {
    allow_keys(f, "family", {"name", "m0", "a"});
    if (!f.contains("m0")) bad("family.m0", "missing");
    const auto a = ad_pair(f);
    return std::make_shared<FrameChartFamily>(a[0], a[1], sym_matrix(f.at("m0"), "family.m0"));
  }
  if (name == "frame_custom") bad("family.name", "frame_custom needs the frame backend");
  return family_from_json(f);
}

MetricGrid build_grid(const nlohmann::json& j, int& order) {
  const nlohmann::json& f = object_at(j, "family", "family");
  if (f.value("name", "") == "snapshot") {
    allow_keys(f, "family", {"name", "path"});
    if (!f.contains("path") || !f.at("path").is_string()) bad("family.path", "must be a string");
    MetricGrid g = grid_from_json(read_json_file(f.at("path").get<std::string>()));
    if (j.contains("grid")) {
      const nlohmann::json& gp = j.at("grid");
      allow_keys(gp, "grid", {"stencil_order"});
      if (gp.contains("stencil_order")) order = gp.at("stencil_order").get<int>();
    }
    return g;
  }
  const nlohmann::json& gp = object_at(j, "grid", "grid");
  allow_keys(gp, "grid", {"dims", "h", "origin", "stencil_order", "boundary"});
  if (!gp.contains("dims")) bad("grid.dims", "missing");
  const nlohmann::json& d = gp.at("dims");
  Index3 dims;
  if (d.is_number_integer()) {
    dims = {d.get<int>(), d.get<int>(), d.get<int>()};
  } else {
    if (!d.is_array() || d.size() != 3) bad("grid.dims", "must be an integer or 3 integers");
    for (int a = 0; a < 3; ++a) {
      if (!d[a].is_number_integer()) bad("grid.dims", "must hold integers");
      dims[a] = d[a].get<int>();
    }
  }
  for (int a = 0; a < 3; ++a)
    if (dims[a] < 5) bad("grid.dims", "need at least 5 nodes per axis");
  if (!gp.contains("h")) bad("grid.h", "missing");
  const Vec3 h = triple(gp.at("h"), "grid.h");
  for (double v : h)
    if (!(v > 0.0)) bad("grid.h", "must be positive");
  const Vec3 origin = gp.contains("origin") ? triple(gp.at("origin"), "grid.origin") : Vec3{0, 0, 0};
  if (gp.contains("stencil_order")) {
    if (!gp.at("stencil_order").is_number_integer()) bad("grid.stencil_order", "must be 2 or 4");
    order = gp.at("stencil_order").get<int>();
  }
  BoundaryMode mode = BoundaryMode::DirichletAnalytic;
  const std::string b = gp.value("boundary", "dirichlet-analytic");
  if (b == "periodic" || b == "periodic-synthetic")
    mode = BoundaryMode::PeriodicSynthetic;
  else if (b != "dirichlet-analytic")
    bad("grid.boundary", "must be \"dirichlet-analytic\" or \"periodic\"");
  return MetricGrid::from_family(grid_family(f), dims, h, origin, mode);
}

std::string path_field(const nlohmann::json& o, const char* key) {
  if (!o.contains(key)) return {};
  if (!o.at(key).is_string() || o.at(key).get<std::string>().empty())
    bad(std::string("outputs.") + key, "must be a non-empty string");
  return o.at(key).get<std::string>();
}

void check_writable_dir(const std::filesystem::path& dir, const std::string& field) {
  std::error_code ec;
  if (!dir.empty()) std::filesystem::create_directories(dir, ec);
  if (ec || (!dir.empty() && !std::filesystem::is_directory(dir))) bad(field, "cannot create " + dir.string());
  const std::filesystem::path probe = (dir.empty() ? std::filesystem::path(".") : dir) / ".xcflab_probe";
  if (std::FILE* fp = std::fopen(probe.string().c_str(), "w")) {
    std::fclose(fp);
    std::filesystem::remove(probe, ec);
  } else {
    bad(field, dir.string() + " is not writable");
  }
}

std::string status_line(RunStatus s, double t) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::EinDegenerate: return "ein-degenerate(t=" + format_real(t) + ")";
    case RunStatus::CflStall: return "cfl-stall";
  }
  return "unknown";
}

std::string csv(const std::vector<MonitorRow>& rows) {
  std::string out = monitor_csv_header();
  out += '\n';
  for (const MonitorRow& r : rows) {
    out += monitor_csv_line(r);
    out += '\n';
  }
  return out;
}

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.json", step);
  return buf;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) bad("config", "must be a JSON object");
  allow_keys(j, "", {"backend", "family", "grid", "flow", "outputs", "seed", "embed"});
  RunConfig c;
  const std::string backend = j.value("backend", "grid");
  if (backend == "grid")
    c.backend = Backend::Grid;
  else if (backend == "frame")
    c.backend = Backend::Frame;
  else
    bad("backend", "must be \"grid\" or \"frame\"");

  if (!j.contains("family") || !j.at("family").is_object()) bad("family", "exactly one family object is required");
  if (!j.at("family").contains("name") || !j.at("family").at("name").is_string())
    bad("family.name", "must be a string");

  int order = 2;
  if (c.backend == Backend::Grid) {
    c.grid = build_grid(j, order);
  } else {
    if (j.contains("grid")) bad("grid", "not used by the frame backend");
    c.frame = frame_family(j.at("family"));
  }
  if (order != 2 && order != 4) bad("grid.stencil_order", "must be 2 or 4");
  c.flow.stencil_order = order;

  const nlohmann::json& fl = object_at(j, "flow", "flow");
  allow_keys(fl, "flow", {"variant", "K", "t_end", "dt", "cfl", "snapshot_cadence"});
  nlohmann::json variant = fl.value("variant", nlohmann::json("raw"));
  std::string vname;
  if (variant.is_string()) {
    vname = variant.get<std::string>();
  } else if (variant.is_object() && variant.size() == 1 && variant.begin().value().is_object()) {
    vname = variant.begin().key();
    if (variant.begin().value().contains("K")) c.flow.K = number(variant.begin().value(), "K", "flow.variant.K");
  } else {
    bad("flow.variant", "must be \"raw\", \"deturck\", \"normalized\" or {\"normalized\":{\"K\":…}}");
  }
  if (fl.contains("K")) c.flow.K = number(fl, "K", "flow.K");
  if (vname == "raw")
    c.flow.variant = FlowVariant::Raw;
  else if (vname == "deturck")
    c.flow.variant = FlowVariant::DeTurck;
  else if (vname == "normalized")
    c.flow.variant = FlowVariant::Normalized;
  else
    bad("flow.variant", "unknown variant \"" + vname + "\"");
  if (c.flow.variant == FlowVariant::Normalized && !(c.flow.K < 0.0)) bad("flow.K", "must be negative");
  if (c.backend == Backend::Frame && c.flow.variant == FlowVariant::DeTurck)
    bad("flow.variant", "the frame backend has no DeTurck variant");

  c.t_end = number(fl, "t_end", "flow.t_end");
  if (!(c.t_end >= 0.0)) bad("flow.t_end", "must be non-negative");
  const bool has_dt = fl.contains("dt"), has_cfl = fl.contains("cfl");
  if (has_dt == has_cfl) bad(has_dt ? "flow.dt" : "flow.cfl", "give exactly one of flow.dt and flow.cfl");
  if (has_dt) {
    c.dt = number(fl, "dt", "flow.dt");
    if (!(*c.dt > 0.0)) bad("flow.dt", "must be positive");
  } else {
    if (c.backend == Backend::Frame) bad("flow.cfl", "the frame backend takes flow.dt");
    c.cfl = number(fl, "cfl", "flow.cfl");
    if (!(*c.cfl > 0.0)) bad("flow.cfl", "must be positive");
    c.flow.cfl = *c.cfl;
  }
  if (fl.contains("snapshot_cadence")) {
    if (!fl.at("snapshot_cadence").is_number_integer() || fl.at("snapshot_cadence").get<long>() < 0)
      bad("flow.snapshot_cadence", "must be a non-negative integer");
    c.snapshot_cadence = fl.at("snapshot_cadence").get<long>();
  }

  if (j.contains("outputs")) {
    const nlohmann::json& o = j.at("outputs");
    if (!o.is_object()) bad("outputs", "must be an object");
    allow_keys(o, "outputs", {"monitor_csv", "snapshot_dir"});
    c.monitor_csv = path_field(o, "monitor_csv");
    c.snapshot_dir = path_field(o, "snapshot_dir");
  }
  if (j.contains("embed")) {
    const nlohmann::json& e = j.at("embed");
    if (!e.is_object()) bad("embed", "must be an object");
    allow_keys(e, "embed", {"path_order"});
    if (e.contains("path_order")) {
      const nlohmann::json& p = e.at("path_order");
      if (!p.is_array() || p.size() != 3) bad("embed.path_order", "must be a permutation of 0,1,2");
      for (int a = 0; a < 3; ++a) c.path_order[a] = p[a].get<int>();
      std::array<int, 3> s = c.path_order;
      std::sort(s.begin(), s.end());
      if (s != std::array<int, 3>{0, 1, 2}) bad("embed.path_order", "must be a permutation of 0,1,2");
    }
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
      bad("seed", "must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_json_file(path)); }

RunOutcome execute_run(const RunConfig& c) {
  if (!c.monitor_csv.empty())
    check_writable_dir(std::filesystem::path(c.monitor_csv).parent_path(), "outputs.monitor_csv");
  if (!c.snapshot_dir.empty()) check_writable_dir(c.snapshot_dir, "outputs.snapshot_dir");
  const std::filesystem::path snap_dir(c.snapshot_dir);

  RunOutcome out;
  std::vector<MonitorRow> rows;
  if (c.backend == Backend::Frame) {
    FrameFlow ff;
    ff.variant = c.flow.variant == FlowVariant::Normalized ? FrameVariant::Normalized : FrameVariant::Raw;
    ff.K = c.flow.K;
    const OdeRun run = xcf_ode_run(c.frame, c.t_end, *c.dt, ff);
    rows = run.monitors;
    out.status = run.status;
    out.stop_time = run.stop_time;
    if (!c.snapshot_dir.empty()) {
      const long last = static_cast<long>(run.states.size()) - 1;
      for (long n = 0; n <= last; ++n)
        if ((c.snapshot_cadence > 0 && n % c.snapshot_cadence == 0) || n == last) {
          nlohmann::json s = frame_to_json(run.states[n]);
          s["time"] = run.times[n];
          write_text_file(snap_dir / snapshot_name(n), dump_json(s) + "\n");
        }
    }
  } else {
    GridRunOptions opt;
    opt.t_end = c.t_end;
    opt.dt = c.dt;
    opt.cfl = c.cfl;
    opt.compute_monitors = !c.monitor_csv.empty();
    opt.snapshot_cadence = c.snapshot_dir.empty() ? 0 : c.snapshot_cadence;
    if (!c.snapshot_dir.empty())
      opt.on_snapshot = [&](const FlowState& s) {
        write_text_file(snap_dir / snapshot_name(s.step), dump_json(grid_to_json(s.metric)) + "\n");
      };
    const GridRun run = run_grid_flow(c.grid, c.flow, opt);
    rows = run.rows;
    out.status = run.status;
    out.stop_time = run.stop_time;
  }
  if (!c.monitor_csv.empty()) write_text_file(c.monitor_csv, csv(rows));
  out.rows = static_cast<long>(rows.size());
  out.status_line = status_line(out.status, out.stop_time);
  return out;
}

nlohmann::json embed_command(const RunConfig& c) {
  if (c.backend != Backend::Grid) bad("backend", "embedding needs the grid backend");
  const EmbeddingState s = embed(c.grid, c.flow.stencil_order, c.path_order);
  nlohmann::json j = embedding_to_json(s);
  const QuadricFit q = quadric_fit(s);
  j["quadric"] = {{"center", q.center}, {"mean", q.mean}, {"deviation", q.deviation}};
  return j;
}

nlohmann::json curvature_command(const RunConfig& c) {
  if (c.backend != Backend::Grid) {
    const CurvaturePoint p = frame_curvature(c.frame);
    return {{"kind", "frame_curvature"},
            {"ric", p.ric.c},
            {"sc", p.sc},
            {"ein", p.ein.c},
            {"lambda", p.lambda},
            {"adjEin", p.adj_ein.c},
            {"detE", p.det_e},
            {"traceCross", p.trace_cross},
            {"ein_spd", p.ein_spd}};
  }
  const CurvaturePack pack = curvature_pack(c.grid, c.flow.stencil_order);
  const IndexBox box = pack.box();
  std::vector<double> gamma, rm, ric, sc, ein, lambda, adj, det, V, ob, tr;
  double cross = 0.0;
  for (std::size_t n = 0; n < pack.points.size(); ++n) {
    const CurvaturePoint& p = pack.points[n];
    gamma.insert(gamma.end(), p.gamma.begin(), p.gamma.end());
    rm.insert(rm.end(), p.rm.begin(), p.rm.end());
    ric.insert(ric.end(), p.ric.c.begin(), p.ric.c.end());
    sc.push_back(p.sc);
    ein.insert(ein.end(), p.ein.c.begin(), p.ein.c.end());
    lambda.insert(lambda.end(), p.lambda.begin(), p.lambda.end());
    adj.insert(adj.end(), p.adj_ein.c.begin(), p.adj_ein.c.end());
    det.push_back(p.det_e);
    V.insert(V.end(), p.V.c.begin(), p.V.c.end());
    ob.insert(ob.end(), p.ob.c.begin(), p.ob.c.end());
    tr.push_back(p.trace_cross);
    cross = std::max(cross, max_abs(cross_via_ricci_e(p) - p.adj_ein) / std::max(1e-300, max_abs(p.adj_ein)));
  }
  return {{"kind", "curvature"},
          {"stencil_order", c.flow.stencil_order},
          {"box", {{"lo", box.lo}, {"hi", box.hi}}},
          {"gamma", gamma},
          {"rm", rm},
          {"ric", ric},
          {"sc", sc},
          {"ein", ein},
          {"lambda", lambda},
          {"adjEin", adj},
          {"detE", det},
          {"V", V},
          {"Ob", ob},
          {"traceCross", tr},
          {"residuals",
           {{"ricci_decomposition", ricci_decomposition_residual(pack)}, {"cross_via_ricci", cross}}}};
}

}  // namespace xcf
