#include "xcflab/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xcflab/error.hpp"
#include "xcflab/flow.hpp"
#include "xcflab/monitors.hpp"

namespace xcf {

namespace {

void write(std::ostringstream& os, const nlohmann::json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << nlohmann::json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        write(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const auto& v) { return v.is_primitive(); });
      os << '[';
      for (std::size_t n = 0; n < j.size(); ++n) {
        if (n) os << ',';
        if (!flat) newline(depth + 1);
        write(os, j[n], indent, depth + 1);
      }
      if (!flat) newline(depth);
      os << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_real(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

Vec3 vec3_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
    throw Error(ErrorCode::ConfigError, std::string("snapshot.") + key + " must be an array of 3 numbers");
  Vec3 v;
  for (int a = 0; a < 3; ++a) v[a] = j.at(key)[a].get<double>();
  return v;
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

nlohmann::json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, p.string() + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + p.string());
}

nlohmann::json grid_to_json(const MetricGrid& g) {
  std::vector<double> flat;
  flat.reserve(6 * g.values.size());
  for (const SymMat3& v : g.values) flat.insert(flat.end(), v.c.begin(), v.c.end());
  return {{"kind", "grid"},
          {"dims", g.dims},
          {"h", g.spacing},
          {"origin", g.origin},
          {"boundary", g.boundary == BoundaryMode::DirichletAnalytic ? "dirichlet-analytic" : "periodic"},
          {"family", g.family ? g.family->to_json() : nlohmann::json()},
          {"time", g.time},
          {"g", flat}};
}

MetricGrid grid_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("kind", "") != "grid")
    throw Error(ErrorCode::ConfigError, "snapshot.kind must be \"grid\"");
  MetricGrid g;
  if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").size() != 3)
    throw Error(ErrorCode::ConfigError, "snapshot.dims must be an array of 3 integers");
  for (int a = 0; a < 3; ++a) g.dims[a] = j.at("dims")[a].get<int>();
  g.spacing = vec3_field(j, "h");
  g.origin = vec3_field(j, "origin");
  const std::string b = j.value("boundary", "dirichlet-analytic");
  if (b == "dirichlet-analytic")
    g.boundary = BoundaryMode::DirichletAnalytic;
  else if (b == "periodic" || b == "periodic-synthetic")
    g.boundary = BoundaryMode::PeriodicSynthetic;
  else
    throw Error(ErrorCode::ConfigError, "snapshot.boundary must be \"dirichlet-analytic\" or \"periodic\"");
  g.time = j.value("time", 0.0);
  if (j.contains("family") && !j.at("family").is_null()) {
    const nlohmann::json& f = j.at("family");
    if (f.value("name", "") == "normalized_boundary") {
      if (!f.contains("K") || !f.contains("base"))
        throw Error(ErrorCode::ConfigError, "snapshot.family needs \"K\" and \"base\"");
      g.family = std::make_shared<NormalizedBoundaryFamily>(family_from_json(f.at("base")), f.at("K").get<double>());
    } else {
      g.family = family_from_json(f);
    }
  }
  if (!j.contains("g") || !j.at("g").is_array())
    throw Error(ErrorCode::ConfigError, "snapshot.g must be an array");
  const nlohmann::json& flat = j.at("g");
  if (flat.size() % 6 != 0) throw Error(ErrorCode::ConfigError, "snapshot.g length must be a multiple of 6");
  g.values.resize(flat.size() / 6);
  for (std::size_t n = 0; n < g.values.size(); ++n)
    for (int s = 0; s < 6; ++s) g.values[n][s] = flat[6 * n + s].get<double>();
  g.validate();
  return g;
}

}  // namespace xcf
