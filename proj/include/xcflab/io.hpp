#pragma once

// JSON artifacts: deterministic serialization, metric snapshots, file helpers.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "xcflab/grid.hpp"

namespace xcf {

/// Keys sorted, reals as %.17g, non-finite reals as null. indent < 0: one line.
std::string dump_json(const nlohmann::json& j, int indent = -1);

/// Throws IoError / ConfigError (malformed JSON).
nlohmann::json read_json_file(const std::filesystem::path& p);
/// Creates parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& p, const std::string& text);

/// {"kind":"grid","dims","h","origin","boundary","family","time","g"}.
nlohmann::json grid_to_json(const MetricGrid& g);
/// Throws ConfigError naming the offending field, NonPositiveMetric.
MetricGrid grid_from_json(const nlohmann::json& j);

}  // namespace xcf
