#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string_view>

#include "subflow/bernstein.hpp"
#include "subflow/inversion.hpp"
#include "subflow/semigroup.hpp"

namespace subflow {

/// Parses a configuration document into JSON. Text starting with '{' is read
/// as JSON; anything else as the TOML subset used by the tool: [table] and
/// [a.b] headers, key = value with strings, numbers, booleans and (nested,
/// multi-line) arrays, and # comments. Throws ConfigError with a line number.
nlohmann::json parse_config(std::string_view text);

nlohmann::json load_config(const std::filesystem::path& path);

/// Reads {family, alpha, theta, a, b, tail_file}; a [spec] table is used when
/// present. tail_file is a CSV of s,nu rows resolved against base_dir.
BernsteinSpec spec_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Round-trips through spec_from_json (custom tails are embedded as arrays).
nlohmann::json spec_to_json(const BernsteinSpec& spec);

/// Reads {kind = scalar|translation|heat|markov, mu, lo, hi, n, kappa, q};
/// a [semigroup] table is used when present.
SemigroupSpec semigroup_from_json(const nlohmann::json& doc);
nlohmann::json semigroup_to_json(const SemigroupSpec& sg);

/// Optional [inversion] table: method = "talbot"|"stehfest", n_terms, n_nodes,
/// cross_check, tol.
InversionConfig inversion_from_json(const nlohmann::json& doc);
nlohmann::json inversion_to_json(const InversionConfig& cfg);

}  // namespace subflow
