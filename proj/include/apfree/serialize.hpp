#pragma once

// Set file formats.
//
//   ints: one decimal integer per line, ascending, trailing newline.
//   json: {"n", "d", "epsilon", "seed", "elements", "provenance"}; d,
//         epsilon and seed are null for sets without torus provenance.
//
// Readers accept either format (JSON is recognised by a leading '{').

#include "apfree/progression_free_set.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace apfree {

std::string format_ints(const ProgressionFreeSet& set);
nlohmann::json to_json(const ProgressionFreeSet& set);
nlohmann::json to_json(const TorusVec& v);

/// Parses either format into a strictly increasing list. Blank lines and
/// lines starting with '#' are skipped in the ints format. Throws
/// std::invalid_argument on malformed input or duplicates.
std::vector<std::uint64_t> parse_set(std::string_view text);

/// Hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string tool_version;
  double wall_seconds = 0;
  std::string output_digest;
};

nlohmann::json to_json(const RunManifest& m);

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace apfree
