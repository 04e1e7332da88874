#include "apfree/serialize.hpp"

#include "apfree/verifier.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace apfree {

namespace {

nlohmann::json bucket_json(const BucketKey& k) { return {{"r1", to_string(k.r1)}, {"r2", to_string(k.r2)}}; }

nlohmann::json provenance_json(const TorusProvenance& p) {
  nlohmann::json top = nlohmann::json::array();
  for (const auto& t : p.top_buckets) {
    top.push_back({{"bucket", bucket_json(t.key)}, {"count", t.count}, {"mu_index", t.mu_index}});
  }
  return {
      {"kind", "torus"},
      {"block", p.block.variant == BlockVariant::kUTruncation ? "U" : "T"},
      {"modulus", p.modulus},
      {"theta0", to_json(p.theta0)},
      {"mu", to_json(p.mu)},
      {"mu_index", p.mu_index},
      {"bucket", bucket_json(p.bucket)},
      {"block_hits", p.block_hits},
      {"params",
       {{"d0", p.params.d0},
        {"delta_hat", to_string(p.params.delta_hat)},
        {"c2", to_string(p.params.weights.c2)},
        {"w1_width", to_string(p.params.weights.w1_width)},
        {"w23_width", to_string(p.params.weights.w23_width)},
        {"w3_literal", p.params.weights.w3_literal}}},
      {"direction_tries", p.direction.tries},
      {"top_buckets", top},
      {"diagnostic", p.diagnostic},
  };
}

nlohmann::json provenance_json(const BehrendProvenance& p) {
  return {{"kind", "behrend"},      {"d", p.d},         {"base_q", p.base_q}, {"radius", p.radius},
          {"distinct_norms", p.distinct_norms}, {"vectors", p.vectors}};
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace

std::string format_ints(const ProgressionFreeSet& set) {
  std::string out;
  for (auto v : set.elements) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const TorusVec& v) {
  return {{"modulus", v.modulus()}, {"numerators", std::vector<std::uint64_t>(v.numerators().begin(), v.numerators().end())}};
}

nlohmann::json to_json(const ProgressionFreeSet& set) {
  nlohmann::json j;
  j["n"] = set.n;
  j["d"] = nullptr;
  j["epsilon"] = nullptr;
  j["seed"] = nullptr;
  j["elements"] = set.elements;
  j["verified"] = set.verified ? nlohmann::json(*set.verified) : nlohmann::json(nullptr);
  if (const auto* t = std::get_if<TorusProvenance>(&set.provenance)) {
    j["d"] = t->d;
    j["epsilon"] = to_string(t->block.epsilon);
    j["seed"] = t->seed;
    j["provenance"] = provenance_json(*t);
  } else if (const auto* b = std::get_if<BehrendProvenance>(&set.provenance)) {
    j["d"] = b->d;
    j["provenance"] = provenance_json(*b);
  } else {
    j["provenance"] = nullptr;
  }
  return j;
}

std::vector<std::uint64_t> parse_set(std::string_view text) {
  std::vector<std::uint64_t> out;
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
      out = j.at("elements").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("malformed set JSON: ") + e.what());
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      const std::string_view line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
      if (!line.empty() && line.front() != '#') out.push_back(parse_u64(line));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw std::invalid_argument("set contains duplicates");
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config", m.config},
          {"tool_version", m.tool_version},
          {"wall_seconds", m.wall_seconds},
          {"output_digest", m.output_digest}};
}

}  // namespace apfree
