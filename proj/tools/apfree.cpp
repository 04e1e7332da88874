// apfree: construct, verify, benchmark and lemma-check 3-AP-free sets.
//
// Exit status: 0 success / AP-free, 1 verification failure, 2 configuration
// error, 3 construction failure.

#include "apfree/baselines.hpp"
#include "apfree/constructor.hpp"
#include "apfree/parallel.hpp"
#include "apfree/serialize.hpp"
#include "apfree/theory_checks.hpp"
#include "apfree/verifier.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace apfree;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConstruction = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat rat_flag(const std::string& text, const char* name) {
  try {
    return parse_rat(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--") + name + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f << bytes;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string joined_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- construct -------------------------------------------------------------

struct ConstructFlags {
  std::uint64_t n = 0;
  unsigned d = 0;  // 0: recommended
  std::string epsilon = "1/16";
  std::string variant = "U";
  std::uint64_t seed = 0;
  unsigned mu_samples = 8;
  unsigned max_tries = 32;
  std::uint64_t modulus = kDefaultModulus;
  std::string c2;
  bool unsafe_c2 = false;
  bool w3_literal = false;
  bool skip_verify = false;
  std::string out;
  std::string format = "json";
  unsigned threads = 0;
};

int cmd_construct(const ConstructFlags& f, const std::string& command) {
  ConstructionConfig cfg;
  cfg.n = f.n;
  if (f.d != 0) {
    cfg.d = f.d;
  } else {
    cfg.d = f.n >= 2 ? recommended_d(f.n, DimensionMode::kNew) : 2;
  }
  cfg.epsilon = rat_flag(f.epsilon, "epsilon");
  cfg.variant = f.variant == "T" ? BlockVariant::kTEps : BlockVariant::kUTruncation;
  cfg.seed = f.seed;
  cfg.num_mu_samples = f.mu_samples;
  cfg.max_direction_tries = f.max_tries;
  cfg.modulus = f.modulus;
  if (!f.c2.empty()) cfg.c2_override = rat_flag(f.c2, "c2");
  cfg.unsafe_c2 = f.unsafe_c2;
  cfg.w3_literal = f.w3_literal;
  cfg.skip_verify = f.skip_verify;
  cfg.threads = f.threads ? f.threads : default_threads();
  try {
    cfg.validate();
    (void)derive_params(cfg.n, cfg.d, cfg.epsilon, cfg.c2_override, cfg.unsafe_c2, cfg.w3_literal);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto t0 = std::chrono::steady_clock::now();
  ProgressionFreeSet set;
  try {
    set = construct(cfg);
  } catch (const DirectionSearchError& e) {
    std::cerr << "construction failed: " << e.what() << "\n  tries=" << e.stats().tries
              << " fewest bad orbit points=" << e.stats().best_bad_count
              << " expected bad share <= " << e.stats().expected_bad_bound << '\n';
    return kExitConstruction;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  }
  const double wall = seconds_since(t0);

  const std::string primary = f.format == "ints" ? format_ints(set) : to_json(set).dump(2) + "\n";
  const auto& prov = std::get<TorusProvenance>(set.provenance);

  RunManifest manifest;
  manifest.command = command;
  manifest.config = {
      {"n", cfg.n},
      {"d", cfg.d},
      {"epsilon", to_string(cfg.epsilon)},
      {"variant", f.variant},
      {"modulus", cfg.modulus},
      {"seed", cfg.seed},
      {"mu_samples", cfg.num_mu_samples},
      {"max_direction_tries", cfg.max_direction_tries},
      {"c2", to_string(prov.params.weights.c2)},
      {"unsafe_c2", cfg.unsafe_c2},
      {"w3_literal", cfg.w3_literal},
      {"w1_width", to_string(prov.params.weights.w1_width)},
      {"w23_width", to_string(prov.params.weights.w23_width)},
      {"delta_hat", to_string(prov.params.delta_hat)},
      {"skip_verify", cfg.skip_verify},
      {"format", f.format},
  };
  manifest.tool_version = std::string(kToolVersion);
  manifest.wall_seconds = wall;
  manifest.output_digest = sha256_hex(primary);

  std::ostream* summary = &std::cout;
  if (f.out.empty()) {
    std::cout << primary;
    summary = &std::cerr;
  } else {
    write_file(f.out, primary);
    write_file(f.out + ".manifest.json", to_json(manifest).dump(2) + "\n");
  }

  const auto ref = theoretical_bound(cfg.n, cfg.d, cfg.epsilon);
  char density[32];
  std::snprintf(density, sizeof density, "%.6g", static_cast<double>(set.elements.size()) / cfg.n);
  *summary << "size=" << set.elements.size() << " n=" << cfg.n << " d=" << cfg.d << " density=" << density
           << " reference_bound=" << ref.approx << " verified="
           << (set.verified ? (*set.verified ? "true" : "false") : "skipped") << '\n';
  if (!prov.diagnostic.empty()) *summary << "note: " << prov.diagnostic << '\n';
  if (set.elements.size() <= 1 || !prov.diagnostic.empty()) {
    *summary << "block hits for chosen mu: " << prov.block_hits << "; top buckets:";
    for (const auto& t : prov.top_buckets) {
      *summary << " " << t.count << "(mu " << t.mu_index << ")";
    }
    *summary << '\n';
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyFlags {
  std::string in;
  std::string method = "brute";
  std::size_t max_witnesses = kDefaultMaxWitnesses;
  unsigned threads = 0;
};

int cmd_verify(const VerifyFlags& f) {
  std::vector<std::uint64_t> set;
  try {
    set = parse_set(read_file(f.in));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(f.in + ": " + e.what());
  }
  const unsigned threads = f.threads ? f.threads : default_threads();

  std::optional<std::uint64_t> brute;
  std::optional<std::uint64_t> conv;
  if (f.method == "brute" || f.method == "both") {
    const APCount c = count_aps_bruteforce(set, f.max_witnesses, threads);
    brute = c.count;
    std::cout << "brute_count=" << c.count << '\n';
    for (const auto& w : c.witnesses) std::cout << w.x << ' ' << w.y << ' ' << w.z << '\n';
    if (c.capped) std::cout << "(witness list truncated)\n";
  }
  if (f.method == "conv" || f.method == "both") {
    if (!set.empty() && set.front() == 0) throw ConfigError("convolution method needs elements >= 1");
    conv = count_aps_convolution(set, set.empty() ? 1 : set.back());
    std::cout << "conv_count=" << *conv << '\n';
  }
  if (brute && conv && *brute != *conv) {
    std::cerr << "methods disagree\n";
    return kExitVerification;
  }
  const std::uint64_t count = brute ? *brute : *conv;
  std::cout << (count == 0 ? "AP-free" : "contains 3-APs") << '\n';
  return count == 0 ? kExitOk : kExitVerification;
}

// ---- bench -----------------------------------------------------------------

struct BenchFlags {
  std::vector<std::uint64_t> ns{1000, 10000, 100000};
  std::string modes = "both";
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

int cmd_bench(const BenchFlags& f) {
  const unsigned threads = f.threads ? f.threads : default_threads();
  std::cout << "n,mode,d,size,density,ref_curve,ms,verified\n";
  bool all_ok = true;
  auto row = [&](std::uint64_t n, const char* mode, auto&& run) {
    const auto t0 = std::chrono::steady_clock::now();
    unsigned d = 0;
    double ref = 0;
    std::string size = "";
    std::string density = "";
    std::string verified;
    try {
      const auto [set, dd, rr] = run();
      d = dd;
      ref = rr;
      const bool ok = is_3ap_free(set, threads);
      size = std::to_string(set.size());
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(set.size()) / n);
      density = buf;
      verified = ok ? "true" : "false";
      all_ok = all_ok && ok;
    } catch (const std::exception& e) {
      verified = "error";
      all_ok = false;
      std::cerr << "n=" << n << " mode=" << mode << ": " << e.what() << '\n';
    }
    const long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    char refbuf[32];
    std::snprintf(refbuf, sizeof refbuf, "%.6g", ref);
    std::cout << n << ',' << mode << ',' << d << ',' << size << ',' << density << ',' << refbuf << ',' << ms << ','
              << verified << '\n'
              << std::flush;
  };
  for (std::uint64_t n : f.ns) {
    if (n < 2) throw ConfigError("--n-list entries must be >= 2");
    if (f.modes == "behrend" || f.modes == "both") {
      row(n, "behrend", [&] {
        const unsigned d = classic_d(n);
        auto b = behrend_construct(n, d);
        return std::tuple{std::move(b.set.elements), d, behrend_curve(n, d)};
      });
    }
    if (f.modes == "forge" || f.modes == "both") {
      row(n, "forge", [&] {
        ConstructionConfig cfg;
        cfg.n = n;
        cfg.d = recommended_d(n, DimensionMode::kNew);
        cfg.seed = f.seed;
        cfg.threads = threads;
        auto s = construct(cfg);
        return std::tuple{std::move(s.elements), cfg.d, theoretical_bound(n, cfg.d, cfg.epsilon).approx};
      });
    }
  }
  return all_ok ? kExitOk : kExitVerification;
}

// ---- theory-check ----------------------------------------------------------

struct TheoryFlags {
  std::string suite = "all";
  unsigned grid = 64;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string epsilon = "1/16";
  std::vector<unsigned> d0s{1, 2, 3};
  std::string out;
  std::string inject_bug = "none";
  unsigned threads = 0;
};

int cmd_theory_check(const TheoryFlags& f) {
  const Rat eps = rat_flag(f.epsilon, "epsilon");
  const InjectedBug bug = f.inject_bug == "wide-u1" ? InjectedBug::kWideU1 : InjectedBug::kNone;
  SamplingOptions opts;
  opts.seed = f.seed;
  opts.threads = f.threads ? f.threads : default_threads();
  const bool all = f.suite == "all";

  std::vector<CheckReport> reports;
  try {
    if (all || f.suite == "bracket") reports.push_back(check_bracket_law(f.grid));
    if (all || f.suite == "u1") reports.push_back(check_u1_midpoint(f.grid));
    if (all || f.suite == "rounding") reports.push_back(check_one_sided_rounding(f.grid, eps, bug));
    if (all || f.suite == "quantitative") reports.push_back(check_quantitative(eps, f.trials, opts));
    if (all || f.suite == "product") {
      for (unsigned d0 : f.d0s) reports.push_back(check_product_set(eps, d0, f.trials, opts));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  nlohmann::json doc = {{"seed", f.seed}, {"epsilon", to_string(eps)}, {"grid", f.grid}, {"trials", f.trials},
                        {"reports", nlohmann::json::array()}};
  bool ok = true;
  for (const auto& r : reports) {
    doc["reports"].push_back(to_json(r));
    ok = ok && r.passed();
    std::cout << r.name << ": trials=" << r.trials << " violations=" << r.violation_count;
    for (const auto& fl : r.flags) std::cout << " [" << fl << "]";
    std::cout << '\n';
    if (!r.violations.empty()) std::cout << "  first counterexample: " << r.violations.front().input.dump() << '\n';
  }
  const std::string text = doc.dump(2) + "\n";
  if (f.out.empty()) {
    std::cerr << text;
  } else {
    write_file(f.out, text);
  }
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, verify and benchmark 3-AP-free subsets of [N]"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ConstructFlags cf;
  auto* construct_cmd = app.add_subcommand("construct", "Torus building-block construction");
  construct_cmd->add_option("--n", cf.n, "Interval length N")->required()->check(CLI::PositiveNumber);
  construct_cmd->add_option("--d", cf.d, "Even dimension D (default: recommended for N)");
  construct_cmd->add_option("--epsilon", cf.epsilon, "Block parameter as p/q")->capture_default_str();
  construct_cmd->add_option("--variant", cf.variant, "Building block: U (proved) or T (benchmark only)")
      ->check(CLI::IsMember({"U", "T"}))
      ->capture_default_str();
  construct_cmd->add_option("--seed", cf.seed, "RNG seed")->capture_default_str();
  construct_cmd->add_option("--mu-samples", cf.mu_samples, "Number of random shifts")->capture_default_str();
  construct_cmd->add_option("--max-tries", cf.max_tries, "Direction search attempts")->capture_default_str();
  construct_cmd->add_option("--q", cf.modulus, "Grid modulus Q (<= 2^62)")->capture_default_str();
  construct_cmd->add_option("--c2", cf.c2, "Weight constant c2 as p/q (default 10^10/eps^2)");
  construct_cmd->add_flag("--unsafe-c2", cf.unsafe_c2, "Allow c2 below the proven floor");
  construct_cmd->add_flag("--w3-literal", cf.w3_literal, "Use p instead of {p} in w3");
  construct_cmd->add_flag("--skip-verify", cf.skip_verify, "Skip the final brute-force check (U variant only)");
  construct_cmd->add_option("--out", cf.out, "Output file; a .manifest.json is written next to it");
  construct_cmd->add_option("--format", cf.format, "Set format")->check(CLI::IsMember({"ints", "json"}))->capture_default_str();
  construct_cmd->add_option("--threads", cf.threads, "Worker threads (default: APFREE_THREADS or all cores)");

  VerifyFlags vf;
  auto* verify_cmd = app.add_subcommand("verify", "Count 3-APs in a set file");
  verify_cmd->add_option("--in", vf.in, "Set file (ints or JSON)")->required();
  verify_cmd->add_option("--method", vf.method)->check(CLI::IsMember({"brute", "conv", "both"}))->capture_default_str();
  verify_cmd->add_option("--max-witnesses", vf.max_witnesses)->capture_default_str();
  verify_cmd->add_option("--threads", vf.threads);

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench", "CSV of achieved sizes next to reference curves");
  bench_cmd->add_option("--n-list", bf.ns, "Values of N")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--modes", bf.modes)->check(CLI::IsMember({"behrend", "forge", "both"}))->capture_default_str();
  bench_cmd->add_option("--seed", bf.seed)->capture_default_str();
  bench_cmd->add_option("--threads", bf.threads);

  TheoryFlags tf;
  auto* theory_cmd = app.add_subcommand("theory-check", "Exhaustive and sampled lemma checks");
  theory_cmd->add_option("--suite", tf.suite)
      ->check(CLI::IsMember({"bracket", "u1", "rounding", "quantitative", "product", "all"}))
      ->capture_default_str();
  theory_cmd->add_option("--grid", tf.grid, "Grid denominator for exhaustive suites")->capture_default_str();
  theory_cmd->add_option("--trials", tf.trials, "Accepted samples per sampled suite")->capture_default_str();
  theory_cmd->add_option("--seed", tf.seed)->capture_default_str();
  theory_cmd->add_option("--epsilon", tf.epsilon)->capture_default_str();
  theory_cmd->add_option("--d0", tf.d0s, "Factor counts for the product suite")->delimiter(',')->capture_default_str();
  theory_cmd->add_option("--out", tf.out, "JSON report file (default: stderr)");
  theory_cmd->add_option("--threads", tf.threads);
  theory_cmd->add_option("--inject-bug", tf.inject_bug)->check(CLI::IsMember({"none", "wide-u1"}))->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*construct_cmd) return cmd_construct(cf, joined_argv(argc, argv));
    if (*verify_cmd) return cmd_verify(vf);
    if (*bench_cmd) return cmd_bench(bf);
    if (*theory_cmd) return cmd_theory_check(tf);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConstruction;
  }
  return kExitConfig;
}
