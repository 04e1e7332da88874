#include "apfree/theory_checks.hpp"

#include "apfree/building_block.hpp"
#include "apfree/parallel.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

namespace apfree {

namespace {

const Rat kHalf(1, 2);

constexpr std::uint64_t kTrialsPerStream = 1 << 14;

Rat sq(const Rat& v) { return v * v; }

Rat abs_rat(const Rat& v) { return v < 0 ? Rat(-v) : v; }

bool in_U1_with(const Rat& a, const Rat& b, InjectedBug bug) {
  if (bug == InjectedBug::kWideU1) return ((a < kHalf) != (b < kHalf)) && a + b < 1;
  return in_U1(a, b);
}

bool in_U_with(const Rat& a, const Rat& b, const Rat& eps, InjectedBug bug) {
  return in_U1_with(a, b, bug) || in_U2(a, b, eps);
}

std::string bug_name(InjectedBug bug) { return bug == InjectedBug::kWideU1 ? "wide_u1" : "none"; }

InjectedBug bug_from_name(const std::string& s) {
  if (s == "wide_u1") return InjectedBug::kWideU1;
  if (s == "none") return InjectedBug::kNone;
  throw std::invalid_argument("unknown injected bug '" + s + "'");
}

std::vector<std::uint64_t> nums_of(const TorusVec& v) { return {v.numerators().begin(), v.numerators().end()}; }

// One accepted single-factor AP in the block: (theta, alpha) as numerator pairs.
struct FactorSample {
  std::array<std::uint64_t, 2> theta;
  std::array<std::uint64_t, 2> alpha;
};

class FactorSampler {
 public:
  FactorSampler(const GridBlock& block, std::uint64_t q, const Rat& eps, double targeted_fraction)
      : block_(block), q_(q), targeted_(targeted_fraction) {
    // Window for alpha1 + alpha2 around 0: eps/1000 of the circle.
    const BigInt w = floor_of(Rat(from_u64(q) * eps / 1000));
    window_ = std::max<std::uint64_t>(1, to_u64(w));
  }

  FactorSample draw(std::mt19937_64& rng, std::uint64_t& attempts) const {
    std::uniform_int_distribution<std::uint64_t> coord(0, q_ - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> offset(0, 2 * window_);
    const bool targeted = unit(rng) < targeted_;
    for (;;) {
      ++attempts;
      FactorSample s;
      s.theta = {coord(rng), coord(rng)};
      s.alpha[0] = coord(rng);
      if (targeted) {
        // alpha2 = -alpha1 + t (mod Q), |t| <= window
        const unsigned __int128 t = offset(rng);
        const unsigned __int128 v = 2 * static_cast<unsigned __int128>(q_) - s.alpha[0] + t - window_;
        s.alpha[1] = static_cast<std::uint64_t>(v % q_);
      } else {
        s.alpha[1] = coord(rng);
      }
      if (accepted(s)) return s;
    }
  }

 private:
  bool accepted(const FactorSample& s) const {
    std::uint64_t a = s.theta[0];
    std::uint64_t b = s.theta[1];
    for (int k = 0; k < 3; ++k) {
      if (!block_.contains_pair(a, b)) return false;
      a = add(a, s.alpha[0]);
      b = add(b, s.alpha[1]);
    }
    return true;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }

  const GridBlock& block_;
  std::uint64_t q_;
  double targeted_;
  std::uint64_t window_ = 1;
};

// Runs `trials` instances split into fixed-size seeded streams, so the
// result does not depend on the thread count.
template <typename Body>
CheckReport run_streams(const std::string& name, std::uint64_t trials, const SamplingOptions& options, Body&& body) {
  const std::uint64_t streams = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
  std::vector<CheckReport> parts(streams);
  parallel_chunks(options.threads, streams, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
      std::mt19937_64 rng(seq);
      const std::uint64_t count = std::min<std::uint64_t>(kTrialsPerStream, trials - s * kTrialsPerStream);
      parts[s].name = name;
      for (std::uint64_t t = 0; t < count; ++t) body(rng, parts[s]);
    }
  });
  CheckReport out;
  out.name = name;
  for (auto& p : parts) out.merge(std::move(p));
  return out;
}

void flag_coverage(CheckReport& r, const std::string& a, const std::string& b) {
  if (r.trials == 0) return;
  for (const auto& key : {a, b}) {
    const double freq = static_cast<double>(r.stats[key]) / static_cast<double>(r.trials);
    if (!(freq > kMinBranchFrequency)) r.flags.push_back("insufficient_branch_coverage:" + key);
  }
}

}  // namespace

void CheckReport::add_violation(Violation v) {
  ++violation_count;
  if (violations.size() < kMaxRecordedViolations) violations.push_back(std::move(v));
}

void CheckReport::merge(CheckReport&& other) {
  trials += other.trials;
  attempts += other.attempts;
  violation_count += other.violation_count;
  for (auto& v : other.violations) {
    if (violations.size() < kMaxRecordedViolations) violations.push_back(std::move(v));
  }
  for (const auto& [k, v] : other.stats) stats[k] += v;
  for (auto& f : other.flags) flags.push_back(std::move(f));
}

Rat bracket_closed(const Rat& x) {
  if (x < 0 || x > 1) throw std::out_of_range("bracket_closed needs x in [0,1]");
  return x < kHalf ? x : Rat(x - kHalf);
}

std::optional<std::string> bracket_law_violation(const Rat& x, const Rat& z) {
  const Rat y = (x + z) / 2;
  const Rat lhs = sq(1 - bracket_closed(x)) + sq(1 - bracket_closed(z)) - 2 * sq(1 - bracket_closed(y));
  const Rat rhs = 2 * sq(Rat((z - x) / 2));
  if (!(lhs < rhs)) return std::nullopt;
  const Rat lo = std::min(x, z);
  if (lo < kHalf && kHalf <= y) return std::nullopt;
  return "premise holds (" + to_string(lhs) + " < " + to_string(rhs) + ") but not min(x,z) < 1/2 <= y";
}

std::optional<std::string> u1_midpoint_violation(const Rat& x1, const Rat& x2, const Rat& z1, const Rat& z2) {
  if (!in_U1(x1, x2) || !in_U1(z1, z2)) return std::nullopt;
  const Rat y1 = (x1 + z1) / 2;
  const Rat lhs = sq(1 - frac_bracket(x1)) + sq(1 - frac_bracket(z1)) - 2 * sq(1 - frac_bracket(y1));
  const Rat rhs = 2 * sq(Rat((z1 - x1) / 2));
  if (lhs >= rhs) return std::nullopt;
  return "second difference " + to_string(lhs) + " < " + to_string(rhs);
}

std::optional<std::string> one_sided_rounding_violation(const Rat& x1, const Rat& x2, const Rat& z1, const Rat& z2,
                                                        const Rat& eps, InjectedBug bug) {
  if (!in_U_with(x1, x2, eps, bug) || !in_U_with(z1, z2, eps, bug)) return std::nullopt;
  const Rat y1 = (x1 + z1) / 2;
  const Rat y2 = (x2 + z2) / 2;
  static const std::array<std::pair<Rat, Rat>, 3> kShifts{
      std::pair{Rat(1, 2), Rat(1, 2)}, std::pair{Rat(1, 2), Rat(0)}, std::pair{Rat(0), Rat(1, 2)}};
  for (const auto& [s1, s2] : kShifts) {
    const Rat u1 = y1 - s1;
    const Rat u2 = y2 - s2;
    if (u1 < 0 || u2 < 0) continue;
    if (in_U_with(u1, u2, eps, bug)) {
      return "midpoint (" + to_string(y1) + ", " + to_string(y2) + ") = u + (" + to_string(s1) + ", " +
             to_string(s2) + ") with u in U";
    }
  }
  return std::nullopt;
}

QuantitativeOutcome evaluate_quantitative(const TorusVec& theta, const TorusVec& alpha, const Rat& eps) {
  if (theta.dim_pairs() != 1 || alpha.dim_pairs() != 1) throw std::invalid_argument("single T^2 factor expected");
  const TorusVec y_pt = theta + alpha;
  const TorusVec z_pt = y_pt + alpha;
  const Rat px = psi(theta)[0];
  const Rat py = psi(y_pt)[0];
  const Rat pz = psi(z_pt)[0];
  const LiftVec d = half_difference(theta, z_pt);
  const Rat s = d[0] + d[1];

  QuantitativeOutcome out;
  out.half_branch = 2 * py >= px + pz + kHalf;
  out.freiman1 = py == px + s;
  if (!out.half_branch && !out.freiman1) {
    out.violation = "neither 2psi(y) >= psi(x)+psi(z)+1/2 nor psi(y) = psi(x)+d1+d2";
  }
  out.guard = abs_rat(s) <= eps / 1000;
  if (out.guard) {
    const Rat f = sq(1 - frac_bracket(theta.coord(0))) + sq(1 - frac_bracket(z_pt.coord(0))) -
                  2 * sq(1 - frac_bracket(y_pt.coord(0)));
    const Rat d1sq = sq(d[0]);
    out.freiman2_stated = f >= d1sq;
    out.freiman2_proof = f >= 2 * d1sq;
    if (!*out.freiman2_proof && !out.violation) {
      out.violation = std::string("guarded second difference ") + to_string(f) + " below " +
                      (*out.freiman2_stated ? "2 d1^2" : "d1^2");
    }
  }
  return out;
}

ProductOutcome evaluate_product_set(const TorusVec& theta, const TorusVec& alpha, const WeightParams& params) {
  const TorusVec y = theta + alpha;
  const TorusVec z = y + alpha;
  ProductOutcome out;
  out.w1_branch = 2 * w1(y) >= w1(theta) + w1(z) + kHalf;

  const LiftVec d = half_difference(theta, z);
  Rat penalty = 0;
  Rat spread = 0;
  for (std::size_t i = 0; i < theta.dim_pairs(); ++i) {
    const Rat s = d[2 * i] + d[2 * i + 1];
    spread += sq(s);
    penalty += sq(s) + sq(d[2 * i]);
    if (abs_rat(s) >= params.epsilon / 1000) out.i2_nonempty = true;
  }
  if (out.w1_branch) return out;

  const Rat w2_diff = w2(theta, params) + w2(z, params) - 2 * w2(y, params);
  // x^2 + (x+2s)^2 - 2(x+s)^2 = 2 s^2
  if (w2_diff != 2 * params.c2 * spread) {
    out.violation = "parallelogram identity fails: " + to_string(w2_diff) + " != 2 c2 * " + to_string(spread);
    return out;
  }
  const Rat lhs = w23(theta, params) + w23(z, params) - 2 * w23(y, params);
  if (lhs < penalty) {
    out.violation = "second difference of w2+w3 " + to_string(lhs) + " < penalty " + to_string(penalty);
  }
  return out;
}

CheckReport check_bracket_law(unsigned g) {
  if (g < 2 || g % 2 != 0) throw std::invalid_argument("bracket grid must be even and >= 2");
  CheckReport r;
  r.name = "bracket";
  for (unsigned i = 0; i <= g; ++i) {
    Rat x(i, g);
    x.canonicalize();
    for (unsigned j = 0; j <= g; ++j) {
      Rat z(j, g);
      z.canonicalize();
      ++r.trials;
      const Rat y = (x + z) / 2;
      const Rat lhs = sq(1 - bracket_closed(x)) + sq(1 - bracket_closed(z)) - 2 * sq(1 - bracket_closed(y));
      if (lhs < 2 * sq(Rat((z - x) / 2))) ++r.stats["premise_held"];
      if (auto v = bracket_law_violation(x, z)) {
        r.add_violation({{{"check", "bracket"}, {"x", to_string(x)}, {"z", to_string(z)}}, *v});
      }
    }
  }
  return r;
}

namespace {

std::vector<std::pair<Rat, Rat>> grid_points(unsigned g, auto&& keep) {
  std::vector<std::pair<Rat, Rat>> pts;
  for (unsigned i = 0; i < g; ++i) {
    for (unsigned j = 0; j < g; ++j) {
      Rat a(i, g);
      Rat b(j, g);
      a.canonicalize();
      b.canonicalize();
      if (keep(a, b)) pts.emplace_back(std::move(a), std::move(b));
    }
  }
  return pts;
}

}  // namespace

CheckReport check_u1_midpoint(unsigned g) {
  if (g < 8) throw std::invalid_argument("u1 grid must be >= 8");
  CheckReport r;
  r.name = "u1";
  const auto pts = grid_points(g, [](const Rat& a, const Rat& b) { return in_U1(a, b); });
  r.stats["grid_points_in_u1"] = pts.size();
  for (const auto& [x1, x2] : pts) {
    for (const auto& [z1, z2] : pts) {
      ++r.trials;
      if ((x1 < kHalf) != (z1 < kHalf)) ++r.stats["straddles_half"];
      if (auto v = u1_midpoint_violation(x1, x2, z1, z2)) {
        r.add_violation({{{"check", "u1"},
                          {"x1", to_string(x1)},
                          {"x2", to_string(x2)},
                          {"z1", to_string(z1)},
                          {"z2", to_string(z2)}},
                         *v});
      }
    }
  }
  return r;
}

CheckReport check_one_sided_rounding(unsigned g, const Rat& eps, InjectedBug bug) {
  if (g < 2) throw std::invalid_argument("rounding grid must be >= 2");
  BlockSpec{BlockVariant::kUTruncation, eps}.validate();
  CheckReport r;
  r.name = "rounding";
  const auto pts = grid_points(g, [&](const Rat& a, const Rat& b) { return in_U_with(a, b, eps, bug); });
  r.stats["grid_points_in_u"] = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      ++r.trials;
      const auto& [x1, x2] = pts[i];
      const auto& [z1, z2] = pts[j];
      if (x1 + z1 >= 1 && x2 + z2 >= 1) ++r.stats["midpoint_in_upper_quadrant"];
      if (auto v = one_sided_rounding_violation(x1, x2, z1, z2, eps, bug)) {
        r.add_violation({{{"check", "rounding"},
                          {"x1", to_string(x1)},
                          {"x2", to_string(x2)},
                          {"z1", to_string(z1)},
                          {"z2", to_string(z2)},
                          {"eps", to_string(eps)},
                          {"bug", bug_name(bug)}},
                         *v});
      }
    }
  }
  return r;
}

CheckReport check_quantitative(const Rat& eps, std::uint64_t trials, const SamplingOptions& options) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const BlockSpec spec{BlockVariant::kUTruncation, eps};
  const GridBlock block(spec, options.modulus);
  const std::uint64_t q = options.modulus;
  const FactorSampler sampler(block, q, eps, options.targeted_fraction);
  CheckReport r = run_streams("quantitative", trials, options, [&](std::mt19937_64& rng, CheckReport& part) {
    const FactorSample s = sampler.draw(rng, part.attempts);
    const TorusVec theta({s.theta[0], s.theta[1]}, q);
    const TorusVec alpha({s.alpha[0], s.alpha[1]}, q);
    ++part.trials;
    const QuantitativeOutcome o = evaluate_quantitative(theta, alpha, eps);
    ++part.stats[o.half_branch ? "branch_half" : "branch_freiman"];
    if (o.guard) {
      ++part.stats["guard_active"];
      if (*o.freiman2_stated) ++part.stats["freiman2_stated_held"];
      if (*o.freiman2_proof) ++part.stats["freiman2_proof_held"];
    }
    if (2 * s.alpha[0] % q == 0 && 2 * s.alpha[1] % q == 0) ++part.stats["subgroup_alpha"];
    const LiftVec d = half_difference(theta, theta + alpha + alpha);
    for (std::size_t j = 0; j < 2; ++j) ++part.stats["xi_realized:" + to_string(Rat(d[j] - alpha.coord(j)))];
    if (o.violation) {
      part.add_violation({{{"check", "quantitative"},
                           {"modulus", q},
                           {"theta", nums_of(theta)},
                           {"alpha", nums_of(alpha)},
                           {"eps", to_string(eps)}},
                          *o.violation});
    }
  });
  flag_coverage(r, "branch_half", "branch_freiman");
  return r;
}

CheckReport check_product_set(const Rat& eps, unsigned d0, std::uint64_t trials, const SamplingOptions& options) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (d0 < 1) throw std::invalid_argument("D0 must be >= 1");
  const BlockSpec spec{BlockVariant::kUTruncation, eps};
  const GridBlock block(spec, options.modulus);
  const std::uint64_t q = options.modulus;
  // delta only sets the bucket width, which this check does not use.
  const WeightParams params = make_weight_params(eps, Rat(1, 400));
  const std::string name = "product_d0_" + std::to_string(d0);
  const FactorSampler sampler(block, q, eps, options.targeted_fraction);
  CheckReport r = run_streams(name, trials, options, [&](std::mt19937_64& rng, CheckReport& part) {
    // A 3-AP lies in the product block iff every factor is an AP in the
    // block, so sampling factors independently is exact rejection sampling.
    std::vector<std::uint64_t> th(2 * d0);
    std::vector<std::uint64_t> al(2 * d0);
    for (unsigned i = 0; i < d0; ++i) {
      const FactorSample s = sampler.draw(rng, part.attempts);
      th[2 * i] = s.theta[0];
      th[2 * i + 1] = s.theta[1];
      al[2 * i] = s.alpha[0];
      al[2 * i + 1] = s.alpha[1];
    }
    const TorusVec theta(th, q);
    const TorusVec alpha(al, q);
    ++part.trials;
    const ProductOutcome o = evaluate_product_set(theta, alpha, params);
    ++part.stats[o.w1_branch ? "branch_w1" : "branch_quadratic"];
    if (!o.w1_branch && o.i2_nonempty) ++part.stats["quadratic_with_large_spread"];
    if (o.violation) {
      part.add_violation({{{"check", "product"},
                           {"modulus", q},
                           {"theta", th},
                           {"alpha", al},
                           {"eps", to_string(eps)},
                           {"c2", to_string(params.c2)}},
                          *o.violation});
    }
  });
  flag_coverage(r, "branch_w1", "branch_quadratic");
  return r;
}

std::optional<std::string> replay(const nlohmann::json& in) {
  const std::string check = in.at("check").get<std::string>();
  auto rat = [&](const char* key) { return parse_rat(in.at(key).get<std::string>()); };
  if (check == "bracket") return bracket_law_violation(rat("x"), rat("z"));
  if (check == "u1") return u1_midpoint_violation(rat("x1"), rat("x2"), rat("z1"), rat("z2"));
  if (check == "rounding") {
    return one_sided_rounding_violation(rat("x1"), rat("x2"), rat("z1"), rat("z2"), rat("eps"),
                                        bug_from_name(in.value("bug", std::string("none"))));
  }
  const std::uint64_t q = in.at("modulus").get<std::uint64_t>();
  const TorusVec theta(in.at("theta").get<std::vector<std::uint64_t>>(), q);
  const TorusVec alpha(in.at("alpha").get<std::vector<std::uint64_t>>(), q);
  if (check == "quantitative") return evaluate_quantitative(theta, alpha, rat("eps")).violation;
  if (check == "product") {
    WeightParams params = make_weight_params(rat("eps"), Rat(1, 400), rat("c2"), true);
    return evaluate_product_set(theta, alpha, params).violation;
  }
  throw std::invalid_argument("unknown check '" + check + "'");
}

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json j;
  j["check"] = report.name;
  j["trials"] = report.trials;
  j["attempts"] = report.attempts;
  j["violation_count"] = report.violation_count;
  j["passed"] = report.passed();
  j["stats"] = report.stats;
  j["flags"] = report.flags;
  auto& vs = j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) vs.push_back({{"input", v.input}, {"detail", v.detail}});
  return j;
}

}  // namespace apfree
