#pragma once

// Machine checks of the building-block lemmas and propositions.
//
// Exhaustive checks walk a rational grid; sampled checks draw 3-APs
// {theta, theta+alpha, theta+2alpha} inside the block by rejection sampling
// on the Q-grid. Every instance is evaluated in exact arithmetic, and each
// violation records its inputs so replay() can reproduce it on its own.

#include "apfree/rational.hpp"
#include "apfree/torus.hpp"
#include "apfree/weights.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace apfree {

struct Violation {
  nlohmann::json input;  // includes "check"; rationals as "p/q" strings
  std::string detail;
};

struct CheckReport {
  std::string name;
  std::uint64_t trials = 0;    // instances evaluated
  std::uint64_t attempts = 0;  // raw samples drawn (rejection sampling)
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;  // first kMaxRecordedViolations
  std::map<std::string, std::uint64_t> stats;
  std::vector<std::string> flags;

  bool passed() const { return violation_count == 0; }
  void add_violation(Violation v);
  void merge(CheckReport&& other);
};

inline constexpr std::size_t kMaxRecordedViolations = 50;

/// Deliberate defects used to exercise the failure path of the harness.
enum class InjectedBug {
  kNone,
  kWideU1,  // U1 membership uses a+b < 1 instead of a+b < 3/4
};

// ---- single instances ------------------------------------------------------
// Each returns a description of the violation, or nullopt when it holds.

/// {.} extended to [0,1]: x on [0,1/2), x - 1/2 on [1/2,1].
Rat bracket_closed(const Rat& x);

std::optional<std::string> bracket_law_violation(const Rat& x, const Rat& z);
std::optional<std::string> u1_midpoint_violation(const Rat& x1, const Rat& x2, const Rat& z1, const Rat& z2);
std::optional<std::string> one_sided_rounding_violation(const Rat& x1, const Rat& x2, const Rat& z1, const Rat& z2,
                                                        const Rat& eps, InjectedBug bug = InjectedBug::kNone);

struct QuantitativeOutcome {
  bool half_branch = false;  // 2 psi(y) >= psi(x) + psi(z) + 1/2
  bool freiman1 = false;     // psi(y) = psi(x) + d1 + d2
  bool guard = false;        // |d1 + d2| <= eps/1000
  std::optional<bool> freiman2_stated;  // F >= d1^2   (only under the guard)
  std::optional<bool> freiman2_proof;   // F >= 2 d1^2 (only under the guard)
  std::optional<std::string> violation;
};

/// theta, alpha in T^2 (one factor); the caller ensures the three points lie in S_eps.
QuantitativeOutcome evaluate_quantitative(const TorusVec& theta, const TorusVec& alpha, const Rat& eps);

struct ProductOutcome {
  bool w1_branch = false;
  bool i2_nonempty = false;  // some factor with |d1 + d2| >= eps/1000
  std::optional<std::string> violation;
};

/// theta, alpha in (T^2)^{D0}; the caller ensures the AP lies in S_eps^{D0}.
ProductOutcome evaluate_product_set(const TorusVec& theta, const TorusVec& alpha, const WeightParams& params);

// ---- suites ----------------------------------------------------------------

struct SamplingOptions {
  std::uint64_t seed = 1;
  std::uint64_t modulus = kDefaultModulus;
  /// Share of factors whose alpha is drawn near the anti-diagonal
  /// alpha1 + alpha2 ~ 0 so the |d1+d2| <= eps/1000 guard fires often.
  double targeted_fraction = 0.1;
  unsigned threads = 1;
};

/// Exhaustive over x, z in {0, 1/g, ..., 1}; g >= 2 and even.
CheckReport check_bracket_law(unsigned g);
/// Exhaustive over grid pairs x, z in U1 (grid 1/g); g >= 8.
CheckReport check_u1_midpoint(unsigned g);
/// Exhaustive over grid pairs x, z in U (grid 1/g).
CheckReport check_one_sided_rounding(unsigned g, const Rat& eps, InjectedBug bug = InjectedBug::kNone);
/// Sampled single-factor 3-APs in S_eps.
CheckReport check_quantitative(const Rat& eps, std::uint64_t trials, const SamplingOptions& options = {});
/// Sampled 3-APs in S_eps^{D0} against the default weights for eps.
CheckReport check_product_set(const Rat& eps, unsigned d0, std::uint64_t trials, const SamplingOptions& options = {});

/// Share of trials in which each disjunct branch fired must exceed this.
inline constexpr double kMinBranchFrequency = 1e-3;

/// Re-evaluates one recorded violation; returns its detail when it still fails.
std::optional<std::string> replay(const nlohmann::json& input);

nlohmann::json to_json(const CheckReport& report);

}  // namespace apfree
