// Python module apfree._core. Rationals cross the boundary as "p/q" strings;
// the package wrapper turns them into fractions.Fraction.

#include "apfree/baselines.hpp"
#include "apfree/building_block.hpp"
#include "apfree/constructor.hpp"
#include "apfree/serialize.hpp"
#include "apfree/theory_checks.hpp"
#include "apfree/verifier.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace apfree;

namespace {

BlockVariant variant_of(const std::string& v) {
  if (v == "U") return BlockVariant::kUTruncation;
  if (v == "T") return BlockVariant::kTEps;
  throw std::invalid_argument("variant must be 'U' or 'T'");
}

std::string construct_json(std::uint64_t n, std::optional<unsigned> d, const std::string& epsilon,
                           std::uint64_t seed, unsigned mu_samples, const std::string& variant,
                           std::optional<std::string> c2, bool unsafe_c2, bool w3_literal, bool skip_verify,
                           unsigned threads) {
  ConstructionConfig c;
  c.n = n;
  c.d = d ? *d : (n >= 2 ? recommended_d(n, DimensionMode::kNew) : 2);
  c.epsilon = parse_rat(epsilon);
  c.seed = seed;
  c.num_mu_samples = mu_samples;
  c.variant = variant_of(variant);
  if (c2) c.c2_override = parse_rat(*c2);
  c.unsafe_c2 = unsafe_c2;
  c.w3_literal = w3_literal;
  c.skip_verify = skip_verify;
  c.threads = threads;
  ProgressionFreeSet s;
  {
    py::gil_scoped_release release;
    s = construct(c);
  }
  return to_json(s).dump();
}

py::tuple count_brute(const std::vector<std::uint64_t>& set, std::size_t max_witnesses, unsigned threads) {
  APCount c;
  {
    py::gil_scoped_release release;
    c = count_aps_bruteforce(set, max_witnesses, threads);
  }
  py::list w;
  for (const auto& x : c.witnesses) w.append(py::make_tuple(x.x, x.y, x.z));
  return py::make_tuple(c.count, w, c.capped);
}

std::string theory_check(const std::string& suite, unsigned grid, std::uint64_t trials, std::uint64_t seed,
                         const std::string& epsilon, unsigned d0, unsigned threads) {
  const Rat eps = parse_rat(epsilon);
  SamplingOptions o;
  o.seed = seed;
  o.threads = threads;
  CheckReport r;
  {
    py::gil_scoped_release release;
    if (suite == "bracket") {
      r = check_bracket_law(grid);
    } else if (suite == "u1") {
      r = check_u1_midpoint(grid);
    } else if (suite == "rounding") {
      r = check_one_sided_rounding(grid, eps);
    } else if (suite == "quantitative") {
      r = check_quantitative(eps, trials, o);
    } else if (suite == "product") {
      r = check_product_set(eps, d0, trials, o);
    } else {
      throw std::invalid_argument("unknown suite '" + suite + "'");
    }
  }
  return to_json(r).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "3-AP-free set construction and exact verification";
  m.attr("__version__") = std::string(kToolVersion);

  m.def("construct_json", &construct_json, py::arg("n"), py::arg("d") = py::none(), py::arg("epsilon") = "1/16",
        py::arg("seed") = 0, py::arg("mu_samples") = 8, py::arg("variant") = "U", py::arg("c2") = py::none(),
        py::arg("unsafe_c2") = false, py::arg("w3_literal") = false, py::arg("skip_verify") = false,
        py::arg("threads") = 1);

  m.def("behrend_construct",
        [](std::uint64_t n, unsigned d) { return behrend_construct(n, d).set.elements; }, py::arg("n"),
        py::arg("d"));

  m.def("count_aps_bruteforce", &count_brute, py::arg("set"), py::arg("max_witnesses") = kDefaultMaxWitnesses,
        py::arg("threads") = 1);
  m.def(
      "count_aps_convolution",
      [](const std::vector<std::uint64_t>& set, std::uint64_t n) { return count_aps_convolution(set, n); },
      py::arg("set"), py::arg("n"));
  m.def(
      "is_3ap_free", [](const std::vector<std::uint64_t>& set, unsigned threads) { return is_3ap_free(set, threads); },
      py::arg("set"), py::arg("threads") = 1);

  m.def(
      "measure_exact",
      [](const std::string& eps, const std::string& variant) {
        return to_string(measure_exact({variant_of(variant), parse_rat(eps)}));
      },
      py::arg("epsilon"), py::arg("variant") = "U");
  m.def(
      "recommended_d",
      [](std::uint64_t n, const std::string& mode) {
        if (mode != "new" && mode != "classic") throw std::invalid_argument("mode must be 'new' or 'classic'");
        return recommended_d(n, mode == "new" ? DimensionMode::kNew : DimensionMode::kClassic);
      },
      py::arg("n"), py::arg("mode") = "new");
  m.def(
      "theoretical_bound",
      [](std::uint64_t n, unsigned d, const std::string& eps) {
        const auto v = theoretical_bound(n, d, parse_rat(eps));
        return py::make_tuple(v.exact ? py::cast(to_string(*v.exact)) : py::none(), v.approx);
      },
      py::arg("n"), py::arg("d"), py::arg("epsilon") = "1/16");
  m.def(
      "conservative_delta", [](std::uint64_t n, unsigned d) { return to_string(conservative_delta(n, d)); },
      py::arg("n"), py::arg("d"));
  m.def(
      "coord_penalty",
      [](const std::string& a1, const std::string& a2) {
        return to_string(coord_penalty(parse_rat(a1), parse_rat(a2)));
      },
      py::arg("a1"), py::arg("a2"));

  m.def("theory_check_json", &theory_check, py::arg("suite"), py::arg("grid") = 64, py::arg("trials") = 10000,
        py::arg("seed") = 1, py::arg("epsilon") = "1/16", py::arg("d0") = 1, py::arg("threads") = 1);
  m.def(
      "replay_json",
      [](const std::string& input) { return replay(nlohmann::json::parse(input)); }, py::arg("input"));
}
