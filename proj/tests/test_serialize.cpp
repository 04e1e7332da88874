#include "apfree/constructor.hpp"
#include "apfree/serialize.hpp"

#include <doctest.h>

using namespace apfree;

TEST_CASE("ints format round trip") {
  ProgressionFreeSet s;
  s.n = 10;
  s.elements = {1, 4, 9};
  CHECK(format_ints(s) == "1\n4\n9\n");
  CHECK(parse_set(format_ints(s)) == s.elements);
  CHECK(parse_set("# comment\n\n 9\r\n1\n4") == s.elements);
  CHECK(parse_set("").empty());
}

TEST_CASE("json format round trip") {
  ConstructionConfig c;
  c.n = 3000;
  c.d = 2;
  c.seed = 5;
  const auto s = construct(c);
  const auto j = to_json(s);
  CHECK(j.at("n") == 3000);
  CHECK(j.at("d") == 2);
  CHECK(j.at("epsilon") == "1/16");
  CHECK(j.at("seed") == 5);
  CHECK(j.at("provenance").at("kind") == "torus");
  CHECK(parse_set(j.dump()) == s.elements);
}

TEST_CASE("malformed sets are rejected") {
  CHECK_THROWS_AS(parse_set("1\n2\nx\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_set("1\n-2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_set("1\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_set("{\"elements\": [1, \"a\"]}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_set("{\"n\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_set("{broken"), std::invalid_argument);
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("manifest json") {
  RunManifest m{"apfree construct --n 5", {{"n", 5}}, "0.1.0", 0.5, "ab"};
  const auto j = to_json(m);
  CHECK(j.at("config").at("n") == 5);
  CHECK(j.at("output_digest") == "ab");
}
