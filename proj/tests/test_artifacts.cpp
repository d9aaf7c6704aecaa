#include "doctest.h"

#include <sstream>
#include <string>

#include "forge/artifacts.hpp"
#include "forge/errors.hpp"

using namespace forge;

namespace {

Recipe small_well() {
  Recipe r;
  r.kind = "well";
  r.j = 10;
  r.delta = 0.1;
  r.d = 0.5;
  return r;
}

std::string profile_text(const GluedManifold& m, const Recipe& r) {
  std::ostringstream os;
  write_profile(os, m, r);
  return os.str();
}

}  // namespace

TEST_CASE("profile round trip is byte identical") {
  const auto r = small_well();
  const auto m = build(r);
  const std::string a = profile_text(m, r);
  std::istringstream is(a);
  Recipe back;
  const auto m2 = read_profile(is, &back);
  CHECK(back.kind == "well");
  CHECK(back.delta == r.delta);
  CHECK(m2.pieces.size() == m.pieces.size());
  CHECK(sample_deviation(m, m2) == 0.0);
  CHECK(profile_text(m2, back) == a);
}

TEST_CASE("rebuilding from the recipe reproduces the samples") {
  const auto r = small_well();
  CHECK(sample_deviation(build(r), build(r)) == 0.0);
  CHECK(fnv1a_hex(profile_text(build(r), r)) == fnv1a_hex(profile_text(build(r), r)));
}

TEST_CASE("malformed profiles report the line") {
  const auto r = small_well();
  std::string text = profile_text(build(r), r);
  SUBCASE("wrong schema") {
    std::istringstream is("forge.profile/9\n");
    CHECK_THROWS_AS(read_profile(is, nullptr), ForgeError);
  }
  SUBCASE("truncated") {
    std::istringstream is(text.substr(0, text.size() / 2));
    try {
      read_profile(is, nullptr);
      FAIL("no throw");
    } catch (const ForgeError& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
  SUBCASE("bad number") {
    const auto pos = text.find("delta ");
    text.replace(pos, text.find('\n', pos) - pos, "delta x1");
    std::istringstream is(text);
    try {
      read_profile(is, nullptr);
      FAIL("no throw");
    } catch (const ForgeError& e) {
      CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
  }
}

TEST_CASE("fnv1a matches the reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("report json has stable keys and no clock") {
  VerificationReport rep;
  rep.subject = "x";
  rep.add(make_claim("a", 1.0, "<=", 2.0));
  rep.measure("m", 3.0);
  const auto s = report_json("build-well", R"({"j":10})", rep);
  CHECK(s == report_json("build-well", R"({"j":10})", rep));
  CHECK(s.find("\"schema\": \"forge.report/1\"") != std::string::npos);
  CHECK(s.find("\"pass\": true") != std::string::npos);
  const auto e = report_json("build-well", "{}", rep, "InvalidInput", "bad");
  CHECK(e.find("\"pass\": false") != std::string::npos);
}
