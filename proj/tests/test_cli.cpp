#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "forge/artifacts.hpp"

namespace fs = std::filesystem;
using namespace forge;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "forge_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(FORGE_BIN) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string dir(const std::string& name) {
  const auto p = kRoot / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("two identical runs give identical artifacts") {
  const auto a = dir("a"), b = dir("b");
  REQUIRE(run("build-well --j 10 --out " + a) == 0);
  REQUIRE(run("build-well --j 10 --out " + b) == 0);
  for (const char* f : {"well-j10.profile", "well-j10.report.json"}) {
    const auto x = slurp(fs::path(a) / f), y = slurp(fs::path(b) / f);
    CHECK(!x.empty());
    CHECK(fnv1a_hex(x) == fnv1a_hex(y));
  }
}

TEST_CASE("verify passes a clean profile and fails a scaled piece") {
  const auto a = dir("verify");
  REQUIRE(run("build-well --j 10 --out " + a) == 0);
  const auto path = fs::path(a) / "well-j10.profile";
  CHECK(run("verify " + path.string() + " --out " + a) == 0);

  Recipe r;
  GluedManifold m;
  {
    std::ifstream is(path);
    m = read_profile(is, &r);
  }
  const auto& well = m.piece("well");
  for (size_t k = well.first_span; k < well.first_span + well.span_count; ++k) {
    for (auto& v : m.flat.spans[k].w) v *= 1.2;
  }
  const auto bad = fs::path(a) / "corrupt.profile";
  {
    std::ofstream os(bad);
    write_profile(os, m, r);
  }
  CHECK(run("verify " + bad.string() + " --out " + a) == 1);
  const auto rep = slurp(fs::path(a) / "corrupt.verify.json");
  CHECK(rep.find("\"tag\": \"interfaces.value_gap\"") != std::string::npos);
  CHECK(rep.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("config errors exit 2 with an error record") {
  const auto a = dir("err");
  CHECK(run("build-well --j 0 --out " + a) == 2);
  const auto rec = slurp(fs::path(a) / "error.report.json");
  CHECK(rec.find("\"kind\": \"InvalidInput\"") != std::string::npos);
  CHECK(run("build-sequence no-such-family --j 2 --out " + a) == 2);
  CHECK(run("verify " + (fs::path(a) / "missing.profile").string() + " --out " + a) == 2);
  CHECK(run("build-well --refine-max 0 --out " + a) == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("plot of the round sphere") {
  const auto a = dir("plot");
  REQUIRE(run("build-sphere --out " + a) == 0);
  REQUIRE(run("plot " + (fs::path(a) / "sphere.profile").string() + " --out " + a) == 0);
  const auto svg = slurp(fs::path(a) / "sphere.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("profile (t, r)") != std::string::npos);
  CHECK(svg.find("dashed R = 6") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("sequence manifest and report") {
  const auto a = dir("seq");
  REQUIRE(run("build-sequence many-wells --j 2,4 --out " + a) == 0);
  const auto manifest = (fs::path(a) / "many-wells.manifest.json").string();
  CHECK(run("report " + manifest) == 0);
  {
    std::ofstream os(fs::path(a) / "many-wells-j4.report.json", std::ios::app);
    os << " ";
  }
  CHECK(run("report " + manifest) == 1);
}
