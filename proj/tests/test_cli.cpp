#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "soergel/cli.hpp"

using soergel::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result kit(std::vector<std::string> args) {
  args.insert(args.begin(), "soergel-kit");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("homfly command") {
  auto r = kit({"homfly", "-n", "1", ""});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "soergel-kit/1");
  CHECK(j.contains("conventions"));
  // (1 + a)/(1 - q) with q = v^-2
  CHECK(j["trace"]["a^0"] == "(-v^2)/(1 - v^2)");
  CHECK(j["trace"]["a^1"] == "(-v^2)/(1 - v^2)");

  r = kit({"homfly", "-n", "2", "1 1 1", "--normalized"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["trace_text"] == "[(v + v^5)/(1 - v^2)] + [(v + v^3 + v^5)/(1 - v^2)]*a + [(v^3)/(1 - v^2)]*a^2");
  CHECK(j.contains("normalized"));

  r = kit({"homfly", "-n", "2", "--braid", "-1", "--format", "table"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Tr(-1) = ") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  auto r = kit({"homfly", "-n", "2", "1 x"});
  CHECK(r.code == 2);
  CHECK(r.err.find("token 2") != std::string::npos);
  CHECK(kit({"verify", "foo"}).code == 2);
  CHECK(kit({"hhh", "-n", "1", "-D", "5"}).code == 2);
  CHECK(kit({"hhh", "-n", "1", "-D", "-2"}).code == 2);
  CHECK(kit({"hhh", "-n", "2", "--field", "fp:10"}).code == 2);
  CHECK(kit({"hhh", "-n", "2", "--braid", "1 3"}).code == 2);
  CHECK(kit({"hhh", "-n", "2", "--format", "xml"}).code == 2);
  CHECK(kit({}).code == 2);
  CHECK(kit({"--help"}).code == 0);
}

TEST_CASE("hhh command") {
  auto r = kit({"hhh", "-n", "1", "-D", "6"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["euler_check"] == true);
  CHECK(j["pass"] == true);
  CHECK(j["cutoff"] == 6);
  const auto& cells = j["tables"]["HHH raw"]["cells"];
  for (const char* k : {"0:0:0", "0:0:2", "0:0:4", "0:0:6", "1:0:-2", "1:0:0"}) CHECK(cells[k] == 1);
  CHECK_FALSE(cells.contains("0:0:1"));

  // sigma_1 on two strands is the unknot moved by [-1](1)
  auto u = nlohmann::json::parse(kit({"hhh", "-n", "1", "-D", "12"}).out)["tables"]["HHH raw"]["cells"];
  auto s = nlohmann::json::parse(kit({"hhh", "-n", "2", "--braid", "1", "-D", "12"}).out)["tables"]["HHH raw"]["cells"];
  std::map<std::string, int> expect, got;
  for (auto& [k, v] : u.items()) {
    int a, t, d;
    std::sscanf(k.c_str(), "%d:%d:%d", &a, &t, &d);
    if (d - 1 <= 10) expect[std::to_string(a) + ":" + std::to_string(t + 1) + ":" + std::to_string(d - 1)] = v;
  }
  for (auto& [k, v] : s.items()) {
    int a, t, d;
    std::sscanf(k.c_str(), "%d:%d:%d", &a, &t, &d);
    if (d <= 10) got[k] = v;
  }
  CHECK(expect == got);

  r = kit({"hhh", "-n", "2", "--braid", "1 1 1", "-D", "12", "--normalized", "--format", "table"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS Euler characteristic") != std::string::npos);
}

TEST_CASE("output is deterministic across threads and cache use") {
  const auto dir = std::filesystem::temp_directory_path() / "soergel-cli-test-cache";
  std::filesystem::remove_all(dir);
  const std::vector<std::string> base = {"hhh", "-n", "3", "--braid", "1 -2 1", "-D", "10"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return kit(a);
  };
  const Result one = with({"--threads", "1"});
  REQUIRE(one.code == 0);
  CHECK(with({"--threads", "3"}).out == one.out);
  CHECK(with({"--cache-dir", dir.string()}).out == one.out);
  CHECK(with({"--cache-dir", dir.string()}).out == one.out);
  const Result fp = with({"--field", "fp:4611686018427387847", "--recheck-q"});
  CHECK(fp.code == 0);
  CHECK(fp.out.find("agree with Q") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify command") {
  CHECK(kit({"verify", "kalman-decat", "-n", "3"}).code == 0);
  CHECK(kit({"verify", "serre", "-n", "2", "-D", "16", "--braid", "-1"}).code == 0);
  CHECK(kit({"verify", "kalman-cat", "-n", "2", "-D", "12", "--braid", "1"}).code == 0);
  CHECK(kit({"verify", "relative-serre", "-n", "2", "-D", "12", "--braid", "1"}).code == 0);
  CHECK(kit({"verify", "markov", "-n", "1", "-D", "12"}).code == 0);
  CHECK(kit({"verify", "duality", "-n", "2", "-D", "12", "--word", "1"}).code == 0);
  CHECK(kit({"verify", "duality", "-n", "2", "-D", "12", "--braid", "1"}).code == 0);
  CHECK(kit({"verify", "duality", "-n", "2", "--word", "-1"}).code == 2);
  CHECK(kit({"verify", "bruhat", "-n", "2", "-D", "12"}).code == 0);
  auto r = kit({"verify", "lw", "-n", "3", "-D", "16"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["command"] == "verify lw");
  CHECK(j["comparisons"].size() > 0);
}
