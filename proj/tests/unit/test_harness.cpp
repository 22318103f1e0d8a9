#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cll/driver.hpp"
#include "cll/errors.hpp"
#include "cll/harness.hpp"
#include "doctest.h"

using namespace cll;

namespace {

std::string read_file(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json strip_time(json r) {
  r.erase("timestamp");
  return r;
}

}  // namespace

TEST_CASE("block streams are independent of the thread count") {
  auto fn = [](std::mt19937_64& rng, std::vector<int64_t>& v) {
    v[0] = static_cast<int64_t>(rng() % 7);
    v[1] = static_cast<int64_t>(rng() % 3) - 1;
  };
  auto a = run_blocks(5000, 42, 1, 2, fn);
  for (int t : {2, 3, 8}) {
    auto b = run_blocks(5000, 42, t, 2, fn);
    for (size_t k = 0; k < 2; ++k) {
      CHECK(a[k].n == b[k].n);
      CHECK(a[k].s1 == b[k].s1);
      CHECK(a[k].s2 == b[k].s2);
    }
  }
  auto c = run_blocks(5000, 43, 1, 2, fn);
  CHECK(c[0].s1 != a[0].s1);
  CHECK(a[0].n == 5000);
}

TEST_CASE("exact accumulator statistics") {
  StatAccum s;
  for (int x : {1, 2, 3, 4}) s.add(x);
  CHECK(s.mean() == doctest::Approx(2.5));
  // sample variance 5/3, stderr sqrt(5/12)
  CHECK(s.stderr_() == doctest::Approx(std::sqrt(5.0 / 12.0)));
  StatAccum z;
  for (int i = 0; i < 10; ++i) z.add(0);
  CHECK(z.all_zero());
  CHECK(z.stderr_() == 0.0);
}

TEST_CASE("exceptions in workers propagate") {
  auto fn = [](std::mt19937_64&, std::vector<int64_t>&) { fail(Err::Internal, "boom"); };
  CHECK_THROWS_AS(run_blocks(1000, 1, 4, 1, fn), Error);
}

TEST_CASE("atomic writes and appends") {
  auto dir = std::filesystem::temp_directory_path() / "cll_harness_test";
  std::filesystem::create_directories(dir);
  std::string p = (dir / "out.jsonl").string();
  std::remove(p.c_str());
  atomic_append_line(p, "{\"a\":1}");
  atomic_append_line(p, "{\"a\":2}");
  CHECK(read_file(p) == "{\"a\":1}\n{\"a\":2}\n");
  atomic_write(p, "x");
  CHECK(read_file(p) == "x");
  for (auto& e : std::filesystem::directory_iterator(dir))
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  CHECK_THROWS_AS(atomic_write((dir / "missing" / "f").string(), "x"), Error);
}

TEST_CASE("config hash ignores key order and the output path") {
  json a = json::parse(R"({"command":"schur","group":"cyclic:3","ell":3})");
  json b = json::parse(R"({"ell":3,"group":"cyclic:3","command":"schur","out":"/tmp/x"})");
  CHECK(config_hash(a) == config_hash(b));
  json c = a;
  c["ell"] = 5;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("run_config examples") {
  json z = run_config(json::parse(R"({"command":"moment-z","n":2,"H":"cyclic:3","samples":600,"seed":9})"));
  CHECK(z["target"] == 1.0);
  CHECK(z["samples"] == 600);
  CHECK(z.contains("stderr"));
  json b = run_config(json::parse(R"({"command":"hurwitz-b","group":"cyclic:2","q":7,"n":5})"));
  CHECK(b["count"] == 0);
  CHECK(b["seed_free"] == true);
  CHECK(!b.contains("stderr"));
  CHECK_THROWS_AS(run_config(json::parse(R"({"command":"schur","group":"nonsense"})")), Error);
  CHECK_THROWS_AS(run_config(json::parse(R"({"command":"frobnicate"})")), Error);
  CHECK_THROWS_AS(run_config(json::parse(R"({"command":"hurwitz-b","group":"cyclic:2","n":5})")), Error);
}

TEST_CASE("identical configs give identical payloads") {
  json cfg = json::parse(
      R"({"command":"moment-y","n":2,"q":7,"H":"cyclic:3@inversion","samples":700,"seed":5,"threads":1})");
  json r1 = strip_time(run_config(cfg));
  json r2 = strip_time(run_config(cfg));
  CHECK(r1.dump() == r2.dump());
  cfg["threads"] = 4;
  json r3 = strip_time(run_config(cfg));
  CHECK(r3["mean"] == r1["mean"]);
  CHECK(r3["stderr"] == r1["stderr"]);
  CHECK(r3["x"] == r1["x"]);
}

TEST_CASE("regression suite") {
  CHECK(regression_suite(json::array())["all_pass"] == true);
  CHECK(regression_suite(json::object({{"entries", json::array()}}))["passed"] == 0);
  json m = json::parse(R"({"entries":[
    {"name":"parity","config":{"command":"hurwitz-b","group":"cyclic:2","q":7,"n":4},"expect":{"count":1}},
    {"name":"wrong","config":{"command":"hurwitz-b","group":"cyclic:2","q":7,"n":4},"expect":{"count":5}},
    {"name":"z","config":{"command":"moment-z","n":2,"H":"cyclic:3","samples":2000,"seed":1},
     "expect":{"mean":{"target":0.8,"sigmas":5}}},
    {"name":"broken","config":{"command":"schur","group":"nonsense"},"expect":{}}
  ]})");
  json r = regression_suite(m);
  CHECK(r["passed"] == 2);
  CHECK(r["failed"] == 2);
  CHECK(r["entries"][0]["pass"] == true);
  CHECK(r["entries"][1]["pass"] == false);
  CHECK(r["entries"][2]["pass"] == true);
  CHECK(r["entries"][3]["pass"] == false);
  CHECK(r["all_pass"] == false);
}

TEST_CASE("results are appended to the output file") {
  auto p = (std::filesystem::temp_directory_path() / "cll_driver_out.jsonl").string();
  std::remove(p.c_str());
  json cfg = json::parse(R"({"command":"schur","group":"elem_abelian:3^2","ell":3})");
  cfg["out"] = p;
  run_config(cfg);
  run_config(cfg);
  std::string s = read_file(p);
  std::stringstream ss(s);
  std::string line;
  int lines = 0;
  while (std::getline(ss, line)) {
    json r = json::parse(line);
    CHECK(r["multiplier"]["order"] == 3);
    CHECK(r["config_hash"] == config_hash(cfg));
    ++lines;
  }
  CHECK(lines == 2);
}
