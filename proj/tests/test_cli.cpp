#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "mallows/measures.hpp"

using namespace mallows;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MALLOWS_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("eval pmf_single emits the closed form as JSON") {
  const auto res = run_cli("eval --op pmf_single --q 0.5 --alpha 1 --pairs 0:0");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  const double prob = std::stod(j.at("prob").get<std::string>());
  const MallowsParams p{QParam(0.5), 1.0};
  CHECK(prob == doctest::Approx(pmf_single(p, 0, 0).prob()).epsilon(1e-15));
  CHECK(j.at("op") == "pmf_single");
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli("eval --op pmf_single --q 0.5 --no-such-flag 1").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("eval --op no_such_op --q 0.5").exit_code == 2);
  // out-of-domain parameter is also a usage problem
  CHECK(run_cli("eval --op pmf_single --q 1.5 --pairs 0:0").exit_code == 2);
}

TEST_CASE("sample output is byte-identical for identical configs") {
  const std::string args = "sample --q 0.5 --alpha 1 --start -2 --k 5 --n 20 --seed 99 --out csv";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("replica,position,value\n", 0) == 0);

  const auto c = run_cli("sample --q 0.5 --alpha 1 --start -2 --k 5 --n 20 --seed 100 --out csv");
  CHECK(a.out != c.out);
}

TEST_CASE("json reports are byte-identical and parse") {
  const std::string args = "eval --op pmf_neighbors --q 0.3 --alpha 2 --i 0 --values 2,-1,5";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  const MallowsParams p{QParam(0.3), 2.0};
  CHECK(std::stod(j.at("log_prob").get<std::string>()) ==
        doctest::Approx(pmf_neighbors(p, 0, {2, -1, 5}).log_value).epsilon(1e-15));
}

TEST_CASE("simulate-asep runs and respects thread-count independence") {
  const std::string base = "simulate-asep --q 0.5 --alpha 1 --L 4 --t 1 --replicas 8 --seed 5 --out csv";
  const auto t1 = run_cli(base + " --threads 1");
  const auto t4 = run_cli(base + " --threads 4");
  CHECK(t1.exit_code == 0);
  CHECK(t1.out == t4.out);
}

TEST_CASE("asymptotics emits the scaling table") {
  const auto res = run_cli("asymptotics --epsilon 0.001 --alpha 1 --ys 0 --k 1 --out json");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(std::stod(j.at("rows").at(0).at("logistic_density").get<std::string>()) == doctest::Approx(0.25));
}

TEST_CASE("verify subcommand: single cheap criterion") {
  const auto res = run_cli("verify --quick --only 4");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("PASS") != std::string::npos);
  CHECK(res.out.find("criterion  4") != std::string::npos);
}
