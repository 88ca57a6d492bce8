// Acceptance gate: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exit status 0 iff all pass.
#include <cstdio>
#include <cstring>
#include <string>

#include "mallows/verify.hpp"

int main(int argc, char** argv) {
  mallows::VerifyOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      opt.quick = true;
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opt.seed = std::stoull(argv[++i]);
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      opt.only.push_back(std::stoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--quick] [--seed N] [--only ID]...\n", argv[0]);
      return 2;
    }
  }

  const auto results = mallows::run_acceptance(opt);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s  criterion %2d  %-34s %s  [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    if (!r.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}
