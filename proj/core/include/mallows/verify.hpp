#pragma once

#include <string>
#include <vector>

#include "mallows/common.hpp"

namespace mallows {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240801;
  bool quick = false;     // reduced Monte Carlo sizes, same criteria and bounds
  int threads = 0;        // 0: hardware concurrency
  std::vector<int> only;  // run a subset of criterion ids; empty = all
};

/// Runs the acceptance suite; one entry per criterion, pass/fail plus detail.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);

}  // namespace mallows
