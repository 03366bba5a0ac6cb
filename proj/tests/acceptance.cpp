// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Criteria 1-8 are the full-level verification checks;
// criterion 9 is byte-level determinism of the fast suite.

#include <chrono>
#include <cstdio>
#include <string>

#include "eschlab/verify.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
  using esch::VerifyLevel;
  bool all_pass = true;

  const auto t_full = std::chrono::steady_clock::now();
  const esch::VerifyReport full = esch::run_verification(VerifyLevel::Full, esch::kDefaultSeed);
  const double full_seconds = seconds_since(t_full);

  for (std::size_t i = 0; i < full.checks.size(); ++i) {
    const esch::CheckResult& c = full.checks[i];
    bool pass = c.pass;
    std::string extra;
    if (c.id == "C1") {
      pass = pass && full_seconds < 30.0;
      extra = " [suite " + std::to_string(full_seconds) + " s, budget 30 s]";
    }
    if (c.id == "C2") {
      pass = pass && full_seconds < 60.0;
      extra = " [suite " + std::to_string(full_seconds) + " s, budget 60 s]";
    }
    all_pass = all_pass && pass;
    std::printf("[%s] %zu. %s — %s%s\n", pass ? "PASS" : "FAIL", i + 1, c.name.c_str(),
                c.details.c_str(), extra.c_str());
  }

  {
    const auto t_fast = std::chrono::steady_clock::now();
    const esch::VerifyReport a = esch::run_verification(VerifyLevel::Fast, esch::kDefaultSeed);
    const std::string bytes_a = esch::to_json(a).dump(2);
    const double fast_seconds = seconds_since(t_fast);
    const esch::VerifyReport b = esch::run_verification(VerifyLevel::Fast, esch::kDefaultSeed);
    const std::string bytes_b = esch::to_json(b).dump(2);
    const bool pass = bytes_a == bytes_b && a.all_pass() && fast_seconds < 60.0;
    all_pass = all_pass && pass;
    std::printf("[%s] 9. fast-suite determinism — %s, %zu bytes, %f s (budget 60 s)\n",
                pass ? "PASS" : "FAIL", bytes_a == bytes_b ? "byte-identical" : "bytes differ",
                bytes_a.size(), fast_seconds);
  }

  std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL CRITERIA PASSED" : "ACCEPTANCE: FAILURES");
  return all_pass ? 0 : 1;
}
