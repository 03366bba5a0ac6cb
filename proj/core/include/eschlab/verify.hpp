#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eschlab/json_io.hpp"
#include "eschlab/wilking.hpp"

namespace esch {

enum class VerifyLevel { Fast, Full };

// Pinned acceptance thresholds.  Overriding them exists for negative
// controls (an absurdly tight tolerance must make the suite fail).
struct VerifyTolerances {
  double zero_curvature = kZeroCurvatureTol;
  double certificate_residual = kCertificateTol;
};

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string details;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::Fast;
  std::uint64_t seed = 0;
  double t = 1.0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

// Deterministic suite driving the cross-validation checks of every module;
// the report carries no timing data, so equal inputs render to equal bytes.
VerifyReport run_verification(VerifyLevel level, std::uint64_t seed,
                              const VerifyTolerances& tol = {});

Json to_json(const VerifyReport& report);
std::string render_text(const VerifyReport& report);

// New-candidate weight triples grouped by the construction that certifies
// them, enumerated deterministically in lexicographic order.
struct CandidateLists {
  std::vector<Triple> case_2a;
  std::vector<Triple> case_2b;  // includes the q1 + q2 = 0 degenerate family
  std::vector<Triple> case_2c;
};
CandidateLists enumerate_candidates(int per_case);

}  // namespace esch
