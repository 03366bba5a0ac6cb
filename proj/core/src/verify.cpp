#include "eschlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace esch {

namespace {

struct SweepBuckets {
  // Triples in [-m, m]^3 bucketed by coordinate sum.
  std::map<Int, std::vector<Triple>> by_sum;
};

SweepBuckets sweep_buckets(Int m) {
  SweepBuckets b;
  for (Int a = -m; a <= m; ++a) {
    for (Int c = -m; c <= m; ++c) {
      for (Int d = -m; d <= m; ++d) b.by_sum[a + c + d].push_back({a, c, d});
    }
  }
  return b;
}

template <typename Fn>
void for_each_admissible(Int m, Fn&& fn) {
  const SweepBuckets b = sweep_buckets(m);
  for (const auto& [sum, ps] : b.by_sum) {
    for (const Triple& p : ps) {
      for (const Triple& q : b.by_sum.at(sum)) {
        const PQPair pair{p, q};
        if (is_admissible(pair)) fn(pair);
      }
    }
  }
}

std::string frac_str(int hits, int total) {
  std::ostringstream os;
  os << hits << "/" << total;
  return os.str();
}

// C1: exhaustive sweep; classify vs the interval criterion, and every
// almost-positive pair lands in the exceptional orbit.  The interval test
// is invariant under permuting q while the six products are not, so the
// consistency statement is: a positively curved pair satisfies the interval
// test, and an interval-test pair becomes positively curved after some
// q-permutation.
CheckResult check_classification_sweep(VerifyLevel level) {
  CheckResult r{"C1", "exhaustive classification sweep", false, ""};
  const Int m = level == VerifyLevel::Full ? 4 : 3;
  const PQPair almost_positive_rep = PQPair::make({0, 1, 1}, {0, 0, 2});
  const PQPair exceptional_canon = canonical_form(almost_positive_rep, MoveSet::AllDiffeos);

  long pairs = 0, almost = 0, mismatches = 0, orbit_misses = 0;
  for_each_admissible(m, [&](const PQPair& pair) {
    ++pairs;
    const CurvatureClass cls = classify(pair);
    const bool interval = eschenburg_positive(pair);
    if (cls == CurvatureClass::PositivelyCurved && !interval) ++mismatches;
    if (interval) {
      bool some_positive = false;
      for (const Perm& s : kAllPerms) {
        const PQPair moved = apply_move(pair, Move::perm_q(s));
        some_positive |= classify(moved) == CurvatureClass::PositivelyCurved;
      }
      if (!some_positive) ++mismatches;
    }
    if (cls == CurvatureClass::AlmostPositive) {
      ++almost;
      if (canonical_form(pair, MoveSet::AllDiffeos) != exceptional_canon) ++orbit_misses;
    }
  });
  r.pass = pairs > 0 && mismatches == 0 && orbit_misses == 0 && almost > 0;
  std::ostringstream os;
  os << "range [-" << m << "," << m << "], admissible pairs=" << pairs
     << ", almost_positive=" << almost << ", positivity mismatches=" << mismatches
     << ", orbit misses=" << orbit_misses;
  r.details = os.str();
  return r;
}

// C2: flatness criterion vs the curvature oracle on random and constructed
// planes, for three deformation parameters.
CheckResult check_criterion_oracle(VerifyLevel level, std::uint64_t seed,
                                   const VerifyTolerances& tol) {
  CheckResult r{"C2", "zero-plane criterion vs curvature oracle", false, ""};
  const int n = level == VerifyLevel::Full ? 10000 : 1000;
  long flat_violations = 0, curved_violations = 0, flat_seen = 0, curved_seen = 0;
  int ti = 0;
  for (double t : {0.1, 1.0, 10.0}) {
    const CurvatureOracle oracle(LeftInvariantMetric::deformed(t));
    for (int i = 0; i < n; ++i) {
      Rng rng(Rng::derive(seed ^ (0xC2ull + ti), static_cast<std::uint64_t>(i)));
      TwoPlane plane;
      const int kind = i % 10;
      if (kind < 7) {
        plane.X = random_su3_vector(rng);
        plane.Y = random_su3_vector(rng);
      } else if (kind == 7) {
        const KElement k = haar_k(rng);
        const ZVector z = random_zvector(rng);
        plane.X = adjoint(k, Y1());
        plane.Y = adjoint(k, z.materialize());
      } else if (kind == 8) {
        plane.X = Y3();
        Mat3 w = Mat3::Zero();
        for (int a = 0; a < 4; ++a) w += rng.normal() * standard_basis()[a].m;
        plane.Y = Su3Vector(w);
      } else {
        const KElement k = haar_k(rng);
        plane.X = adjoint(k, Y1());
        plane.Y = adjoint(k, Su3Vector(rng.normal() * standard_basis()[6].m +
                                       rng.normal() * standard_basis()[7].m));
      }
      double sec = 0.0;
      bool flat = false;
      try {
        flat = eschenburg_zero_criterion(plane, t);
        sec = oracle.sectional(plane.X, plane.Y);
      } catch (const DegeneratePlane&) {
        continue;
      }
      if (flat) {
        ++flat_seen;
        if (std::abs(sec) >= tol.zero_curvature) ++flat_violations;
      } else {
        ++curved_seen;
        if (sec <= tol.zero_curvature) ++curved_violations;
      }
    }
    ++ti;
  }
  r.pass = flat_seen > 0 && curved_seen > 0 && flat_violations == 0 && curved_violations == 0;
  std::ostringstream os;
  os << "flat planes=" << flat_seen << " (violations=" << flat_violations
     << "), curved planes=" << curved_seen << " (violations=" << curved_violations << ")";
  r.details = os.str();
  return r;
}

std::vector<PQPair> case1_flat_pairs(int count) {
  // Deterministic sweep for admissible all-products-non-positive pairs in
  // case 1 of the negative-case analysis.
  std::vector<PQPair> out;
  for_each_admissible(3, [&](const PQPair& pair) {
    if (static_cast<int>(out.size()) >= count) return;
    if (classify(pair) != CurvatureClass::FlatPlaneEverywhere) return;
    if (negcase_analysis(pair).negcase == NegCase::Case1) out.push_back(pair);
  });
  return out;
}

// C3: flat-everywhere pairs produce certificates at every sampled point and
// the positively curved pair at none.
CheckResult check_case4_everywhere(VerifyLevel level, std::uint64_t seed,
                                   const VerifyTolerances& tol) {
  CheckResult r{"C3", "flat-everywhere certificates", false, ""};
  const int n = level == VerifyLevel::Full ? 1000 : 200;
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(1.0));

  std::vector<PQPair> flats{negcase2_representative(), negcase3_representative()};
  for (const PQPair& pair : case1_flat_pairs(5)) flats.push_back(pair);

  std::ostringstream os;
  bool pass = flats.size() == 7;
  for (const PQPair& pair : flats) {
    int certs = 0, valid = 0;
    for (int i = 0; i < n; ++i) {
      Rng rng(Rng::derive(seed ^ 0xC3ull, static_cast<std::uint64_t>(i)));
      const SU3Point A = haar_su3(rng);
      if (auto cert = build_certificate(A, pair, 1.0, oracle)) {
        ++certs;
        if (cert->valid(tol.certificate_residual, tol.zero_curvature)) ++valid;
      }
    }
    pass = pass && certs == n && valid == n;
    os << pair.str() << " certs=" << frac_str(valid, n) << "; ";
  }

  const PQPair positive = PQPair::make({1, 1, 1}, {0, 0, 3});
  int pos_certs = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(seed ^ 0xC3Full, static_cast<std::uint64_t>(i)));
    if (build_certificate(haar_su3(rng), positive, 1.0, oracle)) ++pos_certs;
  }
  pass = pass && pos_certs == 0;
  os << positive.str() << " certs=" << frac_str(pos_certs, n);
  r.pass = pass;
  r.details = os.str();
  return r;
}

// C4: the quasi-positive pair ((0,0,3),(1,1,1)): all of U is certified, no
// diagonal point is.
CheckResult check_case3_open_set(VerifyLevel level, std::uint64_t seed,
                                 const VerifyTolerances& tol) {
  CheckResult r{"C4", "quasi-positive open set and diagonal points", false, ""};
  const int n = level == VerifyLevel::Full ? 1000 : 200;
  const PQPair pair = PQPair::make({0, 0, 3}, {1, 1, 1});
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(1.0));
  const OpenSetU u = open_set_U(pair);

  int u_hits = 0, u_certs = 0;
  std::uint64_t attempt = 0;
  while (u_hits < n && attempt < 1000ull * n) {
    Rng rng(Rng::derive(seed ^ 0xC4ull, attempt++));
    const SU3Point A = haar_su3(rng);
    if (!u.contains(A)) continue;
    ++u_hits;
    auto cert = build_certificate(A, u.normalized, 1.0, oracle);
    if (cert && cert->valid(tol.certificate_residual, tol.zero_curvature)) ++u_certs;
  }

  int diag_certs = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(seed ^ 0xC4D1ull, static_cast<std::uint64_t>(i)));
    if (build_certificate(random_diagonal_su3(rng), pair, 1.0, oracle)) ++diag_certs;
  }

  r.pass = u_hits == n && u_certs == n && diag_certs == 0;
  std::ostringstream os;
  os << "U samples certified=" << frac_str(u_certs, u_hits)
     << ", diagonal certificates=" << frac_str(diag_certs, n);
  r.details = os.str();
  return r;
}

// C5: h/g identities and closed-form derivatives across the candidate
// families.
CheckResult check_hg_identities(VerifyLevel level, std::uint64_t seed) {
  CheckResult r{"C5", "h/g identities and derivatives", false, ""};
  const int per_case = level == VerifyLevel::Full ? 4 : 2;
  const int thetas = level == VerifyLevel::Full ? 1000 : 200;
  const CandidateLists lists = enumerate_candidates(per_case);
  std::vector<Triple> qs;
  qs.insert(qs.end(), lists.case_2a.begin(), lists.case_2a.end());
  qs.insert(qs.end(), lists.case_2b.begin(), lists.case_2b.end());
  qs.insert(qs.end(), lists.case_2c.begin(), lists.case_2c.end());

  long checked = 0, id_violations = 0, fd_violations = 0;
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    const Triple& q = qs[qi];
    const double p3 = double(q[0] + q[1] + q[2]);
    const double scale = std::abs(p3) + std::abs(double(q[2]));
    int done = 0;
    std::uint64_t attempt = 0;
    while (done < thetas && attempt < 100ull * thetas) {
      Rng rng(Rng::derive(seed ^ (0xC5ull + qi), attempt++));
      const double theta = rng.uniform(0.05, M_PI / 2.0 - 0.05);
      const double c2 = std::cos(theta) * std::cos(theta);
      // Stay clear of the rational-function poles so the identity residuals
      // are meaningful at fixed absolute tolerance.
      if (std::abs(p3 * c2 + double(q[2])) < 5e-2 * scale) continue;
      if (std::abs(p3 * c2 - double(q[2])) < 5e-2 * scale) continue;
      const HGValues v = hg_values(theta, q);
      ++done;
      ++checked;

      const double s2 = 1.0 - c2;
      const double id1 = v.g - (p3 * s2 * v.h - double(q[1])) / double(q[0] - q[1]);
      const double id2 =
          s2 * (1.0 - v.h) + c2 * (p3 * c2 - double(q[2])) / (p3 * c2 + double(q[2]));
      if (std::abs(id1) > 1e-10 || std::abs(id2) > 1e-10) ++id_violations;

      const double d = 1e-6;
      const HGValues vp = hg_values(theta + d, q);
      const HGValues vm = hg_values(theta - d, q);
      const double hfd = (vp.h - vm.h) / (2.0 * d);
      const double gfd = (vp.g - vm.g) / (2.0 * d);
      if (std::abs(hfd - v.h_prime) > 1e-6 * std::max(1.0, std::abs(v.h_prime)) ||
          std::abs(gfd - v.g_prime) > 1e-6 * std::max(1.0, std::abs(v.g_prime))) {
        ++fd_violations;
      }
    }
  }
  r.pass = checked > 0 && id_violations == 0 && fd_violations == 0 &&
           static_cast<int>(qs.size()) >= 3 * per_case;
  std::ostringstream os;
  os << "q triples=" << qs.size() << ", theta samples=" << checked
     << ", identity violations=" << id_violations << ", derivative violations=" << fd_violations;
  r.details = os.str();
  return r;
}

// C6: the flat-plane construction succeeds with tight residuals for every
// enumerated candidate, per construction case.
CheckResult check_wilking_construction(VerifyLevel level, std::uint64_t seed,
                                       const VerifyTolerances& tol) {
  (void)seed;
  CheckResult r{"C6", "doubled-metric flat-plane construction", false, ""};
  const int per_case = level == VerifyLevel::Full ? 10 : 3;
  const CandidateLists lists = enumerate_candidates(per_case);

  long built = 0, invalid = 0;
  const auto run = [&](const std::vector<Triple>& qs) {
    for (const Triple& q : qs) {
      const AlmposResult res = almpos_case_engine(q);
      ++built;
      if (!res.certificate.valid(tol.certificate_residual, 1e-10, tol.zero_curvature, 1e-10)) {
        ++invalid;
      }
    }
  };
  run(lists.case_2a);
  run(lists.case_2b);
  run(lists.case_2c);

  r.pass = built == 3 * per_case && invalid == 0;
  std::ostringstream os;
  os << "candidates per case=" << per_case << ", certificates=" << built
     << ", invalid=" << invalid;
  r.details = os.str();
  return r;
}

// C7: every point sampled from V is certified, and V-membership only
// depends on the orbit invariants.
CheckResult check_open_set_V(VerifyLevel level, std::uint64_t seed,
                             const VerifyTolerances& tol) {
  CheckResult r{"C7", "open set V sampling and orbit invariance", false, ""};
  const int per_case = level == VerifyLevel::Full ? 10 : 2;
  const int points = level == VerifyLevel::Full ? 1000 : 50;
  const int translations = level == VerifyLevel::Full ? 100 : 10;
  const CandidateLists lists = enumerate_candidates(per_case);
  std::vector<Triple> qs;
  qs.insert(qs.end(), lists.case_2a.begin(), lists.case_2a.end());
  qs.insert(qs.end(), lists.case_2b.begin(), lists.case_2b.end());
  qs.insert(qs.end(), lists.case_2c.begin(), lists.case_2c.end());

  const CurvatureOracle oracle(LeftInvariantMetric::deformed(1.0));
  long cert_failures = 0, invariant_failures = 0, membership_failures = 0;
  long total_points = 0;
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    const AlmposResult res = almpos_case_engine(qs[qi]);
    Rng rng(Rng::derive(seed ^ (0xC7ull + qi), 0));
    for (int i = 0; i < points; ++i) {
      const FPoint f = res.V.sample(rng);
      ++total_points;
      auto cert = build_wilking_certificate(f.theta, f.alpha, res.q, 1.0, oracle);
      if (!cert || !cert->valid(tol.certificate_residual, 1e-10, tol.zero_curvature, 1e-10)) {
        ++cert_failures;
      }

      const SU3Point A = f.materialize();
      const auto inv = orbit_invariants(A);
      const bool member = res.V.contains(A);
      if (!member) ++membership_failures;
      for (int tr = 0; tr < translations; ++tr) {
        const KElement u = haar_k(rng);
        const SU3Point d = random_diagonal_su3(rng);
        const SU3Point B = SU3Point::unchecked(u.m * A.m * d.m);
        const auto invb = orbit_invariants(B);
        for (int c = 0; c < 3; ++c) {
          if (std::abs(inv[c] - invb[c]) > 1e-12) ++invariant_failures;
        }
        if (res.V.contains(B) != member) ++membership_failures;
      }
    }
  }
  r.pass = total_points > 0 && cert_failures == 0 && invariant_failures == 0 &&
           membership_failures == 0;
  std::ostringstream os;
  os << "points=" << total_points << " over " << qs.size()
     << " candidates, certificate failures=" << cert_failures
     << ", invariant failures=" << invariant_failures
     << ", membership failures=" << membership_failures;
  r.details = os.str();
  return r;
}

// C8: the eigenvalue decision for the second horizontality equation agrees
// with the intermediate-value path search.
CheckResult check_solvability_cross(VerifyLevel level, std::uint64_t seed) {
  CheckResult r{"C8", "eigenvalue vs path-bisection solvability", false, ""};
  const int n = level == VerifyLevel::Full ? 1000 : 300;
  long disagreements = 0, bad_witness = 0, solvable = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(seed ^ 0xC8ull, static_cast<std::uint64_t>(i)));
    Triple p{}, q{};
    for (int c = 0; c < 3; ++c) q[c] = Int(std::floor(rng.uniform(-5.0, 6.0)));
    p[0] = Int(std::floor(rng.uniform(-5.0, 6.0)));
    p[1] = Int(std::floor(rng.uniform(-5.0, 6.0)));
    p[2] = q[0] + q[1] + q[2] - p[0] - p[1];
    const PQPair pair{p, q};
    const SU3Point A = haar_su3(rng);

    const auto ke = solve_y1_horizontality(A, pair);
    const auto ki = solve_y1_horizontality_ivt(A, pair);
    if (ke.has_value() != ki.has_value()) ++disagreements;
    if (ke && std::abs(fA(A, pair, *ke)) > 1e-10) ++bad_witness;
    if (ki && std::abs(fA(A, pair, *ki)) > 1e-10) ++bad_witness;
    if (ke) ++solvable;
  }
  r.pass = disagreements == 0 && bad_witness == 0 && solvable > 0 && solvable < n;
  std::ostringstream os;
  os << "samples=" << n << ", solvable=" << solvable << ", disagreements=" << disagreements
     << ", witness residual failures=" << bad_witness;
  r.details = os.str();
  return r;
}

}  // namespace

CandidateLists enumerate_candidates(int per_case) {
  CandidateLists out;
  const auto full = [&] {
    return static_cast<int>(out.case_2a.size()) >= per_case &&
           static_cast<int>(out.case_2b.size()) >= per_case &&
           static_cast<int>(out.case_2c.size()) >= per_case;
  };
  for (Int q1 = 1; q1 <= 40 && !full(); ++q1) {
    for (Int q2 = -q1; q2 <= q1 && !full(); ++q2) {
      for (Int q3 = -40; q3 <= 40 && !full(); ++q3) {
        const Triple q{q1, q2, q3};
        if (q1 + q2 + q3 < 0) continue;
        CandidateReport rep;
        try {
          rep = wilking_candidate_filter(q);
        } catch (const NotPairwiseCoprime&) {
          continue;
        }
        if (rep.verdict != CandidateVerdict::NewCandidate) continue;
        switch (almpos_routing(rep.normalized_q)) {
          case AlmposCase::Case2a:
            if (static_cast<int>(out.case_2a.size()) < per_case) out.case_2a.push_back(q);
            break;
          case AlmposCase::Case2b:
          case AlmposCase::Case2bDegenerate:
            if (static_cast<int>(out.case_2b.size()) < per_case) out.case_2b.push_back(q);
            break;
          case AlmposCase::Case2c:
            if (static_cast<int>(out.case_2c.size()) < per_case) out.case_2c.push_back(q);
            break;
        }
      }
    }
  }
  return out;
}

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerifyReport run_verification(VerifyLevel level, std::uint64_t seed,
                              const VerifyTolerances& tol) {
  VerifyReport report;
  report.level = level;
  report.seed = seed;
  report.t = 1.0;
  report.checks.push_back(check_classification_sweep(level));
  report.checks.push_back(check_criterion_oracle(level, seed, tol));
  report.checks.push_back(check_case4_everywhere(level, seed, tol));
  report.checks.push_back(check_case3_open_set(level, seed, tol));
  report.checks.push_back(check_hg_identities(level, seed));
  report.checks.push_back(check_wilking_construction(level, seed, tol));
  report.checks.push_back(check_open_set_V(level, seed, tol));
  report.checks.push_back(check_solvability_cross(level, seed));
  return report;
}

Json to_json(const VerifyReport& report) {
  Json out;
  out["level"] = report.level == VerifyLevel::Full ? "full" : "fast";
  out["seed"] = report.seed;
  out["t"] = report.t;
  Json checks = Json::array();
  for (const CheckResult& c : report.checks) {
    checks.push_back(Json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  }
  out["checks"] = checks;
  out["all_pass"] = report.all_pass();
  return out;
}

std::string render_text(const VerifyReport& report) {
  std::ostringstream os;
  for (const CheckResult& c : report.checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " — " << c.details << "\n";
  }
  os << (report.all_pass() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
  return os.str();
}

}  // namespace esch
