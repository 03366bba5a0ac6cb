#include "eschlab/eschenburg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace esch {

namespace {

// First column (v, -u)/|(u,v)| annihilates the functional x -> u x1 + v x2;
// completed to a special unitary block so k33 = 1.
KElement annihilator_k(Complex u, Complex v) {
  const double n = std::sqrt(std::norm(u) + std::norm(v));
  if (!(n > 0.0)) {
    return KElement{};
  }
  Mat2 b;
  b << v / n, std::conj(u) / n, -u / n, std::conj(v) / n;
  return KElement::from_block(b);
}

KElement k_from_first_column(Complex v0, Complex v1) {
  Mat2 b;
  b << v0, -std::conj(v1), v1, std::conj(v0);
  return KElement::from_block(b);
}

KElement k_01() { return k_from_first_column(Complex{0, 0}, Complex{1, 0}); }

double sign_canonical(Eigen::VectorXd& c) {
  for (int i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > 1e-12) {
      if (c(i) < 0) c = -c;
      return 1.0;
    }
  }
  return 1.0;
}

}  // namespace

double y3_horizontality_residual(const SU3Point& A, const PQPair& pair) {
  double lhs = 0.0;
  for (int j = 0; j < 3; ++j) lhs += std::norm(A.m(j, 2)) * double(pair.p[j]);
  return lhs - double(pair.q[2]);
}

bool y3_horizontal_at(const SU3Point& A, const PQPair& pair, double tol) {
  return std::abs(y3_horizontality_residual(A, pair)) < tol;
}

Mat2 hermitian_form(const SU3Point& A, const PQPair& pair) {
  const Eigen::Matrix<Complex, 3, 2> c = A.m.leftCols<2>();
  Eigen::Vector3d p;
  for (int i = 0; i < 3; ++i) p(i) = double(pair.p[i]);
  Mat2 h = c.adjoint() * p.asDiagonal() * c;
  h(0, 0) -= double(pair.q[0]);
  h(1, 1) -= double(pair.q[1]);
  return 0.5 * (h + h.adjoint());
}

double fA(const SU3Point& A, const PQPair& pair, const KElement& k) {
  const Mat3 m = A.m * k.m;
  double lhs = 0.0;
  for (int j = 0; j < 3; ++j) lhs += std::norm(m(j, 0)) * double(pair.p[j]);
  return lhs - std::norm(k.m(0, 0)) * double(pair.q[0]) -
         std::norm(k.m(1, 0)) * double(pair.q[1]);
}

std::optional<KElement> solve_y1_horizontality(const SU3Point& A, const PQPair& pair, double tol) {
  const Mat2 h = hermitian_form(A, pair);
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(1);
  if (lmin > tol || lmax < -tol) return std::nullopt;

  // v = cos(s) u_min + sin(s) u_max zeroes the form when
  // tan^2(s) = -lmin/lmax (clamping the straddle at the boundary).
  const double neg = std::max(-lmin, 0.0);
  const double pos = std::max(lmax, 0.0);
  const double s = std::atan2(std::sqrt(neg), std::sqrt(pos));
  const Eigen::Vector2cd v =
      std::cos(s) * es.eigenvectors().col(0) + std::sin(s) * es.eigenvectors().col(1);
  return k_from_first_column(v(0), v(1));
}

std::optional<KElement> solve_y1_horizontality_ivt(const SU3Point& A, const PQPair& pair, double tol) {
  const Mat2 h = hermitian_form(A, pair);
  const double a = h(0, 0).real();
  const double b = h(1, 1).real();
  const Complex off = h(0, 1);
  // Phase-align the rotation path so f(s) = cos^2(s) a + sin^2(s) b
  // - 2 cos(s) sin(s) |off| sweeps the full range of the form on [0, pi].
  const Complex phase = (std::abs(off) > 0.0) ? -std::conj(off) / std::abs(off) : Complex{1, 0};
  const double r = std::abs(off);

  const auto f = [&](double s) {
    const double c = std::cos(s), sn = std::sin(s);
    return c * c * a + sn * sn * b - 2.0 * c * sn * r;
  };
  const auto k_at = [&](double s) {
    return k_from_first_column(Complex{std::cos(s), 0.0}, phase * std::sin(s));
  };

  // Critical points of f on (0, pi): tan(2s) = -2r / (a - b).
  std::vector<double> nodes{0.0, M_PI};
  const double theta = std::atan2(-2.0 * r, a - b);
  for (double two_s : {theta, theta + M_PI, theta + 2.0 * M_PI}) {
    const double s = two_s / 2.0;
    if (s > 0.0 && s < M_PI) nodes.push_back(s);
  }
  double s_lo = 0.0, s_hi = 0.0;
  double fmin = f(0.0), fmax = f(0.0);
  for (double s : nodes) {
    const double v = f(s);
    if (v < fmin) { fmin = v; s_lo = s; }
    if (v > fmax) { fmax = v; s_hi = s; }
  }
  if (fmin > tol || fmax < -tol) return std::nullopt;
  if (std::abs(fmin) <= tol) return k_at(s_lo);
  if (std::abs(fmax) <= tol) return k_at(s_hi);

  // Sign change between the extremal path points; bisect for the zero.
  double lo = s_lo, hi = s_hi;  // f(lo) < 0 < f(hi)
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (std::abs(v) < 1e-14) { lo = hi = mid; break; }
    if (v < 0.0) lo = mid; else hi = mid;
  }
  return k_at(0.5 * (lo + hi));
}

HorizontalityReport horizontality_report(const SU3Point& A, const PQPair& pair, double tol) {
  HorizontalityReport rep;
  rep.A = A;
  rep.diagonal_residual = y3_horizontality_residual(A, pair);
  rep.hermitian = hermitian_form(A, pair);
  Eigen::SelfAdjointEigenSolver<Mat2> es(rep.hermitian);
  rep.eigen_min = es.eigenvalues()(0);
  rep.eigen_max = es.eigenvalues()(1);
  rep.y1_solvable = rep.eigen_min <= tol && rep.eigen_max >= -tol;
  if (rep.y1_solvable) rep.witness_k = solve_y1_horizontality(A, pair, tol);
  return rep;
}

bool ZeroPlaneCertificate::valid(double res_tol, double curv_tol) const {
  return residuals.horizontality_primary < res_tol &&
         residuals.horizontality_companion < res_tol && residuals.bracket_full < res_tol &&
         residuals.bracket_k < res_tol && std::abs(residuals.curvature) < curv_tol;
}

ZeroPlaneCertificate::Residuals replay_certificate(const ZeroPlaneCertificate& cert,
                                                   const CurvatureOracle& oracle) {
  ZeroPlaneCertificate::Residuals r;
  const Su3Vector vert = vertical_vector(cert.A, cert.pair);
  r.horizontality_primary = std::abs(inner0(phi(cert.primary, cert.t), vert));
  r.horizontality_companion = std::abs(inner0(phi(cert.companion, cert.t), vert));
  r.bracket_full = bracket(phi(cert.primary, cert.t), phi(cert.companion, cert.t)).m.norm();
  const KPSplit sp = split_kp(cert.primary);
  const KPSplit sc = split_kp(cert.companion);
  r.bracket_k = bracket(sp.k, sc.k).m.norm();
  r.curvature = oracle.sectional(cert.primary, cert.companion);
  return r;
}

ZeroPlaneCertificate::Residuals replay_certificate(const ZeroPlaneCertificate& cert) {
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(cert.t));
  return replay_certificate(cert, oracle);
}

std::optional<ZeroPlaneCertificate> build_certificate(const SU3Point& A, const PQPair& pair,
                                                      double t, const CurvatureOracle& oracle) {
  const Su3Vector vert = vertical_vector(A, pair);
  const auto& basis = standard_basis();

  ZeroPlaneCertificate cert;
  cert.A = A;
  cert.pair = pair;
  cert.t = t;

  if (y3_horizontal_at(A, pair)) {
    // Y3 is horizontal.  Y3 is central in k, so any horizontal k-vector
    // independent of Y3 spans a flat plane with it.
    cert.kind = ZeroPlaneCertificate::Kind::ViaY3;
    cert.primary = Y3() * (1.0 / Y3().norm0());

    Eigen::Vector4d w;
    for (int i = 0; i < 4; ++i) w(i) = inner0(basis[i], vert);
    // Orthonormal set spanning the forbidden directions: the Y3 axis (basis
    // index 3) and the vertical constraint.
    std::vector<Eigen::Vector4d> forbidden;
    forbidden.push_back(Eigen::Vector4d::Unit(3));
    Eigen::Vector4d w2 = w - w(3) * Eigen::Vector4d::Unit(3);
    if (w2.norm() > 1e-12) forbidden.push_back(w2.normalized());

    Eigen::Vector4d bestc = Eigen::Vector4d::Zero();
    double bestn = -1.0;
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector4d c = Eigen::Vector4d::Unit(i);
      for (const auto& f : forbidden) c -= f.dot(c) * f;
      if (c.norm() > bestn) {
        bestn = c.norm();
        bestc = c;
      }
    }
    Eigen::VectorXd cc = bestc.normalized();
    sign_canonical(cc);
    Mat3 x = Mat3::Zero();
    for (int i = 0; i < 4; ++i) x += cc(i) * basis[i].m;
    cert.companion = Su3Vector(x);
  } else if (auto k = solve_y1_horizontality(A, pair)) {
    // Ad_k Y1 is horizontal; companions live in Ad_k of the centralizer
    // slice p' = {X in p : x13 = x31 = 0}.
    cert.kind = ZeroPlaneCertificate::Kind::ViaAdkY1;
    cert.k = *k;
    const Su3Vector y = adjoint(*k, Y1());
    cert.primary = y * (1.0 / y.norm0());

    const Su3Vector w1 = adjoint(*k, basis[6]);
    const Su3Vector w2 = adjoint(*k, basis[7]);
    const double c1 = inner0(w1, vert);
    const double c2 = inner0(w2, vert);
    Eigen::VectorXd cc(2);
    if (std::hypot(c1, c2) < 1e-12) {
      cc << 1.0, 0.0;
    } else {
      cc << -c2, c1;
      cc.normalize();
    }
    sign_canonical(cc);
    cert.companion = Su3Vector(cc(0) * w1.m + cc(1) * w2.m);
  } else {
    return std::nullopt;
  }

  cert.residuals = replay_certificate(cert, oracle);
  return cert;
}

std::optional<ZeroPlaneCertificate> build_certificate(const SU3Point& A, const PQPair& pair,
                                                      double t) {
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(t));
  return build_certificate(A, pair, t, oracle);
}

bool OpenSetU::contains(const SU3Point& A) const { return margin(A) > 0.0; }

double OpenSetU::margin(const SU3Point& A) const {
  double s1 = -double(normalized.q[0]);
  double s2 = -double(normalized.q[1]);
  for (int i = 0; i < 3; ++i) {
    s1 += std::norm(A.m(i, 0)) * double(normalized.p[i]);
    s2 += std::norm(A.m(i, 1)) * double(normalized.p[i]);
  }
  return std::min(-s1, s2);
}

OpenSetU open_set_U(const PQPair& pair) {
  // Choose an isometric relabelling with p1 - q1 < 0 < p2 - q2; it exists
  // exactly when some product is negative.
  for (int swap = 0; swap < 2; ++swap) {
    PQPair base = pair;
    std::vector<Move> moves;
    if (swap) {
      const Move mv = Move::perm_q({1, 0, 2});
      base = apply_move(base, mv);
      moves.push_back(mv);
    }
    for (const Perm& s : kAllPerms) {
      const PQPair cand = apply_move(base, Move::perm_p(s));
      if (cand.p[0] - cand.q[0] < 0 && cand.p[1] - cand.q[1] > 0) {
        std::vector<Move> mv = moves;
        mv.push_back(Move::perm_p(s));
        return OpenSetU{cand, mv};
      }
    }
  }
  throw PreconditionFailed("open_set_U: no product is negative for " + pair.str());
}

namespace {

std::optional<std::pair<PQPair, std::vector<Move>>> positive_product_normalization(
    const PQPair& pair) {
  for (int swap = 0; swap < 2; ++swap) {
    PQPair base = pair;
    std::vector<Move> moves;
    if (swap) {
      const Move mv = Move::perm_q({1, 0, 2});
      base = apply_move(base, mv);
      moves.push_back(mv);
    }
    for (const Perm& s : kAllPerms) {
      const PQPair cand = apply_move(base, Move::perm_p(s));
      const __int128 prod =
          (__int128(cand.p[0]) - cand.q[0]) * (__int128(cand.p[1]) - cand.q[1]);
      if (prod > 0) {
        std::vector<Move> mv = moves;
        mv.push_back(Move::perm_p(s));
        return std::make_pair(cand, mv);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

CaseVerdictReport verify_case(const PQPair& pair, int samples, std::uint64_t seed, double t) {
  CaseVerdictReport rep;
  rep.pair = pair;
  rep.curvature_class = classify(pair);
  rep.samples = samples;
  rep.seed = seed;
  rep.t = t;

  const CurvatureOracle oracle(LeftInvariantMetric::deformed(t));

  int certificates = 0;
  double min_abs_eigen = std::numeric_limits<double>::infinity();
  double worst_residual = 0.0;
  bool all_emitted_valid = true;
  for (int i = 0; i < samples; ++i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const SU3Point A = haar_su3(rng);
    const auto h = horizontality_report(A, pair);
    min_abs_eigen = std::min(min_abs_eigen, std::min(std::abs(h.eigen_min), std::abs(h.eigen_max)));
    if (auto cert = build_certificate(A, pair, t, oracle)) {
      ++certificates;
      all_emitted_valid &= cert->valid();
      worst_residual = std::max(
          {worst_residual, cert->residuals.horizontality_primary,
           cert->residuals.horizontality_companion, cert->residuals.bracket_full,
           cert->residuals.bracket_k, std::abs(cert->residuals.curvature)});
    }
  }
  rep.certificate_fraction = samples > 0 ? double(certificates) / samples : 0.0;
  rep.min_abs_eigen = std::isfinite(min_abs_eigen) ? min_abs_eigen : 0.0;
  rep.max_invalid_residual = worst_residual;

  std::ostringstream notes;

  // Diagonal points: positively curved whenever the pair admits an isometric
  // relabelling with (p1-q1)(p2-q2) > 0.
  if (auto norm = positive_product_normalization(pair)) {
    rep.diagonal_check_applicable = true;
    rep.diagonal_normalization = norm->second;
    const int dsamples = std::max(1, samples / 4);
    rep.diagonal_samples = dsamples;
    int diag_certs = 0;
    for (int i = 0; i < dsamples; ++i) {
      Rng rng(Rng::derive(seed ^ 0xD1A6ull, static_cast<std::uint64_t>(i)));
      const SU3Point A = random_diagonal_su3(rng);
      if (build_certificate(A, norm->first, t, oracle)) ++diag_certs;
    }
    rep.diagonal_certificate_fraction = double(diag_certs) / dsamples;
  }

  // Open set U for pairs with a negative product: every member must carry a
  // certificate.
  if (rep.curvature_class == CurvatureClass::QuasiPositive) {
    const OpenSetU u = open_set_U(pair);
    rep.open_set_check_applicable = true;
    rep.open_set_normalization = u.moves;
    const int usamples = std::max(1, samples / 4);
    rep.open_set_samples = usamples;
    int hits = 0, certs = 0;
    std::uint64_t attempt = 0;
    while (hits < usamples && attempt < 1000ull * std::uint64_t(usamples)) {
      Rng rng(Rng::derive(seed ^ 0x05E7ull, attempt++));
      const SU3Point A = haar_su3(rng);
      if (!u.contains(A)) continue;
      ++hits;
      if (build_certificate(A, u.normalized, t, oracle)) ++certs;
    }
    rep.open_set_samples = hits;
    rep.open_set_certificate_fraction = hits > 0 ? double(certs) / hits : 0.0;
    if (hits < usamples) notes << "open-set sampler exhausted attempts; ";
  }

  // Flat case: negative-case analysis plus the explicit k-choices that make
  // f_A change sign.
  if (rep.curvature_class == CurvatureClass::FlatPlaneEverywhere) {
    const NegCaseResult neg = negcase_analysis(pair);
    rep.negcase_applicable = true;
    rep.negcase = static_cast<int>(neg.negcase);
    const PQPair& np = neg.normalized;
    const int esamples = std::max(1, samples / 4);
    rep.explicit_k_samples = esamples;
    int ok = 0;
    for (int i = 0; i < esamples; ++i) {
      Rng rng(Rng::derive(seed ^ 0xF1A7ull, static_cast<std::uint64_t>(i)));
      const SU3Point A = haar_su3(rng);
      bool good = false;
      switch (neg.negcase) {
        case NegCase::Case1: {
          good = fA(A, np, KElement{}) >= -1e-9 && fA(A, np, k_01()) <= 1e-9;
          break;
        }
        case NegCase::Case2: {
          // f_A(k) = 2 |a31 k11 + a32 k21|^2 - |k21|^2 for this pair.
          const KElement kr = haar_k(rng);
          const Complex e = A.m(2, 0) * kr.m(0, 0) + A.m(2, 1) * kr.m(1, 0);
          const double formula = 2.0 * std::norm(e) - std::norm(kr.m(1, 0));
          good = std::abs(fA(A, np, kr) - formula) < 1e-9;
          const KElement ka = annihilator_k(A.m(2, 0), A.m(2, 1));
          good = good && fA(A, np, ka) <= 1e-9 && fA(A, np, KElement{}) >= -1e-9;
          break;
        }
        case NegCase::Case3: {
          // f_A(k) = -|a11 k11 + a12 k21|^2 + |a31 k11 + a32 k21|^2.
          const KElement kr = haar_k(rng);
          const Complex e1 = A.m(0, 0) * kr.m(0, 0) + A.m(0, 1) * kr.m(1, 0);
          const Complex e3 = A.m(2, 0) * kr.m(0, 0) + A.m(2, 1) * kr.m(1, 0);
          const double formula = -std::norm(e1) + std::norm(e3);
          good = std::abs(fA(A, np, kr) - formula) < 1e-9;
          const KElement kpos = annihilator_k(A.m(0, 0), A.m(0, 1));
          const KElement kneg = annihilator_k(A.m(2, 0), A.m(2, 1));
          good = good && fA(A, np, kpos) >= -1e-9 && fA(A, np, kneg) <= 1e-9;
          break;
        }
      }
      if (good) ++ok;
    }
    rep.explicit_k_pass_fraction = double(ok) / esamples;
  }

  bool pass = all_emitted_valid;
  switch (rep.curvature_class) {
    case CurvatureClass::PositivelyCurved:
      pass = pass && rep.certificate_fraction == 0.0;
      if (rep.diagonal_check_applicable) pass = pass && rep.diagonal_certificate_fraction == 0.0;
      break;
    case CurvatureClass::AlmostPositive:
      pass = pass && rep.certificate_fraction == 0.0 && rep.diagonal_check_applicable &&
             rep.diagonal_certificate_fraction == 0.0;
      break;
    case CurvatureClass::QuasiPositive:
      pass = pass && rep.certificate_fraction > 0.0 && rep.certificate_fraction < 1.0 &&
             rep.diagonal_check_applicable && rep.diagonal_certificate_fraction == 0.0 &&
             rep.open_set_certificate_fraction == 1.0;
      break;
    case CurvatureClass::FlatPlaneEverywhere:
      pass = pass && rep.certificate_fraction == 1.0 && rep.explicit_k_pass_fraction == 1.0;
      break;
  }
  rep.pass = pass;
  rep.notes = notes.str();
  return rep;
}

}  // namespace esch
