#include "eschlab/wilking.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace esch {

namespace {

constexpr Complex kI{0.0, 1.0};

double p3_of(const Triple& q) { return double(q[0] + q[1] + q[2]); }

void require(bool ok, const char* flag) {
  if (!ok) throw DomainError(std::string("domain flag violated: ") + flag);
}

}  // namespace

DoubledVector DoubledVector::lift(const SU3Point& base, const Su3Vector& x, double t) {
  return DoubledVector{-1.0 * phi_inv(adjoint(base.inverse(), x), t), phi_inv(x, t)};
}

Su3Vector DoubledVector::generator(double t) const { return phi(right, t); }

double DoubledVector::reconstruction_residual(const SU3Point& base, double t) const {
  const Su3Vector x = generator(t);
  return (adjoint(base.inverse(), x).m + phi(left, t).m).norm();
}

double horizontal_test(const SU3Point& A, const PQPair& pair, const Su3Vector& x) {
  const Mat3 ip = diag_weights(pair.p);
  const Mat3 iq = diag_weights(pair.q);
  const Su3Vector w(A.m * ip * A.m.adjoint() - iq);
  return inner0(x, w);
}

SU3Point FPoint::materialize() const {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  Mat3 m;
  m << Complex{ca, 0}, Complex{-sa, 0}, Complex{0, 0},
      Complex{ct * sa, 0}, Complex{ct * ca, 0}, Complex{-st, 0},
      Complex{st * sa, 0}, Complex{st * ca, 0}, Complex{ct, 0};
  return SU3Point::from_matrix(m, 1e-12);
}

HGValues hg_values(double theta, const Triple& q) {
  const double p3 = p3_of(q);
  const double q1 = double(q[0]), q2 = double(q[1]), q3 = double(q[2]);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double scale = std::max(1.0, std::abs(p3) + std::abs(q3));

  require(q[0] != q[1], "q1 != q2");
  require(s2 > 1e-12, "sin(theta) != 0");
  const double dplus = p3 * c2 + q3;
  const double dminus = p3 * c2 - q3;
  require(std::abs(dplus) > 1e-12 * scale, "p3 cos^2(theta) + q3 != 0");
  require(std::abs(dminus) > 1e-12 * scale, "p3 cos^2(theta) - q3 != 0");

  HGValues v;
  v.theta = theta;
  v.h = ((p3 - q3) * c2 + q3 * s2) / (s2 * dplus);
  v.g = (p3 * q1 * c2 + p3 * q3 * s2 - q2 * q3) / ((q1 - q2) * dplus);
  v.beta = -2.0 * p3 * c2 / dplus;
  const double sc = std::sin(theta) * std::cos(theta);
  v.h_prime = -2.0 * sc * (p3 * p3 * c2 * c2 + 2.0 * p3 * q3 * s2 * c2 - q3 * q3) /
              (s2 * s2 * dplus * dplus);
  v.g_prime = 4.0 * p3 * q3 * q3 * sc / ((q1 - q2) * dplus * dplus);
  return v;
}

double condition_A(const SU3Point& A, const PQPair& pair, const KElement& k) {
  return fA(A, pair, k);
}

double condition_B(const SU3Point& A, const PQPair& pair, const KElement& k, const ZVector& z) {
  if (z.is_zero()) throw ZeroZ("condition B: Z must be nonzero");
  return inner0(adjoint(k, z.materialize()), vertical_vector(A, pair));
}

namespace {

Eigen::Vector2cd p_part_entries(const Su3Vector& x) {
  return Eigen::Vector2cd(x.m(0, 2), x.m(1, 2));
}

}  // namespace

double condition_C_defect(const SU3Point& A, const KElement& k, const ZVector& z) {
  if (z.is_zero()) throw ZeroZ("condition C: Z must be nonzero");
  const Mat3 ak = A.m * k.m;
  const Eigen::Vector2cd u = p_part_entries(adjoint(ak, Y1()));
  const Eigen::Vector2cd v = p_part_entries(adjoint(ak, z.materialize()));
  return std::abs(u(0) * v(1) - u(1) * v(0));
}

double condition_C_equality_residual(const SU3Point& A, const KElement& k, const ZVector& z) {
  if (z.is_zero()) throw ZeroZ("condition C: Z must be nonzero");
  const Mat3 ak = A.m * k.m;
  const KPSplit py = split_kp(adjoint(ak, Y1()));
  const KPSplit pz = split_kp(adjoint(ak, z.materialize()));
  return (py.p.m - pz.p.m).norm();
}

Eigen::Vector2cd adak_y1_p_closed_form(double theta, double alpha, const KElement& k) {
  const Complex k11 = k.m(0, 0), k12 = k.m(0, 1);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const Complex w = ca * k12 - sa * std::conj(k11);
  const Complex u = ca * k11 + sa * std::conj(k12);
  Eigen::Vector2cd out;
  out(0) = 3.0 * kI * std::sin(theta) * w * u;
  out(1) = -3.0 * kI * std::sin(theta) * std::cos(theta) * std::norm(w);
  return out;
}

Eigen::Vector2cd adak_z_p_closed_form(double theta, double alpha, const KElement& k,
                                      const ZVector& z) {
  const Complex k11 = k.m(0, 0), k12 = k.m(0, 1);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double ct = std::cos(theta), st = std::sin(theta);
  const Complex w = ca * k12 - sa * std::conj(k11);
  const Complex u = ca * k11 + sa * std::conj(k12);
  Eigen::Vector2cd out;
  out(0) = 3.0 * kI * st * w * u;
  out(1) = 3.0 * kI * std::tan(theta) * (ct * ct - st * st) * std::norm(u) +
           3.0 * kI * ct * st * z.beta;
  return out;
}

bool WilkingCertificate::valid(double res_tol, double horiz_tol, double curv_tol,
                               double beta_tol) const {
  return residuals.cond_A < res_tol && residuals.cond_B < res_tol &&
         residuals.cond_C_equality < res_tol && residuals.horizontality_y1 < horiz_tol &&
         residuals.horizontality_z < horiz_tol && residuals.beta_identities < beta_tol &&
         std::abs(curvatures[0]) < curv_tol && std::abs(curvatures[1]) < curv_tol;
}

namespace {

WilkingCertificate::Residuals compute_residuals(const WilkingCertificate& cert,
                                                const SU3Point& A, const PQPair& pair) {
  WilkingCertificate::Residuals r;
  r.cond_A = std::abs(condition_A(A, pair, cert.k));
  r.cond_B = std::abs(condition_B(A, pair, cert.k, cert.Z));
  r.cond_C_equality = condition_C_equality_residual(A, cert.k, cert.Z);
  r.cond_C_det = condition_C_defect(A, cert.k, cert.Z);

  const Su3Vector vert = vertical_vector(A, pair);
  const Su3Vector y = adjoint(cert.k, Y1());
  const Su3Vector z = adjoint(cert.k, cert.Z.materialize());
  r.horizontality_y1 = std::abs(inner0(y * (1.0 / y.norm0()), vert));
  r.horizontality_z = std::abs(inner0(z * (1.0 / z.norm0()), vert));

  const Triple& q = cert.q;
  const double p3 = p3_of(q);
  const double c2 = std::cos(cert.theta) * std::cos(cert.theta);
  const double s2 = std::sin(cert.theta) * std::sin(cert.theta);
  const double h = hg_values(cert.theta, q).h;
  const double beta1 = 2.0 * p3 * s2 * (1.0 - h) / (p3 * c2 - double(q[2]));
  const double beta2 = c2 * (1.0 + cert.beta) - s2 * (1.0 - h);
  const double beta3 = 6.0 * s2 * p3 * (1.0 - h) /
                       ((2.0 * c2 - s2) * p3 + double(q[0] + q[1] - 2 * q[2]));
  r.beta_identities = std::max({std::abs(cert.beta - beta1), std::abs(beta2),
                                std::abs(cert.beta - beta3)});
  return r;
}

}  // namespace

WilkingCertificate::Residuals replay_wilking_certificate(const WilkingCertificate& cert) {
  const SU3Point A = FPoint{cert.theta, cert.alpha}.materialize();
  return compute_residuals(cert, A, cohom2_pair(cert.q));
}

std::optional<WilkingCertificate> build_wilking_certificate(double theta, double alpha,
                                                            const Triple& q, double t,
                                                            const CurvatureOracle& oracle) {
  const double st = std::sin(theta), ct = std::cos(theta);
  if (std::abs(st) < 1e-9 || std::abs(ct) < 1e-9) {
    throw DomainError("build_wilking_certificate: theta is a multiple of pi/2");
  }
  const HGValues hg = hg_values(theta, q);
  if (!(hg.g > 0.0 && hg.g < 1.0)) {
    throw DomainError("build_wilking_certificate: g(theta) outside (0,1)");
  }

  // k11 = sqrt(g) solves the g-equation; the h-equation
  //   |sin(a) k11 - cos(a) conj(k12)|^2 = h
  // becomes  base - amp cos(gamma) = h  with k12 = sqrt(1-g) e^{i gamma}.
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double k11 = std::sqrt(hg.g);
  const double base = sa * sa * hg.g + ca * ca * (1.0 - hg.g);
  const double amp = 2.0 * sa * ca * std::sqrt(hg.g * (1.0 - hg.g));

  const auto lhs = [&](double gamma) { return base - amp * std::cos(gamma); };

  double gamma = 0.0;
  if (std::abs(amp) < 1e-15) {
    if (std::abs(base - hg.h) > 1e-12) return std::nullopt;
  } else {
    const double lo_v = lhs(0.0), hi_v = lhs(M_PI);
    const double lo_b = std::min(lo_v, hi_v), hi_b = std::max(lo_v, hi_v);
    if (hg.h < lo_b - 1e-12 || hg.h > hi_b + 1e-12) return std::nullopt;
    double lo = 0.0, hi = M_PI;
    if (lo_v > hi_v) std::swap(lo, hi);  // make lhs increasing from lo to hi
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (lhs(mid) < hg.h) lo = mid; else hi = mid;
      if (std::abs(lhs(0.5 * (lo + hi)) - hg.h) < 1e-12) break;
    }
    gamma = 0.5 * (lo + hi);
  }

  WilkingCertificate cert;
  cert.q = q;
  cert.t = t;
  cert.theta = theta;
  cert.alpha = alpha;
  cert.gamma = gamma;
  cert.beta = hg.beta;
  const Complex k12 = std::sqrt(1.0 - hg.g) * std::polar(1.0, gamma);
  Mat2 block;
  block << Complex{k11, 0.0}, k12, -std::conj(k12), Complex{k11, 0.0};
  cert.k = KElement::from_block(block);
  cert.Z.beta = hg.beta;
  cert.Z.z = 3.0 * kI * std::tan(theta) *
             (ca * Complex{k11, 0.0} + sa * std::conj(k12));

  const SU3Point A = FPoint{theta, alpha}.materialize();
  const PQPair pair = cohom2_pair(q);
  cert.residuals = compute_residuals(cert, A, pair);

  // Total-space curvature of the two projected planes.
  const Su3Vector y1k = adjoint(cert.k, Y1());
  const Su3Vector zk = adjoint(cert.k, cert.Z.materialize());
  const Mat3 ak = A.m * cert.k.m;
  const Su3Vector y1ak = adjoint(ak, Y1());
  const Su3Vector zak = adjoint(ak, cert.Z.materialize());
  cert.curvatures[0] = oracle.sectional(phi_inv(y1ak, t), phi_inv(zak, t));
  cert.curvatures[1] = oracle.sectional(phi_inv(y1k, t), phi_inv(zk, t));
  return cert;
}

std::optional<WilkingCertificate> build_wilking_certificate(double theta, double alpha,
                                                            const Triple& q, double t) {
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(t));
  return build_wilking_certificate(theta, alpha, q, t, oracle);
}

std::array<double, 3> orbit_invariants(const SU3Point& A) {
  return {std::abs(A.m(2, 0)), std::abs(A.m(2, 1)), std::abs(A.m(2, 2))};
}

FPoint canonical_fpoint(const SU3Point& A) {
  const auto inv = orbit_invariants(A);
  FPoint f;
  f.theta = std::atan2(std::hypot(inv[0], inv[1]), inv[2]);
  f.alpha = (inv[0] + inv[1] > 0.0) ? std::atan2(inv[0], inv[1]) : 0.0;
  return f;
}

namespace {

// The emitted open set keeps h and g this far inside (0,1).  Near the
// boundary tan(theta) blows up and certificate residuals scale like
// eps / (1-h); the margin keeps every member certifiable at the stated
// tolerances while remaining an open set of flat-plane points.
constexpr double kHgMargin = 1e-4;

struct VMembership {
  bool ok = false;
  double margin = 0.0;
};

VMembership v_inequalities(double h, double g, double abs_sa, double abs_ca,
                           double hg_margin = 0.0) {
  if (!(h > hg_margin && h < 1.0 - hg_margin && g > hg_margin && g < 1.0 - hg_margin)) return {};
  const double lo = std::pow(abs_sa * std::sqrt(g) - abs_ca * std::sqrt(1.0 - g), 2);
  const double hi = std::pow(abs_sa * std::sqrt(g) + abs_ca * std::sqrt(1.0 - g), 2);
  if (!(lo < h && h < hi)) return {};
  return {true, std::min(h - lo, hi - h)};
}

}  // namespace

bool OpenSetV::contains(const FPoint& f) const {
  if (!(f.theta >= theta_lo && f.theta <= theta_hi)) return false;
  HGValues hg;
  try {
    hg = hg_values(f.theta, q);
  } catch (const DomainError&) {
    return false;
  }
  return v_inequalities(hg.h, hg.g, std::abs(std::sin(f.alpha)), std::abs(std::cos(f.alpha)),
                        kHgMargin)
      .ok;
}

bool OpenSetV::contains(const SU3Point& A) const {
  const auto inv = orbit_invariants(A);
  const double sin2 = 1.0 - inv[2] * inv[2];
  if (sin2 <= 1e-12) return false;
  const double theta = std::atan2(std::sqrt(std::max(0.0, sin2)), inv[2]);
  if (!(theta >= theta_lo && theta <= theta_hi)) return false;
  HGValues hg;
  try {
    hg = hg_values(theta, q);
  } catch (const DomainError&) {
    return false;
  }
  const double denom = std::sqrt(sin2);
  return v_inequalities(hg.h, hg.g, inv[0] / denom, inv[1] / denom, kHgMargin).ok;
}

FPoint OpenSetV::sample(Rng& rng) const {
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    FPoint f;
    f.theta = rng.uniform(theta_lo, theta_hi);
    f.alpha = rng.uniform(0.0, M_PI / 2.0);
    if (contains(f)) return f;
  }
  throw Error("OpenSetV::sample: rejection sampling failed to hit the set");
}

OpenSetV open_set_V(double theta_lo, double theta_hi, const Triple& q) {
  constexpr int kGrid = 2001;
  double best_margin = -1.0;
  double best_theta = 0.0;
  int best_idx = -1;
  std::vector<bool> valid(kGrid, false);
  for (int i = 0; i < kGrid; ++i) {
    const double theta = theta_lo + (theta_hi - theta_lo) * (i + 0.5) / kGrid;
    try {
      const HGValues hg = hg_values(theta, q);
      if (hg.h > kHgMargin && hg.h < 1.0 - kHgMargin && hg.g > kHgMargin &&
          hg.g < 1.0 - kHgMargin) {
        valid[i] = true;
        const double margin = std::min({hg.h, 1.0 - hg.h, hg.g, 1.0 - hg.g});
        if (margin > best_margin) {
          best_margin = margin;
          best_theta = theta;
          best_idx = i;
        }
      }
    } catch (const DomainError&) {
    }
  }
  if (best_idx < 0) {
    throw EmptyWindow("open_set_V: no theta in the window with 0 < h,g < 1");
  }
  // Maximal contiguous valid run around the best point.
  int lo = best_idx, hi = best_idx;
  while (lo > 0 && valid[lo - 1]) --lo;
  while (hi + 1 < kGrid && valid[hi + 1]) ++hi;
  OpenSetV v;
  v.q = q;
  v.theta_lo = theta_lo + (theta_hi - theta_lo) * (lo + 0.5) / kGrid;
  v.theta_hi = theta_lo + (theta_hi - theta_lo) * (hi + 0.5) / kGrid;
  v.theta0 = best_theta;
  return v;
}

const char* to_string(AlmposCase c) {
  switch (c) {
    case AlmposCase::Case2a: return "2a";
    case AlmposCase::Case2b: return "2b";
    case AlmposCase::Case2bDegenerate: return "2b-degenerate";
    case AlmposCase::Case2c: return "2c";
  }
  return "?";
}

AlmposCase almpos_routing(const Triple& q) {
  if (q[1] < 0 && q[0] + q[1] >= 0) {
    return q[0] + q[1] == 0 ? AlmposCase::Case2bDegenerate : AlmposCase::Case2b;
  }
  if (q[1] + q[2] <= 0) return AlmposCase::Case2c;
  return AlmposCase::Case2a;
}

AlmposResult almpos_case_engine(const Triple& q_in, double t) {
  AlmposResult out;
  out.filter = wilking_candidate_filter(q_in);
  if (out.filter.verdict != CandidateVerdict::NewCandidate) {
    throw NotCandidate("almpos_case_engine: q is a known example (" +
                       std::string(to_string(out.filter.verdict)) + ")");
  }
  const Triple q = out.filter.normalized_q;
  out.q = q;
  out.engine_case = almpos_routing(q);
  const double p3 = p3_of(q);
  const double q1 = double(q[0]), q2 = double(q[1]), q3 = double(q[2]);
  (void)q1;

  double lo = 0.0, hi = 0.0;
  double radius = 0.0;
  switch (out.engine_case) {
    case AlmposCase::Case2bDegenerate:
      // Witness near zero; the lower edge stays away from theta = 0, where
      // p3 cos^2 - q3 (with p3 = q3) cancels catastrophically.
      out.theta0 = 0.0;
      lo = 0.05;
      hi = 0.3;
      break;
    case AlmposCase::Case2b:
      out.theta0 = std::acos(std::sqrt(q3 / p3));
      radius = 0.1;
      break;
    case AlmposCase::Case2c:
      out.theta0 = M_PI / 2.0;
      lo = M_PI / 2.0 - 0.3;
      hi = M_PI / 2.0 - 1e-6;
      break;
    case AlmposCase::Case2a: {
      const double c2 = -q3 * (q2 + q3) / ((q2 - q3) * p3);
      if (!(c2 > 0.0 && c2 < 1.0)) {
        throw WitnessSearchFailed("almpos_case_engine: case 2a center outside (0,1): cos^2 = " +
                                  std::to_string(c2));
      }
      out.theta0 = std::acos(std::sqrt(c2));
      radius = 0.1;
      break;
    }
  }

  // Scan for the theta witness, halving the bracket radius on windows that
  // contain no point with 0 < h,g < 1.
  constexpr int kGrid = 2001;
  double theta_witness = -1.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (radius > 0.0) {
      lo = std::max(1e-4, out.theta0 - radius);
      hi = std::min(M_PI / 2.0 - 1e-6, out.theta0 + radius);
    }
    double best_margin = -1.0;
    for (int i = 0; i < kGrid; ++i) {
      const double theta = lo + (hi - lo) * (i + 0.5) / kGrid;
      try {
        const HGValues hg = hg_values(theta, q);
        const double margin = std::min({hg.h, 1.0 - hg.h, hg.g, 1.0 - hg.g});
        if (margin > best_margin) {
          best_margin = margin;
          theta_witness = theta;
        }
      } catch (const DomainError&) {
      }
    }
    if (best_margin > 0.0) break;
    theta_witness = -1.0;
    if (radius == 0.0) break;
    radius *= 0.5;
  }
  if (theta_witness < 0.0) {
    throw WitnessSearchFailed("almpos_case_engine: no theta with 0 < h,g < 1 near theta0=" +
                              std::to_string(out.theta0) + " for case " +
                              to_string(out.engine_case));
  }
  out.theta_witness = theta_witness;
  out.hg = hg_values(theta_witness, q);

  // Alpha with the V-membership inequalities strict, maximizing the margin.
  double best_alpha = -1.0, best_margin = -1.0;
  for (int i = 1; i < kGrid; ++i) {
    const double alpha = (M_PI / 2.0) * i / kGrid;
    const VMembership m =
        v_inequalities(out.hg.h, out.hg.g, std::sin(alpha), std::cos(alpha));
    if (m.ok && m.margin > best_margin) {
      best_margin = m.margin;
      best_alpha = alpha;
    }
  }
  if (best_alpha < 0.0) {
    throw WitnessSearchFailed("almpos_case_engine: no alpha places h inside the reachable range");
  }
  out.alpha_witness = best_alpha;

  auto cert = build_wilking_certificate(theta_witness, best_alpha, q, t);
  if (!cert) {
    throw WitnessSearchFailed("almpos_case_engine: gamma equation unsolvable at the witness");
  }
  out.certificate = *cert;
  out.V = open_set_V(lo, hi, q);
  return out;
}

}  // namespace esch
