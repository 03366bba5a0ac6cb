#pragma once

#include <array>
#include <optional>

#include "eschlab/curvature.hpp"
#include "eschlab/eschenburg.hpp"
#include "eschlab/su3.hpp"
#include "eschlab/triples.hpp"

namespace esch {

// Horizontal lift of a tangent generator X into the doubled picture:
// X_hat = (-phi^{-1}(Ad_{base^{-1}} X), phi^{-1}(X)).
struct DoubledVector {
  Su3Vector left;
  Su3Vector right;

  static DoubledVector lift(const SU3Point& base, const Su3Vector& x, double t);
  Su3Vector generator(double t) const;  // X = phi(right)
  double reconstruction_residual(const SU3Point& base, double t) const;
};

// Membership functional of the doubled horizontal space at (A, I):
// returns <X, Ad_A(iP) - iQ>_0.
double horizontal_test(const SU3Point& A, const PQPair& pair, const Su3Vector& x);

// Fundamental-domain point of the cohomogeneity-two action.
struct FPoint {
  double theta = 0.0;
  double alpha = 0.0;
  SU3Point materialize() const;
};

// The rational trigonometric pair controlling flat planes for the doubled
// metric, with the closed-form derivatives.
struct HGValues {
  double theta = 0.0;
  double h = 0.0;
  double g = 0.0;
  double beta = 0.0;
  double h_prime = 0.0;
  double g_prime = 0.0;
};

// Throws DomainError naming the violated flag (sin(theta) != 0,
// p3 cos^2 +- q3 != 0, q1 != q2).
HGValues hg_values(double theta, const Triple& q);

// The three simultaneous conditions certifying a flat plane at [A].
double condition_A(const SU3Point& A, const PQPair& pair, const KElement& k);
double condition_B(const SU3Point& A, const PQPair& pair, const KElement& k, const ZVector& z);
// Modulus of the complex 2x2 determinant of the stacked p-parts (weak
// dependence test)...
double condition_C_defect(const SU3Point& A, const KElement& k, const ZVector& z);
// ...and the stronger equality (Ad_{Ak} Y1)_p = (Ad_{Ak} Z)_p the
// construction guarantees.
double condition_C_equality_residual(const SU3Point& A, const KElement& k, const ZVector& z);

// Closed forms of the (1,3)/(2,3) entries of the two p-parts at A(theta,
// alpha) for k with k33 = 1; kept next to the matrix computations they are
// checked against.
Eigen::Vector2cd adak_y1_p_closed_form(double theta, double alpha, const KElement& k);
Eigen::Vector2cd adak_z_p_closed_form(double theta, double alpha, const KElement& k,
                                      const ZVector& z);

struct WilkingCertificate {
  Triple q{};
  double t = 1.0;
  double theta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  KElement k;
  ZVector Z;

  struct Residuals {
    double cond_A = 0.0;
    double cond_B = 0.0;
    double cond_C_equality = 0.0;
    double cond_C_det = 0.0;
    double horizontality_y1 = 0.0;
    double horizontality_z = 0.0;
    double beta_identities = 0.0;
  };
  Residuals residuals;
  std::array<double, 2> curvatures{0.0, 0.0};  // projected planes sigma1, sigma2

  bool valid(double res_tol = 1e-9, double horiz_tol = 1e-10, double curv_tol = kZeroCurvatureTol,
             double beta_tol = 1e-10) const;
};

// Builds the certificate at A(theta, alpha): k11 = sqrt(g), k12 =
// sqrt(1-g) e^{i gamma} with gamma solved from the h-equation by bisection.
// Returns nullopt when h(theta) is outside the range reachable for this
// alpha; throws DomainError on domain-flag violations.
std::optional<WilkingCertificate> build_wilking_certificate(double theta, double alpha,
                                                            const Triple& q, double t = 1.0);
std::optional<WilkingCertificate> build_wilking_certificate(double theta, double alpha,
                                                            const Triple& q, double t,
                                                            const CurvatureOracle& oracle);

WilkingCertificate::Residuals replay_wilking_certificate(const WilkingCertificate& cert);

// Invariants of the U(2) x T^2 orbit through A and the fundamental-domain
// representative they determine.
std::array<double, 3> orbit_invariants(const SU3Point& A);
FPoint canonical_fpoint(const SU3Point& A);

// Open region of fundamental-domain points whose orbits all carry flat
// planes: theta in the window with 0 < h, g < 1 and
// (|sin a| sqrt(g) - |cos a| sqrt(1-g))^2 < h < (|sin a| sqrt(g) + |cos a| sqrt(1-g))^2.
struct OpenSetV {
  Triple q{};
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double theta0 = 0.0;

  bool contains(const FPoint& f) const;
  bool contains(const SU3Point& A) const;  // orbit-level membership
  FPoint sample(Rng& rng) const;
};
OpenSetV open_set_V(double theta_lo, double theta_hi, const Triple& q);  // throws EmptyWindow

enum class AlmposCase { Case2a, Case2b, Case2bDegenerate, Case2c };
const char* to_string(AlmposCase c);

// Construction used for a (normalized) new-candidate triple: the q2 < 0
// family goes through the q3/p3 center, the q2+q3 <= 0 family works near
// pi/2, the rest through the closed-form 2a center.
AlmposCase almpos_routing(const Triple& normalized_q);

struct AlmposResult {
  CandidateReport filter;
  Triple q{};  // normalized weights the engine worked with
  AlmposCase engine_case = AlmposCase::Case2a;
  double theta0 = 0.0;  // closed-form center of the search bracket
  double theta_witness = 0.0;
  double alpha_witness = 0.0;
  HGValues hg;
  WilkingCertificate certificate;
  OpenSetV V;
};

// Case engine: routes a new candidate to its construction, finds a theta
// witness with 0 < h, g < 1, emits the open set and a verified certificate.
AlmposResult almpos_case_engine(const Triple& q, double t = 1.0);

}  // namespace esch
