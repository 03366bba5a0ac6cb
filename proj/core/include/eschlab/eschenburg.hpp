#pragma once

#include <optional>
#include <vector>

#include "eschlab/curvature.hpp"
#include "eschlab/su3.hpp"
#include "eschlab/triples.hpp"

namespace esch {

inline constexpr double kHorizontalityTol = 1e-10;
inline constexpr double kBracketTol = 1e-10;
inline constexpr double kCertificateTol = 1e-9;

// Residual of the diagonal horizontality equation
//   sum_j |a_{j3}|^2 p_j = q_3,
// which expresses that the left-invariant field Y3 is horizontal at A.
double y3_horizontality_residual(const SU3Point& A, const PQPair& pair);
bool y3_horizontal_at(const SU3Point& A, const PQPair& pair, double tol = kHorizontalityTol);

// 2x2 Hermitian form H_A = C* diag(p) C - diag(q1, q2) with C the first two
// columns of A.  The second horizontality equation f_A(k) = 0 has a solution
// iff the eigenvalues of H_A straddle zero.
Mat2 hermitian_form(const SU3Point& A, const PQPair& pair);

// f_A(k) = sum_j |(Ak)_{j1}|^2 p_j - |k11|^2 q1 - |k21|^2 q2.  Equals
// v* H_A v for the unit vector v = (k11, k21).
double fA(const SU3Point& A, const PQPair& pair, const KElement& k);

struct HorizontalityReport {
  SU3Point A;
  double diagonal_residual = 0.0;
  Mat2 hermitian;
  double eigen_min = 0.0;
  double eigen_max = 0.0;
  bool y1_solvable = false;
  std::optional<KElement> witness_k;
};
HorizontalityReport horizontality_report(const SU3Point& A, const PQPair& pair,
                                         double tol = kHorizontalityTol);

// Constructive solution of f_A(k) = 0 from the eigendecomposition of H_A:
// v = cos(s) u_min + sin(s) u_max with s chosen so the form vanishes,
// completed to k with k33 = 1.  Absent exactly when H_A is definite.
std::optional<KElement> solve_y1_horizontality(const SU3Point& A, const PQPair& pair,
                                   double tol = kHorizontalityTol);

// Independent decision route: walk the rotation path k(s), s in [0, pi],
// with the off-diagonal phase aligned so the path sweeps the full range of
// f_A, and bisect for a sign change.
std::optional<KElement> solve_y1_horizontality_ivt(const SU3Point& A, const PQPair& pair,
                                       double tol = kHorizontalityTol);

struct ZeroPlaneCertificate {
  enum class Kind { ViaY3, ViaAdkY1 };

  SU3Point A;
  PQPair pair;
  double t = 1.0;
  Kind kind = Kind::ViaY3;
  std::optional<KElement> k;  // present for ViaAdkY1
  Su3Vector primary;          // Y3 or Ad_k Y1
  Su3Vector companion;        // horizontal commuting companion X

  struct Residuals {
    double horizontality_primary = 0.0;
    double horizontality_companion = 0.0;
    double bracket_full = 0.0;  // |[phi X, phi Y]|
    double bracket_k = 0.0;     // |[X_k, Y_k]|
    double curvature = 0.0;     // oracle sectional curvature of the plane
  };
  Residuals residuals;

  bool valid(double res_tol = kCertificateTol, double curv_tol = kZeroCurvatureTol) const;
};

// Recomputes every residual from (A, pair, k, companion) alone.
ZeroPlaneCertificate::Residuals replay_certificate(const ZeroPlaneCertificate& cert);
ZeroPlaneCertificate::Residuals replay_certificate(const ZeroPlaneCertificate& cert,
                                                   const CurvatureOracle& oracle);

// Builds a flat horizontal plane at A when one of the two horizontality
// equations is solvable; absent otherwise.
std::optional<ZeroPlaneCertificate> build_certificate(const SU3Point& A, const PQPair& pair,
                                                      double t = 1.0);
std::optional<ZeroPlaneCertificate> build_certificate(const SU3Point& A, const PQPair& pair,
                                                      double t, const CurvatureOracle& oracle);

// The open set U = {A : sum |a_{i1}|^2 p_i < q_1 and sum |a_{i2}|^2 p_i > q_2}
// attached to a pair with a negative product, after the isometric
// re-labelling that makes p_1 - q_1 < 0 < p_2 - q_2.
struct OpenSetU {
  PQPair normalized;
  std::vector<Move> moves;
  bool contains(const SU3Point& A) const;
  // Margin from the two defining inequalities (positive inside).
  double margin(const SU3Point& A) const;
};
OpenSetU open_set_U(const PQPair& pair);

// Sampled verification of the curvature class behavior: certificate fraction
// over Haar points plus the class-specific special-set checks.
struct CaseVerdictReport {
  PQPair pair;
  CurvatureClass curvature_class = CurvatureClass::PositivelyCurved;
  int samples = 0;
  std::uint64_t seed = 0;
  double t = 1.0;

  double certificate_fraction = 0.0;
  double min_abs_eigen = 0.0;     // min over samples of min(|eigen of H_A|)
  double max_invalid_residual = 0.0;  // largest residual among emitted certificates

  // Diagonal points are positively curved when some product is positive
  // (checked on an isometric relabelling with (p1-q1)(p2-q2) > 0).
  bool diagonal_check_applicable = false;
  int diagonal_samples = 0;
  double diagonal_certificate_fraction = 0.0;
  std::vector<Move> diagonal_normalization;

  // Open-set check for pairs with a negative product: every point of U must
  // produce a certificate.
  bool open_set_check_applicable = false;
  int open_set_samples = 0;
  double open_set_certificate_fraction = 0.0;
  std::vector<Move> open_set_normalization;

  // Flat case: identity of the negative-case analysis plus the explicit
  // k-choice checks from the case-by-case solvability arguments.
  bool negcase_applicable = false;
  int negcase = 0;
  int explicit_k_samples = 0;
  double explicit_k_pass_fraction = 0.0;

  bool pass = false;
  std::string notes;
};

CaseVerdictReport verify_case(const PQPair& pair, int samples, std::uint64_t seed,
                              double t = 1.0);

}  // namespace esch
