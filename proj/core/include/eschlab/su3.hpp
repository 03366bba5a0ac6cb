#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>

#include "eschlab/errors.hpp"
#include "eschlab/rng.hpp"
#include "eschlab/triples.hpp"

namespace esch {

using Complex = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kSu3Tol = 1e-12;
inline constexpr double kGroupTol = 1e-10;

// Element of su(3): 3x3 complex, skew-Hermitian, traceless.
struct Su3Vector {
  Mat3 m = Mat3::Zero();

  Su3Vector() = default;
  explicit Su3Vector(const Mat3& mat) : m(mat) {}

  // Checked construction.
  static Su3Vector from_matrix(const Mat3& mat, double tol = kSu3Tol);

  double norm0() const;  // sqrt(inner0(X, X))
  bool is_zero(double tol = kSu3Tol) const { return m.norm() <= tol; }

  Su3Vector operator+(const Su3Vector& o) const { return Su3Vector(m + o.m); }
  Su3Vector operator-(const Su3Vector& o) const { return Su3Vector(m - o.m); }
  Su3Vector operator-() const { return Su3Vector(-m); }
  Su3Vector operator*(double s) const { return Su3Vector(m * s); }
};

inline Su3Vector operator*(double s, const Su3Vector& x) { return x * s; }

// Point of SU(3).
struct SU3Point {
  Mat3 m = Mat3::Identity();

  SU3Point() = default;

  // Checked construction; re-orthonormalizes through the polar factor when
  // drift exceeds the group tolerance (long random walks stay on the group).
  static SU3Point from_matrix(const Mat3& mat, double tol = kGroupTol);

  SU3Point inverse() const { return unchecked(m.adjoint()); }
  static SU3Point unchecked(const Mat3& mat) {
    SU3Point a;
    a.m = mat;
    return a;
  }
  double unitarity_defect() const;
};

// Element of K = U(2) embedded in SU(3) as A -> diag(A, conj(det A)).
struct KElement {
  Mat3 m = Mat3::Identity();

  KElement() = default;

  static KElement from_block(const Mat2& u, double tol = kGroupTol);
  static KElement from_matrix(const Mat3& mat, double tol = kGroupTol);

  Mat2 block() const { return m.topLeftCorner<2, 2>(); }
  SU3Point point() const { return SU3Point::unchecked(m); }
};

// Two-parameter family spanning, together with Y1, the centralizer of Y1:
// diag(bi, bi, -2bi) with z in the (2,3) slot and -conj(z) in (3,2).
struct ZVector {
  double beta = 0.0;
  Complex z{0.0, 0.0};

  Su3Vector materialize() const;
  bool is_zero(double tol = kSu3Tol) const { return std::abs(beta) <= tol && std::abs(z) <= tol; }
};

// Velocity of the circle action at A, translated to the identity:
// Ad_{A^{-1}}(iP) - iQ with P = diag(p), Q = diag(q).
struct VerticalVector {
  SU3Point A;
  Su3Vector value;

  static VerticalVector compute(const SU3Point& A, const PQPair& pair);
  double replay_residual(const PQPair& pair) const;
};

// Bi-invariant inner product <X,Y>_0 = -Re tr(XY).
double inner0(const Su3Vector& x, const Su3Vector& y);

struct KPSplit {
  Su3Vector k;  // u(2) block part (zero (1,3),(2,3),(3,1),(3,2) entries)
  Su3Vector p;  // complement (zero 2x2 block and (3,3) entry)
};
KPSplit split_kp(const Su3Vector& x);

// Metric operator of the Cheeger deformation in the direction of K:
// phi(X) = t/(t+1) X_k + X_p.  Throws InvalidParameter for t <= 0.
Su3Vector phi(const Su3Vector& x, double t);
Su3Vector phi_inv(const Su3Vector& x, double t);

Su3Vector bracket(const Su3Vector& x, const Su3Vector& y);
Su3Vector adjoint(const Mat3& g, const Su3Vector& x);
inline Su3Vector adjoint(const SU3Point& g, const Su3Vector& x) { return adjoint(g.m, x); }
inline Su3Vector adjoint(const KElement& k, const Su3Vector& x) { return adjoint(k.m, x); }

Su3Vector vertical_vector(const SU3Point& A, const PQPair& pair);

// Distinguished diagonal vectors of the zero-plane criteria.
const Su3Vector& Y1();  // i diag(-2, 1, 1)
const Su3Vector& Y3();  // i diag(1, 1, -2)

// Fixed inner0-orthonormal basis of su(3); entries 0..3 span k, 4..7 span p.
// Index 3 is Y3 / sqrt(6).
const std::array<Su3Vector, 8>& standard_basis();

Mat3 diag_weights(const Triple& w);  // i * diag(w)

// Seeded Haar samplers.
SU3Point haar_su3(Rng& rng);
KElement haar_k(Rng& rng);
SU3Point random_diagonal_su3(Rng& rng);
ZVector random_zvector(Rng& rng);
Su3Vector random_su3_vector(Rng& rng);

// z * A = diag(z^p) A diag(z^q)^{-1} for z = exp(i angle).
SU3Point circle_act(double angle, const SU3Point& A, const PQPair& pair);

}  // namespace esch
