#include "eschlab/su3.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace esch {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat3 polar_unitary(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Mat3 fix_determinant(const Mat3& u) {
  // Divide out the cube root of the determinant's phase.
  const Complex d = u.determinant();
  const double phase = std::arg(d);
  return u * std::polar(1.0, -phase / 3.0);
}

}  // namespace

Su3Vector Su3Vector::from_matrix(const Mat3& mat, double tol) {
  if ((mat + mat.adjoint()).norm() > tol) {
    throw InvalidParameter("Su3Vector: matrix is not skew-Hermitian");
  }
  if (std::abs(mat.trace()) > tol) {
    throw InvalidParameter("Su3Vector: matrix is not traceless");
  }
  return Su3Vector(mat);
}

double Su3Vector::norm0() const { return std::sqrt(std::max(0.0, inner0(*this, *this))); }

double SU3Point::unitarity_defect() const {
  const double drift = (m * m.adjoint() - Mat3::Identity()).norm();
  const double det_drift = std::abs(m.determinant() - 1.0);
  return std::max(drift, det_drift);
}

SU3Point SU3Point::from_matrix(const Mat3& mat, double tol) {
  SU3Point a;
  a.m = mat;
  const double defect = a.unitarity_defect();
  if (defect <= tol) return a;
  if (defect > 0.5) {
    throw InvalidParameter("SU3Point: matrix is not close to SU(3)");
  }
  a.m = fix_determinant(polar_unitary(mat));
  if (a.unitarity_defect() > tol) {
    throw InvalidParameter("SU3Point: polar repair failed");
  }
  return a;
}

KElement KElement::from_block(const Mat2& u, double tol) {
  if ((u * u.adjoint() - Mat2::Identity()).norm() > tol) {
    throw InvalidParameter("KElement: 2x2 block is not unitary");
  }
  KElement k;
  k.m.setZero();
  k.m.topLeftCorner<2, 2>() = u;
  k.m(2, 2) = std::conj(u.determinant());
  return k;
}

KElement KElement::from_matrix(const Mat3& mat, double tol) {
  const double off = std::abs(mat(0, 2)) + std::abs(mat(1, 2)) + std::abs(mat(2, 0)) +
                     std::abs(mat(2, 1));
  if (off > tol) {
    throw InvalidParameter("KElement: matrix is not block diagonal");
  }
  KElement k = from_block(mat.topLeftCorner<2, 2>(), tol);
  if (std::abs(k.m(2, 2) - mat(2, 2)) > tol) {
    throw InvalidParameter("KElement: (3,3) entry is not conj(det) of the block");
  }
  return k;
}

Su3Vector ZVector::materialize() const {
  Mat3 m = Mat3::Zero();
  m(0, 0) = beta * kI;
  m(1, 1) = beta * kI;
  m(2, 2) = -2.0 * beta * kI;
  m(1, 2) = z;
  m(2, 1) = -std::conj(z);
  return Su3Vector(m);
}

VerticalVector VerticalVector::compute(const SU3Point& A, const PQPair& pair) {
  return VerticalVector{A, vertical_vector(A, pair)};
}

double VerticalVector::replay_residual(const PQPair& pair) const {
  return (value.m - vertical_vector(A, pair).m).norm();
}

double inner0(const Su3Vector& x, const Su3Vector& y) {
  return -(x.m * y.m).trace().real();
}

KPSplit split_kp(const Su3Vector& x) {
  Mat3 k = x.m;
  k(0, 2) = k(1, 2) = k(2, 0) = k(2, 1) = Complex{0.0, 0.0};
  return KPSplit{Su3Vector(k), Su3Vector(x.m - k)};
}

Su3Vector phi(const Su3Vector& x, double t) {
  if (!(t > 0.0)) throw InvalidParameter("phi: deformation parameter t must be positive");
  const KPSplit s = split_kp(x);
  return Su3Vector(t / (t + 1.0) * s.k.m + s.p.m);
}

Su3Vector phi_inv(const Su3Vector& x, double t) {
  if (!(t > 0.0)) throw InvalidParameter("phi_inv: deformation parameter t must be positive");
  const KPSplit s = split_kp(x);
  return Su3Vector((t + 1.0) / t * s.k.m + s.p.m);
}

Su3Vector bracket(const Su3Vector& x, const Su3Vector& y) {
  return Su3Vector(x.m * y.m - y.m * x.m);
}

Su3Vector adjoint(const Mat3& g, const Su3Vector& x) {
  return Su3Vector(g * x.m * g.adjoint());
}

Mat3 diag_weights(const Triple& w) {
  Mat3 m = Mat3::Zero();
  for (int i = 0; i < 3; ++i) m(i, i) = kI * double(w[i]);
  return m;
}

Su3Vector vertical_vector(const SU3Point& A, const PQPair& pair) {
  const Mat3 iP = diag_weights(pair.p);
  const Mat3 iQ = diag_weights(pair.q);
  return Su3Vector(A.m.adjoint() * iP * A.m - iQ);
}

const Su3Vector& Y1() {
  static const Su3Vector y = [] {
    Mat3 m = Mat3::Zero();
    m(0, 0) = -2.0 * kI;
    m(1, 1) = kI;
    m(2, 2) = kI;
    return Su3Vector(m);
  }();
  return y;
}

const Su3Vector& Y3() {
  static const Su3Vector y = [] {
    Mat3 m = Mat3::Zero();
    m(0, 0) = kI;
    m(1, 1) = kI;
    m(2, 2) = -2.0 * kI;
    return Su3Vector(m);
  }();
  return y;
}

const std::array<Su3Vector, 8>& standard_basis() {
  static const std::array<Su3Vector, 8> basis = [] {
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r6 = 1.0 / std::sqrt(6.0);
    std::array<Su3Vector, 8> b;
    Mat3 m;

    m.setZero();  // i diag(1,-1,0) / sqrt(2)
    m(0, 0) = kI * r2;
    m(1, 1) = -kI * r2;
    b[0] = Su3Vector(m);

    m.setZero();  // (e12 - e21) / sqrt(2)
    m(0, 1) = r2;
    m(1, 0) = -r2;
    b[1] = Su3Vector(m);

    m.setZero();  // i (e12 + e21) / sqrt(2)
    m(0, 1) = kI * r2;
    m(1, 0) = kI * r2;
    b[2] = Su3Vector(m);

    b[3] = Y3() * r6;

    m.setZero();  // (e13 - e31) / sqrt(2)
    m(0, 2) = r2;
    m(2, 0) = -r2;
    b[4] = Su3Vector(m);

    m.setZero();  // i (e13 + e31) / sqrt(2)
    m(0, 2) = kI * r2;
    m(2, 0) = kI * r2;
    b[5] = Su3Vector(m);

    m.setZero();  // (e23 - e32) / sqrt(2)
    m(1, 2) = r2;
    m(2, 1) = -r2;
    b[6] = Su3Vector(m);

    m.setZero();  // i (e23 + e32) / sqrt(2)
    m(1, 2) = kI * r2;
    m(2, 1) = kI * r2;
    b[7] = Su3Vector(m);

    return b;
  }();
  return basis;
}

SU3Point haar_su3(Rng& rng) {
  // QR of a complex Ginibre matrix with the R-diagonal phase correction
  // gives Haar measure on U(3); the cube-root determinant fix pushes it
  // forward to Haar on SU(3).
  Mat3 z;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) z(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Mat3> qr(z);
  Mat3 q = qr.householderQ();
  const Mat3 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 3; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex{1.0, 0.0};
  }
  return SU3Point::from_matrix(fix_determinant(q));
}

KElement haar_k(Rng& rng) {
  Mat2 z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) z(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Mat2> qr(z);
  Mat2 q = qr.householderQ();
  const Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex{1.0, 0.0};
  }
  return KElement::from_block(q);
}

SU3Point random_diagonal_su3(Rng& rng) {
  const double a = rng.uniform(0.0, 2.0 * M_PI);
  const double b = rng.uniform(0.0, 2.0 * M_PI);
  Mat3 m = Mat3::Zero();
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, b);
  m(2, 2) = std::polar(1.0, -(a + b));
  return SU3Point::unchecked(m);
}

ZVector random_zvector(Rng& rng) {
  ZVector z;
  z.beta = rng.normal();
  z.z = rng.complex_normal();
  return z;
}

Su3Vector random_su3_vector(Rng& rng) {
  const auto& basis = standard_basis();
  Mat3 m = Mat3::Zero();
  for (const Su3Vector& b : basis) m += rng.normal() * b.m;
  return Su3Vector(m);
}

SU3Point circle_act(double angle, const SU3Point& A, const PQPair& pair) {
  Mat3 l = Mat3::Zero(), r = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    l(i, i) = std::polar(1.0, angle * double(pair.p[i]));
    r(i, i) = std::polar(1.0, -angle * double(pair.q[i]));
  }
  return SU3Point::unchecked(l * A.m * r);
}

}  // namespace esch
