#pragma once

#include <cstdint>
#include <optional>

#include "eschlab/su3.hpp"

namespace esch {

inline constexpr std::uint64_t kDefaultSeed = 0x45534348ull;
inline constexpr double kZeroCurvatureTol = 1e-8;

using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Vector8d = Eigen::Matrix<double, 8, 1>;

// Left-invariant metric <X,Y> = <X, phi(Y)>_0 described by the positive
// self-adjoint operator phi in the fixed inner0-orthonormal basis.
class LeftInvariantMetric {
 public:
  static LeftInvariantMetric deformed(double t);
  static LeftInvariantMetric bi_invariant();
  // G_ij = <B_i, phi(B_j)>_0; must be symmetric positive definite.
  static LeftInvariantMetric from_matrix(const Matrix8d& g, double tol = 1e-10);

  Su3Vector apply_phi(const Su3Vector& x) const;
  double inner(const Su3Vector& x, const Su3Vector& y) const;
  const Matrix8d& gram() const { return g_; }
  bool is_deformed() const { return t_.has_value(); }
  double deformation_t() const;

 private:
  Matrix8d g_ = Matrix8d::Identity();
  std::optional<double> t_;
};

struct TwoPlane {
  Su3Vector X;
  Su3Vector Y;
  SU3Point base;  // point of SU(3) the plane is attached to (identity by default)
};

// Dense curvature engine: a metric-orthonormal basis plus precomputed
// connection coefficients from the Koszul formula
//   2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>.
class CurvatureOracle {
 public:
  explicit CurvatureOracle(const LeftInvariantMetric& metric);

  // Sectional curvature <R(X,Y)Y,X> / (|X|^2|Y|^2 - <X,Y>^2).
  // Throws DegeneratePlane when the normalized Gram determinant is < 1e-12.
  double sectional(const Su3Vector& x, const Su3Vector& y) const;
  double sectional(const TwoPlane& plane) const { return sectional(plane.X, plane.Y); }

  Vector8d coords(const Su3Vector& x) const;       // metric-orthonormal coordinates
  Su3Vector from_coords(const Vector8d& c) const;
  double sectional_coords(const Vector8d& x, const Vector8d& y) const;
  double numerator_coords(const Vector8d& x, const Vector8d& y) const;

  const LeftInvariantMetric& metric() const { return metric_; }

 private:
  Vector8d nabla(const Vector8d& x, const Vector8d& y) const;
  Vector8d lie(const Vector8d& x, const Vector8d& y) const;

  LeftInvariantMetric metric_;
  std::array<Su3Vector, 8> frame_;          // metric-orthonormal basis
  std::array<Su3Vector, 8> phi_frame_;      // phi applied to the frame
  double gamma_[8][8][8];                   // <[E_a,E_b], E_c>_metric
  double conn_[8][8][8];                    // <nabla_{E_a} E_b, E_c>_metric
};

double sectional_curvature(const LeftInvariantMetric& metric, const TwoPlane& plane);

// Zero-curvature test for the deformed metric: the plane span{X, Y} is flat
// iff [phi X, phi Y] = 0 and [X_k, Y_k] = 0.  The residual is evaluated on a
// metric-orthonormalized spanning pair.
double eschenburg_zero_residual(const TwoPlane& plane, double t);
bool eschenburg_zero_criterion(const TwoPlane& plane, double t, double tol = 1e-9);

enum class ContainedVector { ContainsY3, ContainsAdkY1, Neither };

struct ContainmentResult {
  ContainedVector kind = ContainedVector::Neither;
  std::optional<KElement> k;  // recovered conjugator for ContainsAdkY1
};

// Decides which distinguished vector a flat plane contains (every flat plane
// of the deformed metric contains Y3 or some Ad_k Y1).  Preconditions:
// eschenburg_zero_criterion holds.
ContainmentResult zero_plane_containing_vector_check(const TwoPlane& plane, double t);

struct MinCurvatureOptions {
  int restarts = 64;
  int max_iters = 500;
  double grad_step = 1e-5;
  double grad_tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
};

struct MinCurvatureResult {
  double min_value = 0.0;
  TwoPlane argmin;
  std::uint64_t seed = 0;
  int restarts = 0;
  long total_iterations = 0;
};

// Minimum sectional curvature over 2-planes inside the 7-dimensional
// horizontal space at A (vectors X with <phi X, vertical>_0 = 0), computed by
// seeded random restarts plus projected gradient descent on orthonormal
// 2-frames.  Deterministic for a fixed seed.
MinCurvatureResult min_horizontal_curvature(const SU3Point& A, const PQPair& pair, double t,
                                            const MinCurvatureOptions& opts = {});

}  // namespace esch
