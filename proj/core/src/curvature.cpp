#include "eschlab/curvature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace esch {

LeftInvariantMetric LeftInvariantMetric::deformed(double t) {
  if (!(t > 0.0)) throw InvalidParameter("LeftInvariantMetric: t must be positive");
  LeftInvariantMetric m;
  m.g_.setIdentity();
  const double lk = t / (t + 1.0);
  for (int i = 0; i < 4; ++i) m.g_(i, i) = lk;
  m.t_ = t;
  return m;
}

LeftInvariantMetric LeftInvariantMetric::bi_invariant() {
  LeftInvariantMetric m;
  m.g_.setIdentity();
  return m;
}

LeftInvariantMetric LeftInvariantMetric::from_matrix(const Matrix8d& g, double tol) {
  if ((g - g.transpose()).norm() > tol) {
    throw InvalidParameter("LeftInvariantMetric: operator is not self-adjoint");
  }
  Eigen::SelfAdjointEigenSolver<Matrix8d> es(g);
  if (es.eigenvalues().minCoeff() <= tol) {
    throw InvalidParameter("LeftInvariantMetric: operator is not positive definite");
  }
  LeftInvariantMetric m;
  m.g_ = 0.5 * (g + g.transpose());
  return m;
}

double LeftInvariantMetric::deformation_t() const {
  if (!t_) throw InvalidParameter("LeftInvariantMetric: not a deformed metric");
  return *t_;
}

Su3Vector LeftInvariantMetric::apply_phi(const Su3Vector& x) const {
  if (t_) return phi(x, *t_);
  const auto& basis = standard_basis();
  Vector8d c;
  for (int i = 0; i < 8; ++i) c(i) = inner0(x, basis[i]);
  const Vector8d pc = g_ * c;
  Mat3 out = Mat3::Zero();
  for (int i = 0; i < 8; ++i) out += pc(i) * basis[i].m;
  return Su3Vector(out);
}

double LeftInvariantMetric::inner(const Su3Vector& x, const Su3Vector& y) const {
  return inner0(x, apply_phi(y));
}

CurvatureOracle::CurvatureOracle(const LeftInvariantMetric& metric) : metric_(metric) {
  const auto& basis = standard_basis();
  // Metric-orthonormal frame E = B L^{-T} from the Cholesky factor of the
  // Gram matrix.
  const Eigen::LLT<Matrix8d> llt(metric_.gram());
  const Matrix8d linv_t = llt.matrixL().toDenseMatrix().inverse().transpose();
  for (int a = 0; a < 8; ++a) {
    Mat3 e = Mat3::Zero();
    for (int i = 0; i < 8; ++i) e += linv_t(i, a) * basis[i].m;
    frame_[a] = Su3Vector(e);
    phi_frame_[a] = metric_.apply_phi(frame_[a]);
  }
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const Su3Vector br = bracket(frame_[a], frame_[b]);
      for (int c = 0; c < 8; ++c) gamma_[a][b][c] = inner0(br, phi_frame_[c]);
    }
  }
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      for (int c = 0; c < 8; ++c) {
        conn_[a][b][c] = 0.5 * (gamma_[a][b][c] - gamma_[b][c][a] + gamma_[c][a][b]);
      }
    }
  }
}

Vector8d CurvatureOracle::coords(const Su3Vector& x) const {
  Vector8d c;
  for (int a = 0; a < 8; ++a) c(a) = inner0(x, phi_frame_[a]);
  return c;
}

Su3Vector CurvatureOracle::from_coords(const Vector8d& c) const {
  Mat3 out = Mat3::Zero();
  for (int a = 0; a < 8; ++a) out += c(a) * frame_[a].m;
  return Su3Vector(out);
}

Vector8d CurvatureOracle::nabla(const Vector8d& x, const Vector8d& y) const {
  Vector8d out = Vector8d::Zero();
  for (int a = 0; a < 8; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < 8; ++b) {
      const double w = x(a) * y(b);
      if (w == 0.0) continue;
      for (int c = 0; c < 8; ++c) out(c) += w * conn_[a][b][c];
    }
  }
  return out;
}

Vector8d CurvatureOracle::lie(const Vector8d& x, const Vector8d& y) const {
  Vector8d out = Vector8d::Zero();
  for (int a = 0; a < 8; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < 8; ++b) {
      const double w = x(a) * y(b);
      if (w == 0.0) continue;
      for (int c = 0; c < 8; ++c) out(c) += w * gamma_[a][b][c];
    }
  }
  return out;
}

double CurvatureOracle::numerator_coords(const Vector8d& x, const Vector8d& y) const {
  // <R(X,Y)Y, X> with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
  // nabla_{[X,Y]} Z, evaluated on left-invariant extensions.
  const Vector8d r =
      nabla(x, nabla(y, y)) - nabla(y, nabla(x, y)) - nabla(lie(x, y), y);
  return r.dot(x);
}

double CurvatureOracle::sectional_coords(const Vector8d& x, const Vector8d& y) const {
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  const double xy = x.dot(y);
  const double gram = xx * yy - xy * xy;
  if (!(gram > 1e-12 * xx * yy)) {
    throw DegeneratePlane("sectional curvature: spanning vectors are (nearly) dependent");
  }
  return numerator_coords(x, y) / gram;
}

double CurvatureOracle::sectional(const Su3Vector& x, const Su3Vector& y) const {
  return sectional_coords(coords(x), coords(y));
}

double sectional_curvature(const LeftInvariantMetric& metric, const TwoPlane& plane) {
  return CurvatureOracle(metric).sectional(plane);
}

namespace {

// Metric-orthonormalize the spanning pair of a plane; throws on degeneracy.
std::pair<Su3Vector, Su3Vector> orthonormalize_pair(const TwoPlane& plane, double t) {
  const double nx2 = inner0(plane.X, phi(plane.X, t));
  if (!(nx2 > 0.0)) throw DegeneratePlane("plane: first spanning vector vanishes");
  const Su3Vector xh = plane.X * (1.0 / std::sqrt(nx2));
  const double proj = inner0(plane.Y, phi(xh, t));
  const Su3Vector y0 = plane.Y - proj * xh;
  const double ny2 = inner0(y0, phi(y0, t));
  const double scale = inner0(plane.Y, phi(plane.Y, t));
  if (!(ny2 > 1e-12 * std::max(scale, 1e-300))) {
    throw DegeneratePlane("plane: spanning vectors are (nearly) dependent");
  }
  return {xh, y0 * (1.0 / std::sqrt(ny2))};
}

}  // namespace

double eschenburg_zero_residual(const TwoPlane& plane, double t) {
  auto [x, y] = orthonormalize_pair(plane, t);
  const double full = bracket(phi(x, t), phi(y, t)).m.norm();
  const KPSplit sx = split_kp(x);
  const KPSplit sy = split_kp(y);
  const double kpart = bracket(sx.k, sy.k).m.norm();
  return std::max(full, kpart);
}

bool eschenburg_zero_criterion(const TwoPlane& plane, double t, double tol) {
  return eschenburg_zero_residual(plane, t) < tol;
}

ContainmentResult zero_plane_containing_vector_check(const TwoPlane& plane, double t) {
  if (!eschenburg_zero_criterion(plane, t)) {
    throw PreconditionFailed("containing-vector check: plane is not flat for the deformed metric");
  }
  auto [x, y] = orthonormalize_pair(plane, t);

  // Containment of Y3: project against an inner0-orthonormal spanning pair.
  {
    const double nx = inner0(x, x);
    const Su3Vector u = x * (1.0 / std::sqrt(nx));
    Su3Vector v = y - inner0(y, u) * u;
    v = v * (1.0 / std::sqrt(inner0(v, v)));
    const Su3Vector rem = Y3() - inner0(Y3(), u) * u - inner0(Y3(), v) * v;
    if (rem.norm0() / Y3().norm0() < 1e-8) {
      return {ContainedVector::ContainsY3, std::nullopt};
    }
  }

  // Otherwise look for a k-vector in the plane: solve for a combination with
  // vanishing p-part, then match it against the adjoint orbit of Y1.
  const auto& basis = standard_basis();
  Eigen::Matrix<double, 4, 2> mp;
  for (int i = 0; i < 4; ++i) {
    mp(i, 0) = inner0(x, basis[4 + i]);
    mp(i, 1) = inner0(y, basis[4 + i]);
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(mp, Eigen::ComputeFullV);
  if (svd.singularValues()(1) > 1e-7) return {ContainedVector::Neither, std::nullopt};
  const Eigen::Vector2d c = svd.matrixV().col(1);
  const Su3Vector w = c(0) * x + c(1) * y;

  const Complex w33 = w.m(2, 2);
  const double mu = w33.imag();
  if (std::abs(mu) < 1e-9 || std::abs(w33.real()) > 1e-8) {
    return {ContainedVector::Neither, std::nullopt};
  }
  const Su3Vector ws = w * (1.0 / mu);  // scaled so the (3,3) entry is i

  // Hermitian form of the 2x2 block; Ad_k Y1 has block eigenvalues {-2, 1}.
  const Mat2 herm = Complex{0.0, -1.0} * ws.m.topLeftCorner<2, 2>();
  Eigen::SelfAdjointEigenSolver<Mat2> es(herm);
  const Eigen::Vector2d ev = es.eigenvalues();
  if (std::abs(ev(0) + 2.0) > 1e-6 || std::abs(ev(1) - 1.0) > 1e-6) {
    return {ContainedVector::Neither, std::nullopt};
  }
  const KElement k = KElement::from_block(es.eigenvectors());
  if ((adjoint(k, Y1()).m - ws.m).norm() > 1e-6) {
    return {ContainedVector::Neither, std::nullopt};
  }
  return {ContainedVector::ContainsAdkY1, k};
}

namespace {

using Vector7d = Eigen::Matrix<double, 7, 1>;
using Frame72 = Eigen::Matrix<double, 7, 2>;

// Gram-Schmidt on the two columns; returns false when nearly dependent.
bool orthonormalize_frame(Frame72& f) {
  const double n0 = f.col(0).norm();
  if (n0 < 1e-12) return false;
  f.col(0) /= n0;
  f.col(1) -= f.col(0).dot(f.col(1)) * f.col(0);
  const double n1 = f.col(1).norm();
  if (n1 < 1e-9) return false;
  f.col(1) /= n1;
  return true;
}

}  // namespace

MinCurvatureResult min_horizontal_curvature(const SU3Point& A, const PQPair& pair, double t,
                                            const MinCurvatureOptions& opts) {
  const Su3Vector vert = vertical_vector(A, pair);
  if (vert.is_zero(1e-12)) {
    throw PreconditionFailed("min_horizontal_curvature: vertical vector vanishes at this point");
  }

  const CurvatureOracle oracle(LeftInvariantMetric::deformed(t));
  // Horizontality <phi X, V>_0 = 0 is Euclidean orthogonality to coords(V)
  // in the metric-orthonormal frame.
  const Vector8d v = oracle.coords(vert).normalized();
  Eigen::Matrix<double, 8, 7> h;
  {
    // Householder reflector sending v to (a multiple of) e0; its remaining
    // columns form an orthonormal basis of the horizontal space.
    Vector8d u = v;
    u(0) += (v(0) >= 0.0 ? 1.0 : -1.0);
    u.normalize();
    const Eigen::Matrix<double, 8, 8> refl =
        Eigen::Matrix<double, 8, 8>::Identity() - 2.0 * u * u.transpose();
    h = refl.rightCols<7>();
  }

  const auto objective = [&](const Frame72& f) {
    const Vector8d x = h * f.col(0);
    const Vector8d y = h * f.col(1);
    return oracle.numerator_coords(x, y);  // frame is orthonormal, Gram = 1
  };

  MinCurvatureResult best;
  best.min_value = std::numeric_limits<double>::infinity();
  best.seed = opts.seed;
  best.restarts = opts.restarts;

  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(Rng::derive(opts.seed, static_cast<std::uint64_t>(r)));
    Frame72 f;
    for (int i = 0; i < 7; ++i) {
      f(i, 0) = rng.normal();
      f(i, 1) = rng.normal();
    }
    if (!orthonormalize_frame(f)) continue;

    double value = objective(f);
    for (int it = 0; it < opts.max_iters; ++it) {
      ++best.total_iterations;
      // Central-difference gradient in the 14 raw frame coordinates.
      Frame72 grad;
      for (int col = 0; col < 2; ++col) {
        for (int i = 0; i < 7; ++i) {
          Frame72 fp = f, fm = f;
          fp(i, col) += opts.grad_step;
          fm(i, col) -= opts.grad_step;
          Frame72 fpn = fp, fmn = fm;
          if (!orthonormalize_frame(fpn) || !orthonormalize_frame(fmn)) {
            grad(i, col) = 0.0;
            continue;
          }
          grad(i, col) = (objective(fpn) - objective(fmn)) / (2.0 * opts.grad_step);
        }
      }
      const double gnorm = grad.norm();
      if (gnorm < opts.grad_tol) break;

      // Backtracking line search.
      double step = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        Frame72 cand = f - step * grad;
        if (orthonormalize_frame(cand)) {
          const double cv = objective(cand);
          if (cv < value - 1e-4 * step * gnorm * gnorm) {
            f = cand;
            value = cv;
            moved = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!moved) break;
    }

    if (value < best.min_value) {
      best.min_value = value;
      best.argmin = TwoPlane{oracle.from_coords(h * f.col(0)), oracle.from_coords(h * f.col(1)), A};
    }
  }
  return best;
}

}  // namespace esch
