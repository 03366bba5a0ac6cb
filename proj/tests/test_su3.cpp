#include <doctest.h>

#include "eschlab/su3.hpp"

using namespace esch;

namespace {
constexpr Complex kI{0.0, 1.0};
}

TEST_CASE("bi-invariant form on the distinguished vectors") {
  CHECK(inner0(Y3(), Y3()) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(inner0(Y1(), Y3()) == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(inner0(Su3Vector{}, Su3Vector{}) == 0.0);

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Su3Vector x = random_su3_vector(rng);
    const Su3Vector y = random_su3_vector(rng);
    CHECK(inner0(x, y) == doctest::Approx(inner0(y, x)).epsilon(1e-12));
    CHECK(inner0(x, x) >= 0.0);
  }
}

TEST_CASE("su(3) validation") {
  CHECK_NOTHROW(Su3Vector::from_matrix(Y3().m));
  Mat3 bad = Mat3::Zero();
  bad(0, 0) = 1.0;  // Hermitian, not skew
  CHECK_THROWS_AS(Su3Vector::from_matrix(bad), InvalidParameter);
  bad.setZero();
  bad(0, 0) = kI;  // skew-Hermitian but trace != 0
  CHECK_THROWS_AS(Su3Vector::from_matrix(bad), InvalidParameter);
}

TEST_CASE("k/p splitting") {
  SUBCASE("diagonal vectors live in k") {
    const KPSplit s = split_kp(Y3());
    CHECK(s.k.m.isApprox(Y3().m, 1e-15));
    CHECK(s.p.is_zero());
  }
  SUBCASE("corner entries live in p") {
    Mat3 e = Mat3::Zero();
    e(0, 2) = 1.0;
    e(2, 0) = -1.0;
    const Su3Vector x(e);
    const KPSplit s = split_kp(x);
    CHECK(s.k.is_zero());
    CHECK(s.p.m.isApprox(e, 1e-15));
    const KPSplit sum = split_kp(Y1() + x);
    CHECK(sum.k.m.isApprox(Y1().m, 1e-15));
    CHECK(sum.p.m.isApprox(e, 1e-15));
  }
  SUBCASE("orthogonal projection pair") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
      const Su3Vector x = random_su3_vector(rng);
      const KPSplit s = split_kp(x);
      CHECK((s.k.m + s.p.m - x.m).norm() < 1e-14);
      CHECK(std::abs(inner0(s.k, s.p)) < 1e-12);
      CHECK(split_kp(s.k).p.is_zero());
      CHECK(split_kp(s.p).k.is_zero());
    }
  }
}

TEST_CASE("deformation operator") {
  CHECK(phi(Y3(), 1.0).m.isApprox(0.5 * Y3().m, 1e-15));
  Mat3 e = Mat3::Zero();
  e(1, 2) = kI;
  e(2, 1) = kI;
  const Su3Vector xp(e);
  CHECK(phi(xp, 0.37).m.isApprox(e, 1e-15));

  Rng rng(9);
  for (double t : {0.1, 1.0, 10.0}) {
    for (int i = 0; i < 20; ++i) {
      const Su3Vector x = random_su3_vector(rng);
      CHECK((phi_inv(phi(x, t), t).m - x.m).norm() < 1e-12);
      const Su3Vector y = random_su3_vector(rng);
      // Self-adjoint with respect to the bi-invariant form.
      CHECK(inner0(phi(x, t), y) == doctest::Approx(inner0(x, phi(y, t))).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(phi(Y3(), 0.0), InvalidParameter);
  CHECK_THROWS_AS(phi(Y3(), -1.0), InvalidParameter);
}

TEST_CASE("bracket and adjoint") {
  Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    const Su3Vector x = random_su3_vector(rng);
    const Su3Vector y = random_su3_vector(rng);
    const Su3Vector z = random_su3_vector(rng);
    CHECK(bracket(x, x).is_zero(1e-12));
    CHECK((bracket(x, y).m + bracket(y, x).m).norm() < 1e-12);
    const Mat3 jacobi = bracket(x, bracket(y, z)).m + bracket(y, bracket(z, x)).m +
                        bracket(z, bracket(x, y)).m;
    CHECK(jacobi.norm() < 1e-12);

    const SU3Point g = haar_su3(rng);
    CHECK(adjoint(SU3Point{}, x).m.isApprox(x.m, 1e-15));
    CHECK(inner0(adjoint(g, x), adjoint(g, y)) == doctest::Approx(inner0(x, y)).epsilon(1e-11));
    CHECK((adjoint(g, bracket(x, y)).m - bracket(adjoint(g, x), adjoint(g, y)).m).norm() < 1e-11);
  }
}

TEST_CASE("the Z family commutes with Y1, and Y3 is central in k") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const ZVector z = random_zvector(rng);
    CHECK(bracket(Y1(), z.materialize()).is_zero(1e-12));
    CHECK_NOTHROW(Su3Vector::from_matrix(z.materialize().m));

    Mat3 w = Mat3::Zero();
    for (int a = 0; a < 4; ++a) w += rng.normal() * standard_basis()[a].m;
    CHECK(bracket(Y3(), Su3Vector(w)).is_zero(1e-12));
  }
}

TEST_CASE("adjoint by K preserves the splitting") {
  Rng rng(19);
  for (int i = 0; i < 30; ++i) {
    const KElement k = haar_k(rng);
    const Su3Vector x = random_su3_vector(rng);
    const KPSplit s = split_kp(x);
    CHECK(split_kp(adjoint(k, s.k)).p.is_zero(1e-12));
    CHECK(split_kp(adjoint(k, s.p)).k.is_zero(1e-12));
  }
}

TEST_CASE("vertical vector") {
  const PQPair almost_positive_rep = PQPair::make({0, 1, 1}, {0, 0, 2});
  const Su3Vector v = vertical_vector(SU3Point{}, almost_positive_rep);
  Mat3 expected = Mat3::Zero();
  expected(1, 1) = kI;
  expected(2, 2) = -kI;
  CHECK(v.m.isApprox(expected, 1e-14));

  // Equal weights annihilate the vertical direction at the identity.
  const PQPair equal{{1, 0, -1}, {1, 0, -1}};
  CHECK(vertical_vector(SU3Point{}, equal).is_zero(1e-14));

  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const SU3Point a = haar_su3(rng);
    const Su3Vector w = vertical_vector(a, almost_positive_rep);
    CHECK(std::abs(w.m.trace()) < 1e-12);
    CHECK_NOTHROW(Su3Vector::from_matrix(w.m));
    const VerticalVector vv = VerticalVector::compute(a, almost_positive_rep);
    CHECK(vv.replay_residual(almost_positive_rep) < 1e-12);
  }
}

TEST_CASE("standard basis is orthonormal and split by subspace") {
  const auto& basis = standard_basis();
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const double want = a == b ? 1.0 : 0.0;
      CHECK(inner0(basis[a], basis[b]) == doctest::Approx(want).epsilon(1e-13));
    }
  }
  for (int a = 0; a < 4; ++a) CHECK(split_kp(basis[a]).p.is_zero());
  for (int a = 4; a < 8; ++a) CHECK(split_kp(basis[a]).k.is_zero());
}

TEST_CASE("seeded Haar sampling") {
  Rng rng(1234);
  for (int i = 0; i < 25; ++i) {
    const SU3Point a = haar_su3(rng);
    CHECK(a.unitarity_defect() < 1e-12);
    const KElement k = haar_k(rng);
    CHECK_NOTHROW(KElement::from_matrix(k.m));
    const SU3Point d = random_diagonal_su3(rng);
    CHECK(d.unitarity_defect() < 1e-12);
  }

  Rng r1(42), r2(42), r3(43);
  const SU3Point a1 = haar_su3(r1);
  const SU3Point a2 = haar_su3(r2);
  const SU3Point a3 = haar_su3(r3);
  CHECK((a1.m - a2.m).norm() == 0.0);
  CHECK((a1.m - a3.m).norm() > 1e-3);
}

TEST_CASE("group-point validation and polar repair") {
  Rng rng(31);
  const SU3Point a = haar_su3(rng);
  Mat3 drifted = a.m;
  drifted(0, 0) += Complex{1e-6, -2e-6};
  const SU3Point repaired = SU3Point::from_matrix(drifted);
  CHECK(repaired.unitarity_defect() < 1e-10);
  CHECK((repaired.m - a.m).norm() < 1e-5);

  Mat3 junk = Mat3::Zero();
  CHECK_THROWS_AS(SU3Point::from_matrix(junk), InvalidParameter);

  // K elements must be block diagonal with the conjugate-determinant corner.
  Mat3 off = a.m;
  CHECK_THROWS_AS(KElement::from_matrix(off), InvalidParameter);
}

TEST_CASE("circle action stays in the group and moves the base point") {
  const PQPair pair = PQPair::make({0, 0, 3}, {1, 1, 1});
  Rng rng(37);
  const SU3Point a = haar_su3(rng);
  const SU3Point b = circle_act(0.9, a, pair);
  CHECK(b.unitarity_defect() < 1e-12);
  CHECK((a.m - b.m).norm() > 1e-3);
}
