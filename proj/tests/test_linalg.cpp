#include <random>

#include "doctest.h"
#include "chbend/heisenberg.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chbend;

TEST_SUITE("linalg") {

TEST_CASE("hermitian product basis values") {
  CHECK(hermitian_product(Vec3(1, 0, 0), Vec3(1, 0, 0), FormTag::Ball) == cplx(1.0));
  CHECK(hermitian_product(Vec3(0, 0, 1), Vec3(0, 0, 1), FormTag::Ball) == cplx(-1.0));
  CHECK(hermitian_product(Vec3(1, 0, 1), Vec3(0, 1, 0), FormTag::Siegel) == cplx(0.0));
}

TEST_CASE("hermitian product matches the written-out form and is conjugate symmetric") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = test::random_vec(rng), w = test::random_vec(rng);
    oracle::cx a[3], b[3];
    for (int k = 0; k < 3; ++k) {
      a[k] = v(k);
      b[k] = w(k);
    }
    CHECK(std::abs(hermitian_product(v, w, FormTag::Ball) - oracle::ball_product(a, b)) < 1e-12);
    CHECK(std::abs(hermitian_product(v, w, FormTag::Siegel) - oracle::siegel_product(a, b)) < 1e-12);
    CHECK(std::abs(hermitian_product(v, w, FormTag::Siegel) - std::conj(hermitian_product(w, v, FormTag::Siegel))) <
          1e-12);
  }
}

TEST_CASE("distance examples") {
  const BallPoint o{};
  CHECK(distance(o, o) == doctest::Approx(0.0));
  CHECK(distance(o, {cplx(0.5), cplx(0.0)}) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-12));
  CHECK(distance(o, {cplx(0.5), cplx(0.0)}) == doctest::Approx(1.098612).epsilon(1e-6));
  double last = 0.0;
  for (double t : {0.9, 0.99, 0.999, 0.9999, 0.99999}) {
    const double d = distance(o, {cplx(t), cplx(0.0)});
    CHECK(d > last);
    last = d;
  }
  CHECK(last > 12.0);
  CHECK_THROWS_AS(distance(o, {cplx(1.0), cplx(0.0)}), DomainError);
}

TEST_CASE("distance on the real plane is twice the curvature -1 Klein distance") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const BallPoint p = test::random_real_ball_point(rng), q = test::random_real_ball_point(rng);
    const double expected =
        oracle::real_plane_distance(p.z1.real(), p.z2.real(), q.z1.real(), q.z2.real());
    CHECK(distance(p, q) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("distance is a metric and isometry invariant") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const BallPoint p = test::random_ball_point(rng), q = test::random_ball_point(rng),
                    r = test::random_ball_point(rng);
    const double pq = distance(p, q), qr = distance(q, r), pr = distance(p, r);
    CHECK(pq == doctest::Approx(distance(q, p)).epsilon(1e-12));
    CHECK(pr <= pq + qr + 1e-12);
    const Isometry g = to_ball(test::random_isometry(rng));
    const BallPoint gp = BallPoint::from_lift(g.apply(p.lift()));
    const BallPoint gq = BallPoint::from_lift(g.apply(q.lift()));
    CHECK(distance(gp, gq) == doctest::Approx(pq).epsilon(1e-8));
  }
}

TEST_CASE("classification of the reference matrices") {
  const Classification id = classify(Isometry::identity(FormTag::Siegel));
  CHECK(id.identity);
  CHECK(id.kind == IsometryKind::Elliptic);
  CHECK(id.discriminant == doctest::Approx(0.0));

  Mat3 d = Mat3::Zero();
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  d(2, 2) = 0.5;
  const Classification lox = classify(Isometry(d, FormTag::Siegel));
  CHECK(lox.kind == IsometryKind::Loxodromic);
  CHECK(lox.discriminant == doctest::Approx(oracle::discriminant(3.5)).epsilon(1e-12));
  CHECK(lox.discriminant > 0.0);

  // Regular elliptic of order 3 in the projective sense: tau on the deltoid.
  const double theta = kPi / 3.0;
  Mat3 e = Mat3::Zero();
  e(0, 0) = std::polar(1.0, theta);
  e(1, 1) = std::polar(1.0, -2.0 * theta);
  e(2, 2) = std::polar(1.0, theta);
  const Classification ell = classify(Isometry(e, FormTag::Siegel));
  CHECK(ell.kind == IsometryKind::Elliptic);
  CHECK(std::abs(oracle::discriminant(std::polar(1.0, theta))) < 1e-12);
  CHECK(ell.ambiguous);

  // A generic elliptic well inside the deltoid.
  const Classification rot = classify(rotation_u(0.7));
  CHECK(rot.kind == IsometryKind::Elliptic);
  CHECK(rot.discriminant < 0.0);

  // Heisenberg translations are parabolic.
  CHECK(classify(heisenberg_translation(cplx(1.0, 0.5), 0.3)).kind == IsometryKind::Parabolic);
}

TEST_CASE("trace discriminant matches the expanded polynomial") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const cplx tau(oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5));
    CHECK(trace_discriminant(tau) == doctest::Approx(oracle::discriminant(tau)).epsilon(1e-12));
  }
}

TEST_CASE("translation length of diag(2, 1, 1/2)") {
  Mat3 d = Mat3::Zero();
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  d(2, 2) = 0.5;
  const Isometry g(d, FormTag::Siegel);
  CHECK(translation_length(g) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(translation_length(g) == doctest::Approx(1.386294).epsilon(1e-6));
  // Axis points (-s, 0, 1) and (-4 s, 0, 1) realize the displacement.
  for (double s : {0.1, 1.0, 7.0}) {
    const double dist = distance_lifts(Vec3(-s, 0, 1), Vec3(-4 * s, 0, 1), FormTag::Siegel);
    CHECK(dist == doctest::Approx(translation_length(g)).epsilon(1e-10));
    CHECK(std::cosh(dist / 2) == doctest::Approx((1 + 4.0) / (2 * 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("translation length tends to zero with the dilation factor") {
  double last = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double l = translation_length(dilation(std::sqrt(1.0 + eps)));
    CHECK(l < last);
    CHECK(l == doctest::Approx(std::log(1.0 + eps)).epsilon(1e-9));
    last = l;
  }
  CHECK_THROWS_AS(translation_length(rotation_u(0.3)), DomainError);
}

TEST_CASE("classification and length are conjugation invariant") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const Isometry g = dilation(oracle::uniform(rng, 1.1, 3.0)) * rotation_u(oracle::uniform(rng, -1, 1));
    const Isometry h = test::random_isometry(rng);
    const Isometry c = h * g * h.inverse();
    CHECK(classify(c).kind == IsometryKind::Loxodromic);
    CHECK(translation_length(c) == doctest::Approx(translation_length(g)).epsilon(1e-10));
  }
}

TEST_CASE("Cayley transform intertwines the forms") {
  const Mat3& c = cayley_matrix();
  const Mat3 lhs = c.adjoint() * HermitianForm::siegel().matrix * c;
  // C^* J_S C is a positive multiple of J_B.
  const double scale = lhs(0, 0).real();
  CHECK(scale > 0.0);
  CHECK((lhs - scale * HermitianForm::ball().matrix).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((cayley_matrix() * cayley_inverse_matrix() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Cayley round trips and the pole") {
  const BallPoint o{};
  const Vec3 s = ball_to_siegel(o.lift());
  CHECK(hermitian_product(s, s, FormTag::Siegel).real() < 0.0);
  const BallPoint back = BallPoint::from_lift(siegel_to_ball(s));
  CHECK(std::abs(back.z1) + std::abs(back.z2) < 1e-12);

  // Only (-1, 0) goes to infinity among sampled boundary points.
  const Vec3 pole = ball_to_siegel(Vec3(-1, 0, 1));
  CHECK(std::abs(pole(2)) < 1e-15);
  for (int k = 1; k < 64; ++k) {
    const double t = 2.0 * kPi * k / 64.0;
    const Vec3 w = ball_to_siegel(Vec3(std::cos(t + kPi), std::sin(t + kPi), 1));
    CHECK(std::abs(w(2)) > 1e-6);
  }

  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const Isometry g = test::random_isometry(rng);
    CHECK(projective_distance(to_siegel(to_ball(g)), g) < 1e-10);
  }
}

TEST_CASE("real ball points map to xi real, v = 0") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const double t = oracle::uniform(rng, -kPi, kPi);
    const Vec3 w = ball_to_siegel(Vec3(std::cos(t), std::sin(t), 1));
    const HeisenbergPoint p = HeisenbergPoint::from_lift(w);
    if (p.infinite) continue;
    CHECK(std::abs(p.xi.imag()) < 1e-12);
    CHECK(std::abs(p.v) < 1e-12);
  }
}

TEST_CASE("isometry algebra") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Isometry g = test::random_isometry(rng);
    CHECK(g.form_residual() < 1e-12);
    CHECK(scalar_residual(g * g.inverse()) < 1e-12);
    const cplx det = g.normalized().matrix().determinant();
    CHECK(std::abs(det - 1.0) < 1e-10);
    const Isometry w = g * Isometry(std::polar(1.0, 2.0 * kPi / 3.0) * g.matrix(), g.form()).inverse();
    CHECK(scalar_residual(w) < 1e-12);
    CHECK(projective_distance(g, Isometry(std::polar(3.0, 0.4) * g.matrix(), g.form())) < 1e-12);
  }
}

}  // TEST_SUITE
