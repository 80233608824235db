#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "chbend/collar.hpp"
#include "chbend/dirichlet.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chbend;

namespace {

// Brute-force distance between two geodesics given by boundary lifts: sample
// both lines, then shrink the search window around the best pair.
double sampled_geodesic_distance(const Vec3& a1, const Vec3& a2, const Vec3& b1, const Vec3& b2) {
  auto point = [](const Vec3& p, const Vec3& q, double s) {
    // e^s p + e^-s q is timelike when <p, q> < 0; flip q otherwise.
    const oracle::cx ps[3] = {p(0), p(1), p(2)}, qs[3] = {q(0), q(1), q(2)};
    const double sign = oracle::siegel_product(ps, qs).real() < 0.0 ? 1.0 : -1.0;
    return Vec3(std::exp(s) * p + sign * std::exp(-s) * q);
  };
  auto dist = [](const Vec3& x, const Vec3& y) {
    const oracle::cx xs[3] = {x(0), x(1), x(2)}, ys[3] = {y(0), y(1), y(2)};
    if (!(oracle::siegel_product(xs, xs).real() < 0.0 && oracle::siegel_product(ys, ys).real() < 0.0)) return 1e300;
    const double c2 = std::norm(oracle::siegel_product(xs, ys)) /
                      (oracle::siegel_product(xs, xs).real() * oracle::siegel_product(ys, ys).real());
    return 2.0 * std::acosh(std::sqrt(std::max(1.0, c2)));
  };
  double best = 1e300, bs = 0.0, bt = 0.0, width = 8.0;
  for (int round = 0; round < 40; ++round) {
    const double s0 = bs, t0 = bt;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double s = s0 + width * i / 20.0, t = t0 + width * j / 20.0;
        const double d = dist(point(a1, a2, s), point(b1, b2, t));
        if (d < best) {
          best = d;
          bs = s;
          bt = t;
        }
      }
    }
    width *= 0.3;
  }
  return best;
}

Vec3 real_boundary(double x) { return HeisenbergPoint{cplx(x), 0.0, false}.lift(); }

Vec2 apply_klein(const Isometry& g, const Vec2& p) {
  const BallPoint q = BallPoint::from_lift(g.apply(BallPoint{cplx(p.x()), cplx(p.y())}.lift()));
  return {q.z1.real(), q.z2.real()};
}

template <class F>
double simpson(F f, double a, double b, double tol, double fa, double fm, double fb, double whole, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm), right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, tol / 2, fa, flm, fm, left, depth - 1) + simpson(f, m, b, tol / 2, fm, frm, fb, right, depth - 1);
}

template <class F>
double simpson(F f, double a, double b, double tol) {
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  return simpson(f, a, b, tol, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 50);
}

// Area of a Klein-disk polygon star-shaped about c: move c to the origin by a
// boost along x, then integrate the curvature -1 density in polar form,
// where the radial part is (1 - R^2)^(-1/2) - 1. Scaled by 4.
double integrated_area(const Vec2& c, std::vector<Vec2> verts) {
  REQUIRE(std::abs(c.y()) < 1e-15);
  const double ch = 1.0 / std::sqrt(1.0 - c.x() * c.x()), sh = c.x() * ch;
  for (Vec2& v : verts) {
    const double t = -sh * v.x() + ch;
    v = Vec2((ch * v.x() - sh) / t, v.y() / t);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Vec2 a = verts[k], b = verts[(k + 1) % verts.size()], e = b - a;
    const double t0 = std::atan2(a.y(), a.x());
    double span = std::atan2(b.y(), b.x()) - t0;
    if (span < 0.0) span += 2.0 * oracle::pi;
    auto radial = [&](double t) {
      const Vec2 u(std::cos(t), std::sin(t));
      const double r = (a.x() * e.y() - a.y() * e.x()) / (u.x() * e.y() - u.y() * e.x());
      return 1.0 / std::sqrt(1.0 - r * r) - 1.0;
    };
    total += simpson(radial, t0, t0 + span, 1e-12);
  }
  return 4.0 * total;
}

struct PolygonFixture {
  MarkedGroup ball;
  DirichletPolygon poly;
};

const PolygonFixture& polygon_half() {
  static const PolygonFixture f = [] {
    const MarkedGroup& g = test::genus2_half();
    return PolygonFixture{to_form(g, FormTag::Ball), dirichlet_polygon(g, axis_center(g), 8)};
  }();
  return f;
}

}  // namespace

TEST_SUITE("collar") {

TEST_CASE("collar bound examples") {
  const double ell = 4.0 * std::asinh(0.5);
  CHECK(collar_bound(ell) == doctest::Approx(2.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-13));
  CHECK(collar_bound(ell) == doctest::Approx(1.762747).epsilon(1e-6));
  CHECK(collar_threshold_constant() == doctest::Approx(0.406114).epsilon(5e-6));
  CHECK(std::sinh(collar_threshold_length() / 2.0) == doctest::Approx(collar_threshold_constant()).epsilon(1e-14));
  CHECK(collar_bound(1e-8) > 30.0);
  CHECK_THROWS_AS(collar_bound(0.0), DomainError);
}

TEST_CASE("collar bound is the oracle inversion and decreases") {
  double last = 1e300;
  for (double ell = 0.01; ell < 20.0; ell *= 1.3) {
    const double d = collar_bound(ell);
    CHECK(d == doctest::Approx(oracle::collar_delta(ell)).epsilon(1e-13));
    CHECK(collar_product(ell, 2.0 * d) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d < last);
    last = d;
  }
}

TEST_CASE("geodesic distance matches sampling") {
  std::mt19937_64 rng(12);
  int disjoint = 0;
  for (int i = 0; i < 60; ++i) {
    double xs[4];
    for (double& x : xs) x = oracle::uniform(rng, -4, 4);
    const double d = geodesic_distance(real_boundary(xs[0]), real_boundary(xs[1]), real_boundary(xs[2]),
                                       real_boundary(xs[3]));
    const double s = sampled_geodesic_distance(real_boundary(xs[0]), real_boundary(xs[1]), real_boundary(xs[2]),
                                               real_boundary(xs[3]));
    if (d > 0.0) ++disjoint;
    CHECK(std::abs(d - s) < 1e-9 * std::max(1.0, d));
  }
  CHECK(disjoint > 10);
  // Vertical axis against itself and against the semicircle over [1, 4].
  const Vec3 inf(1, 0, 0), zero(0, 0, 1);
  CHECK(geodesic_distance(inf, zero, zero, inf) == 0.0);
  const double expected = 2.0 * std::acosh((4.0 + 1.0) / (4.0 - 1.0));
  CHECK(geodesic_distance(inf, zero, real_boundary(1.0), real_boundary(4.0)) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("axis translate distance agrees with the endpoint formula") {
  const MarkedGroup& g = test::genus2_half();
  const Vec3 inf(1, 0, 0), zero(0, 0, 1);
  for (const Isometry& h : g.generators) {
    const double d = axis_translate_distance(h);
    CHECK(d == doctest::Approx(geodesic_distance(inf, zero, h.apply(inf), h.apply(zero))).epsilon(1e-10));
  }
  CHECK(preserves_vertical_axis(g.g_alpha_matrix()));
  CHECK(preserves_vertical_axis(g.g_alpha_matrix() * g.g_alpha_matrix()));
  CHECK(!preserves_vertical_axis(g.generator("a1")));
}

TEST_CASE("collar inequality for genus2(0.5, 0) at depth 6") {
  const MarkedGroup& g = test::genus2_half();
  const CollarReport r = collar_check(g, 6);
  CHECK(r.pass);
  CHECK(r.min_slack >= -1e-9);
  CHECK(r.ell == translation_length(g.g_alpha_matrix()));
  CHECK(r.ell == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.delta_max == collar_bound(r.ell));
  CHECK(r.words_checked > 10000);
  const Word ga2 = g.g_alpha * g.g_alpha;
  for (const auto& w : r.witnesses) {
    CHECK(!(w.word == g.g_alpha));
    CHECK(!(w.word == ga2));
    CHECK(w.slack >= -1e-9);
    CHECK(w.slack == doctest::Approx(collar_product(r.ell, w.distance) - 0.5).epsilon(1e-12));
    // Witnesses beyond twice the collar bound satisfy the inequality outright.
    if (w.distance > 2.0 * r.delta_max) CHECK(w.slack > 0.0);
  }
  REQUIRE(r.witnesses.size() > 1);
  CHECK(std::is_sorted(r.witnesses.begin(), r.witnesses.end(),
                       [](const auto& a, const auto& b) { return a.slack < b.slack; }));
}

TEST_CASE("collar check preconditions") {
  CHECK_THROWS_AS(collar_check(test::genus2_half(), 0), DomainError);
  CHECK_THROWS_AS(collar_check(genus2_group(0.5, 0.0), 3), DomainError);
}

TEST_CASE("two-side lemma boundary sits at l = 4 delta") {
  for (double ell : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(std::abs(two_side_lemma_residual(ell, ell / 4.0)) < 1e-8);
    CHECK(std::abs(two_side_lemma_boundary_delta(ell) - ell / 4.0) < 1e-8);
    CHECK(two_side_lemma_residual(ell, ell / 8.0) > 0.0);
    CHECK(two_side_lemma_residual(ell, ell / 2.0) < 0.0);
  }
}

TEST_CASE("Dirichlet polygon for genus2(0.5, 0)") {
  const auto& [ball, poly] = polygon_half();
  const MarkedGroup& g = test::genus2_half();
  CHECK(poly.status == PolygonStatus::Complete);
  CHECK(poly.truncation_depth == 8);
  CHECK(std::abs(poly.center.z1.imag()) + std::abs(poly.center.z2.imag()) == 0.0);
  CHECK(0.5 < 4.0 * collar_bound(0.5));
  CHECK(two_side_check(poly, g));

  const double area = polygon_area(poly);
  CHECK(area == doctest::Approx(oracle::surface_area(2, -0.25)).epsilon(0.01));

  const Vec2 c(poly.center.z1.real(), poly.center.z2.real());
  CHECK(integrated_area(c, poly.vertices()) == doctest::Approx(area).epsilon(1e-6));

  // Angle sum: the curvature -1 defect is (n - 2) pi - sum, scaled by 4.
  const auto angles = polygon_angles(poly);
  double sum = 0.0;
  for (double a : angles) sum += a;
  CHECK(4.0 * ((static_cast<double>(angles.size()) - 2.0) * oracle::pi - sum) == doctest::Approx(area).epsilon(1e-9));
}

TEST_CASE("Dirichlet sides pair up and the polygon is star-shaped") {
  const auto& [ball, poly] = polygon_half();
  const Vec2 c(poly.center.z1.real(), poly.center.z2.real());
  std::map<std::vector<Letter>, const PolygonSide*> by_word;
  for (const auto& s : poly.sides) by_word[s.word.letters()] = &s;
  for (const auto& s : poly.sides) {
    const auto partner = by_word.find(s.word.inverse().letters());
    REQUIRE(partner != by_word.end());
    // word maps the partner side (bisector of z, word^-1 z) onto this one.
    const Isometry h = evaluate(s.word, ball.generators);
    const Vec2 a = apply_klein(h, partner->second->start), b = apply_klein(h, partner->second->end);
    const double fwd = (a - s.end).norm() + (b - s.start).norm();
    const double rev = (a - s.start).norm() + (b - s.end).norm();
    CHECK(std::min(fwd, rev) < 1e-7);
  }
  const auto verts = poly.vertices();
  double turned = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec2 p = verts[i] - c, q = verts[(i + 1) % verts.size()] - c;
    const double step = std::atan2(p.x() * q.y() - p.y() * q.x(), p.dot(q));
    CHECK(step > 0.0);
    turned += step;
  }
  CHECK(turned == doctest::Approx(2.0 * oracle::pi).epsilon(1e-12));
}

TEST_CASE("pairing translates of the center stay outside the polygon") {
  const auto& [ball, poly] = polygon_half();
  const Vec2 c(poly.center.z1.real(), poly.center.z2.real());
  const auto verts = poly.vertices();
  auto inside = [&](const Vec2& p) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vec2 e = verts[(i + 1) % verts.size()] - verts[i], r = p - verts[i];
      if (e.x() * r.y() - e.y() * r.x() < 1e-12) return false;
    }
    return true;
  };
  CHECK(inside(c));
  std::mt19937_64 rng(5);
  for (const auto& s : poly.sides) {
    const Isometry h = evaluate(s.word, ball.generators);
    for (int k = 0; k < 20; ++k) {
      // Random point of the polygon: a convex combination of the center and a side.
      const double t = oracle::uniform(rng, 0, 1), u = oracle::uniform(rng, 0.05, 0.95);
      const Vec2 p = c + u * ((1 - t) * s.start + t * s.end - c);
      CHECK(inside(p));
      CHECK(!inside(apply_klein(h, p)));
    }
  }
}

TEST_CASE("Dirichlet preconditions and truncation") {
  const MarkedGroup& g = test::genus2_half();
  CHECK_THROWS_AS(dirichlet_polygon(g, BallPoint{cplx(0.1, 0.1), cplx(0.0)}, 4), DomainError);
  CHECK_THROWS_AS(dirichlet_polygon(g, axis_center(g), 1), DomainError);
  CHECK(dirichlet_polygon(g, axis_center(g), 2).status == PolygonStatus::Incomplete);
}

}  // TEST_SUITE
