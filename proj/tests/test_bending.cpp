#include <random>

#include "doctest.h"
#include "chbend/bending.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chbend;

namespace {

const double kSectorPairs[3][2] = {{kPi / 6.0, kPi / 12.0}, {kPi / 8.0, 0.3}, {0.4, -0.5}};

bool near_sector_edge(double theta, double zeta, double margin) {
  for (double edge : {zeta, kPi - zeta}) {
    if (std::abs(std::abs(theta) - edge) < margin) return true;
  }
  return false;
}

double coordinate_gap(const HeisenbergPoint& a, const HeisenbergPoint& b) {
  return std::abs(a.xi - b.xi) + std::abs(a.v - b.v);
}

}  // namespace

TEST_SUITE("bending") {

TEST_CASE("bending parameters") {
  CHECK_NOTHROW(BendingParams(0.0, kPi / 6.0));
  CHECK_NOTHROW(BendingParams(-2.0, kPi / 6.0));
  CHECK_THROWS_AS(BendingParams(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(BendingParams(0.1, kPi / 2.0), DomainError);
  CHECK_THROWS_AS(BendingParams(kPi - 2.0 * 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(BendingParams(-(kPi - 2.0 * 0.5), 0.5), DomainError);
}

TEST_CASE("planar bend examples") {
  const BendingParams p(kPi / 12.0, kPi / 6.0);
  CHECK(std::abs(planar_bend(p, cplx(-1.0)) - cplx(-1.0)) == 0.0);
  CHECK(std::abs(planar_bend(p, cplx(1.0)) - std::polar(1.0, p.eta)) < 1e-15);
  CHECK(std::abs(planar_bend(p, cplx(0.0, 1.0)) - cplx(0.0, 1.0) * std::polar(1.0, p.eta / 2.0)) < 1e-15);
  CHECK(planar_bend(p, cplx(0.0)) == cplx(0.0));
}

TEST_CASE("planar bend matches the four-case oracle and its conjugation rule") {
  std::mt19937_64 rng(6);
  for (const auto& [zeta, eta] : kSectorPairs) {
    const BendingParams p(eta, zeta);
    for (int i = 0; i < 2000; ++i) {
      const cplx z = std::polar(oracle::uniform(rng, 0.01, 5.0), oracle::uniform(rng, -kPi, kPi));
      CHECK(std::abs(planar_bend(p, z) - oracle::planar_bend(eta, zeta, z)) < 1e-14);
      CHECK(std::abs(planar_bend(BendingParams(-eta, zeta), z) - std::conj(planar_bend(p, std::conj(z)))) < 1e-14);
      // Sector |arg z| <= zeta rotates rigidly.
      const cplx w = std::polar(std::abs(z), oracle::uniform(rng, -zeta, zeta));
      CHECK(std::abs(planar_bend(p, w) - w * std::polar(1.0, eta)) < 1e-14);
    }
  }
}

TEST_CASE("planar bend is continuous across sector edges and inverts exactly") {
  std::mt19937_64 rng(10);
  for (const auto& [zeta, eta] : kSectorPairs) {
    const BendingParams p(eta, zeta);
    for (int i = 0; i < 1000; ++i) {
      const double r = oracle::uniform(rng, 0.01, 10.0);
      for (double edge : {zeta, kPi - zeta, -zeta, -(kPi - zeta)}) {
        const cplx a = planar_bend(p, std::polar(r, edge - 1e-12)), b = planar_bend(p, std::polar(r, edge + 1e-12));
        CHECK(std::abs(a - b) < 1e-10 * r);
      }
      // Across the branch cut of arg.
      CHECK(std::abs(planar_bend(p, std::polar(r, kPi - 1e-12)) - planar_bend(p, std::polar(r, -kPi + 1e-12))) <
            1e-10 * r);
      const cplx z = std::polar(r, oracle::uniform(rng, -kPi, kPi));
      CHECK(std::abs(planar_bend_inverse(p, planar_bend(p, z)) - z) < 1e-12 * r);
      CHECK(std::abs(planar_bend(p, planar_bend_inverse(p, z)) - z) < 1e-12 * r);
    }
  }
}

TEST_CASE("distortion closed form") {
  const BendingParams p(kPi / 12.0, kPi / 6.0);
  CHECK(planar_distortion(p, std::polar(1.0, 0.1)).k == 1.0);
  CHECK(planar_distortion(p, std::polar(1.0, 3.0)).k == 1.0);
  CHECK(planar_distortion(p, std::polar(1.0, 1.0)).k == doctest::Approx(8.0 / 7.0).epsilon(1e-14));
  CHECK(planar_distortion(p, std::polar(1.0, 1.0)).k == doctest::Approx(1.142857).epsilon(1e-6));
  CHECK(planar_distortion(p, std::polar(2.0, p.zeta)).on_boundary);
  const BendingParams flat(0.0, 0.3);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const cplx z = std::polar(oracle::uniform(rng, 0.1, 3.0), oracle::uniform(rng, -kPi, kPi));
    CHECK(planar_distortion(flat, z).k == 1.0);
    for (const auto& [zeta, eta] : kSectorPairs) {
      const double k = planar_distortion(BendingParams(eta, zeta), z).k;
      CHECK(k >= 1.0);
      CHECK(k == doctest::Approx(oracle::planar_distortion(eta, zeta, z)).epsilon(1e-14));
    }
  }
}

TEST_CASE("finite-difference distortion of the implemented map") {
  std::mt19937_64 rng(99);
  const double h = 1e-6;
  for (const auto& [zeta, eta] : kSectorPairs) {
    const BendingParams p(eta, zeta);
    int checked = 0;
    while (checked < 10000) {
      const double r = oracle::uniform(rng, 0.2, 3.0), theta = oracle::uniform(rng, -kPi, kPi);
      if (near_sector_edge(theta, zeta, 20.0 * h / r)) continue;
      const cplx z = std::polar(r, theta);
      const double fd = oracle::finite_difference_distortion([&](cplx w) { return planar_bend(p, w); }, z, h);
      CHECK(std::abs(fd - planar_distortion(p, z).k) < 1e-4 * planar_distortion(p, z).k);
      ++checked;
    }
  }
}

TEST_CASE("elementary bend examples") {
  const BendingParams p(0.3, kPi / 6.0);
  for (double x : {0.1, 1.0, 7.0}) {
    const HeisenbergPoint right = elementary_bend_boundary(p, {cplx(x), 0.0, false});
    CHECK(std::abs(right.xi - x * std::polar(1.0, p.eta)) < 1e-12 * x);
    CHECK(std::abs(right.v) < 1e-12 * x * x);
    const HeisenbergPoint left = elementary_bend_boundary(p, {cplx(-x), 0.0, false});
    CHECK(std::abs(left.xi + x) < 1e-12 * x);
    CHECK(std::abs(left.v) < 1e-12 * x * x);
    const HeisenbergPoint axis = elementary_bend_boundary(p, {cplx(0.0), x, false});
    CHECK(axis == HeisenbergPoint{cplx(0.0), x, false});
  }
  CHECK(elementary_bend_boundary(p, HeisenbergPoint::origin()) == HeisenbergPoint::origin());
  CHECK(elementary_bend_boundary(p, HeisenbergPoint::infinity()).infinite);
}

TEST_CASE("elementary bend coherence on samples") {
  std::mt19937_64 rng(77);
  const double lambda = std::exp(0.25);
  for (const auto& [zeta, eta] : kSectorPairs) {
    const BendingParams p(eta, zeta);
    const BendingParams flat(0.0, zeta);
    for (int i = 0; i < 1000; ++i) {
      const cplx z = std::polar(oracle::uniform(rng, 0.05, 5.0), oracle::uniform(rng, -kPi, kPi));
      const HeisenbergPoint planar = elementary_bend_boundary(p, {z, 0.0, false});
      CHECK(std::abs(planar.xi - planar_bend(p, z)) < 1e-10 * std::max(1.0, std::abs(z)));
      CHECK(std::abs(planar.v) < 1e-10 * std::max(1.0, std::norm(z)));

      const HeisenbergPoint x = test::random_heisenberg(rng, 3.0);
      const HeisenbergPoint fx = elementary_bend_boundary(p, x);
      CHECK(std::abs(cygan_norm(fx) - cygan_norm(x)) < 1e-10 * std::max(1.0, cygan_norm(x)));
      const HeisenbergPoint a = elementary_bend_boundary(p, apply(dilation(lambda), x));
      const HeisenbergPoint b = apply(dilation(lambda), fx);
      CHECK(std::abs(a.xi - b.xi) < 1e-9 * std::max(1.0, std::abs(b.xi)));
      CHECK(std::abs(a.v - b.v) < 1e-9 * std::max(1.0, std::abs(b.v)));
      CHECK(coordinate_gap(elementary_bend_boundary(flat, x), x) < 1e-10 * std::max(1.0, cygan_norm(x) * cygan_norm(x)));
    }
  }
}

TEST_CASE("elementary bend is the identity on W- and rotation_u on W+") {
  std::mt19937_64 rng(29);
  const BendingParams p(0.4, 0.5);
  const Isometry& h1 = flattening_map_unit();
  int plus = 0, minus = 0;
  for (int i = 0; i < 4000; ++i) {
    const HeisenbergPoint x = test::random_heisenberg(rng, 2.0);
    const double r = cygan_norm(x);
    const HeisenbergPoint q = apply(h1, {x.xi / r, x.v / (r * r), false});
    if (q.infinite) continue;
    const double a = std::abs(std::arg(q.xi));
    const HeisenbergPoint fx = elementary_bend_boundary(p, x);
    if (a < p.zeta - 1e-6) {
      ++plus;
      CHECK(coordinate_gap(fx, apply(rotation_u(p.eta), x)) < 1e-10 * std::max(1.0, r * r));
    } else if (a > kPi - p.zeta + 1e-6) {
      ++minus;
      CHECK(coordinate_gap(fx, x) < 1e-10 * std::max(1.0, r * r));
    }
  }
  CHECK(plus > 100);
  CHECK(minus > 100);
}

TEST_CASE("bend_group at eta = 0 returns the base generators") {
  const MarkedGroup& g = test::genus2_half();
  const BentGroup b = bend_group(g, BendingParams(0.0, kPi / 6.0));
  REQUIRE(b.generators_eta.size() == g.generators.size());
  for (std::size_t i = 0; i < g.generators.size(); ++i) {
    CHECK(b.generators_eta[i].matrix() == g.generators[i].matrix());
    CHECK(b.generators_eta[i].low_part() == g.generators[i].low_part());
  }
}

TEST_CASE("bend_group preserves relations and fixes G1 and g_alpha") {
  const MarkedGroup& g = test::genus2_half();
  const Mat3 ga = g.g_alpha_matrix().matrix();
  for (double eta = -0.5; eta <= 0.5001; eta += 0.05) {
    const BentGroup b = bend_group(g, BendingParams(eta, kPi / 6.0));
    CHECK(b.max_relation_residual() < 1e-10);
    CHECK(b.max_form_residual() < 1e-12);
    CHECK(b.chi_of(g.g_alpha).matrix() == ga);
    CHECK(b.chi.at("a1") == ChiRule::Fixed);
    CHECK(b.chi.at("b1") == ChiRule::Fixed);
    CHECK(b.chi.at("a2") == ChiRule::Conjugated);
    for (const std::string n : {"a1", "b1"}) {
      CHECK(b.generators_eta[g.index_of(n)].matrix() == g.generator(n).matrix());
    }
    const Isometry u = rotation_u(eta);
    for (const std::string n : {"a2", "b2"}) {
      const Isometry expected = u * g.generator(n) * u.inverse();
      CHECK(projective_distance(b.generators_eta[g.index_of(n)], expected) < 1e-12);
    }
  }
}

TEST_CASE("bent generators depend analytically on eta") {
  const MarkedGroup& g = test::genus2_half();
  const double h = 1e-5;
  const BentGroup plus = bend_group(g, BendingParams(h, kPi / 6.0));
  const BentGroup minus = bend_group(g, BendingParams(-h, kPi / 6.0));
  Mat3 x = Mat3::Zero();
  x(1, 1) = cplx(0.0, 1.0);
  for (std::size_t i = 0; i < g.generators.size(); ++i) {
    const Mat3 m = g.generators[i].matrix();
    const Mat3 fd = (plus.generators_eta[i].matrix() - minus.generators_eta[i].matrix()) / (2.0 * h);
    const bool conjugated = plus.chi.at(g.names[i]) == ChiRule::Conjugated;
    const Mat3 exact = conjugated ? Mat3(x * m - m * x) : Mat3(Mat3::Zero());
    CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, m.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("HNN bend left-multiplies the stable letter") {
  const MarkedGroup g = normalize_axis(genus2_hnn_group(0.5, 0.0));
  const BentGroup b = bend_group(g, BendingParams(0.3, kPi / 6.0));
  CHECK(b.max_relation_residual() < 1e-10);
  CHECK(b.chi.at("t") == ChiRule::LeftMultiplied);
  CHECK(projective_distance(b.generators_eta[g.index_of("t")], rotation_u(0.3) * g.generator("t")) < 1e-12);
  CHECK(b.chi_of(g.g_alpha).matrix() == g.g_alpha_matrix().matrix());
}

TEST_CASE("bend_group preconditions") {
  CHECK_THROWS_AS(bend_group(genus2_group(0.5, 0.0), BendingParams(0.1, 0.5)), DomainError);
  MarkedGroup g = test::genus2_half();
  g.decomposition.reset();
  CHECK_THROWS_AS(bend_group(g, BendingParams(0.1, 0.5)), DomainError);
  // A wrong splitting breaks the relation.
  MarkedGroup w = test::genus2_half();
  w.decomposition->g2 = {"a2"};
  CHECK_THROWS_AS(bend_group(w, BendingParams(0.3, 0.5)), ConstructionError);
}

TEST_CASE("sector width selection") {
  const MarkedGroup& g = test::genus2_half();
  const double z = required_zeta(g);
  CHECK(z >= 1e-3);
  CHECK(z < 0.1);
  CHECK(default_zeta(g, 0.3) == z);
  CHECK_NOTHROW(BendingParams(0.3, default_zeta(g, 0.3)));
  CHECK_THROWS_AS(default_zeta(g, kPi - 2.0 * z + 1e-9), DomainError);
}

TEST_CASE("equivariant boundary map") {
  const BentGroup b = test::bent_half(0.3);
  const MarkedGroup& g = b.base;
  const HeisenbergPoint x0{cplx(-0.7), 0.0, false};
  CHECK(equivariant_boundary_map(b, Word(), x0) == elementary_bend_boundary(b.params, x0));
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> letter(0, 7);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> tokens;
    for (int k = 0; k < 4; ++k) {
      const int l = letter(rng);
      tokens.push_back(g.names[l / 2] + (l % 2 ? "^-1" : ""));
    }
    const Word w = Word::from_tokens(tokens, g.names);
    const Word h = Word::from_tokens({tokens.front()}, g.names);
    const Word rest = h.inverse() * w;
    const HeisenbergPoint lhs = equivariant_boundary_map(b, w, x0);
    const HeisenbergPoint rhs = apply(b.chi_of(h), equivariant_boundary_map(b, rest, x0));
    if (lhs.infinite || rhs.infinite) continue;
    CHECK(coordinate_gap(lhs, rhs) < 1e-9 * std::max(1.0, cygan_norm(lhs) * cygan_norm(lhs)));
  }
  const BentGroup flat = test::bent_half(0.0);
  const Word w = Word::parse("a2*b1^-1*a1", g.names);
  CHECK(coordinate_gap(equivariant_boundary_map(flat, w, x0), apply(evaluate(w, g.generators), x0)) < 1e-12);
  CHECK_THROWS_AS(equivariant_boundary_map(b, Word::parse("a1", {"x", "y", "z", "w", "a1"}), x0), DomainError);
}

}  // TEST_SUITE
