#include "chbend/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chbend {

double cartan_angle_lifts(const Vec3& a, const Vec3& b, const Vec3& c, FormTag form) {
  const cplx ab = hermitian_product(a, b, form);
  const cplx bc = hermitian_product(b, c, form);
  const cplx ca = hermitian_product(c, a, form);
  auto coincident = [](const cplx& p, const Vec3& x, const Vec3& y) {
    return std::abs(p) <= 1e-14 * x.norm() * y.norm();
  };
  if (coincident(ab, a, b) || coincident(bc, b, c) || coincident(ca, c, a)) {
    throw DomainError("Cartan angle needs three distinct boundary points");
  }
  const double angle = std::arg(-(ab * bc * ca));
  return std::clamp(angle, -kPi / 2.0, kPi / 2.0);
}

double cartan_angle(const BoundaryTriple& t) {
  return cartan_angle_lifts(t.x0.lift(), t.x1.lift(), t.x2.lift(), FormTag::Siegel);
}

namespace {

/// G1 limit point on the negative real ray closest to the unit sphere.
std::pair<Word, HeisenbergPoint> negative_ray_point(const MarkedGroup& g, int depth) {
  const auto& g1 = g.decomposition->g1;
  std::vector<Isometry> gens;
  std::vector<int> index;
  for (const auto& n : g1) {
    gens.push_back(g.generator(n));
    index.push_back(g.index_of(n));
  }
  HeisenbergPoint seed;
  bool found = false;
  for (const auto& gen : gens) {
    if (classify(gen).kind != IsometryKind::Loxodromic) continue;
    seed = HeisenbergPoint::from_lift(loxodromic_fixed_points(gen).attracting);
    found = true;
    break;
  }
  if (!found) throw DomainError("G1 has no loxodromic generator");
  const Vec3 lift = seed.lift();

  struct Pick {
    HeisenbergPoint p;
    double score;
  };
  auto items = collect_reduced_words<Pick>(
      gens, std::min(depth, 8),
      [&](const Word&, const Isometry& m) -> std::optional<Pick> {
        const HeisenbergPoint p = HeisenbergPoint::from_lift(m.apply(lift));
        if (p.infinite) return std::nullopt;
        const double x = p.xi.real();
        if (!(x < 0.0)) return std::nullopt;
        const double a = -x;
        if (a < 1e-6 || a > 1e6) return std::nullopt;
        if (std::abs(p.xi.imag()) > 1e-8 * a || std::abs(p.v) > 1e-8 * a * a) return std::nullopt;
        return Pick{p, std::abs(std::log(a))};
      },
      true);
  if (items.empty()) throw DomainError("no G1 limit sample on the negative real ray at this depth");
  std::size_t best = 0;
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].second.score < items[best].second.score) best = i;
  }
  Word w;
  for (Letter l : items[best].first.letters()) w.push_back(letter_of(index[generator_index(l)], l < 0));
  return {w, items[best].second.p};
}

}  // namespace

Certificate nontriviality_certificate(const BentGroup& b, int depth) {
  const MarkedGroup& g = b.base;
  if (!g.normalized) throw DomainError("certificate needs a normalized base group");
  if (!g.decomposition) throw DomainError("certificate needs a decomposition");
  if (depth < 1) throw DomainError("certificate depth must be at least 1");

  Certificate c;
  c.eta = b.params.eta;
  c.applicable = b.params.eta != 0.0;

  auto [x1_word, x1] = negative_ray_point(g, depth);
  c.x1_word = x1_word;

  const Decomposition& d = *g.decomposition;
  const std::string& name = d.kind == Decomposition::Kind::Amalgam ? d.g2.at(0) : d.stable_letter;
  const int k = g.index_of(name);
  c.x2_generator = Word{letter_of(k, false)};
  const Isometry& bent = b.generators_eta.at(k);
  if (classify(bent).kind != IsometryKind::Loxodromic) throw DomainError("bent generator '" + name + "' is not loxodromic");
  HeisenbergPoint x2 = HeisenbergPoint::from_lift(loxodromic_fixed_points(bent).attracting);
  if (x2.infinite) throw DomainError("bent generator fixes infinity");

  // g_alpha = dilation(e^{l/2}) up to a unit diagonal; a power of it brings
  // x2 to the Cygan radius of x1.
  const Isometry alpha = g.g_alpha_matrix();
  const double ell = translation_length(alpha);
  const double a = std::abs(x1.xi);
  const double r = cygan_norm(x2);
  c.pull_power = static_cast<int>(std::lround(std::log(r / a) / (ell / 2.0)));
  const Isometry step = c.pull_power > 0 ? alpha.inverse() : alpha;
  for (int i = 0; i < std::abs(c.pull_power); ++i) x2 = apply(step, x2);

  c.triple = {x1, HeisenbergPoint::origin(), x2};
  c.angle = cartan_angle(c.triple);
  c.pass = c.applicable && std::abs(c.angle) > 1e-6 && std::abs(c.angle) < kPi / 2.0 - 1e-6;
  return c;
}

InjectivityScan injectivity_scan(const MarkedGroup& g, const std::vector<double>& etas, int depth, double zeta) {
  for (std::size_t i = 0; i < etas.size(); ++i) {
    for (std::size_t j = i + 1; j < etas.size(); ++j) {
      if (etas[i] == etas[j]) throw DomainError("injectivity_scan needs distinct eta values");
    }
  }
  InjectivityScan scan;
  for (double eta : etas) scan.rows.push_back(nontriviality_certificate(bend_group(g, BendingParams(eta, zeta)), depth));
  scan.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < scan.rows.size(); ++j) {
      scan.min_gap = std::min(scan.min_gap, std::abs(scan.rows[i].angle - scan.rows[j].angle));
    }
  }
  scan.pass = scan.min_gap > 1e-6;
  return scan;
}

}  // namespace chbend
