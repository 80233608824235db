#include "chbend/collar.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace chbend {

namespace {

const Vec3 kInfinity(1.0, 0.0, 0.0);
const Vec3 kOrigin(0.0, 0.0, 1.0);

bool same_boundary_point(const Vec3& p, const Vec3& q, double tol) {
  // Projective comparison of null lifts, scaled by p's largest entry.
  Eigen::Index k = 0;
  p.cwiseAbs().maxCoeff(&k);
  if (std::abs(q(k)) == 0.0) return false;
  return (p / p(k) - q / q(k)).cwiseAbs().maxCoeff() < tol;
}

struct MatrixKey {
  std::array<long long, 18> q;
  bool operator==(const MatrixKey&) const = default;
};

struct MatrixKeyHash {
  std::size_t operator()(const MatrixKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k.q) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

MatrixKey quantize(const Isometry& g, double step) {
  Mat3 m = g.normalized().matrix();
  // Fix the cube-root-of-unity ambiguity by the phase of the largest entry.
  Eigen::Index r = 0, c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  const cplx ph = m(r, c) / std::abs(m(r, c));
  const double k = std::round(std::arg(ph) / (2.0 * kPi / 3.0));
  m *= std::polar(1.0, -k * 2.0 * kPi / 3.0);
  MatrixKey key{};
  for (int i = 0; i < 9; ++i) {
    key.q[2 * i] = std::llround(m(i / 3, i % 3).real() / step);
    key.q[2 * i + 1] = std::llround(m(i / 3, i % 3).imag() / step);
  }
  return key;
}

}  // namespace

double collar_bound(double ell) {
  if (!(ell > 0.0)) throw DomainError("collar_bound needs a positive length");
  return 2.0 * std::asinh(1.0 / (2.0 * std::sinh(ell / 4.0)));
}

double collar_threshold_constant() { return 0.5 / std::sinh(std::log(63.0) / 4.0); }

double collar_threshold_length() { return 2.0 * std::asinh(collar_threshold_constant()); }

double collar_product(double ell, double axis_distance) {
  return std::sinh(ell / 4.0) * std::sinh(axis_distance / 4.0);
}

double geodesic_distance(const Vec3& a1, const Vec3& a2, const Vec3& b1, const Vec3& b2) {
  constexpr FormTag s = FormTag::Siegel;
  const cplx num = hermitian_product(a1, b1, s) * hermitian_product(a2, b2, s) -
                   hermitian_product(a1, b2, s) * hermitian_product(a2, b1, s);
  const double den = std::abs(hermitian_product(a1, a2, s)) * std::abs(hermitian_product(b1, b2, s));
  if (den == 0.0) throw DomainError("geodesic with coincident endpoints");
  const double c = std::abs(num) / den;
  return c <= 1.0 ? 0.0 : 2.0 * std::acosh(c);
}

double axis_translate_distance(const Isometry& g) {
  // g(inf) and g(0) are the first and last columns; long words send both
  // close to one boundary point, so the cross-ratio is formed in binary128.
  const Mat3q m = g.precise();
  auto product = [&](int a, int b) { return m(0, a) * conj(m(2, b)) + m(1, a) * conj(m(1, b)) + m(2, a) * conj(m(0, b)); };
  // With A = (inf, 0): <inf, g inf> = conj m(2, 0), <0, g 0> = conj m(0, 2), etc.
  const cquad num = conj(m(2, 0)) * conj(m(0, 2)) - conj(m(2, 2)) * conj(m(0, 0));
  const quad den = abs(product(0, 2));
  if (den == 0) throw DomainError("geodesic with coincident endpoints");
  const double c = static_cast<double>(abs(num) / den);
  return c <= 1.0 ? 0.0 : 2.0 * std::acosh(c);
}

bool preserves_vertical_axis(const Isometry& g, double tol) {
  const Vec3 gi = g.apply(kInfinity), go = g.apply(kOrigin);
  return (same_boundary_point(gi, kInfinity, tol) && same_boundary_point(go, kOrigin, tol)) ||
         (same_boundary_point(gi, kOrigin, tol) && same_boundary_point(go, kInfinity, tol));
}

CollarReport collar_check(const MarkedGroup& g, int depth, std::size_t keep_witnesses) {
  if (depth < 1) throw DomainError("collar_check depth must be at least 1");
  if (!g.normalized) throw DomainError("collar_check needs a normalized group");
  if (!g.is_real()) throw DomainError("collar_check applies to real (PO(2,1)) groups");

  CollarReport report;
  report.ell = translation_length(g.g_alpha_matrix());
  report.delta_max = collar_bound(report.ell);

  struct Item {
    double distance;
    MatrixKey key;
  };
  auto items = collect_reduced_words<Item>(g.generators, depth, [](const Word&, const Isometry& m) -> std::optional<Item> {
    if (preserves_vertical_axis(m)) return std::nullopt;
    return Item{axis_translate_distance(m), quantize(m, 1e-8)};
  });

  std::unordered_set<MatrixKey, MatrixKeyHash> seen;
  std::vector<CollarWitness> all;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (auto& [word, item] : items) {
    if (!seen.insert(item.key).second) continue;
    ++report.words_checked;
    const double slack = collar_product(report.ell, item.distance) - 0.5;
    report.min_slack = std::min(report.min_slack, slack);
    all.push_back({word, item.distance, slack});
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.slack < b.slack; });
  for (const auto& w : all) {
    if (w.slack < -kNumericTol) {
      report.pass = false;
      report.witnesses.push_back(w);
    } else if (report.witnesses.size() < keep_witnesses) {
      report.witnesses.push_back(w);
    }
  }
  return report;
}

}  // namespace chbend
