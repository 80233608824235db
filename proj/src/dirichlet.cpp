#include "chbend/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace chbend {

namespace {

using Vec3d = Eigen::Vector3d;

double minkowski(const Vec3d& a, const Vec3d& b) { return a(0) * b(0) + a(1) * b(1) - a(2) * b(2); }

/// Distance (K = -1/4 units) between the center z (<z,z> = -1) and the
/// Klein point p.
double klein_distance(const Vec3d& z, const Vec2& p) {
  const Vec3d q(p(0), p(1), 1.0);
  const double qq = -minkowski(q, q);
  if (!(qq > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * std::acosh(std::max(1.0, std::abs(minkowski(z, q)) / std::sqrt(qq)));
}

struct Vertex {
  Vec2 p;
  int tag;  ///< tag of the edge leaving p; -1 for the initial box
};

/// Keeps the part of a convex polygon where a.x >= c.
std::vector<Vertex> clip(const std::vector<Vertex>& poly, const Vec2& a, double c, int tag) {
  std::vector<Vertex> out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& cur = poly[i];
    const Vertex& nxt = poly[(i + 1) % n];
    const double fc = a.dot(cur.p) - c;
    const double fn = a.dot(nxt.p) - c;
    if (fc >= 0.0) {
      out.push_back(cur);
      if (fn < 0.0) {
        const double t = fc / (fc - fn);
        out.push_back({cur.p + t * (nxt.p - cur.p), tag});
      }
    } else if (fn >= 0.0) {
      const double t = fc / (fc - fn);
      out.push_back({cur.p + t * (nxt.p - cur.p), cur.tag});
    }
  }
  // Drop degenerate edges.
  std::vector<Vertex> cleaned;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vertex& nxt = out[(i + 1) % out.size()];
    if ((out[i].p - nxt.p).norm() < 1e-14) continue;
    cleaned.push_back(out[i]);
  }
  return cleaned;
}

struct Candidate {
  Vec3d w;
  double distance;
};

struct Key2 {
  long long x, y;
  bool operator==(const Key2&) const = default;
};
struct Key2Hash {
  std::size_t operator()(const Key2& k) const {
    return std::hash<long long>()(k.x) * 1000003u ^ std::hash<long long>()(k.y);
  }
};

bool inside_disk(const std::vector<Vertex>& poly) {
  if (poly.size() < 3) return false;
  for (const auto& v : poly) {
    if (v.p.squaredNorm() >= 1.0 - 1e-12) return false;
  }
  return true;
}

Vec3d real_lift(const Vec3& v) { return v.real(); }

}  // namespace

std::vector<Vec2> DirichletPolygon::vertices() const {
  std::vector<Vec2> out;
  out.reserve(sides.size());
  for (const auto& s : sides) out.push_back(s.start);
  return out;
}

BallPoint axis_center(const MarkedGroup& group) {
  const MarkedGroup g = to_form(group, FormTag::Ball);
  const Isometry alpha = g.g_alpha_matrix();
  const FixedPoints fp = loxodromic_fixed_points(alpha);
  const Vec3 p = fp.attracting / fp.attracting(2);
  const Vec3 q = fp.repelling / fp.repelling(2);
  const bool real = group.is_real();
  auto at = [&](double s) {
    BallPoint c = BallPoint::from_lift(Vec3(std::exp(s) * p + std::exp(-s) * q));
    if (real) c = {cplx(c.z1.real()), cplx(c.z2.real())};
    return c;
  };

  // <z(s), q> / <z(s), p> scales like e^{2s}; one step of g_alpha moves s by
  // the period.
  const Vec3 gz = alpha.apply(at(0.0).lift());
  const double period = 0.5 * std::abs(std::log(std::abs(hermitian_product(gz, q, FormTag::Ball)) /
                                                std::abs(hermitian_product(gz, p, FormTag::Ball))));

  auto spread = [&](double s) {
    const BallPoint c = at(s);
    double total = 0.0;
    for (const auto& m : g.generators) total += distance(c, BallPoint::from_lift(m.apply(c.lift())));
    return total;
  };
  constexpr int kSamples = 24;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples; ++i) {
    const double v = spread(period * i / kSamples);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = period * (best - 1) / kSamples, hi = period * (best + 1) / kSamples;
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (spread(m1) < spread(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return at(0.5 * (lo + hi));
}

DirichletPolygon dirichlet_polygon(const MarkedGroup& group, const BallPoint& center, int depth) {
  if (depth < 2) throw DomainError("dirichlet_polygon depth must be at least 2");
  if (std::abs(center.z1.imag()) > kStructuralTol || std::abs(center.z2.imag()) > kStructuralTol) {
    throw DomainError("Dirichlet center is off the real plane");
  }
  if (!center.interior()) throw DomainError("Dirichlet center must be an interior point");
  const MarkedGroup g = to_form(group, FormTag::Ball);
  if (!g.is_real(1e-10)) throw DomainError("dirichlet_polygon applies to real (PO(2,1)) groups");

  Vec3d z(center.z1.real(), center.z2.real(), 1.0);
  z /= std::sqrt(-minkowski(z, z));
  const Vec3 zc = z.cast<cplx>();

  auto gather = [&](int d, double cap) {
    return collect_reduced_words<Candidate>(g.generators, d, [&](const Word&, const Isometry& m) -> std::optional<Candidate> {
      Vec3d w = real_lift(m.apply(zc));
      if (w(2) < 0.0) w = -w;
      const double c = std::max(1.0, -minkowski(z, w));
      const double dist = 2.0 * std::acosh(c);
      // Relator words evaluate to the identity up to rounding, which acosh
      // amplifies to ~1e-8 near zero.
      if (dist < 1e-6 || dist > cap) return std::nullopt;
      return Candidate{w, dist};
    });
  };

  auto build = [&](std::vector<std::pair<Word, Candidate>> items, DirichletPolygon& poly) {
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second.distance < b.second.distance; });
    std::unordered_set<Key2, Key2Hash> seen;
    std::vector<Word> words;
    std::vector<Vertex> verts = {{{-2.0, -2.0}, -1}, {{2.0, -2.0}, -1}, {{2.0, 2.0}, -1}, {{-2.0, 2.0}, -1}};
    double radius = std::numeric_limits<double>::infinity();
    for (auto& [word, cand] : items) {
      if (cand.distance > 2.0 * radius + 1e-9) break;
      const Key2 key{std::llround(cand.w(0) / cand.w(2) * 1e9), std::llround(cand.w(1) / cand.w(2) * 1e9)};
      if (!seen.insert(key).second) continue;
      ++poly.candidates;
      // <p, z - w> >= 0 with p = (x, y, 1).
      const Vec3d diff = z - cand.w;
      Vec2 a(diff(0), diff(1));
      double c = diff(2);
      const double scale = a.norm();
      if (scale == 0.0) continue;
      a /= scale;
      c /= scale;
      const int tag = static_cast<int>(words.size());
      words.push_back(word);
      verts = clip(verts, a, c, tag);
      if (inside_disk(verts)) {
        radius = 0.0;
        for (const auto& v : verts) radius = std::max(radius, klein_distance(z, v.p));
      }
    }
    poly.status = inside_disk(verts) ? PolygonStatus::Complete : PolygonStatus::Incomplete;
    poly.sides.clear();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (verts[i].tag < 0) continue;
      poly.sides.push_back({words[verts[i].tag], verts[i].p, verts[(i + 1) % verts.size()].p});
    }
    return radius;
  };

  DirichletPolygon poly;
  poly.center = center;
  poly.truncation_depth = depth;

  // A shallow pass bounds the circumradius; deeper words farther than twice
  // that radius cannot contribute a side.
  double cap = std::numeric_limits<double>::infinity();
  const int shallow = std::min(depth, 4);
  {
    DirichletPolygon probe;
    const double r = build(gather(shallow, cap), probe);
    if (probe.status == PolygonStatus::Complete) cap = 2.0 * r + 1e-9;
    if (shallow == depth) {
      probe.center = center;
      probe.truncation_depth = depth;
      return probe;
    }
  }
  build(gather(depth, cap), poly);
  return poly;
}

bool two_side_check(const DirichletPolygon& poly, const MarkedGroup& group) {
  const MarkedGroup g = to_form(group, FormTag::Ball);
  const Isometry alpha = g.g_alpha_matrix();
  const FixedPoints fp = loxodromic_fixed_points(alpha);
  const Vec2 e1 = (fp.attracting / fp.attracting(2)).real().head<2>();
  const Vec2 e2 = (fp.repelling / fp.repelling(2)).real().head<2>();
  const Vec2 dir = e2 - e1;
  const Vec2 normal(-dir(1), dir(0));
  auto side_of = [&](const Vec2& p) { return normal.dot(p - e1); };

  std::vector<const PolygonSide*> meeting;
  for (const auto& s : poly.sides) {
    const double a = side_of(s.start), b = side_of(s.end);
    const double tol = 1e-12 * normal.norm();
    if ((a > tol && b > tol) || (a < -tol && b < -tol)) continue;
    meeting.push_back(&s);
  }
  if (meeting.size() != 2) return false;
  const Isometry alpha_inv = alpha.inverse();
  auto matches = [&](const PolygonSide* s, const Isometry& target) {
    const Isometry m = evaluate(s->word, g.generators);
    const double scale = std::max(1.0, target.normalized().matrix().cwiseAbs().maxCoeff());
    return projective_distance(m, target) < 1e-8 * scale;
  };
  return (matches(meeting[0], alpha) && matches(meeting[1], alpha_inv)) ||
         (matches(meeting[0], alpha_inv) && matches(meeting[1], alpha));
}

std::vector<double> polygon_angles(const DirichletPolygon& poly) {
  const auto v = poly.vertices();
  const std::size_t n = v.size();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto lift = [](const Vec2& p) {
      Vec3d q(p(0), p(1), 1.0);
      return Vec3d(q / std::sqrt(-minkowski(q, q)));
    };
    const Vec3d c = lift(v[i]);
    const Vec3d p = lift(v[(i + n - 1) % n]);
    const Vec3d q = lift(v[(i + 1) % n]);
    const Vec3d tp = p + minkowski(p, c) * c;
    const Vec3d tq = q + minkowski(q, c) * c;
    const double cosang = minkowski(tp, tq) / std::sqrt(minkowski(tp, tp) * minkowski(tq, tq));
    out.push_back(std::acos(std::clamp(cosang, -1.0, 1.0)));
  }
  return out;
}

double polygon_area(const DirichletPolygon& poly) {
  if (poly.status != PolygonStatus::Complete) return std::numeric_limits<double>::infinity();
  const auto angles = polygon_angles(poly);
  double sum = 0.0;
  for (double a : angles) sum += a;
  const double defect = (static_cast<double>(angles.size()) - 2.0) * kPi - sum;
  return 4.0 * defect;
}

double two_side_lemma_residual(double ell, double delta) {
  if (!(ell > 0.0) || delta < 0.0) throw DomainError("two_side_lemma_residual needs ell > 0, delta >= 0");
  // Boost along x1 moving the origin a distance ell/2 (rapidity ell/4).
  const double r = ell / 4.0;
  Mat3 boost = Mat3::Identity();
  boost(0, 0) = boost(2, 2) = std::cosh(r);
  boost(0, 2) = boost(2, 0) = std::sinh(r);
  const Isometry b(boost, FormTag::Ball);
  const BallPoint z{};
  const BallPoint m = BallPoint::from_lift(b.apply(z.lift()));
  const BallPoint off{cplx(0.0), cplx(std::tanh(delta))};
  const BallPoint w = BallPoint::from_lift(b.apply(off.lift()));
  return distance(m, z) - distance(m, w);
}

double two_side_lemma_boundary_delta(double ell) {
  double lo = 0.0, hi = ell;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (two_side_lemma_residual(ell, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace chbend
