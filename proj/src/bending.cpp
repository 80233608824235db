#include "chbend/bending.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "chbend/dirichlet.hpp"

namespace chbend {

BendingParams::BendingParams(double eta_, double zeta_) : eta(eta_), zeta(zeta_) {
  if (!(zeta > 0.0 && zeta < kPi / 2.0)) throw DomainError("zeta must lie in (0, pi/2)");
  if (!(std::abs(eta) < kPi - 2.0 * zeta)) throw DomainError("|eta| must be below pi - 2 zeta");
}

cplx planar_bend(const BendingParams& params, cplx z) {
  if (z == cplx(0.0)) return z;
  const double eta = params.eta, zeta = params.zeta;
  if (eta < 0.0) return std::conj(planar_bend(BendingParams(-eta, zeta), std::conj(z)));
  const double width = kPi - 2.0 * zeta;
  const double theta = std::arg(z);
  if (std::abs(theta) >= kPi - zeta) return z;
  if (std::abs(theta) <= zeta) return z * std::polar(1.0, eta);
  if (theta > 0.0) return z * std::polar(1.0, eta * (1.0 - (theta - zeta) / width));
  return z * std::polar(1.0, eta * (1.0 + (theta + zeta) / width));
}

cplx planar_bend_inverse(const BendingParams& params, cplx w) {
  if (w == cplx(0.0)) return w;
  const double eta = params.eta, zeta = params.zeta;
  if (eta < 0.0) return std::conj(planar_bend_inverse(BendingParams(-eta, zeta), std::conj(w)));
  const double width = kPi - 2.0 * zeta;
  const double phi = std::arg(w);
  if (std::abs(phi) >= kPi - zeta) return w;
  if (phi >= eta - zeta && phi <= eta + zeta) return w * std::polar(1.0, -eta);
  const double shift = eta * (width + zeta);
  const double theta = phi > eta + zeta ? (phi * width - shift) / (width - eta) : (phi * width - shift) / (width + eta);
  return std::polar(std::abs(w), theta);
}

Distortion planar_distortion(const BendingParams& params, cplx z) {
  if (z == cplx(0.0)) return {1.0, true};
  const double eta = params.eta, zeta = params.zeta;
  if (eta < 0.0) return planar_distortion(BendingParams(-eta, zeta), std::conj(z));
  const double width = kPi - 2.0 * zeta;
  const double theta = std::arg(z);
  const double a = std::abs(theta);
  const bool boundary = a == zeta || a == kPi - zeta;
  if (a >= kPi - zeta || a <= zeta) return {1.0, boundary};
  if (theta > 0.0) return {width / (width - eta), false};
  return {(width + eta) / width, false};
}

namespace {

/// (xi, v) -> (s xi, s^2 v).
HeisenbergPoint scale(const HeisenbergPoint& p, double s) { return {s * p.xi, s * s * p.v, false}; }

}  // namespace

HeisenbergPoint elementary_bend_boundary(const BendingParams& params, const HeisenbergPoint& p) {
  if (p.infinite) return p;
  if (p.xi == cplx(0.0)) return p;  // vertical axis, including the origin
  const double r = cygan_norm(p);
  // Conjugate by h_r = dilation(r) h_1 dilation(1/r); the planar bend is
  // positively homogeneous, so work on the unit sphere.
  const Isometry& h1 = flattening_map_unit();
  const HeisenbergPoint q = apply(h1, scale(p, 1.0 / r));
  if (q.infinite) return p;
  const cplx w = planar_bend(params, q.xi);
  const HeisenbergPoint back = apply(h1.inverse(), HeisenbergPoint{w, 0.0, false});
  if (back.infinite) return back;
  return scale(back, r);
}

std::string to_string(ChiRule rule) {
  switch (rule) {
    case ChiRule::Fixed:
      return "fixed";
    case ChiRule::Conjugated:
      return "conjugated";
    case ChiRule::LeftMultiplied:
      return "left-multiplied";
  }
  return "unknown";
}

double BentGroup::max_relation_residual() const {
  double worst = 0.0;
  for (const auto& r : base.relations) worst = std::max(worst, scalar_residual(chi_of(r)));
  return worst;
}

double BentGroup::max_form_residual() const {
  double worst = 0.0;
  for (const auto& g : generators_eta) worst = std::max(worst, g.form_residual());
  return worst;
}

BentGroup bend_group(const MarkedGroup& g, const BendingParams& params) {
  if (!g.normalized || g.form != FormTag::Siegel) throw DomainError("bend_group needs a normalized group");
  if (!g.decomposition) throw DomainError("bend_group needs an amalgam or HNN decomposition");

  BentGroup out;
  out.base = g;
  out.params = params;
  out.generators_eta = g.generators;
  for (const auto& n : g.names) out.chi[n] = ChiRule::Fixed;

  // U_eta = diag(1, e^{i eta}, 1): conjugation multiplies entry (j, k) by
  // u_j conj(u_k); left multiplication scales the middle row.
  const cquad phase = polar_q(1, params.eta);
  const Decomposition& d = *g.decomposition;
  auto bent = [&](const std::string& n, bool conjugated) {
    Mat3q m = g.generator(n).precise();
    for (int k = 0; k < 3; ++k) {
      m(1, k) = phase * m(1, k);
      if (conjugated) m(k, 1) = conj(phase) * m(k, 1);
    }
    return Isometry(m, FormTag::Siegel);
  };
  if (d.kind == Decomposition::Kind::Amalgam) {
    for (const auto& n : d.g2) {
      out.chi[n] = ChiRule::Conjugated;
      if (params.eta != 0.0) out.generators_eta[g.index_of(n)] = bent(n, true);
    }
  } else {
    const std::string& t = d.stable_letter;
    out.chi[t] = ChiRule::LeftMultiplied;
    if (params.eta != 0.0) out.generators_eta[g.index_of(t)] = bent(t, false);
  }

  const double residual = out.max_relation_residual();
  if (!(residual < 1e-8)) {
    std::ostringstream os;
    os << "bent relation residual " << residual << " exceeds 1e-8; the decomposition does not match g_alpha";
    throw ConstructionError(os.str());
  }
  return out;
}

double required_zeta(const MarkedGroup& g, int depth, double floor) {
  if (!g.normalized) throw DomainError("required_zeta needs a normalized group");
  const BallPoint center = axis_center(g);
  const DirichletPolygon poly = dirichlet_polygon(g, center, depth);

  const Isometry alpha = g.g_alpha_matrix();
  const Isometry alpha_inv = alpha.inverse();

  // Center and its images in SIEGEL lifts, normalized to <z, z> = -1.
  auto normalize = [](Vec3 v) {
    const double n = -hermitian_product(v, v, FormTag::Siegel).real();
    return Vec3(v / std::sqrt(n));
  };
  const Vec3 z = normalize(ball_to_siegel(center.lift()));
  std::vector<Vec3> images;
  for (const auto& side : poly.sides) {
    const Isometry m = evaluate(side.word, g.generators);
    if (projective_distance(m, alpha) < 1e-8 || projective_distance(m, alpha_inv) < 1e-8) continue;
    images.push_back(normalize(m.apply(z)));
  }

  const Isometry& h1 = flattening_map_unit();
  double needed = floor;
  // Angle of a boundary point after flattening its Cygan sphere; +inf when
  // the flattening sends it to infinity.
  auto angle = [&](const HeisenbergPoint& x) {
    const double r = cygan_norm(x);
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    const HeisenbergPoint q = apply(h1, scale(x, 1.0 / r));
    if (q.infinite) return std::numeric_limits<double>::infinity();
    const double a = std::abs(std::arg(q.xi));
    return std::min(a, kPi - a);
  };

  for (const Vec3& w0 : images) {
    // The half-space of w meets the boundary in a ball containing the far
    // endpoint e of the ray from z through w.
    const cplx wz = hermitian_product(w0, z, FormTag::Siegel);
    const Vec3 w = w0 * (-std::conj(wz) / std::abs(wz));
    const double c = std::abs(wz);
    const Vec3 e = w - (c - std::sqrt(c * c - 1.0)) * z;
    const HeisenbergPoint center = HeisenbergPoint::from_lift(e);
    if (center.infinite) return kPi / 2.0;
    auto inside = [&](const HeisenbergPoint& y) {
      const Vec3 lx = heisenberg_product(center, y).lift();
      return std::abs(hermitian_product(lx, w, FormTag::Siegel)) < std::abs(hermitian_product(lx, z, FormTag::Siegel));
    };
    // Extent of the ball along the three Heisenberg directions.
    const HeisenbergPoint dirs[3] = {{cplx(1.0), 0.0, false}, {cplx(0.0, 1.0), 0.0, false}, {cplx(0.0), 1.0, false}};
    double extent[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      for (double sign : {-1.0, 1.0}) {
        auto at = [&](double t) {
          return HeisenbergPoint{sign * t * dirs[k].xi, sign * t * dirs[k].v, false};
        };
        double lo = 0.0, hi = 1e-12 * std::max(1.0, cygan_norm(center));
        while (inside(at(hi)) && hi < 1e12) {
          lo = hi;
          hi *= 2.0;
        }
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (inside(at(mid)) ? lo : hi) = mid;
        }
        extent[k] = std::max(extent[k], 1.25 * hi);
      }
    }
    constexpr int kGrid = 40;
    for (int i = 0; i <= kGrid; ++i) {
      for (int j = 0; j <= kGrid; ++j) {
        for (int k = 0; k <= kGrid; ++k) {
          const HeisenbergPoint y{cplx(extent[0] * (2.0 * i / kGrid - 1.0), extent[1] * (2.0 * j / kGrid - 1.0)),
                                  extent[2] * (2.0 * k / kGrid - 1.0), false};
          if (!inside(y)) continue;
          const double a = angle(heisenberg_product(center, y));
          if (std::isinf(a)) return kPi / 2.0;
          needed = std::max(needed, a);
        }
      }
    }
  }
  return needed;
}

double default_zeta(const MarkedGroup& g, double eta) {
  const double z = required_zeta(g);
  if (!(z < (kPi - std::abs(eta)) / 2.0)) {
    std::ostringstream os;
    os << "no admissible zeta: the Dirichlet sides need zeta >= " << z << " but |eta| = " << std::abs(eta)
       << " allows at most " << (kPi - std::abs(eta)) / 2.0;
    throw DomainError(os.str());
  }
  return z;
}

HeisenbergPoint equivariant_boundary_map(const BentGroup& b, const Word& word, const HeisenbergPoint& base_point) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (generator_index(word[i]) >= static_cast<int>(b.generators_eta.size())) {
      throw DomainError("word refers to a generator outside the bent group");
    }
  }
  const HeisenbergPoint bent = elementary_bend_boundary(b.params, base_point);
  if (word.empty()) return bent;
  return apply(b.chi_of(word), bent);
}

}  // namespace chbend
