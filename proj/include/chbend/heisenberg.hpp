#pragma once

// Boundary Heisenberg group H = C x R of the Siegel domain, with the Cygan
// norm and metric, Heisenberg similarities and the sphere-flattening maps h_r.
//
// Horospherical coordinates (xi, v, u) lift to (-|xi|^2 - u + i v, sqrt2 xi, 1)
// in the SIEGEL form; infinity lifts to (1, 0, 0). Group law:
//   (xi1, v1) * (xi2, v2) = (xi1 + xi2, v1 + v2 + 2 Im(xi1 conj(xi2))).

#include <vector>

#include "chbend/linalg.hpp"

namespace chbend {

struct HeisenbergPoint {
  cplx xi{0.0};
  double v = 0.0;
  bool infinite = false;

  static HeisenbergPoint infinity() { return {cplx(0.0), 0.0, true}; }
  static HeisenbergPoint origin() { return {}; }

  Vec3 lift() const;
  /// Boundary point of a SIEGEL lift; the horospherical height is dropped.
  static HeisenbergPoint from_lift(const Vec3& lift);

  friend bool operator==(const HeisenbergPoint& a, const HeisenbergPoint& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.xi == b.xi && a.v == b.v;
  }
};

struct HalfSpacePoint {
  cplx xi{0.0};
  double v = 0.0;
  double u = 0.0;

  HalfSpacePoint() = default;
  HalfSpacePoint(cplx xi_, double v_, double u_);
  explicit HalfSpacePoint(const HeisenbergPoint& p);

  Vec3 lift() const;
  static HalfSpacePoint from_lift(const Vec3& lift);
};

struct HeisenbergSphere {
  double radius;

  explicit HeisenbergSphere(double r);
};

HeisenbergPoint heisenberg_product(const HeisenbergPoint& a, const HeisenbergPoint& b);
HeisenbergPoint heisenberg_inverse(const HeisenbergPoint& a);

/// |(|xi|^2 + u - i v)|^{1/2}.
double cygan_norm(const HalfSpacePoint& p);
double cygan_norm(const HeisenbergPoint& p);

/// rho_c(p, q) = || q^{-1} * p ||_c.
double cygan_metric(const HeisenbergPoint& p, const HeisenbergPoint& q);

/// Left translation by (tau, t) as a SIEGEL isometry.
Isometry heisenberg_translation(cplx tau, double t);

/// diag(lambda, 1, 1/lambda): (xi, v) -> (lambda xi, lambda^2 v).
Isometry dilation(double lambda);

/// diag(1, e^{i eta}, 1): (xi, v) -> (e^{i eta} xi, v).
Isometry rotation_u(double eta);

/// Involution swapping 0 and infinity.
Isometry siegel_inversion();

HeisenbergPoint apply(const Isometry& g, const HeisenbergPoint& p);

/// h_r: maps S(0, r) onto (C x {0}) u {inf}, (0, -r^2) -> 0, (0, r^2) -> inf,
/// and fixes the chain |xi| = r, v = 0 pointwise.
/// h_r = dilation(r) h_1 dilation(1/r).
Isometry flattening_map(double r);

/// The cached unit-radius map h_1. It is the complex reflection of order 4
/// whose mirror is the complex line bounded by the unit horizontal chain.
const Isometry& flattening_map_unit();

bool sphere_membership(const HeisenbergPoint& p, const HeisenbergSphere& s, double tol = 1e-10);

/// Points of S(0, r) on an (angle, height) grid: |xi|^2 = r^2 cos(psi),
/// v = r^2 sin(psi), arg xi = theta. Returns exactly n points.
std::vector<HeisenbergPoint> sphere_sample(const HeisenbergSphere& s, int n);

}  // namespace chbend
