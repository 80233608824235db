#include "chbend/heisenberg.hpp"

#include <cmath>

namespace chbend {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Vec3 HeisenbergPoint::lift() const {
  if (infinite) return Vec3(cplx(1.0), cplx(0.0), cplx(0.0));
  return Vec3(cplx(-std::norm(xi), v), kSqrt2 * xi, cplx(1.0));
}

HeisenbergPoint HeisenbergPoint::from_lift(const Vec3& lift) {
  const double scale = lift.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw DomainError("zero lift");
  if (std::abs(lift(2)) <= 1e-15 * scale) return infinity();
  const Vec3 z = lift / lift(2);
  return {z(1) / kSqrt2, z(0).imag(), false};
}

HalfSpacePoint::HalfSpacePoint(cplx xi_, double v_, double u_) : xi(xi_), v(v_), u(u_) {
  if (u < 0.0) throw DomainError("horospherical height must be nonnegative");
}

HalfSpacePoint::HalfSpacePoint(const HeisenbergPoint& p) : xi(p.xi), v(p.v), u(0.0) {
  if (p.infinite) throw DomainError("infinity has no half-space coordinates");
}

Vec3 HalfSpacePoint::lift() const { return Vec3(cplx(-std::norm(xi) - u, v), kSqrt2 * xi, cplx(1.0)); }

HalfSpacePoint HalfSpacePoint::from_lift(const Vec3& lift) {
  if (lift(2) == cplx(0.0)) throw DomainError("lift at infinity has no half-space coordinates");
  const Vec3 z = lift / lift(2);
  const cplx xi = z(1) / kSqrt2;
  const double u = std::max(0.0, -z(0).real() - std::norm(xi));
  return {xi, z(0).imag(), u};
}

HeisenbergSphere::HeisenbergSphere(double r) : radius(r) {
  if (!(r > 0.0)) throw DomainError("Heisenberg sphere radius must be positive");
}

HeisenbergPoint heisenberg_product(const HeisenbergPoint& a, const HeisenbergPoint& b) {
  if (a.infinite || b.infinite) throw DomainError("infinity is not a Heisenberg group element");
  return {a.xi + b.xi, a.v + b.v + 2.0 * (a.xi * std::conj(b.xi)).imag(), false};
}

HeisenbergPoint heisenberg_inverse(const HeisenbergPoint& a) {
  if (a.infinite) throw DomainError("infinity is not a Heisenberg group element");
  return {-a.xi, -a.v, false};
}

double cygan_norm(const HalfSpacePoint& p) {
  return std::sqrt(std::abs(cplx(std::norm(p.xi) + p.u, -p.v)));
}

double cygan_norm(const HeisenbergPoint& p) {
  if (p.infinite) throw DomainError("Cygan norm of infinity");
  return cygan_norm(HalfSpacePoint(p));
}

double cygan_metric(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  if (p.infinite || q.infinite) throw DomainError("Cygan metric with infinity");
  return cygan_norm(heisenberg_product(heisenberg_inverse(q), p));
}

Isometry heisenberg_translation(cplx tau, double t) {
  const cquad tq(tau);
  Mat3q m = Mat3q::identity();
  m(0, 1) = cquad(-kSqrt2Q) * conj(tq);
  m(0, 2) = cquad(-norm(tq), t);
  m(1, 2) = cquad(kSqrt2Q) * tq;
  return {m, FormTag::Siegel};
}

Isometry dilation(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  Mat3q m;
  m(0, 0) = lambda;
  m(1, 1) = 1;
  m(2, 2) = 1 / static_cast<quad>(lambda);
  return {m, FormTag::Siegel};
}

Isometry rotation_u(double eta) {
  Mat3q m = Mat3q::identity();
  m(1, 1) = polar_q(1, eta);
  return {m, FormTag::Siegel};
}

Isometry siegel_inversion() {
  Mat3q m;
  m(0, 2) = 1;
  m(1, 1) = -1;
  m(2, 0) = 1;
  return {m, FormTag::Siegel};
}

HeisenbergPoint apply(const Isometry& g, const HeisenbergPoint& p) {
  if (g.form() != FormTag::Siegel) throw DomainError("Heisenberg action needs a SIEGEL isometry");
  // Binary128 so that long words lose nothing beyond the final rounding.
  const Mat3q m = g.precise();
  cquad l[3];
  if (p.infinite) {
    l[0] = cquad(1);
  } else {
    const quad xr = p.xi.real(), xi = p.xi.imag();
    l[0] = cquad(-(xr * xr + xi * xi), p.v);
    l[1] = cquad(kSqrt2Q * xr, kSqrt2Q * xi);
    l[2] = cquad(1);
  }
  cquad w[3];
  quad scale = 0;
  for (int i = 0; i < 3; ++i) {
    w[i] = m(i, 0) * l[0] + m(i, 1) * l[1] + m(i, 2) * l[2];
    scale = std::max(scale, abs(w[i]));
  }
  if (scale == 0) throw DomainError("zero lift");
  if (abs(w[2]) <= 1e-15Q * scale) return HeisenbergPoint::infinity();
  const cquad xi = w[1] / (cquad(kSqrt2Q) * w[2]);
  const cquad z0 = w[0] / w[2];
  return {to_double(xi), static_cast<double>(z0.im), false};
}

const Isometry& flattening_map_unit() {
  // Mirror: complex line polar to c = (1, 0, 1), bounded by |xi| = 1, v = 0.
  // Rotation factor i about the mirror sends (0,-1) to 0 and (0,1) to inf.
  static const Isometry h1 = [] {
    const Mat3q& j = form_matrix_q(FormTag::Siegel);
    Mat3q cc;  // c c^* J with c = (1, 0, 1); <c, c> = 2
    for (int a : {0, 2}) {
      for (int b : {0, 2}) cc(a, b) = 1;
    }
    cc = cc * j;
    const cquad factor = (cquad(0, 1) - cquad(1)) / cquad(2);
    return Isometry(Mat3q::identity() + factor * cc, FormTag::Siegel).normalized();
  }();
  return h1;
}

Isometry flattening_map(double r) {
  if (!(r > 0.0)) throw DomainError("flattening map radius must be positive");
  if (r == 1.0) return flattening_map_unit();
  return dilation(r) * flattening_map_unit() * dilation(1.0 / r);
}

bool sphere_membership(const HeisenbergPoint& p, const HeisenbergSphere& s, double tol) {
  if (p.infinite) return false;
  return std::abs(cygan_norm(p) - s.radius) < tol;
}

std::vector<HeisenbergPoint> sphere_sample(const HeisenbergSphere& s, int n) {
  if (n < 1) throw DomainError("sphere_sample needs n >= 1");
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const double r2 = s.radius * s.radius;
  std::vector<HeisenbergPoint> out;
  out.reserve(n);
  for (int j = 0; j < side && static_cast<int>(out.size()) < n; ++j) {
    // Interior heights only; the two vertices are added by callers that need them.
    const double psi = -kPi / 2.0 + kPi * (j + 0.5) / side;
    const double rho = std::sqrt(r2 * std::cos(psi));
    for (int i = 0; i < side && static_cast<int>(out.size()) < n; ++i) {
      const double theta = -kPi + 2.0 * kPi * (i + 0.5) / side;
      out.push_back({std::polar(rho, theta), r2 * std::sin(psi), false});
    }
  }
  return out;
}

}  // namespace chbend
