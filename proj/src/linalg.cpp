#include "chbend/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace chbend {

namespace {

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }


}  // namespace

std::string to_string(FormTag tag) { return tag == FormTag::Ball ? "BALL" : "SIEGEL"; }

FormTag form_tag_from_string(const std::string& s) {
  if (s == "BALL") return FormTag::Ball;
  if (s == "SIEGEL") return FormTag::Siegel;
  throw DomainError("unknown Hermitian form tag '" + s + "'");
}

const HermitianForm& HermitianForm::of(FormTag tag) {
  static const HermitianForm ball_form{Mat3(Eigen::Vector3cd(1.0, 1.0, -1.0).asDiagonal()),
                                       FormTag::Ball};
  static const HermitianForm siegel_form = [] {
    Mat3 j = Mat3::Zero();
    j(0, 2) = 1.0;
    j(1, 1) = 1.0;
    j(2, 0) = 1.0;
    return HermitianForm{j, FormTag::Siegel};
  }();
  return tag == FormTag::Ball ? ball_form : siegel_form;
}

cplx hermitian_product(const Vec3& v, const Vec3& w, const HermitianForm& form) {
  return (v.transpose() * form.matrix * w.conjugate())(0, 0);
}

cplx hermitian_product(const Vec3& v, const Vec3& w, FormTag tag) {
  if (tag == FormTag::Ball) return v(0) * std::conj(w(0)) + v(1) * std::conj(w(1)) - v(2) * std::conj(w(2));
  return v(0) * std::conj(w(2)) + v(1) * std::conj(w(1)) + v(2) * std::conj(w(0));
}

const Mat3q& form_matrix_q(FormTag tag) {
  static const Mat3q ball = to_quad(HermitianForm::ball().matrix);
  static const Mat3q siegel = to_quad(HermitianForm::siegel().matrix);
  return tag == FormTag::Ball ? ball : siegel;
}

Isometry::Isometry(const Mat3q& m, FormTag form) : form_(form) { split(m, hi_, lo_); }

Isometry Isometry::normalized() const {
  const Mat3q m = precise();
  const cquad det = m.determinant();
  if (det == cquad(1)) return *this;
  return {(cquad(1) / principal_cbrt(det)) * m, form_};
}

Isometry Isometry::inverse() const {
  const Mat3q& j = form_matrix_q(form_);
  const Mat3q m = precise();
  Mat3q inv = j * m.adjoint() * j;
  // m^* J m = |det|^{2/3} J for a scaled isometry.
  const quad scale = powq(abs(m.determinant()), quad(2) / 3);
  if (scale != 1) inv = cquad(1 / scale) * inv;
  return {inv, form_};
}

double Isometry::form_residual() const {
  const Mat3q& j = form_matrix_q(form_);
  const Mat3q n = normalized().precise();
  return static_cast<double>((n.adjoint() * j * n - j).max_abs());
}

double Isometry::relative_form_residual() const {
  const double size = static_cast<double>(normalized().precise().max_abs());
  return form_residual() / std::max(1.0, size * size);
}

Isometry Isometry::operator*(const Isometry& other) const {
  if (form_ != other.form_) throw DomainError("composing isometries of different Hermitian forms");
  return {precise() * other.precise(), form_};
}

double scalar_residual(const Isometry& g) {
  const Mat3q m = g.normalized().precise();
  const cquad mean = cquad(quad(1) / 3) * m.trace();
  return static_cast<double>((m - mean * Mat3q::identity()).max_abs());
}

double projective_distance(const Isometry& a, const Isometry& b) {
  const Mat3q ma = a.normalized().precise();
  const Mat3q mb = b.normalized().precise();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const cquad w = polar_q(1, 2 * kPiQ * k / 3);
    best = std::min(best, static_cast<double>((ma - w * mb).max_abs()));
  }
  return best;
}

BallPoint BallPoint::from_lift(const Vec3& lift) {
  if (lift(2) == cplx(0.0)) throw DomainError("ball lift with vanishing last coordinate");
  return {lift(0) / lift(2), lift(1) / lift(2)};
}

double distance_lifts(const Vec3& p, const Vec3& q, FormTag tag) {
  const double pp = hermitian_product(p, p, tag).real();
  const double qq = hermitian_product(q, q, tag).real();
  if (!(pp < 0.0) || !(qq < 0.0)) throw DomainError("distance requires interior (negative) lifts");
  const double pq2 = std::norm(hermitian_product(p, q, tag));
  const double cosh2 = pq2 / (pp * qq);
  const double c = std::sqrt(std::max(1.0, cosh2));
  return 2.0 * std::acosh(c);
}

double distance(const BallPoint& p, const BallPoint& q) {
  if (!p.interior() || !q.interior()) throw DomainError("distance requires interior ball points");
  return distance_lifts(p.lift(), q.lift(), FormTag::Ball);
}

std::string to_string(IsometryKind kind) {
  switch (kind) {
    case IsometryKind::Elliptic:
      return "ELLIPTIC";
    case IsometryKind::Parabolic:
      return "PARABOLIC";
    case IsometryKind::Loxodromic:
      return "LOXODROMIC";
  }
  return "UNKNOWN";
}

double trace_discriminant(cplx tau) {
  const double a2 = std::norm(tau);
  return a2 * a2 - 8.0 * (tau * tau * tau).real() + 18.0 * a2 - 27.0;
}

Classification classify(const Isometry& g) {
  const Mat3 m = g.normalized().matrix();
  Classification c{};
  c.trace = m.trace();
  c.discriminant = trace_discriminant(c.trace);
  c.identity = max_abs(m - (c.trace / 3.0) * Mat3::Identity()) < kStructuralTol;
  c.ambiguous = std::abs(c.discriminant) < kAmbiguityBand;

  if (c.identity) {
    c.kind = IsometryKind::Elliptic;
    return c;
  }
  if (!c.ambiguous) {
    c.kind = c.discriminant > 0.0 ? IsometryKind::Loxodromic : IsometryKind::Elliptic;
    return c;
  }

  // Inside the band: decide from the eigenvalue structure.
  Eigen::ComplexEigenSolver<Mat3> solver(m, false);
  const auto& ev = solver.eigenvalues();
  double max_mod = 0.0;
  for (int i = 0; i < 3; ++i) max_mod = std::max(max_mod, std::abs(ev(i)));
  if (max_mod > 1.0 + 1e-6) {
    c.kind = IsometryKind::Loxodromic;
    return c;
  }
  // Closest eigenvalue pair; diagonalizable iff its eigenspace is 2-dimensional.
  int bi = 0, bj = 1;
  double best = std::abs(ev(0) - ev(1));
  for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}}) {
    if (std::abs(ev(i) - ev(j)) < best) {
      best = std::abs(ev(i) - ev(j));
      bi = i;
      bj = j;
    }
  }
  const cplx lambda = 0.5 * (ev(bi) + ev(bj));
  Eigen::JacobiSVD<Mat3> svd(m - lambda * Mat3::Identity());
  const double second = svd.singularValues()(1);
  c.kind = second < 1e-6 ? IsometryKind::Elliptic : IsometryKind::Parabolic;
  return c;
}

double translation_length(const Isometry& g) {
  const Classification c = classify(g);
  if (c.kind != IsometryKind::Loxodromic) {
    throw DomainError("translation_length requires a loxodromic isometry (got " + to_string(c.kind) +
                      ")");
  }
  const Isometry n = g.normalized();
  Eigen::ComplexEigenSolver<Mat3> solver(n.matrix(), false);
  const auto& ev = solver.eigenvalues();
  int imax = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(ev(i)) > std::abs(ev(imax))) imax = i;
  }
  // Near-parabolic matrices are badly conditioned for QR; Newton on
  // x^3 - tau x^2 + conj(tau) x - 1 recovers the digits.
  const cquad tau = n.precise().trace();
  cquad x(ev(imax));
  for (int it = 0; it < 8; ++it) {
    const cquad p = ((x - tau) * x + conj(tau)) * x - cquad(1);
    const cquad dp = (cquad(3) * x - cquad(2) * tau) * x + conj(tau);
    if (norm(dp) == 0) break;
    const cquad step = p / dp;
    x -= step;
    if (abs(step) < 1e-30Q * abs(x)) break;
  }
  const double polished = static_cast<double>(2 * logq(abs(x)));
  const double rough = 2.0 * std::log(std::abs(ev(imax)));
  return std::abs(polished - rough) < 1e-3 * std::max(1.0, rough) ? polished : rough;
}

FixedPoints loxodromic_fixed_points(const Isometry& g) {
  if (classify(g).kind != IsometryKind::Loxodromic) {
    throw DomainError("fixed points requested for a non-loxodromic isometry");
  }
  Eigen::ComplexEigenSolver<Mat3> solver(g.normalized().matrix(), true);
  const auto& ev = solver.eigenvalues();
  int imax = 0, imin = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(ev(i)) > std::abs(ev(imax))) imax = i;
    if (std::abs(ev(i)) < std::abs(ev(imin))) imin = i;
  }
  return {solver.eigenvectors().col(imax), solver.eigenvectors().col(imin)};
}

namespace {

const Mat3q& cayley_q() {
  static const Mat3q c = [] {
    const quad s = 1 / kSqrt2Q;
    Mat3q m;
    m(0, 0) = s;
    m(0, 2) = -s;
    m(1, 1) = 1;
    m(2, 0) = s;
    m(2, 2) = s;
    return m;
  }();
  return c;
}

const Mat3q& cayley_inverse_q() {
  static const Mat3q ci = cayley_q().adjoint();
  return ci;
}

}  // namespace

const Mat3& cayley_matrix() {
  static const Mat3 c = [] {
    Mat3 hi, lo;
    split(cayley_q(), hi, lo);
    return hi;
  }();
  return c;
}

const Mat3& cayley_inverse_matrix() {
  static const Mat3 ci = cayley_matrix().transpose();
  return ci;
}

Vec3 ball_to_siegel(const Vec3& ball_lift) { return cayley_matrix() * ball_lift; }

Vec3 siegel_to_ball(const Vec3& siegel_lift) { return cayley_inverse_matrix() * siegel_lift; }

Isometry to_siegel(const Isometry& g) {
  if (g.form() == FormTag::Siegel) return g;
  return {cayley_q() * g.precise() * cayley_inverse_q(), FormTag::Siegel};
}

Isometry to_ball(const Isometry& g) {
  if (g.form() == FormTag::Ball) return g;
  return {cayley_inverse_q() * g.precise() * cayley_q(), FormTag::Ball};
}

Isometry to_form(const Isometry& g, FormTag target) {
  return target == FormTag::Ball ? to_ball(g) : to_siegel(g);
}

}  // namespace chbend
