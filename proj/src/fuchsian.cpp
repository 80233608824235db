#include "chbend/fuchsian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>
#include <sstream>

namespace chbend {

namespace {

/// SL(2,R) matrix in binary128, entries (a b; c d).
struct Sl2q {
  quad a, b, c, d;

  friend Sl2q operator*(const Sl2q& x, const Sl2q& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  Sl2q inverse() const { return {d, -b, -c, a}; }
  quad trace() const { return a + d; }
  quad det() const { return a * d - b * c; }
  Sl2 to_double() const {
    Sl2 m;
    m << static_cast<double>(a), static_cast<double>(b), static_cast<double>(c), static_cast<double>(d);
    return m;
  }
};

Sl2q commutator_q(const Sl2q& x, const Sl2q& y) { return x * y * x.inverse() * y.inverse(); }

/// Conjugation by diag(1, -1): the reflection z -> -conj(z) of the upper
/// half-plane across the imaginary axis.
Sl2q reflect(const Sl2q& m) { return {m.a, -m.b, -m.c, m.d}; }

/// Root x >= 3 of x^3 - 3x^2 + (t + 2) = 0 for t <= -2.
quad symmetric_trace(quad t) {
  auto g = [t](quad x) { return x * x * x - 3 * x * x + t + 2; };
  quad lo = 3, hi = 3 + fabsq(t + 2) + 1;
  for (int i = 0; i < 80; ++i) {
    const quad mid = (lo + hi) / 2;
    (g(mid) > 0 ? hi : lo) = mid;
  }
  quad x = (lo + hi) / 2;
  for (int i = 0; i < 4; ++i) {
    const quad d = 3 * x * x - 6 * x;
    if (d > 0) x -= g(x) / d;
  }
  return x;
}

Sl2q torus_a(quad x) { return {x, 1, -1, 0}; }

/// b with tr b = tr ab = y, given a = torus_a(x).
Sl2q torus_b(quad y) {
  const quad sigma = (y + sqrtq(y * y - 4)) / 2;
  return {0, -sigma, 1 / sigma, y};
}

/// Action on (-x^2, sqrt2 x y, y^2) induced by (x, y) -> (ax + by, cx + dy).
Mat3q sym2_siegel(const Sl2q& m) {
  const quad a = m.a, b = m.b, c = m.c, d = m.d, r = kSqrt2Q;
  Mat3q s;
  s(0, 0) = a * a;
  s(0, 1) = -r * a * b;
  s(0, 2) = -b * b;
  s(1, 0) = -r * a * c;
  s(1, 1) = a * d + b * c;
  s(1, 2) = r * b * d;
  s(2, 0) = -c * c;
  s(2, 1) = r * c * d;
  s(2, 2) = d * d;
  return s;
}

/// Eigenvector of a 2x2 matrix for eigenvalue lambda.
std::pair<quad, quad> eigenvector(const Sl2q& m, quad lambda) {
  const quad u0 = m.b, u1 = lambda - m.a;
  const quad w0 = lambda - m.d, w1 = m.c;
  if (fabsq(u0) + fabsq(u1) >= fabsq(w0) + fabsq(w1)) return {u0, u1};
  return {w0, w1};
}

Vec3 unit_scaled(const Vec3& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v / v(k);
}

struct Vec3q {
  cquad x[3];
};

Vec3q to_quad(const Vec3& v) { return {{cquad(v(0)), cquad(v(1)), cquad(v(2))}}; }

Vec3q mul(const Mat3q& m, const Vec3q& v) {
  Vec3q out;
  for (int i = 0; i < 3; ++i) out.x[i] = m(i, 0) * v.x[0] + m(i, 1) * v.x[1] + m(i, 2) * v.x[2];
  return out;
}

int largest(const Vec3q& v) {
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (norm(v.x[i]) > norm(v.x[k])) k = i;
  }
  return k;
}

Vec3q scaled_unit(const Vec3q& v) {
  const cquad s = v.x[largest(v)];
  return {{v.x[0] / s, v.x[1] / s, v.x[2] / s}};
}

/// Roots of the characteristic polynomial of m (Durand-Kerner), ordered by
/// increasing modulus.
std::array<cquad, 3> eigenvalues_q(const Mat3q& m) {
  const cquad t = m.trace();
  const cquad c2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                   m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const cquad d = m.determinant();
  auto p = [&](cquad x) { return ((x - t) * x + c2) * x - d; };
  const quad bound = 1 + fmaxq(abs(t), fmaxq(abs(c2), abs(d)));
  std::array<cquad, 3> z;
  const cquad seed(0.4Q, 0.9Q);
  z[0] = cquad(bound / 2) * seed;
  z[1] = z[0] * seed;
  z[2] = z[1] * seed;
  for (int it = 0; it < 2000; ++it) {
    quad moved = 0;
    for (int i = 0; i < 3; ++i) {
      cquad den(1);
      for (int j = 0; j < 3; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const cquad step = p(z[i]) / den;
      z[i] -= step;
      moved = fmaxq(moved, abs(step) / (abs(z[i]) + 1e-300Q));
    }
    if (moved < 1e-33Q) break;
  }
  std::sort(z.begin(), z.end(), [](cquad a, cquad b) { return norm(a) < norm(b); });
  return z;
}

/// Inverse iteration in binary128 with a fixed shift at the eigenvalue.
Vec3q refine_eigenvector(const Mat3q& m, cquad lambda, Vec3q v) {
  v = scaled_unit(v);
  Mat3q shifted = m;
  // Offset the shift slightly so the solve stays finite.
  const cquad mu = lambda + cquad(1e-30Q * (abs(lambda) + 1));
  for (int i = 0; i < 3; ++i) shifted(i, i) = shifted(i, i) - mu;
  const Mat3q solve = shifted.inverse();
  for (int it = 0; it < 3; ++it) v = scaled_unit(mul(solve, v));
  return v;
}

cquad hermitian_q(const Vec3q& v, const Vec3q& w) {
  // SIEGEL form.
  return v.x[0] * conj(w.x[2]) + v.x[1] * conj(w.x[1]) + v.x[2] * conj(w.x[0]);
}

/// Exact conjugation by diag(1, -1, 1): xi -> -xi.
Isometry flip_xi(const Isometry& g) {
  Mat3 hi = g.matrix(), lo = g.low_part();
  for (Mat3* m : {&hi, &lo}) {
    m->row(1) *= -1.0;
    m->col(1) *= -1.0;
  }
  return {hi, lo, g.form()};
}

Isometry real_part(const Isometry& g) {
  return {Mat3(g.matrix().real().cast<cplx>()), Mat3(g.low_part().real().cast<cplx>()), g.form()};
}

}  // namespace

std::string to_string(Decomposition::Kind kind) { return kind == Decomposition::Kind::Amalgam ? "AMALGAM" : "HNN"; }

int MarkedGroup::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw DomainError("unknown generator '" + name + "'");
}

double MarkedGroup::max_relation_residual() const {
  double worst = 0.0;
  for (const auto& r : relations) worst = std::max(worst, scalar_residual(evaluate(r, generators)));
  return worst;
}

double MarkedGroup::max_form_residual() const {
  double worst = 0.0;
  for (const auto& g : generators) worst = std::max(worst, g.form_residual());
  return worst;
}

bool MarkedGroup::is_real(double tol) const {
  for (const auto& g : generators) {
    if (g.matrix().imag().cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

void MarkedGroup::validate(double relation_tol) const {
  if (names.size() != generators.size()) throw ConstructionError("generator names and matrices differ in count");
  if (names.empty()) throw ConstructionError("group has no generators");
  for (const auto& g : generators) {
    if (g.form() != form) throw ConstructionError("generator in a different Hermitian form than the group");
  }
  const double rel = max_relation_residual();
  if (!(rel < relation_tol)) {
    std::ostringstream os;
    os << "relation residual " << rel << " exceeds " << relation_tol;
    throw ConstructionError(os.str());
  }
  if (g_alpha.empty()) throw ConstructionError("marked word g_alpha is empty");
  if (classify(g_alpha_matrix()).kind != IsometryKind::Loxodromic) {
    throw ConstructionError("marked word g_alpha is not loxodromic");
  }
  if (decomposition) {
    for (const auto& n : decomposition->g1) index_of(n);
    for (const auto& n : decomposition->g2) index_of(n);
    if (decomposition->kind == Decomposition::Kind::Hnn) index_of(decomposition->stable_letter);
  }
}

Sl2 commutator(const Sl2& a, const Sl2& b) {
  const Sl2 ai = (Sl2() << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0)).finished();
  const Sl2 bi = (Sl2() << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0)).finished();
  return a * b * ai * bi;
}

namespace {

void check_boundary_length(double ell) {
  if (!(ell > 0.0)) throw DomainError("boundary length must be positive");
  if (ell > 20.0) throw DomainError("boundary length above 20 is not supported");
}

std::pair<Sl2q, Sl2q> holed_torus_q(double ell_boundary) {
  check_boundary_length(ell_boundary);
  // SL(2,R) length is ell/2; tr[a,b] = -2 cosh(ell/4). Equal traces x = tr a =
  // tr b = tr ab solve 3x^2 - x^3 - 2 = tr[a,b].
  const quad x = symmetric_trace(-2 * coshq(static_cast<quad>(ell_boundary) / 4));
  return {torus_a(x), torus_b(x)};
}

Sl2q from_double(const Sl2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

}  // namespace

std::pair<Sl2, Sl2> holed_torus(double ell_boundary) {
  const auto [a, b] = holed_torus_q(ell_boundary);
  return {a.to_double(), b.to_double()};
}

Isometry adjoint_so21_siegel(const Sl2& m) {
  if (std::abs(m.determinant() - 1.0) > 1e-12) throw DomainError("adjoint_so21 needs determinant one");
  return {sym2_siegel(from_double(m)), FormTag::Siegel};
}

Isometry adjoint_so21(const Sl2& m) { return to_ball(adjoint_so21_siegel(m)); }

namespace {

struct Genus2Sl2 {
  Sl2q a1, b1, a2, b2;
};

Genus2Sl2 glue_tori(const Sl2q& a, const Sl2q& b, double twist) {
  const Sl2q c = commutator_q(a, b);

  // Conjugate so the commutator is diagonal with axis (0, inf).
  const quad tr = c.trace();
  const quad disc = tr * tr - 4;
  if (!(disc > 0)) throw ConstructionError("torus boundary is not hyperbolic");
  const quad root = sqrtq(disc);
  const quad big = tr < 0 ? (tr - root) / 2 : (tr + root) / 2;
  const auto [p00, p10] = eigenvector(c, big);
  const auto [p01, p11] = eigenvector(c, 1 / big);
  Sl2q p{p00, p01, p10, p11};
  if (p.det() < 0) {
    p.b = -p.b;
    p.d = -p.d;
  }
  const quad s = sqrtq(p.det());
  p = {p.a / s, p.b / s, p.c / s, p.d / s};

  Genus2Sl2 g;
  g.a1 = p.inverse() * a * p;
  g.b1 = p.inverse() * b * p;
  // Diagonal rescaling balancing the off-diagonal entries of a1.
  if (g.a1.b != 0 && g.a1.c != 0) {
    const quad k = sqrtq(sqrtq(fabsq(g.a1.b / g.a1.c)));
    const Sl2q d{k, 0, 0, 1 / k};
    g.a1 = d.inverse() * g.a1 * d;
    g.b1 = d.inverse() * g.b1 * d;
  }
  const quad e = expq(static_cast<quad>(twist) / 4);
  const Sl2q t{e, 0, 0, 1 / e};
  // Reflected copy across the common axis; swapping the roles of a and b
  // inverts the commutator, so [a2, b2] = [a1, b1]^{-1}.
  g.a2 = t * reflect(g.b1) * t.inverse();
  g.b2 = t * reflect(g.a1) * t.inverse();

  const Sl2q rel = commutator_q(g.a1, g.b1) * commutator_q(g.a2, g.b2);
  const quad mismatch = fabsq(rel.a - 1) + fabsq(rel.b) + fabsq(rel.c) + fabsq(rel.d - 1);
  if (mismatch > 1e-20Q) throw ConstructionError("gluing failed: boundary traces do not match");
  return g;
}

Isometry adjoint_ball(const Sl2q& m) { return to_ball(Isometry(sym2_siegel(m), FormTag::Siegel)); }

Word parse(const std::string& text, const std::vector<std::string>& names) { return Word::parse(text, names); }

}  // namespace

MarkedGroup genus2_group(double ell_alpha, double twist) {
  const auto [a, b] = holed_torus_q(ell_alpha);
  const Genus2Sl2 s = glue_tori(a, b, twist);
  MarkedGroup g;
  g.form = FormTag::Ball;
  g.names = {"a1", "b1", "a2", "b2"};
  g.generators = {adjoint_ball(s.a1), adjoint_ball(s.b1), adjoint_ball(s.a2), adjoint_ball(s.b2)};
  g.relations = {parse("a1*b1*a1^-1*b1^-1*a2*b2*a2^-1*b2^-1", g.names)};
  g.g_alpha = parse("a1*b1*a1^-1*b1^-1", g.names);
  g.decomposition = Decomposition{Decomposition::Kind::Amalgam, {"a1", "b1"}, {"a2", "b2"}, {}};
  g.normalized = false;
  g.validate();
  return g;
}

MarkedGroup genus2_hnn_group(double ell_alpha, double twist, double ell_boundary) {
  check_boundary_length(ell_alpha);
  check_boundary_length(ell_boundary);
  // One-holed tori with tr a = 2 cosh(ell/4) and tr b = tr ab = y; the
  // Fricke relation x^2 + 2y^2 - x y^2 - 2 = tr[a, b] fixes y.
  const quad x = 2 * coshq(static_cast<quad>(ell_alpha) / 4);
  const quad t = -2 * coshq(static_cast<quad>(ell_boundary) / 4);
  const quad y = sqrtq((x * x - 2 - t) / (x - 2));
  const Genus2Sl2 s = glue_tori(torus_a(x), torus_b(y), twist);
  MarkedGroup g;
  g.form = FormTag::Ball;
  g.names = {"a1", "t", "a2", "b2"};
  // t = b1^-1, so [a1, b1][a2, b2] = 1 reads t ([a2, b2] a1) t^-1 = a1.
  g.generators = {adjoint_ball(s.a1), adjoint_ball(s.b1.inverse()), adjoint_ball(s.a2), adjoint_ball(s.b2)};
  g.relations = {parse("t*a2*b2*a2^-1*b2^-1*a1*t^-1*a1^-1", g.names)};
  g.g_alpha = parse("a1", g.names);
  g.decomposition = Decomposition{Decomposition::Kind::Hnn, {"a1", "a2", "b2"}, {}, "t"};
  g.normalized = false;
  g.validate();
  return g;
}

MarkedGroup regular_octagon_group() {
  // Center-to-side distance r (curvature -1) has cosh r = 1 + sqrt2; opposite
  // sides are paired by hyperboloid boosts of rapidity 2r.
  const quad ch = 1 + kSqrt2Q;
  const quad sh = sqrtq(ch * ch - 1);
  const quad c2 = 2 * ch * ch - 1, s2 = 2 * sh * ch;
  Mat3q boost;
  boost(0, 0) = boost(2, 2) = cquad(c2);
  boost(0, 2) = boost(2, 0) = cquad(s2);
  boost(1, 1) = cquad(1);
  MarkedGroup g;
  g.form = FormTag::Ball;
  g.names = {"g0", "g1", "g2", "g3"};
  for (int k = 0; k < 4; ++k) {
    const quad phi = k * kPiQ / 4;
    Mat3q rot = Mat3q::identity();
    rot(0, 0) = rot(1, 1) = cquad(cosq(phi));
    rot(1, 0) = cquad(sinq(phi));
    rot(0, 1) = cquad(-sinq(phi));
    Mat3q rt = rot;
    rt(1, 0) = rot(0, 1);
    rt(0, 1) = rot(1, 0);
    g.generators.emplace_back(rot * boost * rt, FormTag::Ball);
  }
  g.relations = {parse("g0*g1^-1*g2*g3^-1*g0^-1*g1*g2^-1*g3", g.names)};
  g.g_alpha = parse("g0", g.names);
  g.validate();
  return g;
}

MarkedGroup conjugate(const MarkedGroup& g, const Isometry& h) {
  MarkedGroup out = g;
  const Isometry hinv = h.inverse();
  for (auto& m : out.generators) m = h * m * hinv;
  return out;
}

MarkedGroup to_form(const MarkedGroup& g, FormTag target) {
  MarkedGroup out = g;
  out.form = target;
  for (auto& m : out.generators) m = chbend::to_form(m, target);
  return out;
}

MarkedGroup normalize_axis(const MarkedGroup& input) {
  MarkedGroup g = to_form(input, FormTag::Siegel);
  const bool real = input.is_real();
  const Isometry alpha = g.g_alpha_matrix();
  if (classify(alpha).kind != IsometryKind::Loxodromic) throw DomainError("g_alpha is not loxodromic");

  const FixedPoints fp = loxodromic_fixed_points(alpha);
  const Mat3q a = alpha.normalized().precise();
  const auto lambdas = eigenvalues_q(a);
  auto eigen_pair = [&](const Vec3& v, cquad lambda) {
    return refine_eigenvector(a, lambda, to_quad(unit_scaled(v)));
  };
  Vec3q plus = eigen_pair(fp.attracting, lambdas[2]);
  Vec3q minus = eigen_pair(fp.repelling, lambdas[0]);
  if (real) {
    for (Vec3q* v : {&plus, &minus}) {
      for (auto& x : v->x) x.im = 0;
    }
  }

  // Columns of the inverse normalizer: plus -> inf, n, minus -> 0, chosen so
  // that the matrix preserves the form.
  const cquad pm = hermitian_q(minus, plus);
  const Vec3q jp{{conj(plus.x[2]), conj(plus.x[1]), conj(plus.x[0])}};
  const Vec3q jm{{conj(minus.x[2]), conj(minus.x[1]), conj(minus.x[0])}};
  Vec3q n{{jp.x[1] * jm.x[2] - jp.x[2] * jm.x[1], jp.x[2] * jm.x[0] - jp.x[0] * jm.x[2],
           jp.x[0] * jm.x[1] - jp.x[1] * jm.x[0]}};
  const quad nn = hermitian_q(n, n).re;
  if (!(nn > 0)) throw ConstructionError("degenerate fixed points of g_alpha");
  const quad sn = sqrtq(nn);
  Mat3q m;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = plus.x[i];
    m(i, 1) = n.x[i] / cquad(sn);
    m(i, 2) = minus.x[i] / pm;
  }
  const Mat3q n0 = m.inverse();

  // Position along the axis: the dilation diag(lambda, 1, 1/lambda) that
  // minimizes the largest generator entry. Entry (i, j) scales by
  // lambda^(e_i - e_j) with e = (1, 0, -1).
  std::vector<std::array<double, 9>> logs;
  const Mat3q n0_inv = n0.inverse();
  for (const auto& gen : g.generators) {
    const Mat3q c = n0 * gen.precise() * n0_inv;
    std::array<double, 9> l;
    for (int k = 0; k < 9; ++k) {
      const quad x = abs(c.a[k]);
      l[k] = x > 0 ? static_cast<double>(logq(x)) : -std::numeric_limits<double>::infinity();
    }
    logs.push_back(l);
  }
  auto worst = [&](double t) {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& l : logs) {
      for (int k = 0; k < 9; ++k) w = std::max(w, l[k] + t * ((1 - k / 3) - (1 - k % 3)));
    }
    return w;
  };
  double lo = -200.0, hi = 200.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (worst(m1) < worst(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const quad lambda = expq(static_cast<quad>(0.5 * (lo + hi)));
  Mat3q n1 = n0;
  for (int j = 0; j < 3; ++j) {
    n1(0, j) = cquad(lambda) * n1(0, j);
    n1(2, j) = n1(2, j) / cquad(lambda);
  }
  const Isometry normalizer(n1, FormTag::Siegel);

  MarkedGroup out = conjugate(g, normalizer);
  if (real) {
    // Real input stays real; scrub rounding noise in the imaginary parts.
    for (auto& gen : out.generators) gen = real_part(gen);
  }

  if (out.decomposition && out.decomposition->kind == Decomposition::Kind::Amalgam &&
      !out.decomposition->g1.empty()) {
    // Put the G1 side of the axis on the negative real ray.
    const Isometry& g1 = out.generator(out.decomposition->g1.front());
    if (classify(g1).kind == IsometryKind::Loxodromic) {
      const HeisenbergPoint x = HeisenbergPoint::from_lift(loxodromic_fixed_points(g1).attracting);
      if (!x.infinite && x.xi.real() > 0.0) {
        for (auto& gen : out.generators) gen = flip_xi(gen);
      }
    }
  }
  out.normalized = true;
  out.validate(1e-8);
  return out;
}

}  // namespace chbend
