#pragma once

// Binary128 complex arithmetic for 3x3 matrices.
//
// Generators of surface groups with a short marked geodesic have entries in
// the thousands, so rounding them to double already moves relation words by
// ~1e-6. Isometries therefore carry a double-double representation (hi + lo)
// whose products and residuals are evaluated here; bulk enumeration keeps
// using the double part.

#include <quadmath.h>

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace chbend {

using quad = __float128;

struct cquad {
  quad re = 0;
  quad im = 0;

  cquad() = default;
  cquad(quad r, quad i = 0) : re(r), im(i) {}
  explicit cquad(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  friend cquad operator+(cquad a, cquad b) { return {a.re + b.re, a.im + b.im}; }
  friend cquad operator-(cquad a, cquad b) { return {a.re - b.re, a.im - b.im}; }
  friend cquad operator-(cquad a) { return {-a.re, -a.im}; }
  friend cquad operator*(cquad a, cquad b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
  friend cquad operator/(cquad a, cquad b) {
    const quad d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  cquad& operator+=(cquad b) { return *this = *this + b; }
  cquad& operator-=(cquad b) { return *this = *this - b; }
  cquad& operator*=(cquad b) { return *this = *this * b; }
  friend bool operator==(cquad a, cquad b) { return a.re == b.re && a.im == b.im; }
};

inline cquad conj(cquad a) { return {a.re, -a.im}; }
inline quad norm(cquad a) { return a.re * a.re + a.im * a.im; }
inline quad abs(cquad a) { return hypotq(a.re, a.im); }
inline quad arg(cquad a) { return atan2q(a.im, a.re); }
inline cquad polar_q(quad r, quad theta) { return {r * cosq(theta), r * sinq(theta)}; }
inline std::complex<double> to_double(cquad a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }

inline const quad kPiQ = M_PIq;
inline const quad kSqrt2Q = M_SQRT2q;

struct Mat3q {
  std::array<cquad, 9> a{};

  cquad& operator()(int i, int j) { return a[3 * i + j]; }
  const cquad& operator()(int i, int j) const { return a[3 * i + j]; }

  static Mat3q identity() {
    Mat3q m;
    m(0, 0) = m(1, 1) = m(2, 2) = cquad(1);
    return m;
  }

  friend Mat3q operator*(const Mat3q& x, const Mat3q& y) {
    Mat3q out;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        cquad s = x(i, 0) * y(0, j);
        s += x(i, 1) * y(1, j);
        s += x(i, 2) * y(2, j);
        out(i, j) = s;
      }
    }
    return out;
  }
  friend Mat3q operator*(cquad s, const Mat3q& x) {
    Mat3q out;
    for (int k = 0; k < 9; ++k) out.a[k] = s * x.a[k];
    return out;
  }
  friend Mat3q operator+(const Mat3q& x, const Mat3q& y) {
    Mat3q out;
    for (int k = 0; k < 9; ++k) out.a[k] = x.a[k] + y.a[k];
    return out;
  }
  friend Mat3q operator-(const Mat3q& x, const Mat3q& y) {
    Mat3q out;
    for (int k = 0; k < 9; ++k) out.a[k] = x.a[k] - y.a[k];
    return out;
  }

  Mat3q adjoint() const {
    Mat3q out;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) out(i, j) = conj((*this)(j, i));
    }
    return out;
  }

  cquad trace() const { return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2); }

  cquad determinant() const {
    const Mat3q& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }

  /// Cofactor inverse.
  Mat3q inverse() const {
    const Mat3q& m = *this;
    Mat3q c;
    c(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    c(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    c(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    c(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    c(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    c(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    c(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    c(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    c(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return (cquad(1) / determinant()) * c;
  }

  quad max_abs() const {
    quad best = 0;
    for (const auto& z : a) best = fmaxq(best, abs(z));
    return best;
  }
};

using Mat3d = Eigen::Matrix3cd;

inline Mat3q to_quad(const Mat3d& hi, const Mat3d& lo) {
  Mat3q q;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      q(i, j) = {static_cast<quad>(hi(i, j).real()) + lo(i, j).real(),
                 static_cast<quad>(hi(i, j).imag()) + lo(i, j).imag()};
    }
  }
  return q;
}

inline Mat3q to_quad(const Mat3d& m) {
  Mat3q q;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) q(i, j) = cquad(m(i, j));
  }
  return q;
}

/// Rounds to the nearest double and keeps the rounding error as a second double.
inline void split(const Mat3q& q, Mat3d& hi, Mat3d& lo) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double hr = static_cast<double>(q(i, j).re);
      const double hi_im = static_cast<double>(q(i, j).im);
      hi(i, j) = {hr, hi_im};
      lo(i, j) = {static_cast<double>(q(i, j).re - hr), static_cast<double>(q(i, j).im - hi_im)};
    }
  }
}

inline cquad principal_cbrt(cquad z) {
  if (z == cquad(0)) return z;
  return polar_q(cbrtq(abs(z)), arg(z) / 3);
}

}  // namespace chbend
