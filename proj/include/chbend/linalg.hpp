#pragma once

// Hermitian linear algebra on C^{2,1}: forms, isometries, points of the
// complex hyperbolic plane, and the Bergman distance.
//
// Distance normalization: cosh^2(d/2) = <p,q><q,p> / (<p,p><q,q>). With this
// choice totally real planes have curvature -1/4 and complex lines -1.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "chbend/quad.hpp"

namespace chbend {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;

// Tolerances shared across the project.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kNumericTol = 1e-9;
inline constexpr double kAmbiguityBand = 1e-9;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FormTag { Ball, Siegel };

std::string to_string(FormTag tag);
FormTag form_tag_from_string(const std::string& s);

/// Hermitian form of signature (2,1). BALL is diag(1,1,-1); SIEGEL is the
/// antidiagonal form pairing the first and third coordinates.
struct HermitianForm {
  Mat3 matrix;
  FormTag tag;

  static const HermitianForm& of(FormTag tag);
  static const HermitianForm& ball() { return of(FormTag::Ball); }
  static const HermitianForm& siegel() { return of(FormTag::Siegel); }
};

/// <v,w> = v^T J conj(w).
cplx hermitian_product(const Vec3& v, const Vec3& w, const HermitianForm& form);
cplx hermitian_product(const Vec3& v, const Vec3& w, FormTag tag);

/// A 3x3 complex matrix preserving a Hermitian form up to a unit scalar.
/// Matrices are stored as given; normalized() rescales to determinant one.
///
/// The matrix is held as an unevaluated sum hi + lo of two double matrices.
/// matrix() is the double part used for point maps and enumeration; products,
/// inverses, normalization and residuals are computed from the full sum in
/// binary128.
class Isometry {
 public:
  Isometry() : hi_(Mat3::Identity()), lo_(Mat3::Zero()), form_(FormTag::Siegel) {}
  Isometry(Mat3 m, FormTag form) : hi_(std::move(m)), lo_(Mat3::Zero()), form_(form) {}
  Isometry(Mat3 hi, Mat3 lo, FormTag form) : hi_(std::move(hi)), lo_(std::move(lo)), form_(form) {}
  Isometry(const Mat3q& m, FormTag form);

  static Isometry identity(FormTag form) { return {Mat3::Identity(), form}; }

  const Mat3& matrix() const { return hi_; }
  const Mat3& low_part() const { return lo_; }
  Mat3q precise() const { return to_quad(hi_, lo_); }
  FormTag form() const { return form_; }

  /// Rescaled by the principal cube root of the determinant.
  Isometry normalized() const;

  /// Uses m^{-1} = J^{-1} m^* J (exact for form-preserving matrices up to
  /// scale); the scale is corrected so that (g * g.inverse()) = I.
  Isometry inverse() const;

  Vec3 apply(const Vec3& v) const { return hi_ * v; }

  /// max-abs entry of m^* J m - J after determinant normalization.
  double form_residual() const;

  /// form_residual divided by max(1, |m|_max^2); meaningful for long words.
  double relative_form_residual() const;

  Isometry operator*(const Isometry& other) const;

 private:
  Mat3 hi_;
  Mat3 lo_;
  FormTag form_;
};

/// Hermitian form matrix in binary128.
const Mat3q& form_matrix_q(FormTag tag);

/// Distance from g to the nearest scalar multiple of the identity, after
/// determinant normalization. Used for relation residuals.
double scalar_residual(const Isometry& g);

/// Equality up to cube roots of unity after determinant normalization.
double projective_distance(const Isometry& a, const Isometry& b);

/// Point of the unit ball B^2 in C^2 (|z| < 1 interior, |z| = 1 boundary).
struct BallPoint {
  cplx z1{0.0};
  cplx z2{0.0};

  Vec3 lift() const { return Vec3(z1, z2, cplx(1.0)); }
  double norm_squared() const { return std::norm(z1) + std::norm(z2); }
  bool interior() const { return norm_squared() < 1.0; }

  /// Projects a BALL-form lift with nonzero last coordinate.
  static BallPoint from_lift(const Vec3& lift);
};

/// Bergman distance between interior points. Throws DomainError for
/// boundary (or exterior) input.
double distance(const BallPoint& p, const BallPoint& q);

/// Same formula on arbitrary negative lifts in the given form.
double distance_lifts(const Vec3& p, const Vec3& q, FormTag tag);

enum class IsometryKind { Elliptic, Parabolic, Loxodromic };

std::string to_string(IsometryKind kind);

struct Classification {
  IsometryKind kind;
  cplx trace;
  double discriminant;
  /// |discriminant| fell inside the ambiguity band; kind was decided from the
  /// eigenvalue structure instead of the sign of the discriminant.
  bool ambiguous;
  bool identity;
};

/// f(tau) = |tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27.
double trace_discriminant(cplx tau);

Classification classify(const Isometry& g);

/// 2 ln |lambda_max| for a loxodromic element; DomainError otherwise.
double translation_length(const Isometry& g);

/// Eigenvectors of a loxodromic element for its largest / smallest modulus
/// eigenvalues (attracting / repelling boundary fixed points).
struct FixedPoints {
  Vec3 attracting;
  Vec3 repelling;
};
FixedPoints loxodromic_fixed_points(const Isometry& g);

/// Cayley intertwiner C with C^* J_SIEGEL C = J_BALL; maps BALL lifts to
/// SIEGEL lifts. The ball point (-1,0) goes to infinity.
const Mat3& cayley_matrix();
const Mat3& cayley_inverse_matrix();

Vec3 ball_to_siegel(const Vec3& ball_lift);
Vec3 siegel_to_ball(const Vec3& siegel_lift);
Isometry to_siegel(const Isometry& g);
Isometry to_ball(const Isometry& g);
Isometry to_form(const Isometry& g, FormTag target);

}  // namespace chbend
