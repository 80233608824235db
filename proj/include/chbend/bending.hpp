#pragma once

// Quasiconformal bending along the vertical axis: the planar bend of C, its
// extension to the Heisenberg group through the flattening maps h_r, the
// deformed groups G_eta and the equivariant boundary map on orbit samples.
//
// Only the boundary trace of the bending is computed; the interior extension
// to the ball is not.

#include <map>
#include <string>
#include <vector>

#include "chbend/fuchsian.hpp"

namespace chbend {

struct BendingParams {
  double eta = 0.0;
  double zeta = kPi / 6.0;

  /// Throws DomainError unless 0 < zeta < pi/2 and |eta| < pi - 2 zeta.
  BendingParams(double eta_, double zeta_);
};

/// Bends the real axis at the origin by eta; identity on |arg z| >= pi - zeta,
/// rotation by eta on |arg z| <= zeta, angular interpolation in between.
/// arg is taken in (-pi, pi]; 0 maps to 0.
cplx planar_bend(const BendingParams& params, cplx z);

/// Exact inverse of planar_bend.
cplx planar_bend_inverse(const BendingParams& params, cplx z);

struct Distortion {
  double k;
  /// arg z lies on a sector boundary; k is the value from the isometric side.
  bool on_boundary;
};

/// Closed-form linear distortion: 1 on the two isometric sectors,
/// (pi - 2 zeta)/(pi - 2 zeta - eta) on the upper and
/// (pi - 2 zeta + eta)/(pi - 2 zeta) on the lower interpolating sector for
/// eta >= 0; for eta < 0 the conjugation rule K_eta(z) = K_{-eta}(conj z).
Distortion planar_distortion(const BendingParams& params, cplx z);

/// Elementary bending of the Heisenberg group: on each sphere S(0, r) it is
/// h_r^{-1} o planar_bend o h_r. Fixes 0 and infinity.
HeisenbergPoint elementary_bend_boundary(const BendingParams& params, const HeisenbergPoint& p);

/// How chi acts on one generator.
enum class ChiRule { Fixed, Conjugated, LeftMultiplied };

std::string to_string(ChiRule rule);

struct BentGroup {
  MarkedGroup base;
  BendingParams params{0.0, kPi / 6.0};
  std::vector<Isometry> generators_eta;  ///< indexed like base.names
  std::map<std::string, ChiRule> chi;

  /// chi(word): the word evaluated in the bent generators.
  Isometry chi_of(const Word& w) const { return evaluate(w, generators_eta); }
  double max_relation_residual() const;
  double max_form_residual() const;
};

/// G_eta: AMALGAM conjugates G2 generators by rotation_u(eta); HNN
/// left-multiplies the stable letter. Needs a normalized group with a
/// decomposition; relation residual above 1e-8 is a ConstructionError.
BentGroup bend_group(const MarkedGroup& g, const BendingParams& params);

/// Smallest sector half-width whose cones contain the boundary traces of the
/// Dirichlet half-spaces of g (other than the two axis bisectors), measured
/// through the flattening maps. Sampled; returns at least `floor`.
double required_zeta(const MarkedGroup& g, int depth = 4, double floor = 1e-3);

/// Default sector half-width for a bend by eta: the required value when it
/// leaves room for eta, else DomainError.
double default_zeta(const MarkedGroup& g, double eta);

/// F(g x0) = chi(g) applied to elementary_bend_boundary(x0).
HeisenbergPoint equivariant_boundary_map(const BentGroup& b, const Word& word, const HeisenbergPoint& base_point);

}  // namespace chbend
