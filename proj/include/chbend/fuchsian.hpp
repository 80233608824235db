#pragma once

// Surface-group lattices in PO(2,1): SL(2,R) building blocks, Fenchel-Nielsen
// gluing of two one-holed tori, and normalization of a marked geodesic's axis
// to the vertical geodesic (0, inf) of the Siegel domain.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chbend/heisenberg.hpp"
#include "chbend/word.hpp"

namespace chbend {

using Sl2 = Eigen::Matrix2d;

struct Decomposition {
  enum class Kind { Amalgam, Hnn };
  Kind kind = Kind::Amalgam;
  std::vector<std::string> g1;
  /// AMALGAM only.
  std::vector<std::string> g2;
  /// HNN only.
  std::string stable_letter;
};

std::string to_string(Decomposition::Kind kind);

/// Generators, relations, marked class and splitting of a surface group.
struct MarkedGroup {
  FormTag form = FormTag::Ball;
  std::vector<std::string> names;
  std::vector<Isometry> generators;
  std::vector<Word> relations;
  Word g_alpha;
  std::optional<Decomposition> decomposition;
  /// g_alpha is diagonal in the SIEGEL form, attracting fixed point at inf.
  bool normalized = false;

  int index_of(const std::string& name) const;
  const Isometry& generator(const std::string& name) const { return generators.at(index_of(name)); }
  Isometry g_alpha_matrix() const { return evaluate(g_alpha, generators); }

  /// Largest scalar_residual over all relation words.
  double max_relation_residual() const;
  double max_form_residual() const;
  bool is_real(double tol = kStructuralTol) const;

  /// Throws ConstructionError when a relation fails at tol, the marked word is
  /// not loxodromic, or the decomposition names unknown generators.
  void validate(double relation_tol = 1e-10) const;
};

/// Generators a, b of a one-holed torus group whose commutator has
/// translation length ell_boundary (K = -1/4 units). Rejects ell <= 0 or > 20.
std::pair<Sl2, Sl2> holed_torus(double ell_boundary);

Sl2 commutator(const Sl2& a, const Sl2& b);

/// Adjoint (symmetric-square) representation SL(2,R) -> SO(2,1), returned in
/// the BALL form. SL(2,R) length L maps to translation length 2L.
Isometry adjoint_so21(const Sl2& m);

/// Same map with the result in the SIEGEL form, where the SL(2,R) boundary
/// point t in R u {inf} corresponds to the Heisenberg point (t, 0).
Isometry adjoint_so21_siegel(const Sl2& m);

/// Genus-2 surface group from two one-holed tori glued along the separating
/// geodesic g_alpha = [a1, b1] of length ell_alpha; `twist` is the
/// displacement along the common axis in the same length units.
MarkedGroup genus2_group(double ell_alpha, double twist);

/// Genus-2 group marked by a non-separating curve of length ell_alpha: two
/// one-holed tori whose curve a has that length, glued along a separating
/// curve of length ell_boundary. g_alpha = a1, base {a1, a2, b2}, stable
/// letter t with t ([a2, b2] a1) t^-1 = a1.
MarkedGroup genus2_hnn_group(double ell_alpha, double twist, double ell_boundary = 8.0);

/// Regular octagon group (interior angles pi/4, opposite sides paired).
/// Fixed geometry; g_alpha is the first side pairing and no splitting is set.
MarkedGroup regular_octagon_group();

/// Conjugates into the SIEGEL form with g_alpha = dilation(e^{ell/2}) (up to
/// a unit diagonal), positioned along the axis to minimize the largest
/// generator entry. For AMALGAM splittings the G1 limit set is placed on the
/// negative real ray. ConstructionError when the conjugated relations drift
/// above 1e-8 (very short or very badly conditioned curves).
MarkedGroup normalize_axis(const MarkedGroup& g);

/// Conjugates every generator by h (h g h^-1).
MarkedGroup conjugate(const MarkedGroup& g, const Isometry& h);

MarkedGroup to_form(const MarkedGroup& g, FormTag target);

}  // namespace chbend
