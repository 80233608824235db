#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "chbend/cartan.hpp"
#include "chbend/collar.hpp"
#include "chbend/dirichlet.hpp"
#include "chbend/heisenberg.hpp"
#include "cli.hpp"

namespace chbend::cli {

namespace {

constexpr double kFormTol = 1e-12;
constexpr double kRelationTol = 1e-10;

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string fixed(double x, int digits = 9) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

bool bit_equal(const Isometry& a, const Isometry& b) {
  return a.form() == b.form() && a.matrix() == b.matrix() && a.low_part() == b.low_part();
}

/// Largest off-diagonal entry relative to the largest diagonal entry.
double off_diagonal(const Isometry& g) {
  const Mat3& m = g.matrix();
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double& slot = i == j ? diag : off;
      slot = std::max(slot, std::abs(m(i, j)));
    }
  }
  return off / diag;
}

void structural(std::vector<Check>& out, const std::string& prefix, double form, double relation) {
  out.push_back({prefix + "form_preservation", form < kFormTol, "max residual " + sci(form)});
  out.push_back({prefix + "relations", relation < kRelationTol, "max residual " + sci(relation)});
}

HeisenbergPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return {cplx(u(rng), u(rng)), u(rng), false};
}

void bending_coherence(std::vector<Check>& out, const BendingParams& params, double ell,
                       const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  double plane = 0.0, dil = 0.0, norm = 0.0;
  const Isometry d = dilation(std::exp(ell / 2.0));
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < opt.samples; ++i) {
    const cplx z(u(rng), u(rng));
    const HeisenbergPoint b = elementary_bend_boundary(params, {z, 0.0, false});
    const double scale = std::max(1.0, std::abs(z));
    plane = std::max(plane, (std::abs(b.xi - planar_bend(params, z)) + std::abs(b.v)) / scale);

    const HeisenbergPoint p = random_point(rng);
    const HeisenbergPoint lhs = elementary_bend_boundary(params, apply(d, p));
    const HeisenbergPoint rhs = apply(d, elementary_bend_boundary(params, p));
    const double r = std::max(1.0, cygan_norm(rhs));
    dil = std::max(dil, std::abs(lhs.xi - rhs.xi) / r + std::abs(lhs.v - rhs.v) / (r * r));

    const double n = cygan_norm(p);
    norm = std::max(norm, std::abs(cygan_norm(elementary_bend_boundary(params, p)) - n) / std::max(1.0, n));
  }
  out.push_back({"bend_restricts_to_planar", plane < 1e-10, "max deviation " + sci(plane)});
  out.push_back({"bend_commutes_with_dilation", dil < 1e-9, "max deviation " + sci(dil)});
  out.push_back({"bend_preserves_cygan_norm", norm < 1e-10, "max deviation " + sci(norm)});
}

}  // namespace

std::vector<Check> verify_group(const MarkedGroup& g, const VerifyOptions& opt) {
  std::vector<Check> out;
  structural(out, "", g.max_form_residual(), g.max_relation_residual());

  const Isometry alpha = g.g_alpha_matrix();
  const Classification c = classify(alpha);
  const bool lox = c.kind == IsometryKind::Loxodromic;
  const double ell = lox ? translation_length(alpha) : 0.0;
  out.push_back({"g_alpha_loxodromic", lox, "ell " + fixed(ell)});
  if (!lox) return out;

  if (g.normalized) {
    const double off = off_diagonal(to_siegel(alpha));
    out.push_back({"axis_normalized", off < 1e-9, "off-diagonal " + sci(off)});
  }

  if (g.is_real() && g.normalized) {
    const CollarReport r = collar_check(g, opt.collar_depth);
    out.push_back({"collar_inequality", r.pass,
                   "depth " + std::to_string(opt.collar_depth) + ", " + std::to_string(r.words_checked) +
                       " words, min slack " + fixed(r.min_slack, 6)});

    const DirichletPolygon poly = dirichlet_polygon(g, axis_center(g), opt.dirichlet_depth);
    const bool complete = poly.status == PolygonStatus::Complete;
    out.push_back({"dirichlet_complete", complete,
                   std::to_string(poly.sides.size()) + " sides at depth " + std::to_string(opt.dirichlet_depth)});
    // One relation of length 4g: closed surface of genus g.
    if (g.relations.size() == 1 && g.relations.front().size() % 4 == 0) {
      const int genus = static_cast<int>(g.relations.front().size() / 4);
      const double expected = 4.0 * 2.0 * kPi * (2 * genus - 2);
      const double area = complete ? polygon_area(poly) : 0.0;
      out.push_back({"dirichlet_area", complete && std::abs(area - expected) < 1e-6 * expected,
                     "area " + fixed(area) + ", expected " + fixed(expected)});
    }
    const bool short_axis = ell < 4.0 * collar_bound(ell);
    if (short_axis) {
      out.push_back({"two_side_condition", complete && two_side_check(poly, g), "ell < 4 delta_max"});
    }
  }
  return out;
}

std::vector<Check> verify_bent(const BentGroup& b, const VerifyOptions& opt) {
  std::vector<Check> out;
  for (Check& c : verify_group(b.base, opt)) {
    c.name = "base." + c.name;
    out.push_back(std::move(c));
  }
  structural(out, "bent.", b.max_form_residual(), b.max_relation_residual());

  const bool fixed_alpha = bit_equal(b.chi_of(b.base.g_alpha), b.base.g_alpha_matrix());
  out.push_back({"chi_fixes_g_alpha", fixed_alpha, "bitwise"});

  if (b.params.eta == 0.0) {
    bool same = b.generators_eta.size() == b.base.generators.size();
    for (std::size_t i = 0; same && i < b.generators_eta.size(); ++i) {
      same = bit_equal(b.generators_eta[i], b.base.generators[i]);
    }
    out.push_back({"eta_zero_identity", same, "bitwise"});
  }

  const Certificate cert = nontriviality_certificate(b, opt.certificate_depth);
  const double a = std::abs(cert.angle);
  if (cert.applicable) {
    out.push_back({"nontriviality_certificate", cert.pass, "angle " + fixed(cert.angle, 12)});
  } else {
    out.push_back({"trivial_bend_angle", a < 1e-8, "angle " + sci(cert.angle)});
  }

  const double ell = translation_length(b.base.g_alpha_matrix());
  bending_coherence(out, b.params, ell, opt);
  return out;
}

}  // namespace chbend::cli
