#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "chbend/collar.hpp"

namespace chbend::cli {

namespace {

std::string fmt(double x, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

/// Writes to the file, or to out when the path is empty.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

struct BuildArgs {
  std::optional<double> ell;
  double twist = 0.0;
  bool hnn = false;
  double boundary = 8.0;
  std::string config;
  std::string out;
};

MarkedGroup group_from_params(double ell, double twist, bool hnn, double boundary) {
  return hnn ? genus2_hnn_group(ell, twist, boundary) : genus2_group(ell, twist);
}

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  if (a.ell.has_value() == !a.config.empty()) {
    err << "build: give exactly one of --ell or --config\n";
    return kExitValidation;
  }
  MarkedGroup g;
  if (a.ell) {
    g = group_from_params(*a.ell, a.twist, a.hnn, a.boundary);
  } else {
    const json j = json::parse(read_file(a.config));
    if (j.contains("format")) {
      g = group_from_json(j);
    } else {
      // Builder parameters: {"ell": .., "twist": .., "hnn": .., "boundary": ..}
      if (!j.contains("ell") || !j.at("ell").is_number()) throw SchemaError("config needs a numeric ell or a group document");
      g = group_from_params(j.at("ell").get<double>(), j.value("twist", 0.0), j.value("hnn", false),
                            j.value("boundary", 8.0));
    }
  }
  const MarkedGroup n = normalize_axis(g);
  const double ell = translation_length(n.g_alpha_matrix());
  emit(a.out, dump(group_to_json(n)), out);
  std::ostream& report = a.out.empty() ? err : out;
  report << "ell(g_alpha) = " << fmt(ell) << "\n";
  report << "collar_bound = " << fmt(collar_bound(ell)) << "\n";
  report << "relation_residual = " << n.max_relation_residual() << "\n";
  report << "form_residual = " << n.max_form_residual() << "\n";
  return kExitOk;
}

MarkedGroup load_group(const std::string& path) {
  const Document d = load_document(path);
  if (const auto* g = std::get_if<MarkedGroup>(&d)) return *g;
  return std::get<BentGroup>(d).base;
}

struct BendArgs {
  std::string input;
  double eta = 0.0;
  std::optional<double> zeta;
  std::string out;
};

int cmd_bend(const BendArgs& a, std::ostream& out, std::ostream& err) {
  MarkedGroup g = load_group(a.input);
  if (!g.normalized) g = normalize_axis(g);
  const double zeta = a.zeta ? *a.zeta : default_zeta(g, a.eta);
  const BentGroup b = bend_group(g, BendingParams(a.eta, zeta));
  emit(a.out, dump(bent_to_json(b)), out);
  std::ostream& report = a.out.empty() ? err : out;
  report << "eta = " << fmt(a.eta) << "\nzeta = " << fmt(zeta) << "\n";
  report << "chi:\n";
  for (const auto& n : g.names) report << "  " << n << " " << to_string(b.chi.at(n)) << "\n";
  report << "relation_residual = " << b.max_relation_residual() << "\n";
  return kExitOk;
}

struct LimitArgs {
  std::string input;
  int depth = 6;
  std::size_t budget = kDefaultWordBudget;
  std::string out;
};

int cmd_limitset(const LimitArgs& a, std::ostream& out, std::ostream& err) {
  const Document d = load_document(a.input);
  const std::vector<std::string>& names =
      std::holds_alternative<MarkedGroup>(d) ? std::get<MarkedGroup>(d).names : std::get<BentGroup>(d).base.names;
  try {
    const LimitSetResult r = std::holds_alternative<MarkedGroup>(d)
                                 ? limit_set(std::get<MarkedGroup>(d), a.depth, std::nullopt, a.budget)
                                 : limit_set(std::get<BentGroup>(d), a.depth, std::nullopt, a.budget);
    emit(a.out, limit_set_csv(r, names), out);
    (a.out.empty() ? err : out) << "samples = " << r.samples.size() << "\nwords = " << r.words_visited << "\n";
    return kExitOk;
  } catch (const LimitSetResourceError& e) {
    if (!a.out.empty()) write_file_atomic(a.out, limit_set_csv(e.partial(), names));
    err << "resource error: " << e.what() << "\n";
    if (!a.out.empty()) err << "partial samples (" << e.partial().samples.size() << ") written to " << a.out << "\n";
    return kExitResource;
  }
}

struct RenderArgs {
  std::string input;
  double extent = 0.0;
  std::string out;
};

int cmd_render(const RenderArgs& a, std::ostream& out, std::ostream&) {
  const auto points = parse_limit_set_csv(read_file(a.input));
  emit(a.out, render_svg(points, a.extent), out);
  return kExitOk;
}

struct VerifyArgs {
  std::string input;
  VerifyOptions opt;
  std::string report;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
  const Document d = load_document(a.input);
  const std::vector<Check> checks = std::holds_alternative<MarkedGroup>(d)
                                        ? verify_group(std::get<MarkedGroup>(d), a.opt)
                                        : verify_bent(std::get<BentGroup>(d), a.opt);
  bool ok = true;
  json rows = json::array();
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
    ok = ok && c.pass;
    rows.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  out << (ok ? "VERIFY PASS" : "VERIFY FAIL") << " (" << checks.size() << " checks)\n";
  if (!a.report.empty()) write_file_atomic(a.report, dump(json{{"pass", ok}, {"checks", rows}}));
  return ok ? kExitOk : kExitVerifyFailed;
}

struct CollarArgs {
  std::optional<double> ell;
  std::string input;
  int depth = 6;
};

int cmd_collar(const CollarArgs& a, std::ostream& out, std::ostream& err) {
  if (a.ell.has_value() == !a.input.empty()) {
    err << "collar: give exactly one of --ell or a group file\n";
    return kExitValidation;
  }
  out << "threshold_constant = " << fmt(collar_threshold_constant()) << "\n";
  out << "threshold_length = " << fmt(collar_threshold_length()) << "\n";
  if (a.ell) {
    out << "ell = " << fmt(*a.ell) << "\n";
    out << "delta_max = " << fmt(collar_bound(*a.ell)) << "\n";
    return kExitOk;
  }
  MarkedGroup g = load_group(a.input);
  if (!g.normalized) g = normalize_axis(g);
  const CollarReport r = collar_check(g, a.depth);
  out << "ell = " << fmt(r.ell) << "\n";
  out << "delta_max = " << fmt(r.delta_max) << "\n";
  out << "words_checked = " << r.words_checked << "\n";
  out << "min_slack = " << fmt(r.min_slack, 12) << "\n";
  out << "collar_inequality = " << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bending deformations of complex hyperbolic surface groups"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build and normalize a genus-2 group, or normalize a group document");
  build_cmd->add_option("--ell", build.ell, "Length of the marked geodesic");
  build_cmd->add_option("--twist", build.twist, "Twist along the marked geodesic");
  build_cmd->add_flag("--hnn", build.hnn, "Mark a non-separating curve (HNN splitting)");
  build_cmd->add_option("--boundary", build.boundary, "Separating curve length for --hnn");
  build_cmd->add_option("--config", build.config, "Group document or builder parameters (JSON)");
  build_cmd->add_option("-o,--out", build.out, "Output file (default stdout)");

  BendArgs bend;
  auto* bend_cmd = app.add_subcommand("bend", "Bend a normalized group along its marked geodesic");
  bend_cmd->add_option("group", bend.input, "Group document")->required();
  bend_cmd->add_option("--eta", bend.eta, "Bending angle")->required();
  bend_cmd->add_option("--zeta", bend.zeta, "Sector half-width (default: smallest admissible)");
  bend_cmd->add_option("-o,--out", bend.out, "Output file (default stdout)");

  LimitArgs lim;
  auto* lim_cmd = app.add_subcommand("limitset", "Sample the limit set as CSV");
  lim_cmd->add_option("group", lim.input, "Group or bent-group document")->required();
  lim_cmd->add_option("--depth", lim.depth, "Word length")->check(CLI::PositiveNumber);
  lim_cmd->add_option("--budget", lim.budget, "Maximum number of words");
  lim_cmd->add_option("-o,--out", lim.out, "Output CSV (default stdout)");

  RenderArgs ren;
  auto* ren_cmd = app.add_subcommand("render", "Render a limit-set CSV to SVG");
  ren_cmd->add_option("csv", ren.input, "Limit-set CSV")->required();
  ren_cmd->add_option("--extent", ren.extent, "Half-width of the Re xi window (default: from the data)");
  ren_cmd->add_option("-o,--out", ren.out, "Output SVG (default stdout)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run the invariant suites on a group or bent group");
  ver_cmd->add_option("document", ver.input, "Group or bent-group document")->required();
  ver_cmd->add_option("--depth", ver.opt.certificate_depth, "Certificate word depth")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--collar-depth", ver.opt.collar_depth, "Collar check word depth")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--dirichlet-depth", ver.opt.dirichlet_depth, "Dirichlet polygon word depth")
      ->check(CLI::Range(2, 12));
  ver_cmd->add_option("--samples", ver.opt.samples, "Random points per sampled check")->check(CLI::PositiveNumber);
  ver_cmd->add_option("--seed", ver.opt.seed, "Random seed for sampled checks");
  ver_cmd->add_option("--report", ver.report, "Write a JSON report");

  CollarArgs col;
  auto* col_cmd = app.add_subcommand("collar", "Collar constants, or the collar inequality of a group");
  col_cmd->add_option("--ell", col.ell, "Geodesic length");
  col_cmd->add_option("group", col.input, "Group document");
  col_cmd->add_option("--depth", col.depth, "Word depth for a group")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*build_cmd) return cmd_build(build, out, err);
    if (*bend_cmd) return cmd_bend(bend, out, err);
    if (*lim_cmd) return cmd_limitset(lim, out, err);
    if (*ren_cmd) return cmd_render(ren, out, err);
    if (*ver_cmd) return cmd_verify(ver, out, err);
    if (*col_cmd) return cmd_collar(col, out, err);
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConstructionError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::ios_base::failure& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace chbend::cli
