#include "chbend/group_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace chbend {

namespace {

constexpr const char* kGroupFormat = "chbend-group";
constexpr const char* kBentFormat = "chbend-bent-group";
constexpr int kVersion = 1;

json matrix_to_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int k = 0; k < 3; ++k) row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(row);
  }
  return rows;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw SchemaError(what + " must be a number");
  return j.get<double>();
}

const json& field(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError("missing field '" + key + "'");
  return j.at(key);
}

Mat3 matrix_from_json(const json& j, const std::string& name) {
  const std::string what = "matrix of '" + name + "'";
  if (!j.is_array() || j.size() != 3) throw SchemaError(what + " must have 3 rows");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != 3) throw SchemaError(what + " rows must have 3 entries");
    for (int k = 0; k < 3; ++k) {
      const json& e = row[k];
      if (!e.is_array() || e.size() != 2) throw SchemaError(what + " entries must be [re, im] pairs");
      m(i, k) = cplx(number(e[0], what), number(e[1], what));
      if (!std::isfinite(m(i, k).real()) || !std::isfinite(m(i, k).imag())) throw SchemaError(what + " is not finite");
    }
  }
  return m;
}

json word_to_json(const Word& w, const std::vector<std::string>& names) { return w.to_tokens(names); }

Word word_from_json(const json& j, const std::vector<std::string>& names) {
  if (!j.is_array()) throw SchemaError("words must be arrays of generator tokens");
  std::vector<std::string> tokens;
  for (const auto& t : j) {
    if (!t.is_string()) throw SchemaError("word tokens must be strings");
    tokens.push_back(t.get<std::string>());
  }
  try {
    return Word::from_tokens(tokens, names);
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }
}

std::vector<std::string> names_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("name lists must be arrays");
  std::vector<std::string> out;
  for (const auto& n : j) {
    if (!n.is_string()) throw SchemaError("generator names must be strings");
    out.push_back(n.get<std::string>());
  }
  return out;
}

void check_format(const json& j, const char* expected) {
  const json& f = field(j, "format");
  if (!f.is_string() || f.get<std::string>() != expected) {
    throw SchemaError(std::string("expected format '") + expected + "'");
  }
  const json& v = field(j, "version");
  if (!v.is_number_integer() || v.get<int>() != kVersion) throw SchemaError("unsupported document version");
}

json generator_to_json(const std::string& name, const Isometry& g) {
  json j = {{"name", name}, {"matrix", matrix_to_json(g.matrix())}};
  // Low halves of the double-double entries, needed for exact relations.
  if (g.low_part().cwiseAbs().maxCoeff() != 0.0) j["matrix_lo"] = matrix_to_json(g.low_part());
  return j;
}

Isometry generator_from_json(const json& j, const std::string& name, FormTag form) {
  const Mat3 hi = matrix_from_json(field(j, "matrix"), name);
  if (!j.contains("matrix_lo")) return {hi, form};
  return {hi, matrix_from_json(j.at("matrix_lo"), name), form};
}

}  // namespace

json group_to_json(const MarkedGroup& g) {
  json j;
  j["format"] = kGroupFormat;
  j["version"] = kVersion;
  j["form"] = to_string(g.form);
  json gens = json::array();
  for (std::size_t i = 0; i < g.names.size(); ++i) {
    gens.push_back(generator_to_json(g.names[i], g.generators[i]));
  }
  j["generators"] = gens;
  json rels = json::array();
  for (const auto& r : g.relations) rels.push_back(word_to_json(r, g.names));
  j["relations"] = rels;
  j["g_alpha"] = word_to_json(g.g_alpha, g.names);
  if (g.decomposition) {
    const Decomposition& d = *g.decomposition;
    json dj;
    dj["type"] = to_string(d.kind);
    dj["g1"] = d.g1;
    if (d.kind == Decomposition::Kind::Amalgam) {
      dj["g2"] = d.g2;
    } else {
      dj["stable"] = d.stable_letter;
    }
    j["decomposition"] = dj;
  } else {
    j["decomposition"] = nullptr;
  }
  j["normalized"] = g.normalized;
  return j;
}

MarkedGroup group_from_json(const json& j, double relation_tol) {
  check_format(j, kGroupFormat);
  MarkedGroup g;
  const json& form = field(j, "form");
  if (!form.is_string()) throw SchemaError("form must be a string");
  try {
    g.form = form_tag_from_string(form.get<std::string>());
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }
  const json& gens = field(j, "generators");
  if (!gens.is_array() || gens.empty()) throw SchemaError("generators must be a nonempty array");
  for (const auto& gj : gens) {
    const json& name = field(gj, "name");
    if (!name.is_string() || name.get<std::string>().empty()) throw SchemaError("generator names must be nonempty strings");
    const std::string n = name.get<std::string>();
    if (n.find('*') != std::string::npos || n.find('^') != std::string::npos || n == "1") {
      throw SchemaError("generator name '" + n + "' clashes with the word syntax");
    }
    for (const auto& seen : g.names) {
      if (seen == n) throw SchemaError("duplicate generator name '" + n + "'");
    }
    g.names.push_back(n);
    g.generators.push_back(generator_from_json(gj, n, g.form));
  }
  const json& rels = field(j, "relations");
  if (!rels.is_array()) throw SchemaError("relations must be an array");
  for (const auto& r : rels) g.relations.push_back(word_from_json(r, g.names));
  g.g_alpha = word_from_json(field(j, "g_alpha"), g.names);
  if (j.contains("decomposition") && !j.at("decomposition").is_null()) {
    const json& dj = j.at("decomposition");
    const json& type = field(dj, "type");
    Decomposition d;
    if (type == "AMALGAM") {
      d.kind = Decomposition::Kind::Amalgam;
      d.g1 = names_from_json(field(dj, "g1"));
      d.g2 = names_from_json(field(dj, "g2"));
    } else if (type == "HNN") {
      d.kind = Decomposition::Kind::Hnn;
      d.g1 = names_from_json(field(dj, "g1"));
      const json& s = field(dj, "stable");
      if (!s.is_string()) throw SchemaError("stable letter must be a string");
      d.stable_letter = s.get<std::string>();
    } else {
      throw SchemaError("decomposition type must be AMALGAM or HNN");
    }
    for (const auto& n : d.g1) {
      if (std::find(g.names.begin(), g.names.end(), n) == g.names.end()) throw SchemaError("unknown generator '" + n + "' in g1");
    }
    for (const auto& n : d.g2) {
      if (std::find(g.names.begin(), g.names.end(), n) == g.names.end()) throw SchemaError("unknown generator '" + n + "' in g2");
    }
    if (d.kind == Decomposition::Kind::Hnn &&
        std::find(g.names.begin(), g.names.end(), d.stable_letter) == g.names.end()) {
      throw SchemaError("unknown stable letter '" + d.stable_letter + "'");
    }
    g.decomposition = d;
  }
  if (j.contains("normalized")) {
    if (!j.at("normalized").is_boolean()) throw SchemaError("normalized must be a boolean");
    g.normalized = j.at("normalized").get<bool>();
  }
  g.validate(relation_tol);
  if (g.normalized) {
    const MarkedGroup s = to_form(g, FormTag::Siegel);
    const Mat3 a = s.g_alpha_matrix().normalized().matrix();
    const double off = std::max({std::abs(a(0, 1)), std::abs(a(0, 2)), std::abs(a(1, 0)), std::abs(a(1, 2)),
                                 std::abs(a(2, 0)), std::abs(a(2, 1))});
    if (g.form != FormTag::Siegel || off > 1e-9 * a.cwiseAbs().maxCoeff()) {
      throw SchemaError("group is flagged normalized but g_alpha is not diagonal in the SIEGEL form");
    }
  }
  return g;
}

json bent_to_json(const BentGroup& b) {
  json j;
  j["format"] = kBentFormat;
  j["version"] = kVersion;
  j["base"] = group_to_json(b.base);
  j["eta"] = b.params.eta;
  j["zeta"] = b.params.zeta;
  json gens = json::array();
  for (std::size_t i = 0; i < b.base.names.size(); ++i) {
    gens.push_back(generator_to_json(b.base.names[i], b.generators_eta[i]));
  }
  j["generators_eta"] = gens;
  json chi = json::object();
  for (const auto& n : b.base.names) chi[n] = to_string(b.chi.at(n));
  j["chi"] = chi;
  return j;
}

BentGroup bent_from_json(const json& j) {
  check_format(j, kBentFormat);
  const MarkedGroup base = group_from_json(field(j, "base"));
  const BendingParams params(number(field(j, "eta"), "eta"), number(field(j, "zeta"), "zeta"));
  BentGroup b = bend_group(base, params);
  const json& gens = field(j, "generators_eta");
  if (!gens.is_array() || gens.size() != base.names.size()) throw SchemaError("generators_eta must list every generator");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string name = field(gens[i], "name").get<std::string>();
    if (name != base.names[i]) throw SchemaError("generators_eta order differs from the base group");
    const Mat3 m = matrix_from_json(field(gens[i], "matrix"), name);
    const double diff = (m - b.generators_eta[i].matrix()).cwiseAbs().maxCoeff();
    if (diff > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
      throw SchemaError("stored bent generator '" + name + "' does not match the bend of the base group");
    }
  }
  return b;
}

json point_to_json(const HeisenbergPoint& p) {
  if (p.infinite) return "inf";
  return {{"re_xi", p.xi.real()}, {"im_xi", p.xi.imag()}, {"v", p.v}};
}

json certificate_to_json(const Certificate& c) {
  json j;
  j["eta"] = c.eta;
  j["triple"] = json::array({point_to_json(c.triple.x0), point_to_json(c.triple.x1), point_to_json(c.triple.x2)});
  j["angle"] = c.angle;
  j["pull_power"] = c.pull_power;
  j["applicable"] = c.applicable;
  j["pass"] = c.pass;
  return j;
}

json scan_to_json(const InjectivityScan& s) {
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(certificate_to_json(r));
  return {{"rows", rows}, {"min_gap", s.min_gap}, {"pass", s.pass}};
}

json collar_to_json(const CollarReport& r, const std::vector<std::string>& names) {
  json w = json::array();
  for (const auto& x : r.witnesses) {
    w.push_back({{"word", x.word.to_string(names)}, {"distance", x.distance}, {"slack", x.slack}});
  }
  return {{"ell", r.ell},       {"delta_max", r.delta_max},         {"pass", r.pass},
          {"min_slack", r.min_slack}, {"words_checked", r.words_checked}, {"witnesses", w}};
}

Document document_from_json(const json& j) {
  const json& f = field(j, "format");
  if (f == kGroupFormat) return group_from_json(j);
  if (f == kBentFormat) return bent_from_json(j);
  throw SchemaError("unknown document format");
}

Document load_document(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": not valid JSON (" + e.what() + ")");
  }
  return document_from_json(j);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SchemaError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw SchemaError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw SchemaError("cannot move output into '" + path + "'");
  }
}

}  // namespace chbend
