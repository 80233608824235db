#include "chbend/limit_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace chbend {

namespace {

bool fixes(const Isometry& g, const HeisenbergPoint& p) {
  const HeisenbergPoint q = apply(g, p);
  if (p.infinite || q.infinite) return p.infinite && q.infinite;
  return cygan_metric(q, p) < 1e-12 * std::max(1.0, cygan_norm(p));
}

struct Cell {
  double x, y;
  bool operator==(const Cell&) const = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    return std::hash<double>()(c.x) * 1000003u ^ std::hash<double>()(c.y);
  }
};

/// Keeps each sample unless it lies within kLimitDedupTol of an earlier kept
/// one. The Cygan distance bounds |delta xi|, so a grid on xi with cells of the
/// tolerance only needs the neighbouring cells searched.
std::vector<LimitSample> dedup(std::vector<std::pair<Word, HeisenbergPoint>>& items) {
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash> grid;
  std::vector<LimitSample> out;
  bool have_infinity = false;
  for (auto& [word, p] : items) {
    if (p.infinite) {
      if (!have_infinity) out.push_back({std::move(word), p});
      have_infinity = true;
      continue;
    }
    const double cx = std::floor(p.xi.real() / kLimitDedupTol);
    const double cy = std::floor(p.xi.imag() / kLimitDedupTol);
    bool duplicate = false;
    for (double dx = -1; dx <= 1 && !duplicate; ++dx) {
      for (double dy = -1; dy <= 1 && !duplicate; ++dy) {
        const auto it = grid.find({cx + dx, cy + dy});
        if (it == grid.end()) continue;
        for (std::size_t k : it->second) {
          if (cygan_metric(out[k].point, p) < kLimitDedupTol) {
            duplicate = true;
            break;
          }
        }
      }
    }
    if (duplicate) continue;
    grid[{cx, cy}].push_back(out.size());
    out.push_back({std::move(word), p});
  }
  return out;
}

LimitSetResult enumerate(const std::vector<Isometry>& generators, int depth, const HeisenbergPoint& seed) {
  std::vector<char> stabilizes;
  for (const auto& g : generators) {
    stabilizes.push_back(fixes(g, seed));
    stabilizes.push_back(fixes(g.inverse(), seed));
  }
  const Vec3 lift = seed.lift();
  LimitSetResult r;
  r.seed = seed;
  r.depth = depth;
  std::size_t visited = 0;
  std::atomic<std::size_t> counter{0};
  auto items = collect_reduced_words<HeisenbergPoint>(
      generators, depth,
      [&](const Word& w, const Isometry& m) -> std::optional<HeisenbergPoint> {
        counter.fetch_add(1, std::memory_order_relaxed);
        if (!w.empty() && stabilizes[alphabet_rank(w.back())]) return std::nullopt;
        return HeisenbergPoint::from_lift(m.apply(lift));
      },
      true);
  visited = counter.load();
  r.words_visited = visited;
  r.samples = dedup(items);
  return r;
}

}  // namespace

double reduced_word_count(int generators, int depth) {
  const double k = 2.0 * generators;
  double total = 0.0, level = k;
  for (int d = 1; d <= depth; ++d) {
    total += level;
    level *= k - 1.0;
  }
  return total;
}

HeisenbergPoint default_seed(const MarkedGroup& group) {
  const MarkedGroup g = to_form(group, FormTag::Siegel);
  std::vector<std::string> order;
  if (g.decomposition) order = g.decomposition->g1;
  for (const auto& n : g.names) order.push_back(n);
  const Isometry alpha = g.g_alpha_matrix();
  for (const auto& n : order) {
    const Isometry& gen = g.generator(n);
    if (classify(gen).kind != IsometryKind::Loxodromic) continue;
    if (projective_distance(gen * alpha, alpha * gen) < 1e-9) continue;
    HeisenbergPoint p = HeisenbergPoint::from_lift(loxodromic_fixed_points(gen).attracting);
    // Orbit maps expand rounding noise off the real circle enormously.
    if (g.is_real(0.0) && !p.infinite) p = {cplx(p.xi.real()), 0.0, false};
    return p;
  }
  throw DomainError("no loxodromic generator outside the stabilizer of the axis to seed the orbit");
}

LimitSetResult limit_set(const std::vector<Isometry>& generators, int depth, const HeisenbergPoint& seed,
                         std::size_t word_budget) {
  if (depth < 1) throw DomainError("limit_set depth must be at least 1");
  for (const auto& g : generators) {
    if (g.form() != FormTag::Siegel) throw DomainError("limit_set expects SIEGEL generators");
  }
  const int n = static_cast<int>(generators.size());
  if (reduced_word_count(n, depth) <= static_cast<double>(word_budget)) return enumerate(generators, depth, seed);

  int fit = 0;
  while (fit < depth && reduced_word_count(n, fit + 1) <= static_cast<double>(word_budget)) ++fit;
  LimitSetResult partial;
  partial.seed = seed;
  if (fit >= 1) partial = enumerate(generators, fit, seed);
  std::ostringstream os;
  os << "depth " << depth << " needs " << reduced_word_count(n, depth) << " words, over the budget of "
     << word_budget << "; partial result kept at depth " << fit;
  throw LimitSetResourceError(os.str(), std::move(partial));
}

LimitSetResult limit_set(const MarkedGroup& group, int depth, std::optional<HeisenbergPoint> seed,
                         std::size_t word_budget) {
  const MarkedGroup g = to_form(group, FormTag::Siegel);
  return limit_set(g.generators, depth, seed ? *seed : default_seed(g), word_budget);
}

LimitSetResult limit_set(const BentGroup& b, int depth, std::optional<HeisenbergPoint> seed,
                         std::size_t word_budget) {
  return limit_set(b.generators_eta, depth, seed ? *seed : default_seed(b.base), word_budget);
}

std::string limit_set_csv(const LimitSetResult& r, const std::vector<std::string>& names) {
  std::string out = "word,re_xi,im_xi,v,cygan_norm\n";
  out.reserve(out.size() + r.samples.size() * 96);
  char buf[160];
  for (const auto& s : r.samples) {
    out += s.word.to_string(names);
    if (s.point.infinite) {
      out += ",inf,inf,inf,inf\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g\n", s.point.xi.real(), s.point.xi.imag(), s.point.v,
                  cygan_norm(s.point));
    out += buf;
  }
  return out;
}

std::vector<CsvPoint> parse_limit_set_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("word,re_xi,im_xi,v,cygan_norm", 0) != 0) {
    throw DomainError("limit-set CSV header must be word,re_xi,im_xi,v,cygan_norm");
  }
  std::vector<CsvPoint> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 5) throw DomainError("limit-set CSV line " + std::to_string(lineno) + " needs 5 columns");
    CsvPoint p;
    p.word = cols[0];
    if (cols[1] == "inf") {
      p.point = HeisenbergPoint::infinity();
    } else {
      try {
        p.point = {cplx(std::stod(cols[1]), std::stod(cols[2])), std::stod(cols[3]), false};
      } catch (const std::exception&) {
        throw DomainError("limit-set CSV line " + std::to_string(lineno) + " has a malformed number");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace chbend
