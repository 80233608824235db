#pragma once

// Words over a named generating set and breadth-first (shortlex) enumeration
// of freely reduced words.

#include <algorithm>
#include <array>
#include <atomic>
#include <compare>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chbend/ddouble.hpp"
#include "chbend/linalg.hpp"

namespace chbend {

/// A letter is +k for generator k-1 and -k for its inverse (k >= 1).
using Letter = int;

inline int generator_index(Letter l) { return (l > 0 ? l : -l) - 1; }
inline Letter letter_of(int generator, bool inverse) { return inverse ? -(generator + 1) : generator + 1; }

/// Rank of a letter in the enumeration alphabet g0, g0^-1, g1, g1^-1, ...
inline int alphabet_rank(Letter l) { return 2 * generator_index(l) + (l < 0 ? 1 : 0); }

/// Compact word; letters are packed one per char so short words stay in the
/// small-string buffer.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);

  std::size_t size() const { return code_.size(); }
  bool empty() const { return code_.empty(); }
  Letter operator[](std::size_t i) const { return static_cast<signed char>(code_[i]); }
  Letter back() const { return (*this)[size() - 1]; }

  void push_back(Letter l);
  void pop_back() { code_.pop_back(); }

  Word inverse() const;
  /// Free reduction of the concatenation.
  Word operator*(const Word& rhs) const;
  bool is_reduced() const;

  std::vector<Letter> letters() const;

  /// Tokens joined by '*', inverses written name^-1, identity written "1".
  std::string to_string(const std::vector<std::string>& names) const;
  std::vector<std::string> to_tokens(const std::vector<std::string>& names) const;

  static Word parse(const std::string& text, const std::vector<std::string>& names);
  static Word from_tokens(const std::vector<std::string>& tokens, const std::vector<std::string>& names);

  friend bool operator==(const Word& a, const Word& b) { return a.code_ == b.code_; }
  /// Shortlex order on alphabet ranks; this is breadth-first order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::string code_;
};

/// Product of generator matrices along the word (identity for the empty word).
Isometry evaluate(const Word& w, const std::vector<Isometry>& generators);

/// Worker count: CHBEND_THREADS if set and positive, else hardware concurrency.
unsigned worker_threads();

namespace detail {

template <class T>
using Mat3x = std::array<T, 9>;

template <class T>
Mat3x<T> multiply(const Mat3x<T>& x, const Mat3x<T>& y) {
  Mat3x<T> out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[3 * i + j] = x[3 * i] * y[j] + x[3 * i + 1] * y[3 + j] + x[3 * i + 2] * y[6 + j];
  }
  return out;
}

inline void load(const Isometry& g, Mat3x<dd>& out) {
  for (int k = 0; k < 9; ++k) out[k] = {g.matrix()(k / 3, k % 3).real(), g.low_part()(k / 3, k % 3).real()};
}

inline void load(const Isometry& g, Mat3x<cdd>& out) {
  for (int k = 0; k < 9; ++k) {
    const cplx h = g.matrix()(k / 3, k % 3), l = g.low_part()(k / 3, k % 3);
    out[k] = {{h.real(), l.real()}, {h.imag(), l.imag()}};
  }
}

inline Isometry store(const Mat3x<dd>& m, FormTag form) {
  Mat3 hi, lo;
  for (int k = 0; k < 9; ++k) {
    hi(k / 3, k % 3) = m[k].hi;
    lo(k / 3, k % 3) = m[k].lo;
  }
  return {hi, lo, form};
}

inline Isometry store(const Mat3x<cdd>& m, FormTag form) {
  Mat3 hi, lo;
  for (int k = 0; k < 9; ++k) {
    hi(k / 3, k % 3) = {m[k].re.hi, m[k].im.hi};
    lo(k / 3, k % 3) = {m[k].re.lo, m[k].im.lo};
  }
  return {hi, lo, form};
}

/// Depth-first walk over reduced words starting with alphabet[first].
template <class T, class R, class Fn>
void enumerate_shard(const std::vector<Letter>& alphabet, const std::vector<Mat3x<T>>& mats, FormTag form, int depth,
                     int first, Fn& fn, std::vector<std::pair<Word, R>>& out) {
  const int letters = static_cast<int>(alphabet.size());
  struct Frame {
    Mat3x<T> m;
    int next;
  };
  std::vector<Frame> stack;
  stack.reserve(depth + 1);
  Word word;
  word.push_back(alphabet[first]);
  stack.push_back({mats[first], 0});
  if (auto r = fn(word, store(stack.back().m, form))) out.emplace_back(word, std::move(*r));
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (static_cast<int>(stack.size()) >= depth || top.next >= letters) {
      stack.pop_back();
      word.pop_back();
      continue;
    }
    const int k = top.next++;
    if (alphabet[k] == -word.back()) continue;
    Mat3x<T> m = multiply(top.m, mats[k]);
    word.push_back(alphabet[k]);
    if (auto r = fn(word, store(m, form))) out.emplace_back(word, std::move(*r));
    stack.push_back({m, 0});
  }
}

}  // namespace detail

/// Visits every freely reduced word of length 1..depth (plus the empty word
/// when include_identity) together with its matrix. fn(word, matrix) returns
/// std::optional<R>; kept results come back in shortlex order. Products are
/// formed in double-double, since relators make long words cancel massively.
/// Enumeration is sharded over first letters across worker_threads(); fn must
/// be reentrant.
template <class R, class Fn>
std::vector<std::pair<Word, R>> collect_reduced_words(const std::vector<Isometry>& generators, int depth,
                                                      Fn&& fn, bool include_identity = false) {
  using Item = std::pair<Word, R>;
  if (depth < 0) throw DomainError("word depth must be nonnegative");
  const int n = static_cast<int>(generators.size());
  const FormTag form = generators.empty() ? FormTag::Siegel : generators.front().form();

  bool real = true;
  std::vector<Letter> alphabet;
  std::vector<Isometry> gens;
  for (int g = 0; g < n; ++g) {
    alphabet.push_back(letter_of(g, false));
    gens.push_back(generators[g]);
    alphabet.push_back(letter_of(g, true));
    gens.push_back(generators[g].inverse());
  }
  for (const auto& g : gens) {
    if (g.matrix().imag().cwiseAbs().maxCoeff() != 0.0 || g.low_part().imag().cwiseAbs().maxCoeff() != 0.0) {
      real = false;
    }
  }
  std::vector<detail::Mat3x<dd>> real_mats(gens.size());
  std::vector<detail::Mat3x<cdd>> complex_mats(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (real) {
      detail::load(gens[k], real_mats[k]);
    } else {
      detail::load(gens[k], complex_mats[k]);
    }
  }
  const int letters = static_cast<int>(alphabet.size());

  std::vector<std::vector<Item>> shards(letters);
  auto run_shard = [&](int first) {
    if (real) {
      detail::enumerate_shard<dd, R>(alphabet, real_mats, form, depth, first, fn, shards[first]);
    } else {
      detail::enumerate_shard<cdd, R>(alphabet, complex_mats, form, depth, first, fn, shards[first]);
    }
  };

  if (depth > 0) {
    const unsigned workers = std::min<unsigned>(worker_threads(), static_cast<unsigned>(letters));
    if (workers <= 1) {
      for (int f = 0; f < letters; ++f) run_shard(f);
    } else {
      std::atomic<int> next{0};
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
          for (int f = next++; f < letters; f = next++) run_shard(f);
        });
      }
      for (auto& th : pool) th.join();
    }
  }

  std::vector<Item> all;
  if (include_identity) {
    if (auto r = fn(Word{}, Isometry::identity(form))) all.emplace_back(Word{}, std::move(*r));
  }
  std::size_t total = all.size();
  for (const auto& s : shards) total += s.size();
  all.reserve(total);
  for (auto& s : shards) {
    std::move(s.begin(), s.end(), std::back_inserter(all));
    std::vector<Item>().swap(s);
  }
  std::stable_sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.first < b.first; });
  return all;
}

}  // namespace chbend
