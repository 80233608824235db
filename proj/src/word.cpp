#include "chbend/word.hpp"

#include <sstream>

namespace chbend {

namespace {

int find_name(const std::string& name, const std::vector<std::string>& names) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("unknown generator '" + name + "'");
  return static_cast<int>(it - names.begin());
}

Letter parse_token(std::string tok, const std::vector<std::string>& names) {
  bool inverse = false;
  const std::string suffix = "^-1";
  if (tok.size() > suffix.size() && tok.compare(tok.size() - suffix.size(), suffix.size(), suffix) == 0) {
    inverse = true;
    tok.resize(tok.size() - suffix.size());
  }
  return letter_of(find_name(tok, names), inverse);
}

}  // namespace

Word::Word(std::initializer_list<Letter> letters) {
  for (Letter l : letters) push_back(l);
}

void Word::push_back(Letter l) {
  if (l == 0 || l > 127 || l < -127) throw DomainError("letter out of range");
  code_.push_back(static_cast<char>(static_cast<signed char>(l)));
}

Word Word::inverse() const {
  Word out;
  for (std::size_t i = size(); i-- > 0;) out.push_back(-(*this)[i]);
  return out;
}

Word Word::operator*(const Word& rhs) const {
  Word out = *this;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (!out.empty() && out.back() == -rhs[i]) {
      out.pop_back();
    } else {
      out.push_back(rhs[i]);
    }
  }
  return out;
}

bool Word::is_reduced() const {
  for (std::size_t i = 1; i < size(); ++i) {
    if ((*this)[i] == -(*this)[i - 1]) return false;
  }
  return true;
}

std::vector<Letter> Word::letters() const {
  std::vector<Letter> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
  return out;
}

std::vector<std::string> Word::to_tokens(const std::vector<std::string>& names) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) {
    const Letter l = (*this)[i];
    const int g = generator_index(l);
    if (g >= static_cast<int>(names.size())) throw DomainError("letter refers to a missing generator");
    out.push_back(l > 0 ? names[g] : names[g] + "^-1");
  }
  return out;
}

std::string Word::to_string(const std::vector<std::string>& names) const {
  if (empty()) return "1";
  std::string out;
  for (const auto& t : to_tokens(names)) {
    if (!out.empty()) out += '*';
    out += t;
  }
  return out;
}

Word Word::parse(const std::string& text, const std::vector<std::string>& names) {
  if (text.empty() || text == "1") return {};
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    if (tok.empty()) throw DomainError("empty token in word '" + text + "'");
    tokens.push_back(tok);
  }
  return from_tokens(tokens, names);
}

Word Word::from_tokens(const std::vector<std::string>& tokens, const std::vector<std::string>& names) {
  Word w;
  for (const auto& t : tokens) w.push_back(parse_token(t, names));
  return w;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int ra = alphabet_rank(a[i]);
    const int rb = alphabet_rank(b[i]);
    if (ra != rb) return ra <=> rb;
  }
  return std::strong_ordering::equal;
}

Isometry evaluate(const Word& w, const std::vector<Isometry>& generators) {
  const FormTag form = generators.empty() ? FormTag::Siegel : generators.front().form();
  Mat3q m = Mat3q::identity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter l = w[i];
    const int g = generator_index(l);
    if (g >= static_cast<int>(generators.size())) throw DomainError("word refers to a missing generator");
    m = m * (l > 0 ? generators[g].precise() : generators[g].inverse().precise());
  }
  return {m, form};
}

unsigned worker_threads() {
  if (const char* env = std::getenv("CHBEND_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace chbend
