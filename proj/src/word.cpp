#include "acep/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

namespace acep {

namespace {

// KMP failure function: fail[i] = length of the longest proper border of
// s[0..i).
std::vector<std::size_t> failure_function(std::span<const Letter> s) {
  std::vector<std::size_t> fail(s.size() + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    while (k > 0 && s[i] != s[k]) k = fail[k];
    if (s[i] == s[k]) ++k;
    fail[i + 1] = k;
  }
  return fail;
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) {
    throw std::invalid_argument("alphabet must have at least one generator");
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.size() != 1 || !std::islower(static_cast<unsigned char>(n[0]))) {
      throw std::invalid_argument("generator symbol '" + n +
                                  "' must be a single lowercase letter");
    }
    if (!seen.insert(n).second) {
      throw std::invalid_argument("duplicate generator symbol '" + n + "'");
    }
  }
}

Alphabet Alphabet::standard(std::size_t rank) {
  std::vector<std::string> names;
  const char first = rank <= 3 ? 'x' : 'a';
  if (rank > 26) throw std::invalid_argument("rank too large for text syntax");
  for (std::size_t i = 0; i < rank; ++i) {
    names.emplace_back(1, static_cast<char>(first + i));
  }
  return Alphabet(std::move(names));
}

std::optional<Letter> Alphabet::letter(char symbol) const {
  const bool inverted = std::isupper(static_cast<unsigned char>(symbol)) != 0;
  const char lower =
      static_cast<char>(std::tolower(static_cast<unsigned char>(symbol)));
  for (Generator g = 0; g < names_.size(); ++g) {
    if (names_[g][0] == lower) return Letter(g, inverted);
  }
  return std::nullopt;
}

char Alphabet::symbol(Letter l) const {
  const char c = names_.at(l.generator())[0];
  return l.inverted()
             ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
             : c;
}

Word Word::reduce(std::span<const Letter> raw) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (Letter l : raw) {
    if (!stack.empty() && stack.back() == l.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

Word Word::inverse() const {
  std::vector<Letter> inv;
  inv.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    inv.push_back(it->inverse());
  }
  return Word(std::move(inv));
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  if (pos + len > letters_.size()) throw std::out_of_range("Word::subword");
  return Word(std::vector<Letter>(letters_.begin() + pos,
                                  letters_.begin() + pos + len));
}

Word Word::rotate(std::size_t k) const {
  if (letters_.empty()) return *this;
  k %= letters_.size();
  std::vector<Letter> r(letters_.begin() + k, letters_.end());
  r.insert(r.end(), letters_.begin(), letters_.begin() + k);
  return Word(std::move(r));
}

Word Word::power(long k) const {
  const Word base = k < 0 ? inverse() : *this;
  Word result;
  for (long i = 0; i < std::abs(k); ++i) result *= base;
  return result;
}

Word operator*(const Word& u, const Word& v) {
  Word r = u;
  r *= v;
  return r;
}

Word& Word::operator*=(const Word& v) {
  std::size_t i = 0;
  while (i < v.size() && !letters_.empty() &&
         letters_.back() == v.letters_[i].inverse()) {
    letters_.pop_back();
    ++i;
  }
  letters_.insert(letters_.end(), v.letters_.begin() + i, v.letters_.end());
  return *this;
}

std::strong_ordering operator<=>(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() <=> v.size();
  return std::lexicographical_compare_three_way(
      u.letters_.begin(), u.letters_.end(), v.letters_.begin(),
      v.letters_.end());
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Letter l : w) {
    h ^= l.code() + 1;
    h *= 0x100000001b3ull;
  }
  return h;
}

Word conjugate(const Word& w, const Word& a) { return a.inverse() * w * a; }

Word commutator(const Word& a, const Word& b) {
  return a * b * a.inverse() * b.inverse();
}

bool is_cyclically_reduced(const Word& w) {
  return w.size() <= 1 || w.front() != w.back().inverse();
}

CyclicWord::CyclicWord(Word w) : w_(std::move(w)) {
  if (!is_cyclically_reduced(w_)) {
    throw std::invalid_argument("word is not cyclically reduced");
  }
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t k = 0;
  while (2 * k + 2 <= w.size() && w[k] == w[w.size() - 1 - k].inverse()) ++k;
  return {CyclicWord(w.subword(k, w.size() - 2 * k)), w.prefix(k)};
}

std::optional<std::size_t> rotation_offset(const Word& text,
                                           const Word& pattern) {
  if (text.size() != pattern.size()) return std::nullopt;
  const std::size_t n = text.size();
  if (n == 0) return 0;
  const auto p = pattern.letters();
  const auto fail = failure_function(p);
  std::size_t k = 0;
  // Scan text·text without materializing it; the last letter is redundant.
  for (std::size_t i = 0; i + 1 < 2 * n; ++i) {
    const Letter c = text[i % n];
    while (k > 0 && c != p[k]) k = fail[k];
    if (c == p[k]) ++k;
    if (k == n) return i + 1 - n;
  }
  return std::nullopt;
}

bool conjugate_in_free(const Word& w1, const Word& w2) {
  const auto c1 = cyclic_reduce(w1);
  const auto c2 = cyclic_reduce(w2);
  return rotation_offset(c1.core.representative(), c2.core.representative())
      .has_value();
}

PowerDecomposition primitive_root(const Word& w) {
  if (w.empty()) {
    throw std::invalid_argument("the identity has no primitive root");
  }
  const auto red = cyclic_reduce(w);
  const Word& core = red.core.representative();
  const auto fail = failure_function(core.letters());
  const std::size_t n = core.size();
  std::size_t period = n - fail[n];
  if (n % period != 0) period = n;
  const Word& c = red.conjugator;
  return {c * core.prefix(period) * c.inverse(),
          static_cast<long>(n / period)};
}

std::optional<PowerDecomposition> is_proper_power(const Word& w) {
  auto root = primitive_root(w);
  if (root.exponent < 2) return std::nullopt;
  return root;
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  if (text == "1") return {};
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char c : text) {
    auto l = alphabet.letter(c);
    if (!l) {
      throw std::invalid_argument(std::string("symbol '") + c +
                                  "' is not in the alphabet");
    }
    raw.push_back(*l);
  }
  return Word::reduce(raw);
}

std::string format_word(const Alphabet& alphabet, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  s.reserve(w.size());
  for (Letter l : w) s.push_back(alphabet.symbol(l));
  return s;
}

}  // namespace acep
