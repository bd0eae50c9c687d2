#pragma once

// Free-group words over an inverse-closed alphabet.
//
// Letters are packed as `2 * generator + inverted`, so the inverse of a letter
// is a single xor and letters index transition tables directly.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acep {

using Generator = std::uint32_t;

class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(Generator gen, bool inverted)
      : code_(2 * gen + (inverted ? 1u : 0u)) {}

  static constexpr Letter from_code(std::uint32_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  constexpr Generator generator() const { return code_ >> 1; }
  constexpr bool inverted() const { return (code_ & 1u) != 0; }
  constexpr int sign() const { return inverted() ? -1 : 1; }
  constexpr Letter inverse() const { return from_code(code_ ^ 1u); }
  constexpr std::uint32_t code() const { return code_; }

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  std::uint32_t code_ = 0;
};

// Ordered generator symbols. Each symbol is a single lowercase ASCII letter;
// the uppercase form denotes the inverse in the text syntax.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names);

  // x, y, z, ... for rank <= 3 and a, b, c, ... otherwise.
  static Alphabet standard(std::size_t rank);

  std::size_t rank() const { return names_.size(); }
  std::size_t letter_count() const { return 2 * names_.size(); }
  const std::string& name(Generator g) const { return names_.at(g); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<Letter> letter(char symbol) const;
  char symbol(Letter l) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

// A freely reduced word. The empty word is the identity.
class Word {
 public:
  using const_iterator = std::vector<Letter>::const_iterator;

  Word() = default;
  explicit Word(Letter l) : letters_{l} {}

  // Free reduction of an arbitrary letter sequence.
  static Word reduce(std::span<const Letter> raw);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  const_iterator begin() const { return letters_.begin(); }
  const_iterator end() const { return letters_.end(); }

  Word inverse() const;
  // Subwords of a reduced word are reduced.
  Word subword(std::size_t pos, std::size_t len) const;
  Word prefix(std::size_t len) const { return subword(0, len); }
  Word suffix(std::size_t len) const { return subword(size() - len, len); }
  // Cyclic left shift by k; only meaningful on cyclically reduced words.
  Word rotate(std::size_t k) const;
  Word power(long k) const;

  friend Word operator*(const Word& u, const Word& v);
  Word& operator*=(const Word& v);

  friend bool operator==(const Word&, const Word&) = default;
  // Shortlex order.
  friend std::strong_ordering operator<=>(const Word& u, const Word& v);

 private:
  explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}

  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

// a^{-1} w a
Word conjugate(const Word& w, const Word& a);
// a b a^{-1} b^{-1}
Word commutator(const Word& a, const Word& b);

bool is_cyclically_reduced(const Word& w);

// A cyclically reduced word, considered up to rotation by the callers that
// need it.
class CyclicWord {
 public:
  CyclicWord() = default;
  // Throws std::invalid_argument if w is not cyclically reduced.
  explicit CyclicWord(Word w);

  const Word& representative() const { return w_; }
  std::size_t size() const { return w_.size(); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  Word w_;
};

struct CyclicReduction {
  CyclicWord core;
  // w = conjugator * core * conjugator^{-1}
  Word conjugator;
};

CyclicReduction cyclic_reduce(const Word& w);

// Smallest k with text.rotate(k) == pattern, for words of equal length.
std::optional<std::size_t> rotation_offset(const Word& text,
                                           const Word& pattern);

bool conjugate_in_free(const Word& w1, const Word& w2);

struct PowerDecomposition {
  Word root;
  long exponent = 1;
};

// Maximal-exponent decomposition w = root^exponent with exponent >= 2, or
// nullopt when w is primitive. Throws std::invalid_argument on the identity.
std::optional<PowerDecomposition> is_proper_power(const Word& w);

// Primitive root of a nontrivial word (w itself when w is primitive).
PowerDecomposition primitive_root(const Word& w);

// Text syntax: lowercase symbol = generator, uppercase = inverse; "1" or the
// empty string is the identity. Throws std::invalid_argument on unknown
// symbols.
Word parse_word(const Alphabet& alphabet, std::string_view text);
std::string format_word(const Alphabet& alphabet, const Word& w);

}  // namespace acep
