#pragma once

// The intersection family Ω(H), the word metric |·|_Ω counting letters and
// whole Ω-members as single generators, the minimal lengths γ and γ_H of a
// subgroup, and the alternating-product distance.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "acep/fiber.hpp"

namespace acep {

struct OmegaMember {
  // H^a ∩ H^b, based at the product vertex (a, b).
  StallingsGraph graph;
  VertexPair anchor;
};

struct OmegaFamily {
  std::size_t rank = 0;
  std::vector<OmegaMember> members;

  bool empty() const { return members.empty(); }
};

// One member per off-diagonal vertex of Γ×Γ whose component has a cycle;
// members with identical based graphs are merged.
OmegaFamily omega(const StallingsGraph& g);

// A family from explicit subgroup graphs (anchors left as (0, 0)).
OmegaFamily make_family(std::size_t rank,
                        const std::vector<StallingsGraph>& members);

inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

// One factor of an Ω-factorization: a letter, or an element of a member.
struct OmegaFactor {
  std::optional<std::size_t> member;
  Word word;
};

// Weighted automaton over X ∪ X^{-1} with a hub state. Hub loops read single
// letters at cost 1; entering a member copy costs 1 and any closed walk there
// is free. The cost of the cheapest hub-to-hub walk whose label reduces to w
// is |w|_Ω, and the walks of cost <= k accept exactly the ball B_k.
//
// Free reduction is handled by Benois saturation: shortcut(p, q) is the
// cheapest walk from p to q whose label reduces to the identity.
class BallAutomaton {
 public:
  using State = std::uint32_t;
  static constexpr State kHub = 0;

  explicit BallAutomaton(const OmegaFamily& family);

  std::size_t state_count() const { return n_; }
  std::size_t arc_count() const { return arcs_.size(); }
  // Number of state pairs joined by a finite shortcut.
  std::size_t shortcut_count() const;
  std::size_t shortcut(State p, State q) const { return d_[p * n_ + q]; }

  std::size_t length(const Word& w) const;
  bool contains(const Word& w, std::size_t k) const { return length(w) <= k; }
  // A factorization with length(w) factors whose product reduces to w.
  std::vector<OmegaFactor> factorize(const Word& w) const;

  struct Arc {
    State from;
    State to;
    std::optional<Letter> letter;  // nullopt for ε
    std::size_t cost;
    std::optional<std::size_t> member;  // set on member-copy arcs
  };
  const std::vector<Arc>& arcs() const { return arcs_; }
  // Outgoing arcs of a state reading a given letter.
  const std::vector<std::uint32_t>& out(State s, Letter l) const {
    return out_[s * letters_ + l.code()];
  }

 private:
  struct Derivation {
    enum Kind : std::uint8_t { kNone, kRefl, kEps, kConcat, kBracket } kind = kNone;
    std::uint32_t a = 0;  // arc, or the middle state for kConcat
    std::uint32_t b = 0;  // closing arc for kBracket
  };

  void saturate();
  void expand(State p, State q, std::vector<std::uint32_t>& path) const;
  // Cheapest reading of w as arc indices, or empty optional if none.
  std::optional<std::vector<std::uint32_t>> best_path(const Word& w,
                                                      std::size_t* cost) const;

  std::size_t n_ = 1;
  std::size_t letters_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::uint32_t>> out_;  // per (state, letter)
  std::vector<std::vector<std::uint32_t>> in_;   // per (state, letter)
  std::vector<std::size_t> d_;
  std::vector<Derivation> how_;
};

// |·|_H with a cached automaton for Ω(H).
class OmegaMetric {
 public:
  explicit OmegaMetric(const StallingsGraph& g);
  OmegaMetric(const StallingsGraph& g, OmegaFamily family);

  const OmegaFamily& family() const { return family_; }
  const BallAutomaton& automaton() const { return automaton_; }
  std::size_t length(const Word& w) const { return automaton_.length(w); }
  std::vector<OmegaFactor> factorize(const Word& w) const {
    return automaton_.factorize(w);
  }

 private:
  OmegaFamily family_;
  BallAutomaton automaton_;
};

std::size_t omega_length(const Word& w, const OmegaFamily& family);
std::size_t h_length(const Word& w, const StallingsGraph& g);

struct Constants {
  std::size_t diam_gamma = 0;
  std::size_t diam_dotted = 0;
  std::size_t c = 1;
  std::size_t c_h = 6;
};

Constants constants(const StallingsGraph& g);

// Shortest nontrivial element of a subgroup, as a length and a word.
struct ShortestElement {
  std::size_t length = kInfinity;  // kInfinity for the trivial group
  Word word;
};

ShortestElement gamma(const StallingsGraph& n);

// Minimum of |w|_H over nontrivial w ∈ N. Throws std::invalid_argument when
// some basis word of N is not in H.
ShortestElement gamma_h(const StallingsGraph& n, const StallingsGraph& h);
ShortestElement gamma_h(const StallingsGraph& n, const StallingsGraph& h,
                        const OmegaMetric& metric);

// Alternating products w_1 h_1 ... h_{n-1} w_n with h_i ∈ H and every prefix
// w_1 h_1 ... w_i (i < n) outside H; the weight is the number of letters in
// the w_i plus the number of H-syllables.
struct AlternatingProduct {
  std::vector<Word> w;  // n blocks
  std::vector<Word> h;  // n - 1 syllables

  std::size_t weight() const;
  Word evaluate() const;
};

bool is_alternating(const StallingsGraph& g, const AlternatingProduct& p);

// Rewrites an Ω-factorization as an alternating product by conjugating each
// Ω-factor into H through a tree path of its anchor.
AlternatingProduct alternating_from_factorization(
    const StallingsGraph& g, const OmegaFamily& family,
    const std::vector<OmegaFactor>& factors);

struct AltDistance {
  std::size_t value = 0;
  AlternatingProduct product;
  std::size_t states_explored = 0;
};

// An upper bound on the alternating distance from 1 to h. Seeds with the
// single-block product and the product built from an optimal
// Ω-factorization, then runs a best-first search over prefixes of length
// <= cap using H-syllables of length <= syllable_cap.
AltDistance alt_distance_upper(const Word& h, const StallingsGraph& g,
                               const OmegaMetric& metric, std::size_t cap,
                               std::size_t syllable_cap = 4,
                               std::size_t state_budget = 20000);

struct LipschitzRow {
  Word h;
  std::size_t h_length = 0;
  std::size_t alt_upper = 0;
  bool lower_ok = false;  // |h|_H <= C · alt
  bool upper_ok = false;  // alt <= (1 + 2 diam) |h|_H
};

struct LipschitzReport {
  Constants constants;
  std::vector<LipschitzRow> rows;
  std::size_t violations = 0;
};

// Throws std::invalid_argument if a sample is not in H.
LipschitzReport lipschitz_report(const StallingsGraph& g,
                                 const std::vector<Word>& samples);

// Set when Ω contains a conjugate of H itself, in which case |·|_H is bounded
// on H.
std::optional<std::string> normalizer_warning(const StallingsGraph& g,
                                              const OmegaFamily& family);

}  // namespace acep
