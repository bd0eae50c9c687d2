#pragma once

// Finite quotients, the covering graph Γ(N) of Γ(H) for N = ker(H -> G),
// and certificates for membership in normal closures.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acep/metric.hpp"

namespace acep {

// A permutation of {0, ..., degree-1}. Products act on the right:
// (p * q)[i] = q[p[i]], so the image of a word is the product of the images
// of its letters in reading order.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);  // identity
  // Throws std::invalid_argument unless `images` is a bijection.
  explicit Permutation(std::vector<std::uint32_t> images);
  // Cycle notation on points 1..degree, e.g. "(1 2 3)(4 5)"; "()" is the
  // identity. Throws std::invalid_argument on malformed input.
  static Permutation from_cycles(std::size_t degree, std::string_view text);

  std::size_t degree() const { return p_.size(); }
  std::uint32_t operator[](std::size_t i) const { return p_[i]; }
  const std::vector<std::uint32_t>& images() const { return p_; }

  Permutation operator*(const Permutation& q) const;
  Permutation inverse() const;
  bool is_identity() const;
  std::string cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> p_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

// A homomorphism from a free group of rank images.size() into Sym(degree),
// given by the images of the free generators.
struct FiniteQuotient {
  std::size_t degree = 0;
  std::vector<Permutation> images;

  // Throws std::invalid_argument on degree mismatches (inconsistent data).
  FiniteQuotient(std::size_t degree, std::vector<Permutation> images);

  std::size_t rank() const { return images.size(); }
  // w is a word over the source generators.
  Permutation evaluate(const Word& w) const;
  // Elements of the image, identity first, in breadth-first order. Throws
  // std::length_error past `limit` elements.
  std::vector<Permutation> elements(std::size_t limit = 1u << 20) const;
};

// Expresses each word of a free basis `generators` of H as a word over the
// Stallings basis of g, then inverts by Nielsen reduction. Result[i] is
// basis(g).words[i] written over `generators`. Throws std::invalid_argument
// unless `generators` is a free basis of H.
std::vector<Word> basis_in_generators(const StallingsGraph& g,
                                      std::span<const Word> generators);

// The quotient of H on the Stallings basis induced by images of a free basis
// `generators` of H.
FiniteQuotient quotient_on_basis(const StallingsGraph& g,
                                 std::span<const Word> generators,
                                 std::span<const Permutation> images);

// Image of h ∈ H under a quotient on the Stallings basis; nullopt if h ∉ H.
std::optional<Permutation> evaluate_in_subgroup(const StallingsGraph& g,
                                                const FiniteQuotient& q,
                                                const Word& h);

// PSL(2, p) acting on the projective line {0, ..., p-1, ∞}; the matrix
// (a b; c d) sends z to (az + c) / (bz + d), a right action. Throws
// std::invalid_argument unless p is an odd prime and ad - bc = 1 mod p.
Permutation projective_action(std::uint32_t p, std::uint32_t a, std::uint32_t b,
                              std::uint32_t c, std::uint32_t d);

struct CoveringGraph {
  StallingsGraph base;
  std::vector<Permutation> group;  // group[0] is the identity
  XDigraph graph;                  // vertex (a, g) is a * group.size() + g

  std::size_t order() const { return group.size(); }
  Vertex vertex(Vertex a, std::size_t g) const {
    return static_cast<Vertex>(a * group.size() + g);
  }
  Vertex project(Vertex v) const { return static_cast<Vertex>(v / group.size()); }
  std::size_t fiber_index(Vertex v) const { return v % group.size(); }
  // Γ(N) based at (1_H, 1_G).
  StallingsGraph stallings() const;
};

// Vertices V × G; edge (e, g) runs from (o(e), g) to (t(e), g) for tree
// edges and to (t(e), g·q(h_e)) otherwise. q is on the Stallings basis.
// Throws std::invalid_argument if q.rank() differs from the rank of H.
CoveringGraph cover(const StallingsGraph& h, const FiniteQuotient& q,
                    std::size_t max_order = 1u << 20);

struct CoveringCheck {
  bool labels = false;  // the projection preserves labels and endpoints
  bool stars = false;   // in- and out-stars map bijectively
  bool folded = false;
  bool ok() const { return labels && stars && folded; }
};

CoveringCheck verify_covering(const CoveringGraph& c);

// The deck transformation (a, h) -> (a, g2 g1^{-1} h) taking v1 = (a, g1) to
// v2 = (a, g2), as a vertex map. Throws std::invalid_argument if v1 and v2
// lie in different fibers.
std::vector<Vertex> deck_transformation(const CoveringGraph& c, Vertex v1,
                                        Vertex v2);

// True when `map` is a label-preserving bijection of vertices carrying edges
// onto edges.
bool is_automorphism(const XDigraph& g, std::span<const Vertex> map);

// c · r^sign · c^{-1}
struct ConjugateFactor {
  Word conjugator;
  Word relator;
  int sign = 1;

  Word value() const;
};

struct PositiveCertificate {
  std::vector<ConjugateFactor> factors;
};

// A quotient of the free group on `generators` (words in F; the letters of F
// when empty) killing every relator and not the target.
struct NegativeCertificate {
  std::size_t rank = 0;  // rank of F
  std::vector<Word> generators;
  FiniteQuotient quotient;
};

// The product of the factors must reduce to the target, and each relator
// must be one of `relators` (or, for the second form, a nontrivial element
// read in Γ(N)).
bool verify_positive(const PositiveCertificate& cert, const Word& target,
                     const std::vector<Word>& relators);
bool verify_positive(const PositiveCertificate& cert, const Word& target,
                     const StallingsGraph& n);
bool verify_negative(const NegativeCertificate& cert, const Word& target,
                     const std::vector<Word>& relators);

struct SearchBudget {
  std::size_t max_factors = 3;
  std::size_t max_conjugator = 3;
  std::size_t max_nodes = 200000;  // partial products kept per search
};

// Products of conjugated relators equal to w, by iterative deepening over
// the number of factors and conjugator length, meeting in the middle on
// memoized partial products. The conjugate table is built once, so one
// searcher serves many targets.
class ClosureSearcher {
 public:
  ClosureSearcher(const std::vector<Word>& relators, std::size_t rank,
                  const SearchBudget& budget);

  std::optional<PositiveCertificate> search(const Word& w) const;
  std::size_t table_size() const { return singles_.size(); }

 private:
  struct Entry {
    Word value;
    ConjugateFactor factor;
    std::size_t conj_len;
  };
  struct Product {
    std::vector<std::uint32_t> parts;
    std::size_t conj_len;
  };
  // Distinct products in generation order; the first product found for a
  // value has the least conjugator length.
  struct Layer {
    std::vector<Word> values;
    std::vector<Product> products;
    std::unordered_map<Word, std::uint32_t, WordHash> index;
  };

  std::optional<PositiveCertificate> assemble(const Product& left,
                                              const Product& right,
                                              const Word& w) const;

  SearchBudget budget_;
  std::vector<Entry> singles_;  // ordered by conjugator length
  std::vector<Layer> layers_;   // layers_[j]: products of j singles
};

std::optional<PositiveCertificate> closure_member_search(
    const Word& w, const std::vector<Word>& relators, std::size_t rank,
    const SearchBudget& budget = {});

// Relators for Γ(N): its basis words of length <= max_length, shortest first,
// at most `count` of them.
std::vector<Word> short_relators(const StallingsGraph& n, std::size_t count,
                                 std::size_t max_length);

struct QuotientLimits {
  std::size_t max_degree = 5;
  // Degrees with (d!)^rank assignments up to this are searched exhaustively;
  // larger ones are sampled.
  std::size_t exhaustive_cap = 2000000;
  std::size_t random_samples = 20000;
  std::uint64_t seed = 1;
};

// Homomorphisms from the free group on `generators` into Sym(d), d <= limit,
// killing every relator but not w. `generators` must be a free basis of the
// subgroup they generate, which must contain w and the relators; when empty,
// the letters of F are used.
std::optional<NegativeCertificate> quotient_nonmember(
    const Word& w, const std::vector<Word>& relators, std::size_t rank,
    const std::vector<Word>& generators = {}, const QuotientLimits& limits = {});

struct NewmanReport {
  std::size_t bound = 0;  // (n - 1) |u*|
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t min_length = kInfinity;
};

// Samples nontrivial products of conjugates of u^{±n} and checks their
// length against (n - 1) times the cyclic length of u.
NewmanReport newman_check(const Word& u, long n, std::size_t rank,
                          std::size_t samples, std::uint64_t seed = 1);

// Closed reduced paths at the basepoint: the elements of H of length <= len.
std::vector<Word> subgroup_elements(const StallingsGraph& g, std::size_t len);

struct ExperimentBudget {
  SearchBudget search{2, 1, 50000};
  std::size_t relator_count = 16;
  std::size_t quotient_samples = 8;
  QuotientLimits limits{4, 2000000, 2000, 1};
};

struct ExperimentReport {
  Constants constants;
  std::size_t cover_vertices = 0;
  std::size_t gamma_h = kInfinity;
  bool hypothesis = false;  // γ_H(N) > C_H
  std::size_t horizon = 0;
  std::size_t words = 0;              // elements of H with |w| <= horizon
  std::size_t members_confirmed = 0;  // in N, read in Γ(N)
  std::size_t non_members = 0;
  std::size_t counterexamples = 0;     // non-members of N in <<N>>_F
  std::size_t proven_exclusions = 0;   // non-members of <<N>>_F
  std::size_t unresolved = 0;
  std::size_t inconsistencies = 0;     // both certificates for one word
  std::vector<Word> counterexample_words;
};

ExperimentReport acep_experiment(const StallingsGraph& h,
                                 const FiniteQuotient& q, std::size_t horizon,
                                 const ExperimentBudget& budget = {});

// Malnormal subgroups generated by two reduced words of length <= max_len,
// other than those with a one-vertex graph; the one with the least C_H, ties
// broken by vertex count and then shortlex on the generator pair.
struct MalnormalPick {
  StallingsGraph graph;
  std::vector<Word> generators;
  Constants constants;
};
std::optional<MalnormalPick> smallest_malnormal(std::size_t rank,
                                                std::size_t max_len);

// Random PSL(2, p) images of the Stallings basis of H, drawn from a seeded
// generator until γ(ker) exceeds `threshold`.
struct DeepQuotient {
  FiniteQuotient quotient;
  std::size_t gamma = 0;
  std::size_t trials = 0;
};
std::optional<DeepQuotient> find_deep_quotient(const StallingsGraph& h,
                                               std::uint32_t p,
                                               std::size_t threshold,
                                               std::size_t max_trials,
                                               std::uint64_t seed = 1);

// For N given by relators over H (infinite index allowed): the least |·|_H
// over the relators and their conjugates by basis words of H. This only
// bounds γ_H(N) from above.
ShortestElement gamma_h_upper(const std::vector<Word>& relators,
                              const StallingsGraph& h,
                              const OmegaMetric& metric);

struct RelatorTarget {
  Word target;
  std::optional<PositiveCertificate> in_closure;  // w ∈ <<N>>_F
  std::optional<NegativeCertificate> outside_n;   // w ∉ N = <<R>>_H
  bool in_sigma() const { return in_closure && outside_n; }
};

// N = <<relators>>_H with H generated freely by `generators`. Searches a
// Positive certificate over F and a Negative certificate through a quotient
// of H.
RelatorTarget relator_pipeline(const StallingsGraph& h,
                               const std::vector<Word>& generators,
                               const std::vector<Word>& relators,
                               const Word& target,
                               const SearchBudget& search = {},
                               const QuotientLimits& limits = {});

// Certificate documents: kind, target, factors or images in cycle notation,
// the verified flag and the budgets used.
std::string certificate_json(const Alphabet& alphabet, const Word& target,
                             const PositiveCertificate& cert, bool verified,
                             const SearchBudget& budget);
std::string certificate_json(const Alphabet& alphabet, const Word& target,
                             const NegativeCertificate& cert, bool verified,
                             const QuotientLimits& limits);

}  // namespace acep
