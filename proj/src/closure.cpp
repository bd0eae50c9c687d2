#include "acep/closure.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "json.hpp"

namespace acep {

// ---------------------------------------------------------------------------
// Permutations

Permutation::Permutation(std::size_t degree) : p_(degree) {
  std::iota(p_.begin(), p_.end(), 0u);
}

Permutation::Permutation(std::vector<std::uint32_t> images)
    : p_(std::move(images)) {
  std::vector<bool> hit(p_.size(), false);
  for (std::uint32_t i : p_) {
    if (i >= p_.size() || hit[i]) {
      throw std::invalid_argument("permutation images are not a bijection");
    }
    hit[i] = true;
  }
}

Permutation Permutation::from_cycles(std::size_t degree, std::string_view text) {
  std::vector<std::uint32_t> p(degree);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<bool> used(degree, false);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(') throw std::invalid_argument("expected '(' in cycle notation");
    ++i;
    std::vector<std::uint32_t> cycle;
    for (;;) {
      skip();
      if (i >= text.size()) throw std::invalid_argument("unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw std::invalid_argument("expected a point in cycle notation");
      }
      std::size_t point = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        point = point * 10 + static_cast<std::size_t>(text[i] - '0');
        ++i;
      }
      if (point == 0 || point > degree) {
        throw std::invalid_argument("cycle point out of range");
      }
      if (used[point - 1]) throw std::invalid_argument("point repeated in cycles");
      used[point - 1] = true;
      cycle.push_back(static_cast<std::uint32_t>(point - 1));
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      p[cycle[k]] = cycle[(k + 1) % cycle.size()];
    }
    skip();
  }
  return Permutation(std::move(p));
}

Permutation Permutation::operator*(const Permutation& q) const {
  if (q.degree() != degree()) throw std::invalid_argument("degree mismatch");
  Permutation r;
  r.p_.resize(p_.size());
  for (std::size_t i = 0; i < p_.size(); ++i) r.p_[i] = q.p_[p_[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.p_.resize(p_.size());
  for (std::size_t i = 0; i < p_.size(); ++i) r.p_[p_[i]] = static_cast<std::uint32_t>(i);
  return r;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (p_[i] != i) return false;
  }
  return true;
}

std::string Permutation::cycles() const {
  std::string out;
  std::vector<bool> seen(p_.size(), false);
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (seen[i] || p_[i] == i) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = p_[j]) {
      seen[j] = true;
      if (j != i) out += ' ';
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (std::uint32_t i : p.images()) h = (h ^ i) * 1099511628211ull;
  return h;
}

// ---------------------------------------------------------------------------
// Quotients

FiniteQuotient::FiniteQuotient(std::size_t d, std::vector<Permutation> imgs)
    : degree(d), images(std::move(imgs)) {
  for (const auto& p : images) {
    if (p.degree() != degree) {
      throw std::invalid_argument("quotient image has the wrong degree");
    }
  }
}

Permutation FiniteQuotient::evaluate(const Word& w) const {
  std::vector<std::uint32_t> point(degree);
  std::iota(point.begin(), point.end(), 0u);
  for (Letter l : w) {
    if (l.generator() >= images.size()) {
      throw std::invalid_argument("word uses a generator outside the quotient");
    }
    const Permutation& g = images[l.generator()];
    if (l.inverted()) {
      const Permutation inv = g.inverse();
      for (auto& x : point) x = inv[x];
    } else {
      for (auto& x : point) x = g[x];
    }
  }
  return Permutation(std::move(point));
}

std::vector<Permutation> FiniteQuotient::elements(std::size_t limit) const {
  std::vector<Permutation> out{Permutation(degree)};
  std::unordered_set<Permutation, PermutationHash> seen{out[0]};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const Permutation& g : images) {
      Permutation next = out[head] * g;
      if (seen.insert(next).second) {
        if (out.size() >= limit) throw std::length_error("quotient is too large");
        out.push_back(std::move(next));
      }
    }
  }
  return out;
}

std::vector<Word> basis_in_generators(const StallingsGraph& g,
                                      std::span<const Word> generators) {
  const SubgroupBasis b = basis(g);
  const std::size_t r = b.words.size();
  if (generators.size() != r) {
    throw std::invalid_argument("generator count differs from the rank of H");
  }
  // u[i] is generator i over the Stallings basis; t[i] tracks it over the
  // generators while Nielsen moves shorten the tuple to single letters.
  std::vector<Word> u, t;
  for (std::size_t i = 0; i < r; ++i) {
    const auto rw = rewrite_in_basis(g, b, generators[i]);
    if (!rw) throw std::invalid_argument("generator is not in H");
    u.push_back(*rw);
    t.emplace_back(Letter(static_cast<Generator>(i), false));
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < r && !moved; ++i) {
      for (std::size_t j = 0; j < r && !moved; ++j) {
        if (i == j) continue;
        for (int s = 0; s < 2 && !moved; ++s) {
          const Word uj = s ? u[j].inverse() : u[j];
          const Word tj = s ? t[j].inverse() : t[j];
          if (Word right = u[i] * uj; right.size() < u[i].size()) {
            u[i] = std::move(right);
            t[i] = t[i] * tj;
            moved = true;
          } else if (Word left = uj * u[i]; left.size() < u[i].size()) {
            u[i] = std::move(left);
            t[i] = tj * t[i];
            moved = true;
          }
        }
      }
    }
  }
  std::vector<Word> out(r);
  std::vector<bool> hit(r, false);
  for (std::size_t i = 0; i < r; ++i) {
    if (u[i].size() != 1 || hit[u[i][0].generator()]) {
      throw std::invalid_argument("generators are not a free basis of H");
    }
    hit[u[i][0].generator()] = true;
    out[u[i][0].generator()] = u[i][0].inverted() ? t[i].inverse() : t[i];
  }
  return out;
}

FiniteQuotient quotient_on_basis(const StallingsGraph& g,
                                 std::span<const Word> generators,
                                 std::span<const Permutation> images) {
  if (images.size() != generators.size() || images.empty()) {
    throw std::invalid_argument("one image per generator is required");
  }
  const FiniteQuotient source(images[0].degree(),
                              std::vector<Permutation>(images.begin(), images.end()));
  std::vector<Permutation> on_basis;
  for (const Word& w : basis_in_generators(g, generators)) {
    on_basis.push_back(source.evaluate(w));
  }
  return FiniteQuotient(source.degree, std::move(on_basis));
}

std::optional<Permutation> evaluate_in_subgroup(const StallingsGraph& g,
                                                const FiniteQuotient& q,
                                                const Word& h) {
  const auto rw = rewrite_in_basis(g, h);
  if (!rw) return std::nullopt;
  return q.evaluate(*rw);
}

namespace {

std::uint64_t power_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  for (b %= m; e; e >>= 1, b = b * b % m) {
    if (e & 1) r = r * b % m;
  }
  return r;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

Permutation projective_action(std::uint32_t p, std::uint32_t a, std::uint32_t b,
                              std::uint32_t c, std::uint32_t d) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  const std::uint64_t P = p;
  a %= p, b %= p, c %= p, d %= p;
  if ((std::uint64_t{a} * d % P + P - std::uint64_t{b} * c % P) % P != 1) {
    throw std::invalid_argument("matrix determinant is not 1");
  }
  std::vector<std::uint32_t> img(p + 1);
  for (std::uint32_t z = 0; z <= p; ++z) {
    // Row vector (z, 1), or (1, 0) for the point at infinity.
    const std::uint64_t x = z == p ? 1 : z, y = z == p ? 0 : 1;
    const std::uint64_t num = (x * a + y * c) % P;
    const std::uint64_t den = (x * b + y * d) % P;
    img[z] = den == 0 ? p
                      : static_cast<std::uint32_t>(num * power_mod(den, P - 2, P) % P);
  }
  return Permutation(std::move(img));
}

// ---------------------------------------------------------------------------
// Covers

StallingsGraph CoveringGraph::stallings() const {
  return StallingsGraph::from_folded(graph, vertex(0, 0));
}

CoveringGraph cover(const StallingsGraph& h, const FiniteQuotient& q,
                    std::size_t max_order) {
  const SubgroupBasis b = basis(h);
  if (q.rank() != b.words.size()) {
    throw std::invalid_argument("quotient rank differs from the rank of H");
  }
  CoveringGraph c{h, q.elements(max_order), XDigraph(h.rank())};
  const std::size_t order = c.group.size();
  std::unordered_map<Permutation, std::uint32_t, PermutationHash> index;
  for (std::size_t i = 0; i < order; ++i) {
    index.emplace(c.group[i], static_cast<std::uint32_t>(i));
  }
  std::vector<std::vector<std::uint32_t>> times(q.rank(), std::vector<std::uint32_t>(order));
  for (std::size_t i = 0; i < q.rank(); ++i) {
    for (std::size_t g = 0; g < order; ++g) {
      times[i][g] = index.at(c.group[g] * q.images[i]);
    }
  }
  for (std::size_t v = 0; v < h.vertex_count() * order; ++v) c.graph.add_vertex();
  for (EdgeId e = 0; e < h.edge_count(); ++e) {
    const Edge& edge = h.graph().edge(e);
    for (std::size_t g = 0; g < order; ++g) {
      const std::size_t to = b.in_tree[e] ? g : times[b.basis_index[e]][g];
      c.graph.add_edge(c.vertex(edge.origin, g), c.vertex(edge.terminus, to), edge.label);
    }
  }
  return c;
}

CoveringCheck verify_covering(const CoveringGraph& c) {
  CoveringCheck check;
  const FoldedIndex& base = c.base.index();
  const std::size_t letters = 2 * c.base.rank();
  check.labels = c.graph.vertex_count() == c.base.vertex_count() * c.order();
  std::vector<std::uint32_t> star(c.graph.vertex_count() * letters, 0);
  for (const Edge& e : c.graph.edges()) {
    const Vertex o = c.project(e.origin), t = c.project(e.terminus);
    if (base.target(o, Letter(e.label, false)) != t) check.labels = false;
    ++star[e.origin * letters + Letter(e.label, false).code()];
    ++star[e.terminus * letters + Letter(e.label, true).code()];
  }
  check.stars = true;
  for (Vertex v = 0; v < c.graph.vertex_count(); ++v) {
    for (std::uint32_t l = 0; l < letters; ++l) {
      const std::uint32_t want =
          base.target(c.project(v), Letter::from_code(l)) == kNoVertex ? 0 : 1;
      if (star[v * letters + l] != want) check.stars = false;
    }
  }
  check.folded = c.graph.is_folded();
  return check;
}

std::vector<Vertex> deck_transformation(const CoveringGraph& c, Vertex v1,
                                        Vertex v2) {
  if (c.project(v1) != c.project(v2)) {
    throw std::invalid_argument("vertices lie in different fibers");
  }
  const Permutation k = c.group[c.fiber_index(v2)] * c.group[c.fiber_index(v1)].inverse();
  std::unordered_map<Permutation, std::uint32_t, PermutationHash> index;
  for (std::size_t i = 0; i < c.order(); ++i) {
    index.emplace(c.group[i], static_cast<std::uint32_t>(i));
  }
  std::vector<std::uint32_t> left(c.order());
  for (std::size_t i = 0; i < c.order(); ++i) left[i] = index.at(k * c.group[i]);
  std::vector<Vertex> map(c.graph.vertex_count());
  for (Vertex v = 0; v < map.size(); ++v) {
    map[v] = c.vertex(c.project(v), left[c.fiber_index(v)]);
  }
  return map;
}

bool is_automorphism(const XDigraph& g, std::span<const Vertex> map) {
  if (map.size() != g.vertex_count()) return false;
  std::vector<bool> hit(map.size(), false);
  for (Vertex v : map) {
    if (v >= map.size() || hit[v]) return false;
    hit[v] = true;
  }
  std::set<std::tuple<Vertex, Vertex, Generator>> edges;
  for (const Edge& e : g.edges()) edges.emplace(e.origin, e.terminus, e.label);
  for (const Edge& e : g.edges()) {
    if (!edges.count({map[e.origin], map[e.terminus], e.label})) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Certificates

Word ConjugateFactor::value() const {
  return conjugator * relator.power(sign) * conjugator.inverse();
}

namespace {

bool product_is(const PositiveCertificate& cert, const Word& target) {
  Word prod;
  for (const auto& f : cert.factors) {
    if (f.sign != 1 && f.sign != -1) return false;
    prod *= f.value();
  }
  return prod == target;
}

// Words over the certificate's source generators, or nullopt when some word
// lies outside the subgroup they generate.
std::optional<std::vector<Word>> over_generators(std::size_t rank,
                                                 const std::vector<Word>& generators,
                                                 const std::vector<Word>& words) {
  if (generators.empty()) return words;
  const StallingsGraph h = build_stallings(rank, generators);
  const SubgroupBasis b = basis(h);
  const std::vector<Word> change = basis_in_generators(h, generators);
  std::vector<Word> out;
  for (const Word& w : words) {
    const auto rw = rewrite_in_basis(h, b, w);
    if (!rw) return std::nullopt;
    out.push_back(substitute(*rw, change));
  }
  return out;
}

}  // namespace

bool verify_positive(const PositiveCertificate& cert, const Word& target,
                     const std::vector<Word>& relators) {
  for (const auto& f : cert.factors) {
    if (std::find(relators.begin(), relators.end(), f.relator) == relators.end()) {
      return false;
    }
  }
  return product_is(cert, target);
}

bool verify_positive(const PositiveCertificate& cert, const Word& target,
                     const StallingsGraph& n) {
  for (const auto& f : cert.factors) {
    if (f.relator.empty() || !member(n, f.relator)) return false;
  }
  return product_is(cert, target);
}

bool verify_negative(const NegativeCertificate& cert, const Word& target,
                     const std::vector<Word>& relators) {
  std::vector<Word> words{target};
  words.insert(words.end(), relators.begin(), relators.end());
  std::optional<std::vector<Word>> src;
  try {
    src = over_generators(cert.rank, cert.generators, words);
  } catch (const std::invalid_argument&) {
    return false;
  }
  if (!src) return false;
  const std::size_t source_rank =
      cert.generators.empty() ? cert.rank : cert.generators.size();
  if (cert.quotient.rank() != source_rank) return false;
  if (cert.quotient.evaluate((*src)[0]).is_identity()) return false;
  for (std::size_t i = 1; i < src->size(); ++i) {
    if (!cert.quotient.evaluate((*src)[i]).is_identity()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Positive search

namespace {

// Reduced words of length exactly `len`, shortlex order.
std::vector<Word> words_of_length(std::size_t rank, std::size_t len) {
  std::vector<Word> layer{Word()};
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<Word> next;
    for (const Word& u : layer) {
      for (std::uint32_t c = 0; c < 2 * rank; ++c) {
        const Letter l = Letter::from_code(c);
        if (!u.empty() && u.back() == l.inverse()) continue;
        next.push_back(u * Word(l));
      }
    }
    layer = std::move(next);
  }
  return layer;
}

}  // namespace

ClosureSearcher::ClosureSearcher(const std::vector<Word>& relators,
                                 std::size_t rank, const SearchBudget& budget)
    : budget_(budget) {
  // Each conjugate c·rot_k(z^s)·c^{-1} of a relator r = a z a^{-1} is stored
  // with conjugator c·p^{-1}·a^{-1}, p the rotated prefix of z^s.
  std::unordered_set<Word, WordHash> seen;
  auto fill = [&] {
    for (std::size_t len = 0; len <= budget.max_conjugator; ++len) {
      for (const Word& c : words_of_length(rank, len)) {
        for (const Word& r : relators) {
          if (r.empty()) continue;
          const CyclicReduction red = cyclic_reduce(r);
          for (int s : {1, -1}) {
            const Word z = s > 0 ? red.core.representative()
                                 : red.core.representative().inverse();
            for (std::size_t k = 0; k < z.size(); ++k) {
              ConjugateFactor f{c * z.prefix(k).inverse() * red.conjugator.inverse(), r, s};
              Word value = f.value();
              if (!seen.insert(value).second) continue;
              singles_.push_back({std::move(value), std::move(f), len});
              if (singles_.size() >= budget.max_nodes) return;
            }
          }
        }
      }
    }
  };
  fill();
  const std::size_t depth = (budget.max_factors + 1) / 2;
  layers_.resize(depth + 1);
  layers_[0].values.push_back(Word());
  layers_[0].products.push_back({{}, 0});
  layers_[0].index.emplace(Word(), 0);
  for (std::size_t j = 1; j <= depth; ++j) {
    Layer& layer = layers_[j];
    const Layer& prev = layers_[j - 1];
    for (std::size_t a = 0; a < prev.values.size(); ++a) {
      for (std::uint32_t s = 0; s < singles_.size(); ++s) {
        Word value = prev.values[a] * singles_[s].value;
        if (layer.index.count(value)) continue;
        Product p = prev.products[a];
        p.parts.push_back(s);
        p.conj_len = std::max(p.conj_len, singles_[s].conj_len);
        layer.index.emplace(value, static_cast<std::uint32_t>(layer.values.size()));
        layer.values.push_back(std::move(value));
        layer.products.push_back(std::move(p));
        if (layer.values.size() >= budget.max_nodes) break;
      }
      if (layer.values.size() >= budget.max_nodes) break;
    }
  }
}

std::optional<PositiveCertificate> ClosureSearcher::assemble(
    const Product& left, const Product& right, const Word& w) const {
  PositiveCertificate cert;
  for (std::uint32_t s : left.parts) cert.factors.push_back(singles_[s].factor);
  for (std::uint32_t s : right.parts) cert.factors.push_back(singles_[s].factor);
  if (!product_is(cert, w)) return std::nullopt;
  return cert;
}

std::optional<PositiveCertificate> ClosureSearcher::search(const Word& w) const {
  if (w.empty()) return PositiveCertificate{};
  for (std::size_t k = 1; k <= budget_.max_factors; ++k) {
    const std::size_t j = k / 2, i = k - j;
    if (i >= layers_.size()) break;
    const Layer& left = layers_[i];
    const Layer& right = layers_[j];
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_len = kInfinity;
    for (std::size_t a = 0; a < left.values.size(); ++a) {
      if (left.products[a].parts.size() != i) continue;
      const auto it = right.index.find(left.values[a].inverse() * w);
      if (it == right.index.end()) continue;
      const Product& rp = right.products[it->second];
      if (rp.parts.size() != j) continue;
      const std::size_t len = std::max(left.products[a].conj_len, rp.conj_len);
      if (len < best_len) {
        best_len = len;
        best = {a, it->second};
        if (len == 0) break;
      }
    }
    if (best) {
      if (auto cert = assemble(left.products[best->first],
                               right.products[best->second], w)) {
        return cert;
      }
    }
  }
  return std::nullopt;
}

std::optional<PositiveCertificate> closure_member_search(
    const Word& w, const std::vector<Word>& relators, std::size_t rank,
    const SearchBudget& budget) {
  return ClosureSearcher(relators, rank, budget).search(w);
}

std::vector<Word> short_relators(const StallingsGraph& n, std::size_t count,
                                 std::size_t max_length) {
  std::vector<Word> words;
  for (Word& w : basis(n).words) {
    if (w.size() <= max_length) words.push_back(std::move(w));
  }
  std::sort(words.begin(), words.end());
  if (words.size() > count) words.resize(count);
  return words;
}

// ---------------------------------------------------------------------------
// Negative search

namespace {

// Point-tracking evaluation against small permutation tables.
class Assignment {
 public:
  Assignment(std::size_t degree, std::size_t rank)
      : d_(degree), fwd_(rank), inv_(rank) {}

  void set(std::size_t i, const Permutation& p) {
    fwd_[i] = p.images();
    inv_[i] = p.inverse().images();
  }

  bool kills(const Word& w) const {
    for (std::uint32_t x = 0; x < d_; ++x) {
      std::uint32_t y = x;
      for (Letter l : w) y = (l.inverted() ? inv_ : fwd_)[l.generator()][y];
      if (y != x) return false;
    }
    return true;
  }

 private:
  std::size_t d_;
  std::vector<std::vector<std::uint32_t>> fwd_, inv_;
};

std::vector<Permutation> symmetric_group(std::size_t d) {
  std::vector<std::uint32_t> p(d);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<Permutation> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

std::optional<NegativeCertificate> quotient_nonmember(
    const Word& w, const std::vector<Word>& relators, std::size_t rank,
    const std::vector<Word>& generators, const QuotientLimits& limits) {
  std::vector<Word> words{w};
  words.insert(words.end(), relators.begin(), relators.end());
  const auto src = over_generators(rank, generators, words);
  if (!src) return std::nullopt;
  const Word& target = (*src)[0];
  std::vector<Word> rels(src->begin() + 1, src->end());
  std::stable_sort(rels.begin(), rels.end(),
                   [](const Word& a, const Word& b) { return a.size() < b.size(); });
  if (target.empty()) return std::nullopt;
  const std::size_t r = generators.empty() ? rank : generators.size();
  std::mt19937_64 rng(limits.seed);
  for (std::size_t d = 2; d <= limits.max_degree; ++d) {
    const std::vector<Permutation> sym = symmetric_group(d);
    Assignment as(d, r);
    std::vector<std::size_t> choice(r, 0);
    auto accept = [&]() -> std::optional<NegativeCertificate> {
      for (std::size_t i = 0; i < r; ++i) as.set(i, sym[choice[i]]);
      if (as.kills(target)) return std::nullopt;
      for (const Word& rel : rels) {
        if (!as.kills(rel)) return std::nullopt;
      }
      std::vector<Permutation> images;
      for (std::size_t i = 0; i < r; ++i) images.push_back(sym[choice[i]]);
      NegativeCertificate cert{rank, generators, FiniteQuotient(d, std::move(images))};
      if (!verify_negative(cert, w, relators)) return std::nullopt;
      return cert;
    };
    double assignments = 1;
    for (std::size_t i = 0; i < r; ++i) assignments *= static_cast<double>(sym.size());
    if (assignments <= static_cast<double>(limits.exhaustive_cap)) {
      for (;;) {
        if (auto cert = accept()) return cert;
        std::size_t i = 0;
        while (i < r && ++choice[i] == sym.size()) choice[i++] = 0;
        if (i == r) break;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, sym.size() - 1);
      for (std::size_t t = 0; t < limits.random_samples; ++t) {
        for (auto& c : choice) c = pick(rng);
        if (auto cert = accept()) return cert;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Length bound for <<u^n>>

namespace {

Word random_reduced(std::mt19937_64& rng, std::size_t rank, std::size_t len) {
  std::vector<Letter> raw;
  std::uniform_int_distribution<std::uint32_t> letter(0, static_cast<std::uint32_t>(2 * rank - 1));
  while (raw.size() < len) {
    const Letter l = Letter::from_code(letter(rng));
    if (!raw.empty() && raw.back() == l.inverse()) continue;
    raw.push_back(l);
  }
  return Word::reduce(raw);
}

}  // namespace

NewmanReport newman_check(const Word& u, long n, std::size_t rank,
                          std::size_t samples, std::uint64_t seed) {
  if (u.empty() || n < 2) throw std::invalid_argument("need u != 1 and n >= 2");
  NewmanReport rep;
  rep.bound = static_cast<std::size_t>(n - 1) * cyclic_reduce(u).core.size();
  const Word r = u.power(n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> factors(1, 4), conj_len(0, 4), sign(0, 1);
  for (std::size_t attempt = 0; rep.samples < samples && attempt < 100 * samples; ++attempt) {
    Word prod;
    for (int k = factors(rng); k > 0; --k) {
      const Word c = random_reduced(rng, rank, static_cast<std::size_t>(conj_len(rng)));
      prod *= c * (sign(rng) ? r : r.inverse()) * c.inverse();
    }
    if (prod.empty()) continue;
    ++rep.samples;
    rep.min_length = std::min(rep.min_length, prod.size());
    if (prod.size() < rep.bound) ++rep.violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<Word> subgroup_elements(const StallingsGraph& g, std::size_t len) {
  std::vector<Word> out{Word()};
  const FoldedIndex& idx = g.index();
  std::vector<Letter> path;
  std::function<void(Vertex)> walk = [&](Vertex v) {
    if (path.size() == len) return;
    for (std::uint32_t c = 0; c < idx.letter_count(); ++c) {
      const Letter l = Letter::from_code(c);
      if (!path.empty() && path.back() == l.inverse()) continue;
      const Vertex t = idx.target(v, l);
      if (t == kNoVertex) continue;
      path.push_back(l);
      if (t == g.basepoint()) out.push_back(Word::reduce(path));
      walk(t);
      path.pop_back();
    }
  };
  walk(g.basepoint());
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentReport acep_experiment(const StallingsGraph& h,
                                 const FiniteQuotient& q, std::size_t horizon,
                                 const ExperimentBudget& budget) {
  ExperimentReport rep;
  rep.horizon = horizon;
  rep.constants = constants(h);
  const CoveringGraph cov = cover(h, q);
  if (!verify_covering(cov).ok()) throw std::logic_error("cover failed verification");
  rep.cover_vertices = cov.graph.vertex_count();
  const StallingsGraph n = cov.stallings();
  const OmegaMetric metric(h);
  rep.gamma_h = gamma_h(n, h, metric).length;
  rep.hypothesis = rep.gamma_h != kInfinity && rep.gamma_h > rep.constants.c_h;

  const ClosureSearcher searcher(short_relators(n, budget.relator_count, kInfinity),
                                 h.rank(), budget.search);
  std::vector<Word> generators_of_n = basis(n).words;
  std::stable_sort(generators_of_n.begin(), generators_of_n.end(),
                   [](const Word& a, const Word& b) { return a.size() < b.size(); });

  std::vector<Word> outside;
  for (const Word& w : subgroup_elements(h, horizon)) {
    ++rep.words;
    if (member(n, w)) {
      ++rep.members_confirmed;
      continue;
    }
    ++rep.non_members;
    outside.push_back(w);
  }
  std::vector<bool> positive(outside.size(), false);
  for (std::size_t i = 0; i < outside.size(); ++i) {
    const auto cert = searcher.search(outside[i]);
    if (cert && verify_positive(*cert, outside[i], n)) {
      positive[i] = true;
      ++rep.counterexamples;
      rep.counterexample_words.push_back(outside[i]);
    }
  }
  const std::size_t samples = std::min(budget.quotient_samples, outside.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t i = s * outside.size() / samples;
    if (quotient_nonmember(outside[i], generators_of_n, h.rank(), {}, budget.limits)) {
      ++rep.proven_exclusions;
      if (positive[i]) ++rep.inconsistencies;
    }
  }
  rep.unresolved = rep.non_members - rep.counterexamples -
                   (rep.proven_exclusions - rep.inconsistencies);
  return rep;
}

std::optional<MalnormalPick> smallest_malnormal(std::size_t rank,
                                                std::size_t max_len) {
  std::vector<Word> words;
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (Word& u : words_of_length(rank, len)) words.push_back(std::move(u));
  }
  std::optional<MalnormalPick> best;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const std::vector<Word> gens{words[i], words[j]};
      StallingsGraph g = build_stallings(rank, gens);
      if (g.vertex_count() == 1 || g.subgroup_rank() != 2 || !is_malnormal(g)) continue;
      const Constants c = constants(g);
      if (best && std::pair(best->constants.c_h, best->graph.vertex_count()) <=
                      std::pair(c.c_h, g.vertex_count())) {
        continue;
      }
      best = MalnormalPick{std::move(g), gens, c};
    }
  }
  return best;
}

std::optional<DeepQuotient> find_deep_quotient(const StallingsGraph& h,
                                               std::uint32_t p,
                                               std::size_t threshold,
                                               std::size_t max_trials,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> entry(0, p - 1);
  auto random_element = [&] {
    for (;;) {
      const std::uint64_t a = entry(rng), b = entry(rng), c = entry(rng);
      if (a == 0) continue;
      // d = (1 + bc) / a makes the determinant 1.
      const std::uint64_t d = (1 + b * c) % p * power_mod(a, p - 2, p) % p;
      return projective_action(p, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                               static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(d));
    }
  };
  for (std::size_t t = 1; t <= max_trials; ++t) {
    std::vector<Permutation> images;
    for (std::size_t i = 0; i < h.subgroup_rank(); ++i) images.push_back(random_element());
    FiniteQuotient q(p + 1, std::move(images));
    const std::size_t g = gamma(cover(h, q).stallings()).length;
    if (g != kInfinity && g > threshold) return DeepQuotient{std::move(q), g, t};
  }
  return std::nullopt;
}

ShortestElement gamma_h_upper(const std::vector<Word>& relators,
                              const StallingsGraph& h,
                              const OmegaMetric& metric) {
  ShortestElement best;
  std::vector<Word> conj{Word()};
  for (const Word& b : basis(h).words) {
    conj.push_back(b);
    conj.push_back(b.inverse());
  }
  for (const Word& r : relators) {
    if (r.empty() || !member(h, r)) continue;
    for (const Word& c : conj) {
      const Word x = c * r * c.inverse();
      const std::size_t len = metric.length(x);
      if (len < best.length) best = {len, x};
    }
  }
  return best;
}

RelatorTarget relator_pipeline(const StallingsGraph& h,
                               const std::vector<Word>& generators,
                               const std::vector<Word>& relators,
                               const Word& target, const SearchBudget& search,
                               const QuotientLimits& limits) {
  RelatorTarget out{target, std::nullopt, std::nullopt};
  if (auto cert = closure_member_search(target, relators, h.rank(), search);
      cert && verify_positive(*cert, target, relators)) {
    out.in_closure = std::move(cert);
  }
  out.outside_n = quotient_nonmember(target, relators, h.rank(), generators, limits);
  return out;
}

// ---------------------------------------------------------------------------
// Certificate documents

std::string certificate_json(const Alphabet& alphabet, const Word& target,
                             const PositiveCertificate& cert, bool verified,
                             const SearchBudget& budget) {
  nlohmann::ordered_json j;
  j["kind"] = "positive";
  j["target"] = format_word(alphabet, target);
  j["factors"] = nlohmann::ordered_json::array();
  for (const auto& f : cert.factors) {
    j["factors"].push_back({{"conjugator", format_word(alphabet, f.conjugator)},
                            {"relator", format_word(alphabet, f.relator)},
                            {"sign", f.sign}});
  }
  j["verified"] = verified;
  j["budget"] = {{"max_factors", budget.max_factors},
                 {"max_conjugator", budget.max_conjugator},
                 {"max_nodes", budget.max_nodes}};
  return j.dump(2);
}

std::string certificate_json(const Alphabet& alphabet, const Word& target,
                             const NegativeCertificate& cert, bool verified,
                             const QuotientLimits& limits) {
  nlohmann::ordered_json j;
  j["kind"] = "negative";
  j["target"] = format_word(alphabet, target);
  j["generators"] = nlohmann::ordered_json::array();
  if (cert.generators.empty()) {
    for (std::size_t i = 0; i < cert.rank; ++i) {
      j["generators"].push_back(alphabet.name(static_cast<Generator>(i)));
    }
  } else {
    for (const Word& g : cert.generators) j["generators"].push_back(format_word(alphabet, g));
  }
  j["degree"] = cert.quotient.degree;
  j["images"] = nlohmann::ordered_json::array();
  for (const auto& p : cert.quotient.images) j["images"].push_back(p.cycles());
  j["verified"] = verified;
  j["limits"] = {{"max_degree", limits.max_degree},
                 {"exhaustive_cap", limits.exhaustive_cap},
                 {"random_samples", limits.random_samples},
                 {"seed", limits.seed}};
  return j.dump(2);
}

}  // namespace acep
