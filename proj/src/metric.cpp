#include "acep/metric.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace acep {

namespace {

std::size_t add_cost(std::size_t a, std::size_t b) {
  return (a == kInfinity || b == kInfinity) ? kInfinity : a + b;
}

}  // namespace

OmegaFamily omega(const StallingsGraph& g) {
  OmegaFamily family;
  family.rank = g.rank();
  const ProductGraph p = product(g, true);
  for (const auto& c : components(p)) {
    if (c.rank == 0) continue;
    const XDigraph sub = p.graph.induced(c.vertices);
    for (Vertex local = 0; local < c.vertices.size(); ++local) {
      StallingsGraph member = fold(sub, local);
      const bool seen = std::any_of(
          family.members.begin(), family.members.end(),
          [&](const OmegaMember& m) { return m.graph == member; });
      if (!seen) {
        family.members.push_back({std::move(member), p.pairs[c.vertices[local]]});
      }
    }
  }
  return family;
}

OmegaFamily make_family(std::size_t rank,
                        const std::vector<StallingsGraph>& members) {
  OmegaFamily family;
  family.rank = rank;
  for (const auto& m : members) {
    if (m.rank() != rank) throw std::invalid_argument("rank mismatch");
    if (m.is_trivial()) continue;
    family.members.push_back({m, {0, 0}});
  }
  return family;
}

BallAutomaton::BallAutomaton(const OmegaFamily& family)
    : letters_(2 * family.rank) {
  std::vector<State> base;
  for (const auto& m : family.members) {
    base.push_back(static_cast<State>(n_));
    n_ += m.graph.vertex_count();
  }
  for (std::uint32_t c = 0; c < letters_; ++c) {
    arcs_.push_back({kHub, kHub, Letter::from_code(c), 1, std::nullopt});
  }
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const State b = base[i];
    arcs_.push_back({kHub, b, std::nullopt, 1, i});
    arcs_.push_back({b, kHub, std::nullopt, 0, i});
    for (const Edge& e : family.members[i].graph.graph().edges()) {
      arcs_.push_back({b + e.origin, b + e.terminus, Letter(e.label, false), 0, i});
      arcs_.push_back({b + e.terminus, b + e.origin, Letter(e.label, true), 0, i});
    }
  }
  out_.assign(n_ * letters_, {});
  in_.assign(n_ * letters_, {});
  for (std::uint32_t a = 0; a < arcs_.size(); ++a) {
    const Arc& arc = arcs_[a];
    if (!arc.letter) continue;
    out_[arc.from * letters_ + arc.letter->code()].push_back(a);
    in_[arc.to * letters_ + arc.letter->code()].push_back(a);
  }
  saturate();
}

// Cheapest identity-reducing walks, by a Dijkstra-style closure over state
// pairs under the rules: empty walk, ε-arc, concatenation, and x · (walk) ·
// x^{-1}.
void BallAutomaton::saturate() {
  const std::size_t pairs = n_ * n_;
  d_.assign(pairs, kInfinity);
  how_.assign(pairs, {});
  std::vector<bool> done(pairs, false);
  using Item = std::tuple<std::size_t, State, State>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  auto relax = [&](State p, State q, std::size_t cost, Derivation how) {
    const std::size_t i = p * n_ + q;
    if (done[i] || cost >= d_[i]) return;
    d_[i] = cost;
    how_[i] = how;
    queue.emplace(cost, p, q);
  };
  for (State p = 0; p < n_; ++p) relax(p, p, 0, {Derivation::kRefl, 0, 0});
  for (std::uint32_t a = 0; a < arcs_.size(); ++a) {
    if (!arcs_[a].letter) {
      relax(arcs_[a].from, arcs_[a].to, arcs_[a].cost, {Derivation::kEps, a, 0});
    }
  }
  while (!queue.empty()) {
    const auto [cost, p, q] = queue.top();
    queue.pop();
    const std::size_t i = p * n_ + q;
    if (done[i] || cost != d_[i]) continue;
    done[i] = true;
    for (State r = 0; r < n_; ++r) {
      if (done[q * n_ + r]) {
        relax(p, r, cost + d_[q * n_ + r], {Derivation::kConcat, q, 0});
      }
      if (done[r * n_ + p]) {
        relax(r, q, d_[r * n_ + p] + cost, {Derivation::kConcat, p, 0});
      }
    }
    for (std::uint32_t x = 0; x < letters_; ++x) {
      for (std::uint32_t a1 : in_[p * letters_ + x]) {
        for (std::uint32_t a2 : out_[q * letters_ + (x ^ 1u)]) {
          relax(arcs_[a1].from, arcs_[a2].to,
                arcs_[a1].cost + cost + arcs_[a2].cost,
                {Derivation::kBracket, a1, a2});
        }
      }
    }
  }
}

std::size_t BallAutomaton::shortcut_count() const {
  return static_cast<std::size_t>(
      std::count_if(d_.begin(), d_.end(),
                    [](std::size_t c) { return c != kInfinity; }));
}

void BallAutomaton::expand(State p, State q,
                           std::vector<std::uint32_t>& path) const {
  const Derivation& how = how_[p * n_ + q];
  switch (how.kind) {
    case Derivation::kRefl:
      return;
    case Derivation::kEps:
      path.push_back(how.a);
      return;
    case Derivation::kConcat:
      expand(p, how.a, path);
      expand(how.a, q, path);
      return;
    case Derivation::kBracket:
      path.push_back(how.a);
      expand(arcs_[how.a].to, arcs_[how.b].from, path);
      path.push_back(how.b);
      return;
    case Derivation::kNone:
      break;
  }
  throw std::logic_error("missing shortcut derivation");
}

std::optional<std::vector<std::uint32_t>> BallAutomaton::best_path(
    const Word& w, std::size_t* cost) const {
  const std::size_t m = w.size();
  // before[i][s]: cost to be at s having read i letters, before a shortcut.
  std::vector<std::vector<std::size_t>> before(m + 1,
                                               std::vector<std::size_t>(n_, kInfinity));
  std::vector<std::vector<std::size_t>> after = before;
  std::vector<std::vector<State>> jump_from(m + 1, std::vector<State>(n_, 0));
  std::vector<std::vector<std::uint32_t>> via(m + 1, std::vector<std::uint32_t>(n_, 0));
  before[0][kHub] = 0;
  for (std::size_t i = 0; i <= m; ++i) {
    for (State p = 0; p < n_; ++p) {
      if (before[i][p] == kInfinity) continue;
      for (State q = 0; q < n_; ++q) {
        const std::size_t c = add_cost(before[i][p], d_[p * n_ + q]);
        if (c < after[i][q]) {
          after[i][q] = c;
          jump_from[i][q] = p;
        }
      }
    }
    if (i == m) break;
    for (State q = 0; q < n_; ++q) {
      if (after[i][q] == kInfinity) continue;
      for (std::uint32_t a : out(q, w[i])) {
        const std::size_t c = after[i][q] + arcs_[a].cost;
        if (c < before[i + 1][arcs_[a].to]) {
          before[i + 1][arcs_[a].to] = c;
          via[i + 1][arcs_[a].to] = a;
        }
      }
    }
  }
  if (after[m][kHub] == kInfinity) return std::nullopt;
  if (cost) *cost = after[m][kHub];
  std::vector<std::vector<std::uint32_t>> pieces;
  State s = kHub;
  for (std::size_t i = m + 1; i-- > 0;) {
    const State p = jump_from[i][s];
    std::vector<std::uint32_t> jump;
    expand(p, s, jump);
    pieces.push_back(std::move(jump));
    s = p;
    if (i == 0) break;
    const std::uint32_t a = via[i][s];
    pieces.push_back({a});
    s = arcs_[a].from;
  }
  std::vector<std::uint32_t> path;
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
    path.insert(path.end(), it->begin(), it->end());
  }
  return path;
}

std::size_t BallAutomaton::length(const Word& w) const {
  std::size_t cost = kInfinity;
  best_path(w, &cost);
  return cost;
}

std::vector<OmegaFactor> BallAutomaton::factorize(const Word& w) const {
  const auto path = best_path(w, nullptr);
  if (!path) throw std::logic_error("word not accepted by the ball automaton");
  std::vector<OmegaFactor> factors;
  std::vector<Letter> inside;
  for (std::uint32_t a : *path) {
    const Arc& arc = arcs_[a];
    if (!arc.member) {
      factors.push_back({std::nullopt, Word(*arc.letter)});
    } else if (!arc.letter && arc.from == kHub) {
      inside.clear();
    } else if (!arc.letter && arc.to == kHub) {
      factors.push_back({arc.member, Word::reduce(inside)});
    } else {
      inside.push_back(*arc.letter);
    }
  }
  return factors;
}

OmegaMetric::OmegaMetric(const StallingsGraph& g) : OmegaMetric(g, omega(g)) {}

OmegaMetric::OmegaMetric(const StallingsGraph&, OmegaFamily family)
    : family_(std::move(family)), automaton_(family_) {}

std::size_t omega_length(const Word& w, const OmegaFamily& family) {
  return BallAutomaton(family).length(w);
}

std::size_t h_length(const Word& w, const StallingsGraph& g) {
  return OmegaMetric(g).length(w);
}

Constants constants(const StallingsGraph& g) {
  Constants c;
  c.diam_gamma = diameter(g.graph());
  c.diam_dotted = diameter(product(g, true).graph);
  c.c = c.diam_dotted + 1;
  c.c_h = 6 * c.c + 2 * c.diam_gamma;
  return c;
}

ShortestElement gamma(const StallingsGraph& n) {
  const std::size_t letters = 2 * n.rank();
  const std::size_t none = letters;
  const std::size_t states = n.vertex_count() * (letters + 1);
  std::vector<std::uint32_t> parent(states, UINT32_MAX);
  auto id = [&](Vertex v, std::size_t last) { return v * (letters + 1) + last; };
  std::vector<std::size_t> queue{id(0, none)};
  parent[id(0, none)] = static_cast<std::uint32_t>(id(0, none));
  auto word_to = [&](std::size_t s) {
    std::vector<Letter> rev;
    while (s % (letters + 1) != none) {
      rev.push_back(Letter::from_code(static_cast<std::uint32_t>(s % (letters + 1))));
      s = parent[s];
    }
    std::reverse(rev.begin(), rev.end());
    return Word::reduce(rev);
  };
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t s = queue[head];
    const Vertex v = static_cast<Vertex>(s / (letters + 1));
    const std::size_t last = s % (letters + 1);
    for (std::uint32_t c = 0; c < letters; ++c) {
      if (last != none && c == (last ^ 1u)) continue;
      const Vertex t = n.step(v, Letter::from_code(c));
      if (t == kNoVertex) continue;
      if (t == 0) {
        ShortestElement r;
        r.word = word_to(s) * Word(Letter::from_code(c));
        r.length = r.word.size();
        return r;
      }
      const std::size_t u = id(t, c);
      if (parent[u] != UINT32_MAX) continue;
      parent[u] = static_cast<std::uint32_t>(s);
      queue.push_back(u);
    }
  }
  return {};
}

ShortestElement gamma_h(const StallingsGraph& n, const StallingsGraph& h) {
  return gamma_h(n, h, OmegaMetric(h));
}

ShortestElement gamma_h(const StallingsGraph& n, const StallingsGraph& h,
                        const OmegaMetric& metric) {
  for (const Word& b : basis(n).words) {
    if (!member(h, b)) {
      throw std::invalid_argument("N is not contained in H");
    }
  }
  if (metric.family().empty()) return gamma(n);
  const BallAutomaton& ball = metric.automaton();
  const std::size_t a_states = ball.state_count();
  const std::size_t letters = 2 * n.rank();
  const std::size_t none = letters;
  auto id = [&](Vertex v, std::size_t a, std::size_t last) {
    return (static_cast<std::size_t>(v) * a_states + a) * (letters + 1) + last;
  };
  const std::size_t states = n.vertex_count() * a_states * (letters + 1);
  std::vector<std::size_t> dist(states, kInfinity);
  std::vector<std::size_t> parent(states, kInfinity);
  using Item = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  const std::size_t start = id(0, BallAutomaton::kHub, none);
  dist[start] = 0;
  queue.emplace(0, start);
  std::size_t best = kInfinity, best_state = kInfinity;
  while (!queue.empty()) {
    const auto [cost, s] = queue.top();
    queue.pop();
    if (cost != dist[s]) continue;
    if (cost >= best) break;
    const std::size_t last = s % (letters + 1);
    const std::size_t a = (s / (letters + 1)) % a_states;
    const Vertex v = static_cast<Vertex>(s / (letters + 1) / a_states);
    if (v == 0 && last != none) {
      const std::size_t total = add_cost(cost, ball.shortcut(static_cast<BallAutomaton::State>(a), BallAutomaton::kHub));
      if (total < best) {
        best = total;
        best_state = s;
      }
    }
    for (BallAutomaton::State q = 0; q < a_states; ++q) {
      const std::size_t jump = ball.shortcut(static_cast<BallAutomaton::State>(a), q);
      if (jump == kInfinity) continue;
      for (std::uint32_t c = 0; c < letters; ++c) {
        if (last != none && c == (last ^ 1u)) continue;
        const Letter l = Letter::from_code(c);
        const Vertex t = n.step(v, l);
        if (t == kNoVertex) continue;
        for (std::uint32_t arc : ball.out(q, l)) {
          const std::size_t next = id(t, ball.arcs()[arc].to, c);
          const std::size_t nc = cost + jump + ball.arcs()[arc].cost;
          if (nc < dist[next]) {
            dist[next] = nc;
            parent[next] = s;
            queue.emplace(nc, next);
          }
        }
      }
    }
  }
  ShortestElement r;
  if (best == kInfinity) return r;
  r.length = best;
  std::vector<Letter> rev;
  for (std::size_t s = best_state; s != start; s = parent[s]) {
    rev.push_back(Letter::from_code(static_cast<std::uint32_t>(s % (letters + 1))));
  }
  std::reverse(rev.begin(), rev.end());
  r.word = Word::reduce(rev);
  return r;
}

std::size_t AlternatingProduct::weight() const {
  std::size_t total = h.size();
  for (const Word& b : w) total += b.size();
  return total;
}

Word AlternatingProduct::evaluate() const {
  Word out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out *= w[i];
    if (i < h.size()) out *= h[i];
  }
  return out;
}

bool is_alternating(const StallingsGraph& g, const AlternatingProduct& p) {
  if (p.w.size() != p.h.size() + 1) return false;
  Word prefix;
  for (std::size_t i = 0; i < p.h.size(); ++i) {
    prefix *= p.w[i];
    if (member(g, prefix) || !member(g, p.h[i])) return false;
    prefix *= p.h[i];
  }
  return true;
}

AlternatingProduct alternating_from_factorization(
    const StallingsGraph& g, const OmegaFamily& family,
    const std::vector<OmegaFactor>& factors) {
  struct Syllable {
    Word h;
    VertexPair anchor;
  };
  std::vector<Word> blocks(1);
  std::vector<Syllable> syllables;
  for (const auto& f : factors) {
    if (!f.member) {
      blocks.back() *= f.word;
    } else {
      syllables.push_back({f.word, family.members.at(*f.member).anchor});
      blocks.emplace_back();
    }
  }
  const SubgroupBasis b = basis(g);
  AlternatingProduct p;
  Word prefix;  // w_1 h_1 ... w_i in the original factorization
  Word prev;    // b_{i-1}
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    prefix *= blocks[i];
    // At most one of the two tree paths can put the prefix in H.
    Word bi = b.tree_paths.at(syllables[i].anchor.first);
    if (member(g, prefix * bi.inverse())) {
      bi = b.tree_paths.at(syllables[i].anchor.second);
    }
    p.w.push_back(prev * blocks[i] * bi.inverse());
    p.h.push_back(bi * syllables[i].h * bi.inverse());
    prefix *= syllables[i].h;
    prev = bi;
  }
  p.w.push_back(prev * blocks.back());
  return p;
}

namespace {

// Nontrivial reduced cycles at the basepoint of length <= cap.
std::vector<Word> short_elements(const StallingsGraph& g, std::size_t cap) {
  std::vector<Word> out;
  std::vector<Letter> cur;
  std::function<void(Vertex)> dfs = [&](Vertex v) {
    if (!cur.empty() && v == 0) out.push_back(Word::reduce(cur));
    if (cur.size() == cap) return;
    for (std::uint32_t c = 0; c < 2 * g.rank(); ++c) {
      const Letter l = Letter::from_code(c);
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      const Vertex t = g.step(v, l);
      if (t == kNoVertex) continue;
      cur.push_back(l);
      dfs(t);
      cur.pop_back();
    }
  };
  dfs(0);
  return out;
}

}  // namespace

AltDistance alt_distance_upper(const Word& h, const StallingsGraph& g,
                               const OmegaMetric& metric, std::size_t cap,
                               std::size_t syllable_cap,
                               std::size_t state_budget) {
  AltDistance best;
  best.value = h.size();
  best.product.w = {h};
  if (h.empty()) return best;

  if (!metric.family().empty()) {
    const auto seed = alternating_from_factorization(g, metric.family(),
                                                     metric.factorize(h));
    if (seed.weight() < best.value && is_alternating(g, seed) &&
        seed.evaluate() == h) {
      best.value = seed.weight();
      best.product = seed;
    }
  }

  // Best-first search. A syllable is only useful right after a letter: two
  // syllables in a row merge into one, and the first block cannot be empty.
  const auto syllables = short_elements(g, syllable_cap);
  struct Node {
    Word u;
    bool after_letter;
    std::size_t parent;
    std::size_t move;  // letter code, or syllables index + letter count
  };
  const std::size_t letters = 2 * g.rank();
  std::vector<Node> nodes{{Word(), false, kInfinity, 0}};
  std::unordered_map<Word, std::size_t, WordHash> seen[2];
  seen[0][Word()] = 0;
  std::vector<std::size_t> layer{0};
  std::size_t found = kInfinity;
  for (std::size_t cost = 0; cost + 1 < best.value && found == kInfinity; ++cost) {
    std::vector<std::size_t> next;
    for (std::size_t idx : layer) {
      if (nodes.size() >= state_budget) break;
      const Node node = nodes[idx];
      auto push = [&](Word u, bool after_letter, std::size_t move) {
        if (u.size() > cap) return;
        auto& table = seen[after_letter ? 1 : 0];
        if (table.count(u)) return;
        table[u] = nodes.size();
        nodes.push_back({u, after_letter, idx, move});
        if (u == h) found = nodes.size() - 1;
        next.push_back(nodes.size() - 1);
      };
      for (std::uint32_t c = 0; c < letters && found == kInfinity; ++c) {
        push(node.u * Word(Letter::from_code(c)), true, c);
      }
      if (node.after_letter && !member(g, node.u)) {
        for (std::size_t s = 0; s < syllables.size() && found == kInfinity; ++s) {
          push(node.u * syllables[s], false, letters + s);
        }
      }
      if (found != kInfinity) break;
    }
    layer = std::move(next);
    if (layer.empty()) break;
  }
  best.states_explored = nodes.size();
  if (found == kInfinity) return best;

  std::vector<std::size_t> moves;
  for (std::size_t i = found; nodes[i].parent != kInfinity; i = nodes[i].parent) {
    moves.push_back(nodes[i].move);
  }
  std::reverse(moves.begin(), moves.end());
  AlternatingProduct p;
  p.w.emplace_back();
  for (std::size_t m : moves) {
    if (m < letters) {
      p.w.back() *= Word(Letter::from_code(static_cast<std::uint32_t>(m)));
    } else {
      p.h.push_back(syllables[m - letters]);
      p.w.emplace_back();
    }
  }
  if (is_alternating(g, p) && p.evaluate() == h && p.weight() < best.value) {
    best.value = p.weight();
    best.product = std::move(p);
  }
  return best;
}

LipschitzReport lipschitz_report(const StallingsGraph& g,
                                 const std::vector<Word>& samples) {
  LipschitzReport report;
  report.constants = constants(g);
  const OmegaMetric metric(g);
  const std::size_t stretch = 1 + 2 * report.constants.diam_gamma;
  for (const Word& h : samples) {
    if (!member(g, h)) throw std::invalid_argument("sample is not in H");
    LipschitzRow row;
    row.h = h;
    row.h_length = metric.length(h);
    const std::size_t cap = stretch * row.h_length + 2 * report.constants.diam_gamma;
    row.alt_upper = alt_distance_upper(h, g, metric, cap).value;
    row.lower_ok = row.h_length <= report.constants.c * row.alt_upper;
    row.upper_ok = row.alt_upper <= stretch * row.h_length;
    if (!row.lower_ok || !row.upper_ok) ++report.violations;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::optional<std::string> normalizer_warning(const StallingsGraph& g,
                                              const OmegaFamily& family) {
  const XDigraph target = core(g).graph;
  for (const auto& m : family.members) {
    if (find_isomorphism(core(m.graph).graph, target)) {
      return "Ω(H) contains a conjugate of H, so |·|_H is bounded on H";
    }
  }
  return std::nullopt;
}

}  // namespace acep
