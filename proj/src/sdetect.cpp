#include "acep/sdetect.hpp"

#include <algorithm>

namespace acep {

bool cycles_are_rotations(const StallingsGraph& g, Vertex v, Vertex v_prime,
                          const Word& w) {
  if (w.empty()) return v == v_prime;
  const std::size_t period = primitive_root(w).root.size();
  for (std::size_t k = 0; k < w.size(); k += period) {
    if (trace(g, v, w.prefix(k)) == v_prime) return true;
  }
  return false;
}

std::size_t default_s_bound(const StallingsGraph& g) {
  const CoreProduct cp = core_product(g);
  std::size_t longest = 0;
  for (const Word& h : basis(g).words) longest = std::max(longest, h.size());
  return 2 * cp.product.graph.edge_count() + longest;
}

namespace {

// Cyclically reduced candidate label at a product vertex.
struct Candidate {
  Word label;
  Vertex product_vertex;
};

// Two independent cycles at local vertex 0 of a component core, read off a
// breadth-first spanning tree.
std::vector<Candidate> high_rank_candidates(const IntersectionComponent& c) {
  const XDigraph& cg = c.core.graph;
  const FoldedIndex idx(cg);
  const std::size_t n = cg.vertex_count();
  std::vector<Word> path(n);
  std::vector<bool> seen(n, false), tree(cg.edge_count(), false);
  std::vector<Vertex> queue{0};
  seen[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (std::uint32_t code = 0; code < idx.letter_count(); ++code) {
      const Letter l = Letter::from_code(code);
      const Vertex t = idx.target(v, l);
      if (t == kNoVertex || seen[t]) continue;
      seen[t] = true;
      tree[idx.edge(v, l)] = true;
      path[t] = path[v] * Word(l);
      queue.push_back(t);
    }
  }
  std::vector<Word> cycles;
  for (EdgeId e = 0; e < cg.edge_count() && cycles.size() < 2; ++e) {
    if (tree[e]) continue;
    const Edge& edge = cg.edge(e);
    cycles.push_back(path[edge.origin] * Word(Letter(edge.label, false)) *
                     path[edge.terminus].inverse());
  }
  std::vector<Candidate> out;
  for (const Word& w : {cycles[0], cycles[1], cycles[0] * cycles[1]}) {
    const auto red = cyclic_reduce(w);
    const Vertex local = idx.trace(0, red.conjugator);
    out.push_back({red.core.representative(), c.core.source_vertex[local]});
  }
  return out;
}

}  // namespace

CyclePairSearch find_cycle_pair(const StallingsGraph& g, std::size_t bound) {
  const CoreProduct cp = core_product(g);
  CyclePairSearch result;
  for (const auto& c : cp.components) {
    if (c.rank == 0) continue;
    std::vector<Candidate> candidates;
    if (c.rank == 1) {
      const CycleWalk walk = walk_cycle(c.core.graph, 0);
      for (std::size_t i = 0; i < walk.vertices.size(); ++i) {
        candidates.push_back({walk.label.rotate(i),
                              c.core.source_vertex[walk.vertices[i]]});
      }
    } else {
      candidates = high_rank_candidates(c);
    }
    for (const Candidate& cand : candidates) {
      if (cand.label.size() > bound) {
        result.exhaustive = false;
        continue;
      }
      const auto [v, v_prime] = cp.gamma_pair(cp.product.pairs[cand.product_vertex]);
      if (!cycles_are_rotations(g, v, v_prime, cand.label)) {
        result.pair = CyclePair{v, v_prime, CyclicWord(cand.label)};
        return result;
      }
    }
  }
  return result;
}

SWitness witness_from_pair(const StallingsGraph& g, const CyclePair& p) {
  const SubgroupBasis b = basis(g);
  // The condition is symmetric in v and v'; put w at the vertex nearer the
  // basepoint to keep the witness short.
  Vertex near = p.v_prime, far = p.v;
  if (b.tree_paths.at(near).size() > b.tree_paths.at(far).size()) {
    std::swap(near, far);
  }
  const Word& s = b.tree_paths[near];
  const Word& t = b.tree_paths[far];
  return {s * p.label.representative() * s.inverse(), s * t.inverse()};
}

bool verify_witness(const StallingsGraph& g, const SWitness& cand) {
  if (!member(g, cand.w) || member(g, cand.a)) return false;
  const Word wa = conjugate(cand.w, cand.a);
  if (!member(g, wa)) return false;
  const SubgroupBasis b = basis(g);
  const auto bw = rewrite_in_basis(g, b, cand.w);
  const auto bwa = rewrite_in_basis(g, b, wa);
  return !conjugate_in_free(*bw, *bwa);
}

std::string to_string(SStatus s) {
  switch (s) {
    case SStatus::yes:
      return "yes";
    case SStatus::no_within_bound:
      return "no_within_bound";
    case SStatus::unknown:
      break;
  }
  return "unknown";
}

SResult is_s_subgroup(const StallingsGraph& g,
                      std::optional<std::size_t> bound) {
  SResult r;
  r.bound = bound.value_or(default_s_bound(g));
  const CyclePairSearch search = find_cycle_pair(g, r.bound);
  r.exhaustive = search.exhaustive;
  if (!search.pair) {
    r.status = SStatus::no_within_bound;
    return r;
  }
  r.pair = search.pair;
  SWitness w = witness_from_pair(g, *search.pair);
  if (verify_witness(g, w)) {
    r.status = SStatus::yes;
    r.witness = std::move(w);
  } else {
    r.status = SStatus::unknown;
  }
  return r;
}

}  // namespace acep
