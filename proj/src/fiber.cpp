#include "acep/fiber.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace acep {

Vertex ProductGraph::find(Vertex u, Vertex v) const {
  if (u >= base_size || v >= base_size) return kNoVertex;
  return lookup[static_cast<std::size_t>(u) * base_size + v];
}

std::vector<std::string> ProductGraph::pair_names() const {
  std::vector<std::string> names;
  names.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    names.push_back("(" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  return names;
}

ProductGraph product(const XDigraph& a, const XDigraph& b,
                     bool remove_diagonal) {
  if (a.rank() != b.rank()) throw std::invalid_argument("rank mismatch");
  ProductGraph p;
  p.diagonal_removed = remove_diagonal;
  p.base_size = std::max(a.vertex_count(), b.vertex_count());
  p.lookup.assign(p.base_size * p.base_size, kNoVertex);
  for (Vertex u = 0; u < a.vertex_count(); ++u) {
    for (Vertex v = 0; v < b.vertex_count(); ++v) {
      if (remove_diagonal && u == v) continue;
      p.lookup[u * p.base_size + v] = static_cast<Vertex>(p.pairs.size());
      p.pairs.push_back({u, v});
    }
  }
  p.graph = XDigraph(a.rank(), p.pairs.size());
  std::vector<std::vector<const Edge*>> by_label(a.rank());
  for (const Edge& e : b.edges()) by_label[e.label].push_back(&e);
  for (const Edge& ea : a.edges()) {
    for (const Edge* eb : by_label[ea.label]) {
      const Vertex o = p.find(ea.origin, eb->origin);
      const Vertex t = p.find(ea.terminus, eb->terminus);
      if (o != kNoVertex && t != kNoVertex) p.graph.add_edge(o, t, ea.label);
    }
  }
  return p;
}

ProductGraph product(const StallingsGraph& g, bool remove_diagonal) {
  return product(g.graph(), g.graph(), remove_diagonal);
}

CycleWalk walk_cycle(const XDigraph& cycle, Vertex start) {
  struct Half {
    EdgeId edge;
    bool forward;
  };
  std::vector<std::vector<Half>> inc(cycle.vertex_count());
  for (EdgeId e = 0; e < cycle.edge_count(); ++e) {
    inc[cycle.edge(e).origin].push_back({e, true});
    inc[cycle.edge(e).terminus].push_back({e, false});
  }
  if (start >= cycle.vertex_count() || inc[start].size() != 2) {
    throw std::invalid_argument("start vertex is not on a simple cycle");
  }
  CycleWalk walk;
  Half h = inc[start][0];
  Vertex v = start;
  for (std::size_t step = 0; step < cycle.edge_count(); ++step) {
    const Edge& e = cycle.edge(h.edge);
    walk.vertices.push_back(v);
    walk.label *= Word(Letter(e.label, !h.forward));
    v = h.forward ? e.terminus : e.origin;
    if (v == start) break;
    const auto& here = inc[v];
    if (here.size() != 2) throw std::invalid_argument("graph is not a cycle");
    // Leave by the half-edge other than the one just arrived on.
    h = (here[0].edge == h.edge && here[0].forward != h.forward) ? here[1]
                                                                   : here[0];
  }
  if (v != start || walk.vertices.size() != cycle.edge_count()) {
    throw std::invalid_argument("graph is not a single cycle");
  }
  return walk;
}

std::vector<IntersectionComponent> components(const ProductGraph& p) {
  std::size_t count = 0;
  const auto ids = p.graph.component_ids(&count);
  std::vector<std::vector<Vertex>> members(count);
  for (Vertex v = 0; v < ids.size(); ++v) members[ids[v]].push_back(v);

  std::vector<IntersectionComponent> out;
  out.reserve(count);
  for (auto& verts : members) {
    IntersectionComponent c;
    c.vertices = verts;
    c.diagonal = p.pairs[verts[0]].first == p.pairs[verts[0]].second;
    const XDigraph sub = p.graph.induced(verts);
    c.core = strip_leaves(sub);
    for (Vertex& v : c.core.source_vertex) v = verts[v];
    const auto& cg = c.core.graph;
    c.rank = cg.vertex_count() == 0
                 ? 0
                 : cg.edge_count() + 1 - cg.vertex_count();
    c.anchor_vertex =
        cg.vertex_count() > 0 ? c.core.source_vertex[0] : verts[0];
    c.anchor = p.pairs[c.anchor_vertex];
    if (c.rank == 1) c.generator = CyclicWord(walk_cycle(cg, 0).label);
    out.push_back(std::move(c));
  }
  return out;
}

std::size_t diameter(const XDigraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<Vertex>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.origin].push_back(e.terminus);
    adj[e.terminus].push_back(e.origin);
  }
  std::size_t best = 0;
  std::vector<std::size_t> dist(n);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    queue.assign(1, s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      best = std::max(best, dist[v]);
      for (Vertex u : adj[v]) {
        if (dist[u] == SIZE_MAX) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      }
    }
  }
  return best;
}

std::string to_string(CaseLabel c) {
  return "Case" + std::to_string(static_cast<int>(c));
}

std::string to_string(AcepVerdict v) {
  switch (v) {
    case AcepVerdict::has_ACEP:
      return "has_ACEP";
    case AcepVerdict::no_ACEP:
      return "no_ACEP";
    case AcepVerdict::undetermined:
      break;
  }
  return "undetermined";
}

CoreProduct core_product(const StallingsGraph& g) {
  CoreProduct cp;
  cp.core = core(g);
  cp.product = product(cp.core.graph, cp.core.graph, true);
  cp.components = components(cp.product);
  return cp;
}

Classification classify(const StallingsGraph& g) {
  const CoreProduct cp = core_product(g);
  Classification r;
  bool rank_two = false, non_power = false;
  for (const auto& c : cp.components) {
    if (c.rank == 0) continue;
    Classification::Witness w;
    w.anchor = cp.gamma_pair(c.anchor);
    w.rank = c.rank;
    if (c.generator) {
      w.generator = c.generator->representative();
      w.proper_power = is_proper_power(*w.generator).has_value();
      non_power = non_power || !w.proper_power;
    } else {
      rank_two = true;
    }
    r.intersections.push_back(std::move(w));
  }
  r.malnormal = r.intersections.empty();
  r.cyclonormal = !rank_two;
  if (r.malnormal) {
    r.label = CaseLabel::Case1;
    r.verdict = AcepVerdict::has_ACEP;
  } else if (rank_two) {
    r.label = CaseLabel::Case2;
    r.verdict = AcepVerdict::no_ACEP;
  } else if (non_power) {
    r.label = CaseLabel::Case3;
    r.verdict = AcepVerdict::no_ACEP;
  } else {
    r.label = CaseLabel::Case4;
    r.verdict = AcepVerdict::undetermined;
  }
  return r;
}

bool is_malnormal(const StallingsGraph& g) { return classify(g).malnormal; }
bool is_cyclonormal(const StallingsGraph& g) { return classify(g).cyclonormal; }

}  // namespace acep
