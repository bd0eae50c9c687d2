#include "acep/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace acep {

EdgeId XDigraph::add_edge(Vertex origin, Vertex terminus, Generator label) {
  if (origin >= vertex_count_ || terminus >= vertex_count_) {
    throw std::out_of_range("edge endpoint is not a vertex");
  }
  if (label >= rank_) throw std::out_of_range("edge label exceeds rank");
  edges_.push_back({origin, terminus, label});
  return static_cast<EdgeId>(edges_.size() - 1);
}

std::vector<std::size_t> XDigraph::degrees() const {
  std::vector<std::size_t> deg(vertex_count_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.origin];
    ++deg[e.terminus];
  }
  return deg;
}

bool XDigraph::is_folded() const {
  std::vector<std::uint8_t> used(vertex_count_ * 2 * rank_, 0);
  for (const Edge& e : edges_) {
    auto& out = used[e.origin * 2 * rank_ + 2 * e.label];
    auto& in = used[e.terminus * 2 * rank_ + 2 * e.label + 1];
    if (out || in) return false;
    out = in = 1;
  }
  return true;
}

std::vector<std::uint32_t> XDigraph::component_ids(std::size_t* count) const {
  std::vector<Vertex> parent(vertex_count_);
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : edges_) {
    const Vertex a = find(e.origin), b = find(e.terminus);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> id(vertex_count_, kNoVertex);
  std::vector<std::uint32_t> root_id(vertex_count_, kNoVertex);
  std::uint32_t next = 0;
  for (Vertex v = 0; v < vertex_count_; ++v) {
    const Vertex r = find(v);
    if (root_id[r] == kNoVertex) root_id[r] = next++;
    id[v] = root_id[r];
  }
  if (count) *count = next;
  return id;
}

bool XDigraph::is_connected() const {
  std::size_t count = 0;
  component_ids(&count);
  return count <= 1;
}

std::size_t XDigraph::betti_number() const {
  std::size_t count = 0;
  component_ids(&count);
  return edges_.size() + count - vertex_count_;
}

XDigraph XDigraph::induced(std::span<const Vertex> keep) const {
  std::vector<Vertex> map(vertex_count_, kNoVertex);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    map.at(keep[i]) = static_cast<Vertex>(i);
  }
  XDigraph sub(rank_, keep.size());
  for (const Edge& e : edges_) {
    if (map[e.origin] != kNoVertex && map[e.terminus] != kNoVertex) {
      sub.add_edge(map[e.origin], map[e.terminus], e.label);
    }
  }
  return sub;
}

FoldedIndex::FoldedIndex(const XDigraph& g)
    : letters_(2 * g.rank()), table_(g.vertex_count() * 2 * g.rank()) {
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edges()[id];
    Slot& out = table_[e.origin * letters_ + 2 * e.label];
    Slot& in = table_[e.terminus * letters_ + 2 * e.label + 1];
    if (out.target != kNoVertex || in.target != kNoVertex) {
      throw std::invalid_argument("digraph is not folded");
    }
    out = {e.terminus, id};
    in = {e.origin, id};
  }
}

Vertex FoldedIndex::trace(Vertex v, const Word& w) const {
  for (Letter l : w) {
    if (v == kNoVertex) break;
    v = target(v, l);
  }
  return v;
}

namespace {

// Breadth-first renumbering from `root` in letter-code order, with edges
// sorted by (origin, label).
XDigraph canonical_form(const XDigraph& g, Vertex root) {
  const FoldedIndex idx(g);
  std::vector<Vertex> order(g.vertex_count(), kNoVertex);
  std::vector<Vertex> queue{root};
  order[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (std::uint32_t c = 0; c < idx.letter_count(); ++c) {
      const Vertex t = idx.target(v, Letter::from_code(c));
      if (t != kNoVertex && order[t] == kNoVertex) {
        order[t] = static_cast<Vertex>(queue.size());
        queue.push_back(t);
      }
    }
  }
  if (queue.size() != g.vertex_count()) {
    throw std::invalid_argument("graph is not connected");
  }
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    edges.push_back({order[e.origin], order[e.terminus], e.label});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.origin, a.label) < std::tie(b.origin, b.label);
  });
  XDigraph out(g.rank(), g.vertex_count());
  for (const Edge& e : edges) out.add_edge(e.origin, e.terminus, e.label);
  return out;
}

}  // namespace

StallingsGraph StallingsGraph::trivial(std::size_t rank) {
  StallingsGraph s;
  s.graph_ = XDigraph(rank, 1);
  s.index_ = FoldedIndex(s.graph_);
  return s;
}

StallingsGraph StallingsGraph::from_folded(const XDigraph& g,
                                           Vertex basepoint) {
  if (basepoint >= g.vertex_count()) {
    throw std::invalid_argument("basepoint is not a vertex");
  }
  if (!g.is_folded()) throw std::invalid_argument("graph is not folded");
  const auto deg = g.degrees();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (v != basepoint && deg[v] < 2) {
      throw std::invalid_argument("graph has a hanging vertex");
    }
  }
  StallingsGraph s;
  s.graph_ = canonical_form(g, basepoint);
  s.index_ = FoldedIndex(s.graph_);
  return s;
}

StallingsGraph fold(const XDigraph& g, Vertex basepoint) {
  const std::size_t n = g.vertex_count();
  if (basepoint >= n) throw std::invalid_argument("basepoint is not a vertex");
  if (!g.is_connected()) throw std::invalid_argument("graph is not connected");

  struct Arc {
    std::uint32_t code;
    Vertex target;
  };
  std::vector<std::vector<Arc>> arcs(n);
  for (const Edge& e : g.edges()) {
    arcs[e.origin].push_back({2 * e.label, e.terminus});
    arcs[e.terminus].push_back({2 * e.label + 1, e.origin});
  }
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](Vertex a, Vertex b) {
    if (arcs[a].size() < arcs[b].size()) std::swap(a, b);
    parent[b] = a;
    arcs[a].insert(arcs[a].end(), arcs[b].begin(), arcs[b].end());
    arcs[b].clear();
    arcs[b].shrink_to_fit();
    return a;
  };

  std::deque<Vertex> work(n);
  std::iota(work.begin(), work.end(), Vertex{0});
  std::vector<Vertex> seen(2 * g.rank());
  while (!work.empty()) {
    const Vertex v = work.front();
    work.pop_front();
    if (find(v) != v) continue;
    std::fill(seen.begin(), seen.end(), kNoVertex);
    for (const Arc& a : arcs[v]) {
      const Vertex t = find(a.target);
      Vertex& s = seen[a.code];
      if (s == kNoVertex) {
        s = t;
        continue;
      }
      const Vertex u = find(s);
      if (u == t) continue;
      // Merging may reroot v and invalidate the arc list; rescan later.
      const Vertex r = unite(u, t);
      work.push_back(r);
      work.push_back(find(v));
      break;
    }
  }

  std::vector<Vertex> root_index(n, kNoVertex);
  std::size_t roots = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (find(v) == v) root_index[v] = static_cast<Vertex>(roots++);
  }
  XDigraph folded(g.rank(), roots);
  for (Vertex v = 0; v < n; ++v) {
    if (find(v) != v) continue;
    std::fill(seen.begin(), seen.end(), kNoVertex);
    for (const Arc& a : arcs[v]) {
      if (a.code % 2 != 0) continue;
      Vertex& s = seen[a.code];
      if (s != kNoVertex) continue;
      s = find(a.target);
      folded.add_edge(root_index[v], root_index[s], a.code / 2);
    }
  }

  // Trim hanging vertices other than the basepoint.
  const Vertex base = root_index[find(basepoint)];
  std::vector<std::size_t> deg = folded.degrees();
  std::vector<bool> removed(roots, false);
  std::vector<std::vector<Vertex>> nbrs(roots);
  for (const Edge& e : folded.edges()) {
    nbrs[e.origin].push_back(e.terminus);
    nbrs[e.terminus].push_back(e.origin);
  }
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < roots; ++v) {
    if (v != base && deg[v] <= 1) stack.push_back(v);
  }
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    if (removed[v]) continue;
    removed[v] = true;
    for (Vertex u : nbrs[v]) {
      if (removed[u]) continue;
      if (--deg[u] <= 1 && u != base) stack.push_back(u);
    }
  }
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < roots; ++v) {
    if (!removed[v]) keep.push_back(v);
  }
  Vertex new_base = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] == base) new_base = static_cast<Vertex>(i);
  }
  return StallingsGraph::from_folded(folded.induced(keep), new_base);
}

StallingsGraph build_stallings(std::size_t rank,
                               std::span<const Word> generators) {
  XDigraph bouquet(rank, 1);
  for (const Word& w : generators) {
    if (w.empty()) continue;
    Vertex cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Vertex next = i + 1 == w.size() ? 0 : bouquet.add_vertex();
      const Letter l = w[i];
      if (l.generator() >= rank) {
        throw std::out_of_range("generator word exceeds rank");
      }
      if (l.inverted()) {
        bouquet.add_edge(next, cur, l.generator());
      } else {
        bouquet.add_edge(cur, next, l.generator());
      }
      cur = next;
    }
  }
  return fold(bouquet, 0);
}

bool member(const StallingsGraph& g, const Word& w) {
  return g.index().trace(0, w) == 0;
}

std::optional<Vertex> trace(const StallingsGraph& g, Vertex v, const Word& w) {
  if (v >= g.vertex_count()) throw std::out_of_range("vertex out of range");
  const Vertex t = g.index().trace(v, w);
  if (t == kNoVertex) return std::nullopt;
  return t;
}

CoreGraph strip_leaves(const XDigraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> deg = g.degrees();
  std::vector<std::vector<Vertex>> nbrs(n);
  for (const Edge& e : g.edges()) {
    nbrs[e.origin].push_back(e.terminus);
    nbrs[e.terminus].push_back(e.origin);
  }
  std::vector<bool> removed(n, false);
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v) {
    if (deg[v] <= 1) stack.push_back(v);
  }
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    if (removed[v]) continue;
    removed[v] = true;
    for (Vertex u : nbrs[v]) {
      if (!removed[u] && --deg[u] <= 1) stack.push_back(u);
    }
  }
  CoreGraph c;
  for (Vertex v = 0; v < n; ++v) {
    if (!removed[v]) c.source_vertex.push_back(v);
  }
  c.graph = g.induced(c.source_vertex);
  return c;
}

CoreGraph core(const StallingsGraph& g) { return strip_leaves(g.graph()); }

std::optional<std::vector<Vertex>> find_isomorphism(const XDigraph& a,
                                                    const XDigraph& b) {
  if (a.rank() != b.rank() || a.vertex_count() != b.vertex_count() ||
      a.edge_count() != b.edge_count()) {
    return std::nullopt;
  }
  const std::size_t n = a.vertex_count();
  if (n == 0) return std::vector<Vertex>{};
  const FoldedIndex ia(a), ib(b);
  for (Vertex start = 0; start < n; ++start) {
    std::vector<Vertex> map(n, kNoVertex), inv(n, kNoVertex);
    std::vector<Vertex> queue{0};
    map[0] = start;
    inv[start] = 0;
    bool ok = true;
    for (std::size_t head = 0; ok && head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (std::uint32_t c = 0; ok && c < ia.letter_count(); ++c) {
        const Letter l = Letter::from_code(c);
        const Vertex ta = ia.target(v, l);
        const Vertex tb = ib.target(map[v], l);
        if ((ta == kNoVertex) != (tb == kNoVertex)) {
          ok = false;
        } else if (ta != kNoVertex) {
          if (map[ta] == kNoVertex && inv[tb] == kNoVertex) {
            map[ta] = tb;
            inv[tb] = ta;
            queue.push_back(ta);
          } else if (map[ta] != tb) {
            ok = false;
          }
        }
      }
    }
    if (ok && queue.size() == n) return map;
  }
  return std::nullopt;
}

bool conjugate_subgroups(const StallingsGraph& g1, const StallingsGraph& g2) {
  if (g1.rank() != g2.rank()) return false;
  return find_isomorphism(core(g1).graph, core(g2).graph).has_value();
}

SubgroupBasis basis(const StallingsGraph& g) {
  const auto& graph = g.graph();
  const auto& idx = g.index();
  const std::size_t n = graph.vertex_count();
  SubgroupBasis b;
  b.in_tree.assign(graph.edge_count(), false);
  b.basis_index.assign(graph.edge_count(), kNoEdge);
  b.tree_paths.assign(n, Word());
  std::vector<bool> visited(n, false);
  std::vector<Vertex> queue{0};
  visited[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (std::uint32_t c = 0; c < idx.letter_count(); ++c) {
      const Letter l = Letter::from_code(c);
      const Vertex t = idx.target(v, l);
      if (t == kNoVertex || visited[t]) continue;
      visited[t] = true;
      b.in_tree[idx.edge(v, l)] = true;
      b.tree_paths[t] = b.tree_paths[v] * Word(l);
      queue.push_back(t);
    }
  }
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (b.in_tree[e]) continue;
    const Edge& edge = graph.edge(e);
    b.basis_index[e] = static_cast<std::uint32_t>(b.basis_edges.size());
    b.basis_edges.push_back(e);
    b.words.push_back(b.tree_paths[edge.origin] *
                      Word(Letter(edge.label, false)) *
                      b.tree_paths[edge.terminus].inverse());
  }
  return b;
}

std::optional<Word> rewrite_in_basis(const StallingsGraph& g,
                                     const SubgroupBasis& b, const Word& w) {
  std::vector<Letter> raw;
  Vertex v = 0;
  for (Letter l : w) {
    const Vertex t = g.index().target(v, l);
    if (t == kNoVertex) return std::nullopt;
    const std::uint32_t i = b.basis_index[g.index().edge(v, l)];
    if (i != kNoEdge) raw.emplace_back(i, l.inverted());
    v = t;
  }
  if (v != 0) return std::nullopt;
  return Word::reduce(raw);
}

std::optional<Word> rewrite_in_basis(const StallingsGraph& g, const Word& w) {
  return rewrite_in_basis(g, basis(g), w);
}

Word substitute(const Word& w, std::span<const Word> images) {
  Word out;
  for (Letter l : w) {
    const Word& img = images[l.generator()];
    out *= l.inverted() ? img.inverse() : img;
  }
  return out;
}

std::string to_dot(const XDigraph& g, const Alphabet& alphabet,
                   std::optional<Vertex> basepoint,
                   std::span<const std::string> vertex_names) {
  std::ostringstream os;
  os << "digraph G {\n  rankdir=LR;\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    os << "  v" << v << " [label=\"";
    if (v < vertex_names.size()) {
      os << vertex_names[v];
    } else {
      os << v;
    }
    os << "\", shape=" << (basepoint == v ? "doublecircle" : "circle")
       << "];\n";
  }
  for (const Edge& e : g.edges()) {
    os << "  v" << e.origin << " -> v" << e.terminus << " [label=\""
       << alphabet.name(e.label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace acep
