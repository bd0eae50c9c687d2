#pragma once

// Labeled digraphs over a free basis, Stallings folding and subgroup graphs.
//
// An edge o --x--> t is read as the letter x when followed forward and as
// x^{-1} when followed backward. A digraph is folded when every vertex has at
// most one outgoing and at most one incoming edge per label; folded digraphs
// are indexed by a (vertex, letter) transition table.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acep/word.hpp"

namespace acep {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
using EdgeId = std::uint32_t;
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

struct Edge {
  Vertex origin = 0;
  Vertex terminus = 0;
  Generator label = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class XDigraph {
 public:
  XDigraph() = default;
  explicit XDigraph(std::size_t rank, std::size_t vertex_count = 0)
      : rank_(rank), vertex_count_(vertex_count) {}

  Vertex add_vertex() { return static_cast<Vertex>(vertex_count_++); }
  EdgeId add_edge(Vertex origin, Vertex terminus, Generator label);

  std::size_t rank() const { return rank_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  // In- plus out-degree; a loop contributes 2.
  std::vector<std::size_t> degrees() const;
  bool is_folded() const;
  // Connected components of the underlying undirected graph.
  std::vector<std::uint32_t> component_ids(std::size_t* count = nullptr) const;
  bool is_connected() const;
  // E - V + (number of components).
  std::size_t betti_number() const;

  // Subgraph on `keep` (in that order); edges between kept vertices survive.
  XDigraph induced(std::span<const Vertex> keep) const;

  friend bool operator==(const XDigraph&, const XDigraph&) = default;

 private:
  std::size_t rank_ = 0;
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
};

// Transition table of a folded digraph.
class FoldedIndex {
 public:
  FoldedIndex() = default;
  // Throws std::invalid_argument if g is not folded.
  explicit FoldedIndex(const XDigraph& g);

  Vertex target(Vertex v, Letter l) const {
    return table_[static_cast<std::size_t>(v) * letters_ + l.code()].target;
  }
  EdgeId edge(Vertex v, Letter l) const {
    return table_[static_cast<std::size_t>(v) * letters_ + l.code()].edge;
  }
  std::size_t letter_count() const { return letters_; }

  // Endpoint of the path labeled w from v, or kNoVertex.
  Vertex trace(Vertex v, const Word& w) const;

 private:
  struct Slot {
    Vertex target = kNoVertex;
    EdgeId edge = kNoEdge;
  };
  std::size_t letters_ = 0;
  std::vector<Slot> table_;
};

// A connected, folded, base-pointed digraph in which every vertex other than
// the basepoint has degree >= 2. Vertices are numbered canonically (breadth
// first from the basepoint, letters in code order), so the basepoint is 0 and
// equality is basepoint-respecting isomorphism.
class StallingsGraph {
 public:
  // The trivial subgroup: one vertex, no edges.
  static StallingsGraph trivial(std::size_t rank);

  // Validates the invariants above and renumbers canonically. Throws
  // std::invalid_argument on violation.
  static StallingsGraph from_folded(const XDigraph& g, Vertex basepoint);

  const XDigraph& graph() const { return graph_; }
  const FoldedIndex& index() const { return index_; }
  Vertex basepoint() const { return 0; }
  std::size_t rank() const { return graph_.rank(); }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }
  // Rank of the subgroup, E - V + 1.
  std::size_t subgroup_rank() const {
    return graph_.edge_count() + 1 - graph_.vertex_count();
  }
  bool is_trivial() const { return graph_.edge_count() == 0; }

  Vertex step(Vertex v, Letter l) const { return index_.target(v, l); }

  friend bool operator==(const StallingsGraph& a, const StallingsGraph& b) {
    return a.graph_ == b.graph_;
  }

 private:
  StallingsGraph() = default;

  XDigraph graph_;
  FoldedIndex index_;
};

// Folds g and trims degree-1 vertices other than the basepoint. g must be
// connected.
StallingsGraph fold(const XDigraph& g, Vertex basepoint);

// Folds the bouquet of petals spelling the generators.
StallingsGraph build_stallings(std::size_t rank,
                               std::span<const Word> generators);

bool member(const StallingsGraph& g, const Word& w);

// Throws std::out_of_range for an invalid vertex.
std::optional<Vertex> trace(const StallingsGraph& g, Vertex v, const Word& w);

// Result of iteratively deleting degree-1 vertices (the basepoint included).
struct CoreGraph {
  XDigraph graph;
  // Vertex of the source graph for each core vertex.
  std::vector<Vertex> source_vertex;
};

CoreGraph strip_leaves(const XDigraph& g);
CoreGraph core(const StallingsGraph& g);

// Label-preserving bijection between two folded digraphs, as a vertex map
// from a to b. Only connected graphs are supported.
std::optional<std::vector<Vertex>> find_isomorphism(const XDigraph& a,
                                                    const XDigraph& b);

// Conjugacy of the subgroups, decided by isomorphism of the cores.
bool conjugate_subgroups(const StallingsGraph& g1, const StallingsGraph& g2);

// Free basis read off a breadth-first spanning tree rooted at the basepoint.
struct SubgroupBasis {
  std::vector<bool> in_tree;              // per edge
  std::vector<EdgeId> basis_edges;        // non-tree edges, ascending
  std::vector<Word> words;                // h_e for each basis edge
  std::vector<Word> tree_paths;           // label of the tree path to v
  std::vector<std::uint32_t> basis_index; // per edge; kNoEdge for tree edges
};

SubgroupBasis basis(const StallingsGraph& g);

// Expresses w as a word over the basis (generator i = basis.words[i]), or
// nullopt when w is not in the subgroup.
std::optional<Word> rewrite_in_basis(const StallingsGraph& g,
                                     const SubgroupBasis& b, const Word& w);
std::optional<Word> rewrite_in_basis(const StallingsGraph& g, const Word& w);

// Replaces generator i of `w` by images[i] and reduces.
Word substitute(const Word& w, std::span<const Word> images);

// Graphviz rendering; the basepoint, if given, is drawn double-circled.
std::string to_dot(const XDigraph& g, const Alphabet& alphabet,
                   std::optional<Vertex> basepoint = std::nullopt,
                   std::span<const std::string> vertex_names = {});

}  // namespace acep
