#pragma once

// Fiber products of subgroup graphs and the intersection-based classifier.
//
// A vertex (u, v) of the product carries the intersection H^u ∩ H^v: its
// reduced cycle labels are exactly the words that close up at both u and v.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acep/graph.hpp"

namespace acep {

using VertexPair = std::pair<Vertex, Vertex>;

struct ProductGraph {
  XDigraph graph;
  // Base vertex pair of each product vertex.
  std::vector<VertexPair> pairs;
  bool diagonal_removed = false;

  // Product vertex of a pair, or kNoVertex when absent.
  Vertex find(Vertex u, Vertex v) const;
  std::vector<std::string> pair_names() const;

  std::size_t base_size = 0;
  std::vector<Vertex> lookup;  // u * base_size + v -> product vertex
};

// Category product of a with b. With remove_diagonal, vertices (u, u) are
// dropped; this is only meaningful when a and b are the same graph.
ProductGraph product(const XDigraph& a, const XDigraph& b,
                     bool remove_diagonal);
ProductGraph product(const StallingsGraph& g, bool remove_diagonal);

// Closed walk around a graph that is a single cycle.
struct CycleWalk {
  Word label;                    // cyclically reduced
  std::vector<Vertex> vertices;  // vertices[i] is the start of letter i
};

// Walks the unique cycle of a connected graph of first Betti number 1 with
// no degree-1 vertices, starting at `start`.
CycleWalk walk_cycle(const XDigraph& cycle, Vertex start);

struct IntersectionComponent {
  std::vector<Vertex> vertices;  // product vertices, ascending
  VertexPair anchor;             // base pair of a core vertex when rank >= 1
  Vertex anchor_vertex = kNoVertex;
  std::size_t rank = 0;
  std::optional<CyclicWord> generator;  // label of the cycle at the anchor
  bool diagonal = false;
  // Core of the component with its vertices mapped to product vertices.
  CoreGraph core;
};

std::vector<IntersectionComponent> components(const ProductGraph& p);

// Largest finite undirected distance; 0 for edgeless graphs.
std::size_t diameter(const XDigraph& g);

enum class CaseLabel { Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4 };
enum class AcepVerdict { has_ACEP, no_ACEP, undetermined };

std::string to_string(CaseLabel c);
std::string to_string(AcepVerdict v);

struct Classification {
  CaseLabel label = CaseLabel::Case1;
  // Verdict implied by the case alone.
  AcepVerdict verdict = AcepVerdict::has_ACEP;
  bool malnormal = true;
  bool cyclonormal = true;
  // Base pairs refer to core(Γ) vertices mapped back to Γ.
  struct Witness {
    VertexPair anchor;
    std::size_t rank = 0;
    std::optional<Word> generator;
    bool proper_power = false;
  };
  // Non-diagonal components of positive rank.
  std::vector<Witness> intersections;
};

// Non-diagonal product of the core with itself, with pairs mapped back to
// vertices of Γ.
struct CoreProduct {
  CoreGraph core;
  ProductGraph product;
  std::vector<IntersectionComponent> components;

  VertexPair gamma_pair(const VertexPair& core_pair) const {
    return {core.source_vertex[core_pair.first],
            core.source_vertex[core_pair.second]};
  }
};

CoreProduct core_product(const StallingsGraph& g);

bool is_malnormal(const StallingsGraph& g);
bool is_cyclonormal(const StallingsGraph& g);
Classification classify(const StallingsGraph& g);

}  // namespace acep
