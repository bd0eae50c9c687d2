#pragma once

// S-subgroup detection. H is an S-subgroup when some w ∈ H is conjugated into
// H by an element a ∉ H although no element of H conjugates w to w^a.
// Equivalently, two distinct vertices of Γ(H) carry cycles with the same
// cyclically reduced label that are not cyclic permutations of each other.

#include <cstddef>
#include <optional>

#include "acep/fiber.hpp"

namespace acep {

struct SWitness {
  Word w;
  Word a;
};

struct CyclePair {
  Vertex v = 0;
  Vertex v_prime = 0;
  CyclicWord label;
};

// Whether the cycle labeled w at v' is a cyclic permutation of the cycle
// labeled w at v, i.e. some rotation fixing w moves v to v' along w.
bool cycles_are_rotations(const StallingsGraph& g, Vertex v, Vertex v_prime,
                          const Word& w);

// Default label-length bound: twice the edge count of the non-diagonal core
// product plus the longest basis word.
std::size_t default_s_bound(const StallingsGraph& g);

struct CyclePairSearch {
  std::optional<CyclePair> pair;
  // True when every candidate class was examined, so absence is a proof.
  bool exhaustive = true;
};

// Candidates: the rotated generator at every vertex of each rank-1 cycle of
// the core product, and for higher-rank components the cyclic reductions of
// u, v and uv for two basis cycles u, v (one of them is not a proper power).
CyclePairSearch find_cycle_pair(const StallingsGraph& g, std::size_t bound);

SWitness witness_from_pair(const StallingsGraph& g, const CyclePair& p);

// Exact: membership tests plus non-conjugacy of the basis images of w and
// a^{-1} w a in the free group on the basis of H.
bool verify_witness(const StallingsGraph& g, const SWitness& cand);

enum class SStatus { yes, no_within_bound, unknown };
std::string to_string(SStatus s);

struct SResult {
  SStatus status = SStatus::no_within_bound;
  std::optional<SWitness> witness;
  std::optional<CyclePair> pair;
  std::size_t bound = 0;
  bool exhaustive = false;
};

SResult is_s_subgroup(const StallingsGraph& g,
                      std::optional<std::size_t> bound = std::nullopt);

}  // namespace acep
