#pragma once

// Sampling helpers and the exhaustive factorization search shared by the
// metric tests and the acceptance run.

#include <random>
#include <unordered_map>
#include <vector>

#include "acep/graph.hpp"
#include "oracles.hpp"

namespace samples {

using namespace acep;

// Breadth-first search in F over reduced words of length <= max_len, with
// steps the letters and the given extra generators. Exact whenever an
// optimal factorization keeps all partial products within max_len.
inline std::unordered_map<Word, std::size_t, WordHash> factorization_distances(
    const std::vector<Word>& extra, std::size_t max_len) {
  std::vector<Word> steps;
  for (std::uint32_t c = 0; c < 4; ++c) steps.emplace_back(Letter::from_code(c));
  steps.insert(steps.end(), extra.begin(), extra.end());
  std::unordered_map<Word, std::size_t, WordHash> dist{{Word(), 0}};
  std::vector<Word> layer{Word()};
  for (std::size_t k = 1; !layer.empty(); ++k) {
    std::vector<Word> next;
    for (const Word& u : layer) {
      for (const Word& s : steps) {
        Word v = u * s;
        if (v.size() > max_len || dist.count(v)) continue;
        dist[v] = k;
        next.push_back(std::move(v));
      }
    }
    layer = std::move(next);
  }
  return dist;
}

// Nontrivial elements of a member subgroup, read as cycle labels of length
// <= len at its basepoint.
inline std::vector<Word> member_elements(const StallingsGraph& m, std::size_t len) {
  std::vector<Word> out;
  for (const Word& u : oracle::reduced_words_upto(m.rank(), len)) {
    if (!u.empty() && member(m, u)) out.push_back(u);
  }
  return out;
}

inline Word random_walk_label(std::mt19937_64& rng, const XDigraph& g, std::size_t len) {
  const FoldedIndex idx(g);
  std::uniform_int_distribution<Vertex> start(0, static_cast<Vertex>(g.vertex_count() - 1));
  Vertex v = start(rng);
  Word out;
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<Letter> options;
    for (std::uint32_t c = 0; c < idx.letter_count(); ++c) {
      const Letter l = Letter::from_code(c);
      if (!out.empty() && out.back() == l.inverse()) continue;
      if (idx.target(v, l) != kNoVertex) options.push_back(l);
    }
    if (options.empty()) break;
    const Letter l = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    out *= Word(l);
    v = idx.target(v, l);
  }
  return out;
}

inline std::vector<Word> random_members(std::mt19937_64& rng, const StallingsGraph& g,
                                 std::size_t count, std::size_t max_len) {
  const auto b = basis(g);
  std::vector<Word> out;
  while (out.size() < count) {
    const Word coded = oracle::random_word(rng, b.words.size(), 6);
    const Word h = substitute(coded, b.words);
    if (!h.empty() && h.size() <= max_len) out.push_back(h);
  }
  return out;
}
}  // namespace samples
