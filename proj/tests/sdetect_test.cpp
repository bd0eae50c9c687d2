#include "acep/sdetect.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace acep;

namespace {
const Alphabet kXY = Alphabet::standard(2);
const Alphabet kABC({"a", "b", "c"});

StallingsGraph graph_of(const Alphabet& al, std::initializer_list<const char*> s) {
  std::vector<Word> gens;
  for (const char* t : s) gens.push_back(parse_word(al, t));
  return build_stallings(al.rank(), gens);
}

Word w(const char* s) { return parse_word(kXY, s); }
}  // namespace

TEST_CASE("first example family is an S-subgroup") {
  for (const auto& [gens, power] :
       std::vector<std::pair<std::vector<const char*>, const char*>>{
           {{"xx", "Yxxy"}, "xx"}, {{"xxx", "Yxxxy"}, "xxx"}}) {
    std::vector<Word> ws;
    for (const char* t : gens) ws.push_back(w(t));
    const auto g = build_stallings(2, ws);
    const auto r = is_s_subgroup(g);
    REQUIRE(r.status == SStatus::yes);
    REQUIRE(r.witness.has_value());
    CHECK(verify_witness(g, *r.witness));
    CHECK(r.pair->v != r.pair->v_prime);
    CHECK(r.pair->label.representative() == w(power));
  }
  const auto h1 = graph_of(kXY, {"xx", "Yxxy"});
  const auto r = is_s_subgroup(h1);
  CHECK(format_word(kXY, r.witness->w) == "xx");
  CHECK(format_word(kXY, r.witness->a) == "y");
}

TEST_CASE("witness verification is exact") {
  const auto h1 = graph_of(kXY, {"xx", "Yxxy"});
  CHECK(verify_witness(h1, {w("xx"), w("y")}));
  CHECK_FALSE(verify_witness(h1, {w("xx"), w("xx")}));   // a ∈ H
  CHECK_FALSE(verify_witness(h1, {w("xxxx"), w("x")}));  // conjugate by x
  const auto h2 = graph_of(kXY, {"xx", "yy"});
  CHECK_FALSE(verify_witness(h2, {w("xxxx"), w("y")}));  // w^a ∉ H
  CHECK_FALSE(verify_witness(h1, {w("x"), w("y")}));     // w ∉ H
}

TEST_CASE("second example family is not an S-subgroup") {
  const auto h2 = graph_of(kXY, {"xxx", "yyy"});
  const auto r = is_s_subgroup(h2);
  CHECK(r.status == SStatus::no_within_bound);
  CHECK(r.exhaustive);
  CHECK(r.bound == default_s_bound(h2));
  CHECK_FALSE(find_cycle_pair(graph_of(kXY, {"x"}), 10).pair.has_value());
  const auto t = is_s_subgroup(StallingsGraph::trivial(2));
  CHECK(t.status == SStatus::no_within_bound);
  CHECK(t.exhaustive);
}

TEST_CASE("the four-generator example is not an S-subgroup") {
  const auto g = graph_of(kABC, {"aaaa", "aaba", "acaa", "bC"});
  const auto r = is_s_subgroup(g);
  CHECK(r.status == SStatus::no_within_bound);
  CHECK(r.exhaustive);
}

TEST_CASE("rotation test on the x-cycle of <x^3, y^3>") {
  const auto h2 = graph_of(kXY, {"xxx", "yyy"});
  const Vertex v1 = *trace(h2, 0, w("x"));
  CHECK(cycles_are_rotations(h2, 0, v1, w("xxx")));
  const auto h1 = graph_of(kXY, {"xxx", "Yxxxy"});
  const Vertex far = *trace(h1, 0, w("Y"));
  CHECK_FALSE(cycles_are_rotations(h1, 0, far, w("xxx")));
}

TEST_CASE("cases 2 and 3 always yield verified witnesses") {
  std::mt19937_64 rng(37);
  int seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 2 + trial % 2; ++i) {
      Word g;
      while (g.empty()) g = oracle::random_word(rng, 2, 4);
      gens.push_back(g);
    }
    const auto g = build_stallings(2, gens);
    const auto c = classify(g);
    const auto r = is_s_subgroup(g);
    if (r.status == SStatus::yes) CHECK(verify_witness(g, *r.witness));
    CHECK(r.status != SStatus::unknown);
    if (c.label == CaseLabel::Case2 || c.label == CaseLabel::Case3) {
      ++seen;
      CHECK(r.status == SStatus::yes);
    }
    if (c.label == CaseLabel::Case1) CHECK(r.status == SStatus::no_within_bound);
  }
  CHECK(seen > 5);
}

TEST_CASE("witnesses survive conjugation of the subgroup") {
  std::mt19937_64 rng(41);
  const std::vector<Word> gens{w("xxx"), w("Yxxxy")};
  const auto g = build_stallings(2, gens);
  const SWitness base = *is_s_subgroup(g).witness;
  for (int i = 0; i < 30; ++i) {
    const Word b = oracle::random_word(rng, 2, 3);
    std::vector<Word> conj;
    for (const Word& h : gens) conj.push_back(conjugate(h, b));
    const auto gb = build_stallings(2, conj);
    CHECK(verify_witness(gb, {conjugate(base.w, b), conjugate(base.a, b)}));
  }
}
