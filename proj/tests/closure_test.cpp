#include "acep/closure.hpp"

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace acep;

namespace {
const Alphabet kXY = Alphabet::standard(2);
const Alphabet kABC({"a", "b", "c"});
Word w(const char* s) { return parse_word(kXY, s); }
Word abc(const char* s) { return parse_word(kABC, s); }

StallingsGraph graph_of(const Alphabet& al, std::initializer_list<const char*> s) {
  std::vector<Word> gens;
  for (const char* t : s) gens.push_back(parse_word(al, t));
  return build_stallings(al.rank(), gens);
}

Permutation cyc(std::size_t d, const char* s) { return Permutation::from_cycles(d, s); }

Permutation random_perm(std::mt19937_64& rng, std::size_t d) {
  std::vector<std::uint32_t> p(d);
  for (std::uint32_t i = 0; i < d; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return Permutation(p);
}

FiniteQuotient random_quotient(std::mt19937_64& rng, std::size_t rank, std::size_t d) {
  std::vector<Permutation> images;
  for (std::size_t i = 0; i < rank; ++i) images.push_back(random_perm(rng, d));
  return FiniteQuotient(d, images);
}

struct PropExample {
  StallingsGraph h = graph_of(kABC, {"aaaa", "aaba", "acaa", "bC"});
  std::vector<Word> gens{abc("aaaa"), abc("aaba"), abc("acaa"), abc("bC")};
  Word u = abc("aaaaaaaa");  // w1^2
  std::vector<Word> relators{commutator(u, gens[1]), commutator(u, gens[2])};
  Word target = commutator(u, gens[3]);
};
}  // namespace

TEST_CASE("permutations") {
  const auto p = cyc(4, "(1 2 3)");
  const auto q = cyc(4, "(1 2)(3 4)");
  CHECK(p.cycles() == "(1 2 3)");
  CHECK(q.cycles() == "(1 2)(3 4)");
  CHECK(Permutation(4).cycles() == "()");
  CHECK(cyc(4, "()").is_identity());
  // Right action: apply p, then q.
  CHECK((p * q)[0] == q[p[0]]);
  CHECK((p * p.inverse()).is_identity());
  CHECK((p * p * p).is_identity());
  CHECK_THROWS_AS(cyc(3, "(1 4)"), std::invalid_argument);
  CHECK_THROWS_AS(cyc(3, "(1 2"), std::invalid_argument);
  CHECK_THROWS_AS(cyc(3, "(1 2)(2 3)"), std::invalid_argument);
  CHECK_THROWS_AS(Permutation(std::vector<std::uint32_t>{0, 0}), std::invalid_argument);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto r = random_perm(rng, 6);
    CHECK(cyc(6, r.cycles().c_str()) == r);
  }
}

TEST_CASE("finite quotients") {
  const FiniteQuotient z2z2(4, {cyc(4, "(1 2)"), cyc(4, "(3 4)")});
  CHECK(z2z2.elements().size() == 4);
  const FiniteQuotient s3(3, {cyc(3, "(1 2 3)"), cyc(3, "(1 2)")});
  CHECK(s3.elements().size() == 6);
  CHECK(s3.evaluate(w("xxx")).is_identity());
  CHECK(s3.evaluate(w("xyxy")).is_identity());
  CHECK_FALSE(s3.evaluate(w("xy")).is_identity());
  CHECK(s3.evaluate(w("xY")) == s3.images[0] * s3.images[1].inverse());
  CHECK_THROWS_AS(s3.elements(5), std::length_error);
  CHECK_THROWS_AS(FiniteQuotient(3, {cyc(4, "(1 2)")}), std::invalid_argument);
}

TEST_CASE("projective action of PSL(2, p)") {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const auto t = projective_action(p, 1, 1, 0, 1);
    const auto s = projective_action(p, 0, p - 1, 1, 0);
    CHECK(FiniteQuotient(p + 1, {t, s}).elements().size() == p * (p * p - 1) / 2);
    // Homomorphism for the right action: z·(AB) = (z·A)·B.
    const auto ab = projective_action(p, (1 * 0 + 1 * 1) % p, (1 * (p - 1) + 1 * 0) % p,
                                      (0 * 0 + 1 * 1) % p, (0 * (p - 1) + 1 * 0) % p);
    CHECK(t * s == ab);
  }
  CHECK_THROWS_AS(projective_action(9, 1, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(projective_action(7, 2, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("basis change to a given free basis") {
  const PropExample ex;
  const auto change = basis_in_generators(ex.h, ex.gens);
  const auto b = basis(ex.h);
  for (std::size_t i = 0; i < change.size(); ++i) {
    CHECK(substitute(change[i], ex.gens) == b.words[i]);
  }
  std::mt19937_64 rng(5);
  const auto h = graph_of(kXY, {"x", "y"});
  for (int i = 0; i < 40; ++i) {
    std::vector<Word> gens{w("x"), w("y")};
    for (int k = 0; k < 6; ++k) {
      const std::size_t a = rng() % 2;
      const Word other = rng() % 2 ? gens[1 - a] : gens[1 - a].inverse();
      gens[a] = rng() % 2 ? gens[a] * other : other * gens[a];
    }
    const auto ch = basis_in_generators(h, gens);
    const auto hb = basis(h);
    for (std::size_t j = 0; j < 2; ++j) CHECK(substitute(ch[j], gens) == hb.words[j]);
  }
  CHECK_THROWS_AS(basis_in_generators(h, std::vector<Word>{w("xx"), w("y")}),
                  std::invalid_argument);
}

TEST_CASE("cover of F(x,y) by the Z/2 x Z/2 kernel") {
  const auto f = graph_of(kXY, {"x", "y"});
  const FiniteQuotient q(4, {cyc(4, "(1 2)"), cyc(4, "(3 4)")});
  const auto c = cover(f, q);
  CHECK(c.graph.vertex_count() == 4);
  CHECK(c.graph.edge_count() == 8);
  CHECK(verify_covering(c).ok());
  const auto n = c.stallings();
  CHECK(n.vertex_count() == 4);
  CHECK(gamma(n).length == 2);
  for (Vertex v1 = 0; v1 < 4; ++v1) {
    for (Vertex v2 = 0; v2 < 4; ++v2) {
      const auto map = deck_transformation(c, v1, v2);
      CHECK(map[v1] == v2);
      CHECK(is_automorphism(c.graph, map));
    }
  }
}

TEST_CASE("trivial quotient gives back the base graph") {
  const auto h1 = graph_of(kXY, {"xxx", "Yxxxy"});
  const FiniteQuotient q(1, {Permutation(1), Permutation(1)});
  const auto c = cover(h1, q);
  CHECK(verify_covering(c).ok());
  CHECK(c.stallings() == h1);
  CHECK_THROWS_AS(cover(h1, FiniteQuotient(1, {Permutation(1)})), std::invalid_argument);
}

TEST_CASE("covers read off the kernel at every basepoint lift") {
  std::mt19937_64 rng(7);
  for (const auto& h : {graph_of(kXY, {"xxx", "Yxxxy"}), graph_of(kXY, {"xy", "yyX"}),
                        graph_of(kXY, {"xx", "yy", "xyXY"})}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto q = random_quotient(rng, h.subgroup_rank(), 3 + trial % 2);
      const auto c = cover(h, q);
      REQUIRE(verify_covering(c).ok());
      const auto elements = subgroup_elements(h, 8);
      const FoldedIndex idx(c.graph);
      for (std::size_t g = 0; g < c.order(); ++g) {
        const Vertex v = c.vertex(0, g);
        for (const Word& x : elements) {
          const bool kernel = evaluate_in_subgroup(h, q, x)->is_identity();
          CHECK((idx.trace(v, x) == v) == kernel);
        }
      }
      const auto n = c.stallings();
      for (std::size_t g = 0; g < c.order(); ++g) {
        const Vertex v1 = c.vertex(0, 0), v2 = c.vertex(0, g);
        const auto map = deck_transformation(c, v1, v2);
        CHECK(map[v1] == v2);
        CHECK(is_automorphism(c.graph, map));
      }
      CHECK(n.vertex_count() == h.vertex_count() * c.order());
    }
  }
}

TEST_CASE("subgroup elements agree with membership") {
  const auto h1 = graph_of(kXY, {"xxx", "Yxxxy"});
  std::vector<Word> expected;
  for (const Word& u : oracle::reduced_words_upto(2, 7)) {
    if (member(h1, u)) expected.push_back(u);
  }
  std::sort(expected.begin(), expected.end());
  CHECK(subgroup_elements(h1, 7) == expected);
}

TEST_CASE("positive closure certificates") {
  const std::vector<Word> rel{w("xx")};
  const auto c1 = closure_member_search(commutator(w("xx"), w("y")), rel, 2);
  REQUIRE(c1.has_value());
  CHECK(c1->factors.size() == 2);
  CHECK(verify_positive(*c1, commutator(w("xx"), w("y")), rel));
  const auto c2 = closure_member_search(w("xx"), rel, 2);
  REQUIRE(c2.has_value());
  CHECK(c2->factors.size() == 1);
  CHECK(c2->factors[0].conjugator.empty());
  CHECK(verify_positive(*c2, w("xx"), rel));
  CHECK_FALSE(verify_positive(*c2, w("yy"), rel));
  CHECK_FALSE(verify_positive(*c2, w("xx"), std::vector<Word>{w("yy")}));
  CHECK_FALSE(closure_member_search(w("x"), rel, 2).has_value());
  CHECK(closure_member_search(Word(), rel, 2)->factors.empty());
}

TEST_CASE("quotient certificates") {
  const std::vector<Word> rel{w("xx")};
  const auto c = quotient_nonmember(w("x"), rel, 2);
  REQUIRE(c.has_value());
  CHECK(c->quotient.degree == 2);
  CHECK(verify_negative(*c, w("x"), rel));
  CHECK_FALSE(verify_negative(*c, w("xx"), rel));
  for (const char* in : {"xx", "yxxY", "xxyXXY", "1"}) {
    CHECK_FALSE(quotient_nonmember(w(in), rel, 2).has_value());
  }
}

TEST_CASE("certificates are mutually exclusive and sound") {
  std::mt19937_64 rng(11);
  const std::vector<Word> rel{w("xx"), w("yxyX")};
  const ClosureSearcher searcher(rel, 2, {2, 2, 100000});
  const QuotientLimits limits{4, 2000000, 0, 1};
  int pos = 0, neg = 0;
  for (int i = 0; i < 150; ++i) {
    const Word t = oracle::random_word(rng, 2, 6);
    const auto p = searcher.search(t);
    const auto n = quotient_nonmember(t, rel, 2, {}, limits);
    if (p) {
      ++pos;
      CHECK(verify_positive(*p, t, rel));
    }
    if (n) {
      ++neg;
      CHECK(verify_negative(*n, t, rel));
    }
    CHECK_FALSE((p && n));
  }
  CHECK(pos > 5);
  CHECK(neg > 5);
}

TEST_CASE("the four-generator example separates the two closures") {
  const PropExample ex;
  CHECK(ex.h.subgroup_rank() == 4);
  const auto r = relator_pipeline(ex.h, ex.gens, ex.relators, ex.target);
  REQUIRE(r.in_closure.has_value());
  CHECK(verify_positive(*r.in_closure, ex.target, ex.relators));
  REQUIRE(r.outside_n.has_value());
  CHECK(verify_negative(*r.outside_n, ex.target, ex.relators));
  CHECK(r.outside_n->quotient.degree == 3);
  CHECK(r.in_sigma());

  // The identity w4 = a^-2 w2 a w3^-1 a, with a commuting with w1.
  CHECK(ex.gens[3] == abc("AA") * ex.gens[1] * abc("a") * ex.gens[2].inverse() * abc("a"));
  const PositiveCertificate hand{{{abc("AA"), ex.relators[0], 1},
                                  {abc("bCA"), ex.relators[1], -1}}};
  CHECK(verify_positive(hand, ex.target, ex.relators));

  const NegativeCertificate s3{
      3, ex.gens,
      FiniteQuotient(3, {cyc(3, "(1 2 3)"), Permutation(3), Permutation(3), cyc(3, "(1 2)")})};
  CHECK(verify_negative(s3, ex.target, ex.relators));
  CHECK_FALSE(verify_negative(s3, ex.relators[0], ex.relators));

  // Further elements of the same coset class stay outside N.
  std::vector<Word> taus{Word()};
  for (const Word& r0 : ex.relators) {
    for (const Word& g : ex.gens) {
      taus.push_back(conjugate(r0, g));
      taus.push_back(conjugate(r0.inverse(), g.inverse()));
    }
  }
  for (const Word& tau : taus) {
    for (const Word& g : ex.gens) {
      for (const Word& x : {tau * ex.target, conjugate(ex.target, g)}) {
        CHECK(verify_negative(s3, x, ex.relators));
        CHECK(quotient_nonmember(x, ex.relators, 3, ex.gens).has_value());
      }
    }
  }
}

TEST_CASE("normal closures of powers have no short elements") {
  for (long n : {2L, 3L, 4L, 5L}) {
    const auto rep = newman_check(w("xy"), n, 2, 500, static_cast<std::uint64_t>(n));
    CHECK(rep.bound == static_cast<std::size_t>(2 * (n - 1)));
    CHECK(rep.samples == 500);
    CHECK(rep.violations == 0);
    CHECK(rep.min_length >= rep.bound);
  }
  CHECK(newman_check(w("x"), 2, 2, 100).bound == 1);
  CHECK(newman_check(w("yxyY"), 3, 2, 100).bound == 4);
  CHECK_THROWS_AS(newman_check(Word(), 3, 2, 1), std::invalid_argument);
}

TEST_CASE("experiment with an unmet hypothesis") {
  const auto h1 = graph_of(kXY, {"xxx", "Yxxxy"});
  const FiniteQuotient q(3, {cyc(3, "(1 2 3)"), cyc(3, "(1 2)")});
  const auto rep = acep_experiment(h1, q, 8);
  CHECK_FALSE(rep.hypothesis);
  CHECK(rep.words == subgroup_elements(h1, 8).size());
  CHECK(rep.members_confirmed + rep.non_members == rep.words);
  CHECK(rep.members_confirmed > 1);
  CHECK(rep.inconsistencies == 0);
  CHECK(rep.cover_vertices == h1.vertex_count() * 6);
}

TEST_CASE("lower bound along cycles of the cover") {
  // Every cyclically reduced cycle label w of Γ(N) has |w|_H >= γ_H(N) - 2 diam.
  std::mt19937_64 rng(13);
  const auto h1 = graph_of(kXY, {"xxx", "Yxxxy"});
  const OmegaMetric metric(h1);
  const auto c0 = constants(h1);
  for (int trial = 0; trial < 3; ++trial) {
    const auto c = cover(h1, random_quotient(rng, 2, 3));
    const auto n = c.stallings();
    const auto g = gamma_h(n, h1, metric);
    const FoldedIndex idx(c.graph);
    std::size_t checked = 0;
    for (Vertex v = 0; v < c.graph.vertex_count(); ++v) {
      for (const Word& x : oracle::reduced_words_upto(2, 7)) {
        if (x.empty() || !is_cyclically_reduced(x) || idx.trace(v, x) != v) continue;
        ++checked;
        CHECK(metric.length(x) + 2 * c0.diam_gamma >= g.length);
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("certificate documents") {
  const std::vector<Word> rel{w("xx")};
  const auto p = closure_member_search(commutator(w("xx"), w("y")), rel, 2);
  const auto jp = nlohmann::json::parse(
      certificate_json(kXY, commutator(w("xx"), w("y")), *p, true, {}));
  CHECK(jp["kind"] == "positive");
  CHECK(jp["factors"].size() == 2);
  CHECK(jp["verified"] == true);
  const auto n = quotient_nonmember(w("x"), rel, 2);
  const auto jn = nlohmann::json::parse(certificate_json(kXY, w("x"), *n, true, {}));
  CHECK(jn["kind"] == "negative");
  CHECK(jn["images"][0] == "(1 2)");
  CHECK(jn["generators"][1] == "y");
}
