#include <doctest.h>

#include <random>

#include "relatent/error.hpp"
#include "relatent/random.hpp"
#include "relatent/similarity.hpp"
#include "support.hpp"

using namespace relatent;

namespace {

// Random typed KB with discrete and numeric attributes and two relations.
KnowledgeBase random_kb(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::string facts;
  for (std::size_t i = 0; i < n; ++i) facts += (i % 3 == 0 ? "thing(t" : "item(t") + std::to_string(i) + ").\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string e = "t" + std::to_string(i);
    if (i % 3 == 0) {
      if (rng.bernoulli(0.7)) facts += "colour(" + e + ", c" + std::to_string(rng.below(3)) + ").\n";
      if (rng.bernoulli(0.6)) facts += "size(" + e + ", " + std::to_string(rng.below(10)) + ").\n";
    } else if (rng.bernoulli(0.5)) {
      facts += "grade(" + e + ", g" + std::to_string(rng.below(2)) + ").\n";
    }
  }
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const std::size_t a = rng.below(n), b = rng.below(n);
    const bool thing_a = a % 3 == 0, thing_b = b % 3 == 0;
    if (thing_a && !thing_b) facts += "owns(t" + std::to_string(a) + ", t" + std::to_string(b) + ").\n";
    if (!thing_a && !thing_b) facts += "near(t" + std::to_string(a) + ", t" + std::to_string(b) + ").\n";
  }
  return KnowledgeBase::parse(
      "type Thing. type Item.\n"
      "attribute colour(Thing, discrete). attribute size(Thing, numeric). attribute grade(Item, discrete).\n"
      "relation owns(Thing, Item). relation near(Item, Item).\n",
      facts);
}

void check_close(const CoreSimVector& a, const CoreSimVector& b, double tol) {
  for (std::size_t i = 0; i < kCoreSimilarityCount; ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(tol));
}

}  // namespace

TEST_SUITE("similarity") {
  TEST_CASE("interpretations normalize") {
    SimilarityInterpretation s("s", {2, 2, 0, 0, 4});
    CHECK(s.weight(CoreSimilarity::root_attributes) == 0.25);
    CHECK(s.weight(CoreSimilarity::edge_types) == 0.5);
    CHECK_FALSE(s.admits(CoreSimilarity::connectivity));
    CHECK_THROWS_AS(SimilarityInterpretation("z", {0, 0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(SimilarityInterpretation("n", {1, -1, 0, 0, 0}), std::invalid_argument);
  }

  TEST_CASE("interpretation file") {
    auto v = parse_interpretations("% comment\ninterp a 1 0 0 0 0\n\ninterp b 0 1 1 1 1  # tail\n");
    REQUIRE(v.size() == 2);
    CHECK(v[1].name() == "b");
    CHECK(v[1].weight(CoreSimilarity::edge_types) == 0.25);
    CHECK(parse_interpretations(serialize_interpretations(v)) == v);
    CHECK_THROWS_AS(parse_interpretations("interp a 1 0 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_interpretations("interp a 1 0 0 0 0\ninterp a 0 1 0 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_interpretations("weights a 1 0 0 0 0\n"), ParseError);
    try {
      parse_interpretations("interp a 1 0 0 0 0\ninterp b x 0 0 0 0\n");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("combination arithmetic") {
    CoreSimVector v;
    v.values = {0.4, 0.9, 0.1, 0.3, 0.7};
    CHECK(combined_similarity(v, SimilarityInterpretation("p", {1, 0, 0, 0, 0})) == doctest::Approx(0.4));
    CoreSimVector ones;
    ones.values = {1, 1, 1, 1, 1};
    CHECK(combined_similarity(ones, SimilarityInterpretation("u", {0.2, 0.2, 0.2, 0.2, 0.2})) == doctest::Approx(1.0));
    CoreSimVector w;
    w.values = {0.2, 0.6, 0, 0, 0};
    CHECK(combined_similarity(w, SimilarityInterpretation("h", {0.5, 0.5, 0, 0, 0})) == doctest::Approx(0.4));
  }

  TEST_CASE("self similarity is one") {
    auto kb = testing::professors_kb();
    for (std::size_t d = 0; d <= 3; ++d) {
      for (EntityId e = 0; e < kb.entity_count(); ++e) {
        auto t = build_ntree(kb, e, d);
        auto v = core_similarities(t, t, kb);
        for (double s : v.values) CHECK(s == 1.0);
      }
    }
  }

  TEST_CASE("disjoint roots") {
    auto kb = KnowledgeBase::parse("type P. attribute c(P, discrete). relation r(P, P).",
                                   "p(a). p(b). p(x). p(y). c(a, red). c(b, blue). r(a, x). r(b, y).");
    auto v = core_similarities(build_ntree(kb, "a", 1), build_ntree(kb, "b", 1), kb);
    CHECK(v[CoreSimilarity::root_attributes] == 0.0);
    CHECK(v[CoreSimilarity::vertex_identities] == 0.0);
    CHECK(v[CoreSimilarity::connectivity] == 0.0);
  }

  TEST_CASE("students of one professor share identities") {
    auto kb = KnowledgeBase::parse("type P. attribute phase(P, discrete). relation advisedBy(P, P).",
                                   "p(s1). p(s2). p(prof). phase(s1, pre). phase(s2, pre).\n"
                                   "advisedBy(s1, prof). advisedBy(s2, prof).");
    auto v = core_similarities(build_ntree(kb, "s1", 1), build_ntree(kb, "s2", 1), kb);
    CHECK(v[CoreSimilarity::root_attributes] == 1.0);
    CHECK(v[CoreSimilarity::vertex_identities] == 1.0);
    // Level 2 of each student holds both students, one of which is the root.
    auto w = core_similarities(build_ntree(kb, "s1", 2), build_ntree(kb, "s2", 2), kb);
    CHECK(w[CoreSimilarity::vertex_identities] == 1.0);
    CHECK(w[CoreSimilarity::connectivity] == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("depth mismatch") {
    auto kb = testing::professors_kb();
    CHECK_THROWS_AS(core_similarities(build_ntree(kb, "profA", 1), build_ntree(kb, "profB", 2), kb),
                    std::invalid_argument);
  }

  TEST_CASE("dense path matches the sparse reference") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      auto kb = random_kb(seed, 24);
      for (std::size_t d = 0; d <= 2; ++d) {
        TreeEncoder enc(kb, d);
        std::vector<NeighbourhoodTree> trees;
        for (EntityId e = 0; e < kb.entity_count(); ++e) trees.push_back(build_ntree(kb, e, d));
        for (std::size_t i = 0; i < trees.size(); i += 3) {
          for (std::size_t j = 0; j < trees.size(); j += 2) {
            auto dense = core_similarities(trees[i], trees[j], kb);
            auto ref = testing::reference_similarities(trees[i], trees[j], kb);
            check_close(dense, ref, 1e-12);
          }
        }
      }
    }
  }

  TEST_CASE("bounded and symmetric") {
    auto kb = random_kb(11, 30);
    std::vector<SimilarityInterpretation> interps{{"a", {1, 1, 1, 1, 1}}, {"b", {0, 3, 0, 1, 0}}, {"c", {0, 0, 1, 0, 2}}};
    TreeEncoder enc(kb, 2);
    std::vector<TreeEncoding> codes;
    for (EntityId e = 0; e < kb.entity_count(); ++e) codes.push_back(enc.encode(build_ntree(kb, e, 2)));
    for (std::size_t i = 0; i < codes.size(); ++i) {
      for (std::size_t j = 0; j < codes.size(); ++j) {
        auto ab = enc.compare(codes[i], codes[j]);
        auto ba = enc.compare(codes[j], codes[i]);
        for (std::size_t c = 0; c < kCoreSimilarityCount; ++c) {
          CHECK(ab.values[c] >= 0.0);
          CHECK(ab.values[c] <= 1.0);
          CHECK(ab.values[c] == doctest::Approx(ba.values[c]).epsilon(1e-12));
        }
        for (const auto& in : interps) {
          CHECK(combined_similarity(ab, in) == doctest::Approx(combined_similarity(ba, in)).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("combination is monotone in each component") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      SimilarityInterpretation in("r", {u(gen), u(gen), u(gen), u(gen), u(gen) + 0.01});
      CoreSimVector v;
      for (double& s : v.values) s = u(gen);
      const double base = combined_similarity(v, in);
      for (std::size_t c = 0; c < kCoreSimilarityCount; ++c) {
        CoreSimVector up = v;
        up.values[c] = std::min(1.0, up.values[c] + u(gen));
        CHECK(combined_similarity(up, in) >= base);
      }
    }
  }
}
