#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "relatent/clustering.hpp"
#include "support.hpp"

using namespace relatent;

namespace {

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  // Zero-padded so that sorted ids follow row order.
  for (std::size_t i = 0; i < n; ++i) out.push_back((i < 10 ? "o0" : "o") + std::to_string(i));
  return out;
}

SimilarityMatrix blocks(std::size_t n, std::size_t split, double within, double across) {
  return SimilarityMatrix::from_pairs(names(n), [&](std::size_t i, std::size_t j) {
    return (i < split) == (j < split) ? within : across;
  });
}

// Two-cluster partition maximizing the sum of (s - 1/2) over within-cluster
// pairs, which rewards similar pairs and penalizes dissimilar ones.
std::vector<std::size_t> best_bipartition(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> best;
  double best_score = -1e300;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    if (mask & 1) continue;  // object 0 is always in cluster 0
    double score = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (((mask >> i) & 1) == ((mask >> j) & 1)) score += m.at(i, j) - 0.5;
      }
    }
    if (score > best_score) {
      best_score = score;
      best.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i) best[i] = (mask >> i) & 1;
      // Canonical labels by first appearance.
      std::size_t first = best[0];
      for (auto& x : best) x = x == first ? 0 : 1;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("clustering") {
  TEST_CASE("matrix basics") {
    auto one = SimilarityMatrix::from_pairs({"x"}, [](std::size_t, std::size_t) { return 0.2; });
    CHECK(one.size() == 1);
    CHECK(one.at(0, 0) == 1.0);
    CHECK_THROWS_AS(SimilarityMatrix::from_pairs({}, [](std::size_t, std::size_t) { return 0.0; }), std::invalid_argument);
    auto m = blocks(5, 2, 0.9, 0.1);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(m.at(i, i) == 1.0);
      for (std::size_t j = 0; j < 5; ++j) CHECK(m.at(i, j) == m.at(j, i));
    }
  }

  TEST_CASE("identical trees give an all-ones matrix") {
    auto kb = testing::professors_kb();
    auto t = build_ntree(kb, "profA", 2);
    auto m = similarity_matrix(kb, {t, t}, SimilarityInterpretation("u", {1, 1, 1, 1, 1}));
    for (double v : m.values()) CHECK(v == 1.0);
  }

  TEST_CASE("matrix matches core_similarities entrywise") {
    auto kb = testing::chain_kb();
    std::vector<NeighbourhoodTree> trees;
    for (const char* n : {"a", "b", "c"}) trees.push_back(build_ntree(kb, n, 2));
    SimilarityInterpretation in("u", {1, 1, 1, 1, 1});
    auto m = similarity_matrix(kb, trees, in);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double expect = i == j ? 1.0 : combined_similarity(testing::reference_similarities(trees[i], trees[j], kb), in);
        CHECK(m.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("parallel and serial assembly agree bitwise") {
    auto kb = testing::professors_kb();
    std::vector<NeighbourhoodTree> trees;
    for (EntityId e = 0; e < kb.entity_count(); ++e) trees.push_back(build_ntree(kb, e, 2));
    SimilarityInterpretation in("u", {1, 2, 1, 1, 3});
    auto a = similarity_matrix(kb, trees, in, true);
    auto b = similarity_matrix(kb, trees, in, false);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  }

  TEST_CASE("extreme k") {
    auto m = blocks(6, 3, 0.8, 0.3);
    auto singletons = cluster(m, 6, 1);
    CHECK(singletons.cluster_count == 6);
    std::vector<std::size_t> expect(6);
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    CHECK(singletons.assignment == expect);
    auto all = cluster(m, 1, 1);
    CHECK(all.assignment == std::vector<std::size_t>(6, 0));
    CHECK_THROWS_AS(cluster(m, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(cluster(m, 7, 1), std::invalid_argument);
  }

  TEST_CASE("well separated blocks are recovered") {
    for (std::size_t n = 4; n <= 10; ++n) {
      for (std::size_t split = 1; split < n; ++split) {
        auto m = blocks(n, split, 0.9, 0.1);
        auto c = cluster(m, 2, 3);
        CHECK(c.assignment == best_bipartition(m));
      }
    }
  }

  TEST_CASE("noisy blocks against the exhaustive oracle") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 6 + trial % 6, split = 2 + trial % (n - 3);
      std::vector<double> jitter(n * n);
      for (double& j : jitter) j = noise(gen);
      auto m = SimilarityMatrix::from_pairs(names(n), [&](std::size_t i, std::size_t j) {
        return ((i < split) == (j < split) ? 0.85 : 0.15) + jitter[i * n + j];
      });
      INFO("n=" << n << " split=" << split);
      const auto got = cluster(m, 2, 0).assignment;
      const auto want = best_bipartition(m);
      std::string g, wnt;
      for (auto x : got) g += std::to_string(x);
      for (auto x : want) wnt += std::to_string(x);
      CHECK(g == wnt);
    }
  }

  TEST_CASE("invariant under input order") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 9;
    std::vector<double> sim(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sim[i * n + j] = sim[j * n + i] = u(gen);
    }
    auto m = SimilarityMatrix::from_pairs(names(n), [&](std::size_t i, std::size_t j) { return sim[i * n + j]; });
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<std::string> shuffled;
    for (std::size_t p : perm) shuffled.push_back(names(n)[p]);
    auto pm = SimilarityMatrix::from_pairs(shuffled, [&](std::size_t i, std::size_t j) { return sim[perm[i] * n + perm[j]]; });
    for (std::size_t k = 1; k <= n; ++k) {
      auto a = cluster(m, k, 0), b = cluster(pm, k, 0);
      CHECK(a.objects == b.objects);
      CHECK(a.assignment == b.assignment);
    }
  }

  TEST_CASE("clusters are non-empty and cover objects") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto m = SimilarityMatrix::from_pairs(names(12), [&](std::size_t, std::size_t) { return u(gen); }, false);
    for (std::size_t k = 1; k <= 12; ++k) {
      auto c = cluster(m, k, 0);
      auto sizes = c.cluster_sizes();
      CHECK(sizes.size() == k);
      CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == 12);
      for (auto s : sizes) CHECK(s > 0);
    }
  }

  TEST_CASE("ARI examples") {
    const std::vector<std::size_t> c1{0, 0, 0, 1, 1, 1}, c2{0, 0, 1, 1, 1, 1};
    CHECK(adjusted_rand_index(c1, c2) == doctest::Approx(testing::ari_pair_oracle(c1, c2)).epsilon(1e-12));
    CHECK(adjusted_rand_index(c1, c1) == 1.0);
    const std::vector<std::size_t> relabeled{1, 1, 1, 0, 0, 0};
    CHECK(adjusted_rand_index(c1, relabeled) == 1.0);
    const std::vector<std::size_t> singles{0, 1, 2, 3}, single{0, 0, 0, 0};
    CHECK(adjusted_rand_index(singles, singles) == 1.0);
    CHECK(adjusted_rand_index(singles, single) == 0.0);
    CHECK_THROWS_AS(adjusted_rand_index(std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{0}), std::invalid_argument);
  }

  TEST_CASE("ARI exhaustive for n <= 5") {
    for (std::size_t n = 1; n <= 5; ++n) {
      std::vector<std::vector<std::size_t>> parts;
      testing::for_each_partition(n, [&](const std::vector<std::size_t>& a) { parts.push_back(a); });
      for (const auto& a : parts) {
        for (const auto& b : parts) {
          const double v = adjusted_rand_index(a, b);
          CHECK(v == doctest::Approx(testing::ari_pair_oracle(a, b)).epsilon(1e-12));
          CHECK(v == adjusted_rand_index(b, a));
          CHECK(v <= 1.0);
          CHECK(v >= -1.0);
        }
      }
    }
  }

  TEST_CASE("ARI over clusterings aligns objects") {
    Clustering a{{"x", "y", "z"}, {0, 0, 1}, 2, {}};
    Clustering b{{"y", "z", "x"}, {0, 1, 0}, 2, {}};
    CHECK(adjusted_rand_index(a, b) == 1.0);
    Clustering c{{"x", "y", "w"}, {0, 0, 1}, 2, {}};
    CHECK_THROWS_AS(adjusted_rand_index(a, c), std::invalid_argument);
  }

  TEST_CASE("silhouette picks the planted k") {
    const std::size_t n = 16;
    auto m = SimilarityMatrix::from_pairs(names(n), [](std::size_t i, std::size_t j) {
      return i / 4 == j / 4 ? 0.95 : 0.05;
    });
    CHECK(select_k_silhouette(m) == 4);
  }

  TEST_CASE("csv export") {
    auto m = blocks(3, 1, 0.9, 0.1);
    auto c = cluster(m, 2, 0);
    c.provenance = {"attr", 1, TargetKind::entity_type, "Person"};
    CHECK(clustering_csv(c, "# run\n") ==
          "# run\n# target=type:Person interpretation=attr depth=1 clusters=2\nobject_id,cluster_index\no00,0\no01,1\no02,1\n");
  }
}
