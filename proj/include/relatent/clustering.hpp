#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relatent/kbase.hpp"
#include "relatent/ntree.hpp"
#include "relatent/similarity.hpp"

namespace relatent {

// Symmetric object-by-object similarity matrix with unit diagonal.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // Fills entry (i, j), i < j, from pair(i, j); the diagonal is fixed at 1.
  // Pairs are evaluated concurrently when `parallel` is set; each entry is
  // written by exactly one task, so the result does not depend on scheduling.
  static SimilarityMatrix from_pairs(std::vector<std::string> objects,
                                     const std::function<double(std::size_t, std::size_t)>& pair,
                                     bool parallel = true);

  std::size_t size() const { return objects_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<std::string> objects_;
  std::vector<double> values_;
};

// Entry (i, j) is combined_similarity between trees i and j. Object ids are
// the root entity names.
SimilarityMatrix similarity_matrix(const KnowledgeBase& kb, const std::vector<NeighbourhoodTree>& trees,
                                   const SimilarityInterpretation& interp, bool parallel = true);
// Same, over pre-computed encodings.
SimilarityMatrix similarity_matrix(const KnowledgeBase& kb, const TreeEncoder& encoder,
                                   const std::vector<TreeEncoding>& encodings, const SimilarityInterpretation& interp,
                                   bool parallel = true);

enum class TargetKind { entity_type, relation };

struct ClusteringProvenance {
  std::string interpretation;
  std::size_t depth = 0;
  TargetKind kind = TargetKind::entity_type;
  std::string target;  // entity type or relation name
};

struct Clustering {
  std::vector<std::string> objects;     // sorted by id
  std::vector<std::size_t> assignment;  // parallel to objects; indices 0..k-1 in order of first appearance
  std::size_t cluster_count = 0;
  ClusteringProvenance provenance;

  std::vector<std::vector<std::string>> clusters() const;
  std::vector<std::size_t> cluster_sizes() const;
};

struct Merge {
  std::size_t left;   // surviving cluster slot (smaller index)
  std::size_t right;  // absorbed cluster slot
  double distance;
};

// Average-linkage agglomeration over distance 1 - similarity. Objects are
// processed in sorted-id order; ties merge the lexicographically lowest pair
// of cluster slots.
struct Dendrogram {
  std::vector<std::string> objects;  // sorted
  std::vector<std::size_t> order;    // order[i] = row of objects[i] in the source matrix
  std::vector<Merge> merges;         // n - 1 merges, in execution order

  // Flat partition with exactly k clusters.
  std::vector<std::size_t> cut(std::size_t k) const;
};

Dendrogram agglomerate(const SimilarityMatrix& m);

// Deterministic in (m, k). `seed` is recorded only; agglomeration has no random choices.
Clustering cluster(const SimilarityMatrix& m, std::size_t k, std::uint64_t seed);

// Mean silhouette of a partition under distance 1 - similarity (rows in sorted order of the dendrogram).
double silhouette(const SimilarityMatrix& m, const Dendrogram& d, const std::vector<std::size_t>& assignment);
// k in [2, ceil(sqrt(n))] maximizing the silhouette; ties favour smaller k.
std::size_t select_k_silhouette(const SimilarityMatrix& m);

// Chance-corrected pair-counting agreement between flat partitions.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);
// Object sets must match (order may differ).
double adjusted_rand_index(const Clustering& a, const Clustering& b);

// CSV `object_id,cluster_index` preceded by `#` comment lines.
std::string clustering_csv(const Clustering& c, const std::string& header_comment);

}  // namespace relatent
