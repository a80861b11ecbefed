#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "relatent/kbase.hpp"
#include "relatent/ntree.hpp"

namespace relatent {

enum class CoreSimilarity : std::size_t {
  root_attributes = 0,
  neighbour_attributes = 1,
  connectivity = 2,
  vertex_identities = 3,
  edge_types = 4,
};

inline constexpr std::size_t kCoreSimilarityCount = 5;

// Named weight vector over the five core similarities, normalized to sum 1.
class SimilarityInterpretation {
 public:
  SimilarityInterpretation() = default;
  // Throws std::invalid_argument on negative, non-finite or all-zero weights.
  SimilarityInterpretation(std::string name, const std::array<double, kCoreSimilarityCount>& raw_weights);

  const std::string& name() const { return name_; }
  const std::array<double, kCoreSimilarityCount>& weights() const { return weights_; }
  double weight(CoreSimilarity c) const { return weights_[static_cast<std::size_t>(c)]; }
  bool admits(CoreSimilarity c) const { return weight(c) > 0.0; }

  bool operator==(const SimilarityInterpretation&) const = default;

 private:
  std::string name_;
  std::array<double, kCoreSimilarityCount> weights_{};
};

// Lines of the form `interp <name> w1 w2 w3 w4 w5`; '%' and '#' start comments.
std::vector<SimilarityInterpretation> parse_interpretations(std::string_view text);
std::string serialize_interpretations(const std::vector<SimilarityInterpretation>& interps);

struct CoreSimVector {
  std::array<double, kCoreSimilarityCount> values{};

  double operator[](CoreSimilarity c) const { return values[static_cast<std::size_t>(c)]; }
  double& operator[](CoreSimilarity c) { return values[static_cast<std::size_t>(c)]; }
  bool operator==(const CoreSimVector&) const = default;
};

// Flattened frequency profile of one tree laid out over the vocabulary of a
// knowledge base, so that per-level comparisons reduce to dense kernels.
struct TreeEncoding {
  EntityId root = 0;
  std::vector<double> attributes;           // per (level, attribute) segment: value distribution or mean
  std::vector<std::uint8_t> attr_present;   // per (level, attribute)
  std::vector<double> edges;                // per (level, relation): relative frequency
  std::vector<double> identities;           // per (level >= 1, entity): vertex counts
  std::vector<std::size_t> level_sizes;     // vertices per level
};

// Encodes trees of one depth over one knowledge base and evaluates the core
// similarities between encodings.
//
// Kernel definitions:
//  s1  mean over root attributes present on either side of 1 - TV(value
//      distributions) for discrete and 1 - |x - y| / range for numeric
//      attributes; an attribute present on one side only scores 0.
//  s2  the same kernel per neighbour level (>= 1) and vertex type, levels
//      combined with weight 1/level.
//  s3  share of each root among the other tree's non-root vertices, averaged
//      over both directions; 1 for identical roots.
//  s4  per-level multiset Jaccard of vertex identities, averaged over levels.
//  s5  per-level 1 - TV(edge-type distributions), averaged over levels.
// Aspects absent from both trees score 1.
class TreeEncoder {
 public:
  TreeEncoder(const KnowledgeBase& kb, std::size_t depth);

  std::size_t depth() const { return depth_; }
  TreeEncoding encode(const NeighbourhoodTree& tree) const;
  CoreSimVector compare(const TreeEncoding& a, const TreeEncoding& b) const;

 private:
  double attribute_similarity(std::size_t level, AttrId a, const TreeEncoding& x, const TreeEncoding& y) const;
  // Mean attribute similarity over slots present on either side; false when none is.
  bool level_attribute_score(std::size_t level, const TreeEncoding& x, const TreeEncoding& y, double& score) const;

  const KnowledgeBase* kb_;
  std::size_t depth_;
  std::size_t attr_count_;
  std::size_t rel_count_;
  std::size_t entity_count_;
  std::vector<std::size_t> attr_offset_;  // per attribute within one level
  std::vector<std::size_t> attr_width_;
  std::size_t level_attr_width_ = 0;
};

// Throws std::invalid_argument when the trees have different depths.
CoreSimVector core_similarities(const NeighbourhoodTree& a, const NeighbourhoodTree& b, const KnowledgeBase& kb);

double combined_similarity(const CoreSimVector& v, const SimilarityInterpretation& interp);

}  // namespace relatent
