#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "relatent/kbase.hpp"
#include "relatent/latent.hpp"
#include "relatent/ntree.hpp"
#include "relatent/similarity.hpp"

namespace relatent {

enum class ElementCategory { discrete_value, numeric_mean, edge_type, vertex_identity };

std::string_view category_name(ElementCategory c);

// Identifies one element of a neighbourhood tree profile. Edge types and
// vertex identities are tracked per level over all vertex types ("*").
struct ElementKey {
  std::size_t argument = 0;  // argument position for relation-level features
  std::size_t level = 0;
  std::string vertex_type;
  ElementCategory category = ElementCategory::discrete_value;
  std::string name;  // "attr=value", attribute, relation or entity name

  auto operator<=>(const ElementKey&) const = default;
  bool operator==(const ElementKey&) const = default;
};

struct ElementStats {
  ElementKey key;
  double mu = 0.0;     // mean per-tree relative frequency (or numeric mean)
  double sigma = 0.0;  // population standard deviation
};

struct Explanation {
  std::string predicate;
  double theta = 0.0;
  std::vector<ElementStats> selected;    // grouped by (argument, level, vertex type)
  std::vector<ElementStats> considered;  // every candidate element, same order
};

// Per-element mean and population deviation over a cluster of trees. An
// element missing from a tree counts as frequency 0 there. Only element
// categories the interpretation weights positively are reported.
std::vector<ElementStats> cluster_element_stats(const KnowledgeBase& kb, const std::vector<NeighbourhoodTree>& trees,
                                                const SimilarityInterpretation& interp, std::size_t argument = 0);

// Keeps elements with mu > 0 and sigma <= theta * mu.
Explanation theta_confident(const std::vector<ElementStats>& stats, double theta);

Explanation explain_feature(const KnowledgeBase& kb, const LatentPredicate& p, double theta, std::size_t depth,
                            const TreeOptions& options = {});

// Human-readable block, values rounded to two decimals.
std::string render_explanation(const Explanation& e);
// One JSON object per considered element, full precision.
std::string explanation_records(const Explanation& e);

}  // namespace relatent
