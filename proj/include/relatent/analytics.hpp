#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relatent/kbase.hpp"
#include "relatent/latent.hpp"

namespace relatent {

// Shannon entropy (bits) of a label histogram; zero counts are ignored.
double entropy_bits(std::span<const std::size_t> counts);

// Entropy of the labels of the labeled entities occurring in the predicate's
// true groundings, each entity counted once. Empty when no grounding touches
// a labeled entity.
std::optional<double> label_entropy(const KnowledgeBase& kb, std::string_view predicate);

// Number of true groundings.
std::size_t sparsity(const KnowledgeBase& kb, std::string_view predicate);

enum class Origin { original, latent };

struct PredicateDiagnostics {
  std::string predicate;
  Origin origin = Origin::original;
  std::size_t grounding_count = 0;
  std::optional<double> label_entropy;
};

// One row per attribute, relation and unary predicate of each knowledge base.
std::vector<PredicateDiagnostics> diagnostics_table(const KnowledgeBase& original, const KnowledgeBase& latent);
// `predicate,origin,groundings,entropy`; undefined entropy is an empty field.
std::string diagnostics_csv(const std::vector<PredicateDiagnostics>& rows, const std::string& header_comment);

// Boolean example-by-feature table.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::string> example_ids;
  std::vector<std::uint8_t> values;  // row-major

  std::size_t rows() const { return example_ids.size(); }
  std::size_t cols() const { return feature_names.size(); }
  bool at(std::size_t r, std::size_t c) const { return values[r * cols() + c] != 0; }
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
};

// Propositional view of entities: membership in each unary predicate,
// participation at each argument position of each relation ("rel@pos"), and
// each discrete attribute value ("attr=value").
FeatureMatrix propositionalize(const KnowledgeBase& kb, std::span<const EntityId> examples);

// Greedy information-gain tree over boolean features.
class DecisionTree {
 public:
  struct Node {
    std::optional<std::size_t> feature;  // empty for leaves
    std::size_t label = 0;
    std::size_t yes = 0;
    std::size_t no = 0;
  };

  std::size_t predict(const FeatureMatrix& x, std::size_t row) const;
  double accuracy(const FeatureMatrix& x, std::span<const std::size_t> labels) const;
  // Number of internal (test) nodes.
  std::size_t node_count() const;
  std::size_t depth() const;
  std::string describe(const std::vector<std::string>& feature_names, const std::vector<std::string>& label_names) const;

  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  friend DecisionTree train_tree(const FeatureMatrix&, std::span<const std::size_t>, std::size_t, std::uint64_t);
  std::vector<Node> nodes_;  // nodes_[0] is the root
};

// Splits maximize information gain; zero-gain splits are allowed so that
// interactions such as XOR can be found, and every subtree that does not
// reduce training errors is collapsed into a leaf afterwards. `seed` fixes
// the order in which tied features are preferred.
DecisionTree train_tree(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t max_depth,
                        std::uint64_t seed);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per-label shuffled split; each label contributes round(test_fraction * n) test rows.
Split stratified_split(std::span<const std::size_t> labels, double test_fraction, std::uint64_t seed);

struct Evaluation {
  double accuracy = 0.0;  // on the test rows (training rows when the test split is empty)
  std::size_t node_count = 0;
  DecisionTree tree;
};

Evaluation evaluate_features(const FeatureMatrix& x, std::span<const std::size_t> labels, const Split& split,
                             std::size_t max_depth, std::uint64_t seed);

// Labeled entities of the label type, in id order, with their label ids.
struct LabeledExamples {
  std::vector<EntityId> entities;
  std::vector<std::size_t> labels;
};
LabeledExamples labeled_examples(const KnowledgeBase& kb);

struct SweepRow {
  double alpha = 1.0;
  std::size_t feature_count = 0;
  std::size_t fact_count = 0;
  double accuracy = 0.0;
  double feature_ratio = 1.0;
  double fact_ratio = 1.0;
  std::size_t tree_nodes = 0;
};

struct SweepOptions {
  std::size_t tree_max_depth = 6;
  double test_fraction = 0.2;
  LearnOptions learn;
};

// Rows for alpha = 1.0 first, then each requested alpha in order.
std::vector<SweepRow> redundancy_sweep(const KnowledgeBase& kb, const std::vector<SimilarityInterpretation>& interps,
                                       const std::vector<std::size_t>& depths, const std::vector<double>& alphas,
                                       const KPolicy& k_policy, std::uint64_t seed, const SweepOptions& options = {});

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& header_comment);

}  // namespace relatent
