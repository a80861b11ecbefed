#include "relatent/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relatent/random.hpp"

namespace relatent {

double entropy_bits(std::span<const std::size_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h <= 0.0 ? 0.0 : h;
}

std::optional<double> label_entropy(const KnowledgeBase& kb, std::string_view predicate) {
  auto ref = kb.schema().find_predicate(predicate);
  if (!ref) throw std::invalid_argument("unknown predicate '" + std::string(predicate) + "'");
  const bool first_only = ref->kind == PredicateKind::attribute || ref->kind == PredicateKind::label;
  std::set<EntityId> seen;
  for (const auto& g : kb.groundings(predicate)) {
    const std::size_t n = first_only ? 1 : g.arguments.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (auto e = kb.find_entity(g.arguments[i]); e && kb.label_of(*e)) seen.insert(*e);
    }
  }
  if (seen.empty()) return std::nullopt;
  std::vector<std::size_t> counts(kb.label_names().size(), 0);
  for (EntityId e : seen) ++counts[*kb.label_of(e)];
  return entropy_bits(counts);
}

std::size_t sparsity(const KnowledgeBase& kb, std::string_view predicate) { return kb.grounding_count(predicate); }

namespace {

void append_rows(const KnowledgeBase& kb, Origin origin, std::vector<PredicateDiagnostics>& rows) {
  std::vector<std::string> names;
  for (const auto& a : kb.schema().attributes()) names.push_back(a.name);
  for (const auto& r : kb.schema().relations()) names.push_back(r.name);
  for (const auto& u : kb.schema().unaries()) names.push_back(u.name);
  for (const auto& name : names) rows.push_back({name, origin, sparsity(kb, name), label_entropy(kb, name)});
}

}  // namespace

std::vector<PredicateDiagnostics> diagnostics_table(const KnowledgeBase& original, const KnowledgeBase& latent) {
  std::vector<PredicateDiagnostics> rows;
  append_rows(original, Origin::original, rows);
  append_rows(latent, Origin::latent, rows);
  return rows;
}

std::string diagnostics_csv(const std::vector<PredicateDiagnostics>& rows, const std::string& header_comment) {
  std::ostringstream out;
  out << header_comment << "predicate,origin,groundings,entropy\n";
  for (const auto& r : rows) {
    out << r.predicate << "," << (r.origin == Origin::original ? "original" : "latent") << "," << r.grounding_count << ",";
    if (r.label_entropy) out << format_number(*r.label_entropy);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- features

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out;
  out.feature_names = feature_names;
  out.values.reserve(rows.size() * cols());
  for (std::size_t r : rows) {
    out.example_ids.push_back(example_ids.at(r));
    out.values.insert(out.values.end(), values.begin() + static_cast<std::ptrdiff_t>(r * cols()),
                      values.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols()));
  }
  return out;
}

FeatureMatrix propositionalize(const KnowledgeBase& kb, std::span<const EntityId> examples) {
  const Schema& schema = kb.schema();
  std::set<TypeId> types;
  for (EntityId e : examples) types.insert(kb.entity_type(e));

  // Each feature is a predicate over one entity.
  std::vector<std::function<bool(EntityId)>> tests;
  FeatureMatrix x;
  for (UnaryId u = 0; u < schema.unaries().size(); ++u) {
    if (!types.count(schema.unaries()[u].subject)) continue;
    auto members = kb.unary_members(u);
    x.feature_names.push_back(schema.unaries()[u].name);
    tests.push_back([members](EntityId e) { return std::binary_search(members.begin(), members.end(), e); });
  }
  for (RelId r = 0; r < schema.relations().size(); ++r) {
    const auto& decl = schema.relations()[r];
    for (std::uint32_t p = 0; p < decl.arguments.size(); ++p) {
      if (!types.count(decl.arguments[p])) continue;
      x.feature_names.push_back(decl.name + "@" + std::to_string(p));
      tests.push_back([&kb, r, p](EntityId e) {
        for (const auto& inc : kb.incidences(e)) {
          if (inc.position == p && kb.relation_facts()[inc.fact].relation == r) return true;
        }
        return false;
      });
    }
  }
  for (AttrId a = 0; a < schema.attributes().size(); ++a) {
    const auto& decl = schema.attributes()[a];
    if (decl.kind != ValueKind::discrete || !types.count(decl.subject)) continue;
    for (ValueId v = 0; v < kb.discrete_value_count(a); ++v) {
      x.feature_names.push_back(decl.name + "=" + kb.discrete_value(a, v));
      tests.push_back([&kb, a, v](EntityId e) {
        for (const auto& f : kb.attributes_of(e)) {
          if (f.attribute == a && f.value == v) return true;
        }
        return false;
      });
    }
  }
  x.values.reserve(examples.size() * tests.size());
  for (EntityId e : examples) {
    x.example_ids.push_back(kb.entity_name(e));
    for (const auto& t : tests) x.values.push_back(t(e) ? 1 : 0);
  }
  return x;
}

// ----------------------------------------------------------- decision tree

std::size_t DecisionTree::predict(const FeatureMatrix& x, std::size_t row) const {
  std::size_t n = 0;
  while (nodes_[n].feature) n = x.at(row, *nodes_[n].feature) ? nodes_[n].yes : nodes_[n].no;
  return nodes_[n].label;
}

double DecisionTree::accuracy(const FeatureMatrix& x, std::span<const std::size_t> labels) const {
  if (x.rows() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) correct += predict(x, r) == labels[r] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(x.rows());
}

std::size_t DecisionTree::node_count() const {
  // Count reachable internal nodes; collapsed subtrees leave unreachable entries behind.
  std::size_t count = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if (!n.feature) continue;
    ++count;
    stack.push_back(n.yes);
    stack.push_back(n.no);
  }
  return count;
}

std::size_t DecisionTree::depth() const {
  std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t {
    const Node& n = nodes_[i];
    return n.feature ? 1 + std::max(rec(n.yes), rec(n.no)) : 0;
  };
  return rec(0);
}

std::string DecisionTree::describe(const std::vector<std::string>& feature_names,
                                   const std::vector<std::string>& label_names) const {
  std::ostringstream out;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t indent) {
    const Node& n = nodes_[i];
    const std::string pad(2 * indent, ' ');
    if (!n.feature) {
      out << pad << "-> " << (n.label < label_names.size() ? label_names[n.label] : std::to_string(n.label)) << "\n";
      return;
    }
    out << pad << feature_names.at(*n.feature) << "?\n";
    rec(n.yes, indent + 1);
    out << pad << "else\n";
    rec(n.no, indent + 1);
  };
  rec(0, 0);
  return out.str();
}

namespace {

struct TreeBuilder {
  const FeatureMatrix& x;
  std::span<const std::size_t> labels;
  std::size_t max_depth;
  std::size_t label_count;
  std::vector<std::size_t> feature_order;
  std::vector<DecisionTree::Node>& nodes;

  std::vector<std::size_t> histogram(const std::vector<std::size_t>& rows) const {
    std::vector<std::size_t> h(label_count, 0);
    for (std::size_t r : rows) ++h[labels[r]];
    return h;
  }

  static std::size_t majority(const std::vector<std::size_t>& h) {
    return static_cast<std::size_t>(std::max_element(h.begin(), h.end()) - h.begin());
  }

  // Returns (node index, training errors of the subtree).
  std::pair<std::size_t, std::size_t> build(const std::vector<std::size_t>& rows, std::size_t depth) {
    const auto h = histogram(rows);
    const std::size_t label = majority(h);
    const std::size_t leaf_errors = rows.size() - h[label];
    const std::size_t index = nodes.size();
    nodes.push_back({std::nullopt, label, 0, 0});
    if (leaf_errors == 0 || depth >= max_depth) return {index, leaf_errors};

    const double parent_entropy = entropy_bits(h);
    std::optional<std::size_t> best;
    double best_gain = -1.0;
    for (std::size_t f : feature_order) {
      std::vector<std::size_t> yes(label_count, 0), no(label_count, 0);
      std::size_t n_yes = 0;
      for (std::size_t r : rows) {
        if (x.at(r, f)) {
          ++yes[labels[r]];
          ++n_yes;
        } else {
          ++no[labels[r]];
        }
      }
      if (n_yes == 0 || n_yes == rows.size()) continue;
      const double w = static_cast<double>(n_yes) / static_cast<double>(rows.size());
      const double gain = parent_entropy - w * entropy_bits(yes) - (1.0 - w) * entropy_bits(no);
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best = f;
      }
    }
    if (!best) return {index, leaf_errors};

    std::vector<std::size_t> yes_rows, no_rows;
    for (std::size_t r : rows) (x.at(r, *best) ? yes_rows : no_rows).push_back(r);
    auto [yes_node, yes_errors] = build(yes_rows, depth + 1);
    auto [no_node, no_errors] = build(no_rows, depth + 1);
    if (yes_errors + no_errors >= leaf_errors) return {index, leaf_errors};
    nodes[index].feature = *best;
    nodes[index].yes = yes_node;
    nodes[index].no = no_node;
    return {index, yes_errors + no_errors};
  }
};

}  // namespace

DecisionTree train_tree(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t max_depth,
                        std::uint64_t seed) {
  if (labels.size() != x.rows()) throw std::invalid_argument("train_tree: label count does not match rows");
  if (x.rows() == 0) throw std::invalid_argument("train_tree needs at least one example");
  DecisionTree tree;
  std::size_t label_count = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> order(x.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  TreeBuilder builder{x, labels, max_depth, label_count, std::move(order), tree.nodes_};
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  builder.build(rows, 0);
  return tree;
}

Split stratified_split(std::span<const std::size_t> labels, double test_fraction, std::uint64_t seed) {
  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].push_back(i);
  Rng rng(seed);
  Split split;
  for (auto& [label, rows] : by_label) {
    rng.shuffle(rows);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows.size())));
    for (std::size_t i = 0; i < rows.size(); ++i) (i < n_test ? split.test : split.train).push_back(rows[i]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Evaluation evaluate_features(const FeatureMatrix& x, std::span<const std::size_t> labels, const Split& split,
                             std::size_t max_depth, std::uint64_t seed) {
  auto pick = [&labels](const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> out;
    for (std::size_t r : rows) out.push_back(labels[r]);
    return out;
  };
  const FeatureMatrix train = x.select_rows(split.train);
  const auto train_labels = pick(split.train);
  Evaluation ev;
  ev.tree = train_tree(train, train_labels, max_depth, seed);
  ev.node_count = ev.tree.node_count();
  if (split.test.empty()) {
    ev.accuracy = ev.tree.accuracy(train, train_labels);
  } else {
    ev.accuracy = ev.tree.accuracy(x.select_rows(split.test), pick(split.test));
  }
  return ev;
}

LabeledExamples labeled_examples(const KnowledgeBase& kb) {
  LabeledExamples out;
  for (EntityId e = 0; e < kb.entity_count(); ++e) {
    if (auto l = kb.label_of(e)) {
      out.entities.push_back(e);
      out.labels.push_back(*l);
    }
  }
  return out;
}

std::vector<SweepRow> redundancy_sweep(const KnowledgeBase& kb, const std::vector<SimilarityInterpretation>& interps,
                                       const std::vector<std::size_t>& depths, const std::vector<double>& alphas,
                                       const KPolicy& k_policy, std::uint64_t seed, const SweepOptions& options) {
  if (alphas.empty()) throw std::invalid_argument("redundancy sweep needs at least one alpha");
  if (!kb.has_labels()) throw std::invalid_argument("redundancy sweep needs labels");
  const LabeledExamples examples = labeled_examples(kb);
  const Split split = stratified_split(examples.labels, options.test_fraction, seed);

  std::vector<double> schedule{1.0};
  for (double a : alphas) {
    if (a != 1.0) schedule.push_back(a);
  }
  std::vector<SweepRow> rows;
  for (double alpha : schedule) {
    const LatentRepresentation rep = learn_latent(kb, interps, depths, alpha, k_policy, seed, options.learn);
    const KnowledgeBase latent = export_latent_kb(kb, rep);
    const FeatureMatrix x = propositionalize(latent, examples.entities);
    const Evaluation ev = evaluate_features(x, examples.labels, split, options.tree_max_depth, seed);
    SweepRow row;
    row.alpha = alpha;
    row.feature_count = rep.predicates.size();
    for (const auto& p : rep.predicates) row.fact_count += p.members.size();
    row.accuracy = ev.accuracy;
    row.tree_nodes = ev.node_count;
    rows.push_back(row);
  }
  const SweepRow& base = rows.front();
  for (auto& row : rows) {
    row.feature_ratio = base.feature_count ? static_cast<double>(row.feature_count) / static_cast<double>(base.feature_count) : 1.0;
    row.fact_ratio = base.fact_count ? static_cast<double>(row.fact_count) / static_cast<double>(base.fact_count) : 1.0;
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& header_comment) {
  std::ostringstream out;
  out << header_comment << "alpha,features,facts,accuracy,feature_ratio,fact_ratio\n";
  for (const auto& r : rows) {
    out << format_number(r.alpha) << "," << r.feature_count << "," << r.fact_count << "," << format_number(r.accuracy)
        << "," << format_number(r.feature_ratio) << "," << format_number(r.fact_ratio) << "\n";
  }
  return out.str();
}

}  // namespace relatent
