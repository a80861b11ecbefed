#include "relatent/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace relatent {

std::string_view category_name(ElementCategory c) {
  switch (c) {
    case ElementCategory::discrete_value:
      return "discrete";
    case ElementCategory::numeric_mean:
      return "numeric";
    case ElementCategory::edge_type:
      return "edge";
    case ElementCategory::vertex_identity:
      return "identity";
  }
  return "?";
}

namespace {

bool admitted(const SimilarityInterpretation& interp, ElementCategory c, std::size_t level) {
  switch (c) {
    case ElementCategory::discrete_value:
    case ElementCategory::numeric_mean:
      return interp.admits(level == 0 ? CoreSimilarity::root_attributes : CoreSimilarity::neighbour_attributes);
    case ElementCategory::edge_type:
      return interp.admits(CoreSimilarity::edge_types);
    case ElementCategory::vertex_identity:
      return interp.admits(CoreSimilarity::vertex_identities) || interp.admits(CoreSimilarity::connectivity);
  }
  return false;
}

std::map<ElementKey, double> tree_elements(const KnowledgeBase& kb, const NeighbourhoodTree& tree,
                                           const SimilarityInterpretation& interp, std::size_t argument) {
  const Schema& schema = kb.schema();
  const FrequencyProfile profile = frequency_profile(tree);
  std::map<ElementKey, double> out;
  auto put = [&](std::size_t level, std::string type, ElementCategory c, std::string name, double value) {
    if (admitted(interp, c, level)) out[ElementKey{argument, level, std::move(type), c, std::move(name)}] = value;
  };
  for (std::size_t k = 0; k < profile.levels.size(); ++k) {
    const LevelProfile& lp = profile.levels[k];
    for (const auto& [type, tp] : lp.types) {
      for (const auto& [attr, dist] : tp.discrete) {
        for (const auto& [value, freq] : dist) {
          put(k, schema.type_name(type), ElementCategory::discrete_value,
              schema.attributes()[attr].name + "=" + kb.discrete_value(attr, value), freq);
        }
      }
      for (const auto& [attr, mean] : tp.numeric_mean) {
        put(k, schema.type_name(type), ElementCategory::numeric_mean, schema.attributes()[attr].name, mean);
      }
    }
    if (k == 0) continue;
    for (const auto& [rel, freq] : lp.edges) put(k, "*", ElementCategory::edge_type, schema.relations()[rel].name, freq);
    for (const auto& [entity, freq] : lp.identities) put(k, "*", ElementCategory::vertex_identity, kb.entity_name(entity), freq);
  }
  return out;
}

}  // namespace

std::vector<ElementStats> cluster_element_stats(const KnowledgeBase& kb, const std::vector<NeighbourhoodTree>& trees,
                                                const SimilarityInterpretation& interp, std::size_t argument) {
  if (trees.empty()) throw std::invalid_argument("element statistics of an empty cluster");
  for (const auto& t : trees) {
    if (t.depth != trees.front().depth) throw std::invalid_argument("element statistics over trees of different depths");
  }
  std::vector<std::map<ElementKey, double>> per_tree;
  per_tree.reserve(trees.size());
  std::map<ElementKey, std::vector<double>> values;
  for (const auto& t : trees) per_tree.push_back(tree_elements(kb, t, interp, argument));
  for (const auto& elements : per_tree) {
    for (const auto& [key, v] : elements) values.try_emplace(key);
  }
  for (auto& [key, column] : values) {
    column.reserve(trees.size());
    for (const auto& elements : per_tree) {
      auto it = elements.find(key);
      column.push_back(it == elements.end() ? 0.0 : it->second);
    }
  }

  std::vector<ElementStats> out;
  out.reserve(values.size());
  const double n = static_cast<double>(trees.size());
  for (const auto& [key, column] : values) {
    ElementStats s{key, 0.0, 0.0};
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    if (*lo == *hi) {
      s.mu = *lo;
    } else {
      double sum = 0.0;
      for (double v : column) sum += v;
      s.mu = sum / n;
      double sq = 0.0;
      for (double v : column) sq += (v - s.mu) * (v - s.mu);
      s.sigma = std::sqrt(sq / n);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Explanation theta_confident(const std::vector<ElementStats>& stats, double theta) {
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  Explanation e;
  e.theta = theta;
  e.considered = stats;
  for (const auto& s : stats) {
    if (s.mu > 0.0 && s.sigma <= theta * s.mu) e.selected.push_back(s);
  }
  return e;
}

Explanation explain_feature(const KnowledgeBase& kb, const LatentPredicate& p, double theta, std::size_t depth,
                            const TreeOptions& options) {
  if (depth != p.provenance.depth) {
    throw std::invalid_argument("predicate '" + p.name + "' was minted at depth " + std::to_string(p.provenance.depth));
  }
  if (p.members.empty()) throw std::invalid_argument("predicate '" + p.name + "' has no members");
  std::vector<ElementStats> stats;
  if (p.kind == TargetKind::entity_type) {
    std::vector<NeighbourhoodTree> trees;
    for (const auto& m : p.members) {
      auto e = kb.find_entity(m);
      if (!e) throw std::invalid_argument("unknown predicate member '" + m + "'");
      trees.push_back(build_ntree(kb, *e, depth, options));
    }
    stats = cluster_element_stats(kb, trees, p.provenance.interpretation);
  } else {
    std::map<std::string, std::uint32_t> fact_by_id;
    for (std::uint32_t f = 0; f < kb.relation_facts().size(); ++f) fact_by_id.emplace(kb.fact_id(f), f);
    std::vector<std::vector<NeighbourhoodTree>> by_position;
    for (const auto& m : p.members) {
      auto it = fact_by_id.find(m);
      if (it == fact_by_id.end()) throw std::invalid_argument("unknown predicate member '" + m + "'");
      const auto& args = kb.relation_facts()[it->second].arguments;
      by_position.resize(args.size());
      for (std::size_t pos = 0; pos < args.size(); ++pos) by_position[pos].push_back(build_ntree(kb, args[pos], depth, options));
    }
    for (std::size_t pos = 0; pos < by_position.size(); ++pos) {
      auto part = cluster_element_stats(kb, by_position[pos], p.provenance.interpretation, pos);
      stats.insert(stats.end(), part.begin(), part.end());
    }
  }
  Explanation e = theta_confident(stats, theta);
  e.predicate = p.name;
  return e;
}

std::string render_explanation(const Explanation& e) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", e.theta);
  out << e.predicate << " (theta " << buf << ", " << e.selected.size() << " of " << e.considered.size()
      << " elements confident)\n";
  std::size_t argument = static_cast<std::size_t>(-1), level = static_cast<std::size_t>(-1);
  bool multi_arg = !e.considered.empty() && e.considered.back().key.argument > 0;
  for (const auto& s : e.selected) {
    if (s.key.argument != argument || s.key.level != level) {
      argument = s.key.argument;
      level = s.key.level;
      out << "  ";
      if (multi_arg) out << "argument " << argument << ", ";
      out << "level " << level << "\n";
    }
    std::snprintf(buf, sizeof buf, "mu %.2f  sigma %.2f", s.mu, s.sigma);
    out << "    [" << s.key.vertex_type << "] " << category_name(s.key.category) << " " << s.key.name << "  " << buf << "\n";
  }
  return out.str();
}

std::string explanation_records(const Explanation& e) {
  std::string out;
  for (const auto& s : e.considered) {
    const bool selected = s.mu > 0.0 && s.sigma <= e.theta * s.mu;
    nlohmann::ordered_json j;
    j["predicate"] = e.predicate;
    j["argument"] = s.key.argument;
    j["level"] = s.key.level;
    j["vertex_type"] = s.key.vertex_type;
    j["category"] = category_name(s.key.category);
    j["element"] = s.key.name;
    j["mu"] = s.mu;
    j["sigma"] = s.sigma;
    j["selected"] = selected;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace relatent
