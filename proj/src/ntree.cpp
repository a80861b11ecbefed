#include "relatent/ntree.hpp"

#include <sstream>
#include <stdexcept>

#include "relatent/parallel.hpp"

namespace relatent {

std::size_t NeighbourhoodTree::vertex_count() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.size();
  return n;
}

NeighbourhoodTree build_ntree(const KnowledgeBase& kb, EntityId root, std::size_t depth, const TreeOptions& options) {
  if (root >= kb.entity_count()) throw std::invalid_argument("unknown root entity id " + std::to_string(root));
  NeighbourhoodTree tree;
  tree.root = root;
  tree.depth = depth;
  tree.levels.reserve(depth + 1);
  auto attrs = [&kb](EntityId e) {
    auto span = kb.attributes_of(e);
    return std::vector<AttrFact>(span.begin(), span.end());
  };
  tree.levels.push_back({TreeVertex{root, kb.entity_type(root), std::nullopt, 0, attrs(root)}});

  const std::size_t cap = options.max_fanout.value_or(static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<TreeVertex> next;
    const auto& current = tree.levels[k];
    for (std::uint32_t pi = 0; pi < current.size(); ++pi) {
      std::size_t emitted = 0;
      for (const Incidence& inc : kb.incidences(current[pi].entity)) {
        const RelationFact& fact = kb.relation_facts()[inc.fact];
        for (std::uint32_t q = 0; q < fact.arguments.size() && emitted < cap; ++q) {
          if (q == inc.position) continue;
          EntityId child = fact.arguments[q];
          next.push_back(TreeVertex{child, kb.entity_type(child), fact.relation, pi, attrs(child)});
          ++emitted;
        }
        if (emitted >= cap) break;
      }
    }
    tree.levels.push_back(std::move(next));
  }
  return tree;
}

NeighbourhoodTree build_ntree(const KnowledgeBase& kb, std::string_view root, std::size_t depth,
                              const TreeOptions& options) {
  auto id = kb.find_entity(root);
  if (!id) throw std::invalid_argument("unknown root entity '" + std::string(root) + "'");
  return build_ntree(kb, *id, depth, options);
}

std::vector<NeighbourhoodTree> build_ntrees(const KnowledgeBase& kb, const std::vector<EntityId>& roots,
                                            std::size_t depth, const TreeOptions& options) {
  std::vector<NeighbourhoodTree> trees(roots.size());
  parallel_for(roots.size(), [&](std::size_t i) { trees[i] = build_ntree(kb, roots[i], depth, options); });
  return trees;
}

std::string dump_tree(const KnowledgeBase& kb, const NeighbourhoodTree& tree) {
  std::ostringstream out;
  for (std::size_t k = 0; k < tree.levels.size(); ++k) {
    for (const auto& v : tree.levels[k]) {
      out << std::string(2 * k, ' ') << "L" << k << " " << kb.entity_name(v.entity) << " : "
          << kb.schema().type_name(v.type);
      if (v.edge) out << " via " << kb.schema().relations()[*v.edge].name << " from #" << v.parent;
      out << "\n";
    }
  }
  return out.str();
}

FrequencyProfile frequency_profile(const NeighbourhoodTree& tree) {
  FrequencyProfile profile;
  profile.levels.resize(tree.levels.size());
  for (std::size_t k = 0; k < tree.levels.size(); ++k) {
    const auto& vertices = tree.levels[k];
    LevelProfile& lp = profile.levels[k];
    lp.vertex_count = vertices.size();
    if (vertices.empty()) continue;

    std::map<TypeId, std::map<AttrId, double>> discrete_totals;
    std::map<TypeId, std::map<AttrId, double>> numeric_counts;
    double edge_total = 0.0;
    for (const auto& v : vertices) {
      TypeLevelProfile& tp = lp.types[v.type];
      ++tp.vertex_count;
      lp.identities[v.entity] += 1.0;
      if (v.edge) {
        lp.edges[*v.edge] += 1.0;
        edge_total += 1.0;
      }
      for (const AttrFact& f : v.attributes) {
        if (f.kind == ValueKind::discrete) {
          tp.discrete[f.attribute][f.value] += 1.0;
          discrete_totals[v.type][f.attribute] += 1.0;
        } else {
          tp.numeric_mean[f.attribute] += f.number;
          numeric_counts[v.type][f.attribute] += 1.0;
        }
      }
    }

    const double n = static_cast<double>(vertices.size());
    for (auto& [entity, count] : lp.identities) count /= n;
    for (auto& [rel, count] : lp.edges) count /= edge_total;
    for (auto& [type, tp] : lp.types) {
      for (auto& [attr, dist] : tp.discrete) {
        const double total = discrete_totals[type][attr];
        for (auto& [value, count] : dist) count /= total;
      }
      for (auto& [attr, sum] : tp.numeric_mean) sum /= numeric_counts[type][attr];
    }
  }
  return profile;
}

}  // namespace relatent
