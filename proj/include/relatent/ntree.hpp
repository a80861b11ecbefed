#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relatent/kbase.hpp"

namespace relatent {

struct TreeVertex {
  EntityId entity;
  TypeId type;
  std::optional<RelId> edge;  // relation used to reach this vertex; empty for the root
  std::uint32_t parent = 0;   // index into the previous level
  std::vector<AttrFact> attributes;

  bool operator==(const TreeVertex&) const = default;
};

// Depth-bounded summary of every walk of length <= depth leaving the root.
// A vertex reached through several walks appears once per walk.
struct NeighbourhoodTree {
  EntityId root = 0;
  std::size_t depth = 0;
  std::vector<std::vector<TreeVertex>> levels;

  std::size_t vertex_count() const;
  bool operator==(const NeighbourhoodTree&) const = default;
};

struct TreeOptions {
  // Maximum number of children expanded per vertex; unlimited when empty.
  std::optional<std::size_t> max_fanout;
};

NeighbourhoodTree build_ntree(const KnowledgeBase& kb, EntityId root, std::size_t depth, const TreeOptions& options = {});
NeighbourhoodTree build_ntree(const KnowledgeBase& kb, std::string_view root, std::size_t depth,
                              const TreeOptions& options = {});

// Trees for the given roots, built concurrently. Output order follows `roots`.
std::vector<NeighbourhoodTree> build_ntrees(const KnowledgeBase& kb, const std::vector<EntityId>& roots,
                                            std::size_t depth, const TreeOptions& options = {});

// Indented text dump: one line per vertex, ordered by level then position.
std::string dump_tree(const KnowledgeBase& kb, const NeighbourhoodTree& tree);

struct TypeLevelProfile {
  std::size_t vertex_count = 0;
  // attribute -> value -> relative frequency among that attribute's occurrences
  std::map<AttrId, std::map<ValueId, double>> discrete;
  // attribute -> mean over vertices carrying it
  std::map<AttrId, double> numeric_mean;
};

struct LevelProfile {
  std::size_t vertex_count = 0;
  std::map<TypeId, TypeLevelProfile> types;
  // relation -> share of edges entering this level
  std::map<RelId, double> edges;
  // entity -> share of this level's vertices
  std::map<EntityId, double> identities;
};

struct FrequencyProfile {
  std::vector<LevelProfile> levels;
};

FrequencyProfile frequency_profile(const NeighbourhoodTree& tree);

}  // namespace relatent
