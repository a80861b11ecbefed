#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relatent/clustering.hpp"
#include "relatent/kbase.hpp"
#include "relatent/ntree.hpp"
#include "relatent/similarity.hpp"

namespace relatent {

// How many clusters each candidate clustering gets.
struct KPolicy {
  std::optional<std::size_t> fixed;  // clamped to the object count
  bool automatic = false;            // silhouette selection over [2, ceil(sqrt(n))]

  static KPolicy fixed_k(std::size_t k) { return {k, false}; }
  static KPolicy silhouette() { return {std::nullopt, true}; }
  std::size_t resolve(const SimilarityMatrix& m) const;
  std::string describe() const;
};

struct LatentProvenance {
  SimilarityInterpretation interpretation;
  std::size_t depth = 0;
  std::size_t cluster_index = 0;
  std::string object_set;  // see ObjectSet::id
};

struct LatentPredicate {
  std::string name;
  TargetKind kind = TargetKind::entity_type;  // unary over a type, or over the facts of a relation
  std::string target;                         // entity type or relation name
  std::vector<std::string> members;           // entity names or relation-fact ids, sorted
  LatentProvenance provenance;
};

struct CandidateRecord {
  std::size_t index = 0;
  std::string object_set;
  std::string interpretation;
  std::size_t depth = 0;
  std::size_t cluster_count = 0;
  std::optional<double> max_ari;  // against accepted clusterings of the same object set
  bool accepted = false;
};

struct LatentRepresentation {
  double alpha = 1.0;
  std::vector<Clustering> accepted;
  std::vector<LatentPredicate> predicates;
  std::vector<CandidateRecord> log;
};

// A group of objects clustered together: all entities of one type, or all
// facts of one relation. Ids sort entity types ("e:<Type>") before relations
// ("r:<relation>").
struct ObjectSet {
  TargetKind kind;
  std::uint32_t id;  // TypeId or RelId
  std::string key;   // e:<Type> / r:<relation>
  std::string name;  // component used in predicate names

  static std::vector<ObjectSet> enumerate(const KnowledgeBase& kb);
};

struct LearnOptions {
  TreeOptions tree;
  bool parallel = true;
};

// One candidate per (object set, interpretation, depth), produced in that
// order of precedence; a candidate is accepted iff its ARI with every accepted
// clustering of the same object set is <= alpha.
LatentRepresentation learn_latent(const KnowledgeBase& kb, const std::vector<SimilarityInterpretation>& interps,
                                  const std::vector<std::size_t>& depths, double alpha, const KPolicy& k_policy,
                                  std::uint64_t seed, const LearnOptions& options = {});

// One relation fact seen through the neighbourhood trees of its arguments.
struct RelationObject {
  std::uint32_t fact;
  std::string id;
  std::vector<NeighbourhoodTree> arguments;
};

std::vector<RelationObject> relation_objects(const KnowledgeBase& kb, std::string_view relation, std::size_t depth,
                                             const TreeOptions& options = {});

// Mean over argument positions of the combined similarity of the argument trees.
double relation_object_similarity(const KnowledgeBase& kb, const RelationObject& a, const RelationObject& b,
                                  const SimilarityInterpretation& interp);

std::string latent_predicate_name(const ObjectSet& set, const SimilarityInterpretation& interp, std::size_t depth,
                                  std::size_t cluster_index);

// Knowledge base holding only the latent predicates (plus entity declarations and labels).
KnowledgeBase export_latent_kb(const KnowledgeBase& kb, const LatentRepresentation& rep);

}  // namespace relatent
