#include "relatent/latent.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "relatent/parallel.hpp"

namespace relatent {

std::size_t KPolicy::resolve(const SimilarityMatrix& m) const {
  if (automatic) return select_k_silhouette(m);
  if (!fixed || *fixed == 0) throw ConfigError("cluster-count policy needs a positive k or automatic selection");
  return std::min(*fixed, m.size());
}

std::string KPolicy::describe() const {
  if (automatic) return "auto";
  return fixed ? std::to_string(*fixed) : "unset";
}

std::vector<ObjectSet> ObjectSet::enumerate(const KnowledgeBase& kb) {
  std::vector<ObjectSet> sets;
  const Schema& schema = kb.schema();
  for (TypeId t = 0; t < schema.types().size(); ++t) {
    if (!kb.entities_of_type(t).empty()) sets.push_back({TargetKind::entity_type, t, "e:" + schema.type_name(t), schema.type_fact_name(t)});
  }
  for (RelId r = 0; r < schema.relations().size(); ++r) {
    if (!kb.facts_of(r).empty()) sets.push_back({TargetKind::relation, r, "r:" + schema.relations()[r].name, schema.relations()[r].name});
  }
  std::sort(sets.begin(), sets.end(), [](const ObjectSet& a, const ObjectSet& b) { return a.key < b.key; });
  return sets;
}

std::string latent_predicate_name(const ObjectSet& set, const SimilarityInterpretation& interp, std::size_t depth,
                                  std::size_t cluster_index) {
  return "latent_" + set.name + "_" + interp.name() + "_" + std::to_string(depth) + "_c" + std::to_string(cluster_index);
}

std::vector<RelationObject> relation_objects(const KnowledgeBase& kb, std::string_view relation, std::size_t depth,
                                             const TreeOptions& options) {
  auto r = kb.schema().find_relation(relation);
  if (!r) throw std::invalid_argument("unknown relation '" + std::string(relation) + "'");
  std::vector<RelationObject> out;
  const std::uint32_t first = kb.first_fact_of(*r);
  const auto facts = kb.facts_of(*r);
  for (std::uint32_t i = 0; i < facts.size(); ++i) {
    RelationObject obj{first + i, kb.fact_id(first + i), {}};
    for (EntityId arg : facts[i].arguments) obj.arguments.push_back(build_ntree(kb, arg, depth, options));
    out.push_back(std::move(obj));
  }
  return out;
}

double relation_object_similarity(const KnowledgeBase& kb, const RelationObject& a, const RelationObject& b,
                                  const SimilarityInterpretation& interp) {
  if (a.arguments.size() != b.arguments.size()) throw std::invalid_argument("relation objects of different arity");
  double sum = 0.0;
  for (std::size_t p = 0; p < a.arguments.size(); ++p) {
    sum += combined_similarity(core_similarities(a.arguments[p], b.arguments[p], kb), interp);
  }
  return sum / static_cast<double>(a.arguments.size());
}

namespace {

struct DepthContext {
  std::size_t depth;
  TreeEncoder encoder;
  std::vector<TreeEncoding> encodings;  // indexed by EntityId
};

struct Candidate {
  const ObjectSet* set;
  const SimilarityInterpretation* interp;
  const DepthContext* context;
  Clustering clustering;
};

SimilarityMatrix candidate_matrix(const KnowledgeBase& kb, const Candidate& c) {
  const DepthContext& ctx = *c.context;
  const SimilarityInterpretation& interp = *c.interp;
  auto entity_similarity = [&](EntityId x, EntityId y) {
    return combined_similarity(ctx.encoder.compare(ctx.encodings[x], ctx.encodings[y]), interp);
  };
  if (c.set->kind == TargetKind::entity_type) {
    const auto members = kb.entities_of_type(c.set->id);
    std::vector<std::string> ids;
    for (EntityId e : members) ids.push_back(kb.entity_name(e));
    return SimilarityMatrix::from_pairs(
        std::move(ids), [&](std::size_t i, std::size_t j) { return entity_similarity(members[i], members[j]); }, false);
  }
  const auto facts = kb.facts_of(c.set->id);
  const std::uint32_t first = kb.first_fact_of(c.set->id);
  std::vector<std::string> ids;
  for (std::uint32_t i = 0; i < facts.size(); ++i) ids.push_back(kb.fact_id(first + i));
  return SimilarityMatrix::from_pairs(
      std::move(ids),
      [&](std::size_t i, std::size_t j) {
        const auto& a = facts[i].arguments;
        const auto& b = facts[j].arguments;
        double sum = 0.0;
        for (std::size_t p = 0; p < a.size(); ++p) sum += entity_similarity(a[p], b[p]);
        return sum / static_cast<double>(a.size());
      },
      false);
}

}  // namespace

LatentRepresentation learn_latent(const KnowledgeBase& kb, const std::vector<SimilarityInterpretation>& interps,
                                  const std::vector<std::size_t>& depths, double alpha, const KPolicy& k_policy,
                                  std::uint64_t seed, const LearnOptions& options) {
  if (interps.empty()) throw std::invalid_argument("learn_latent needs at least one similarity interpretation");
  if (depths.empty()) throw std::invalid_argument("learn_latent needs at least one depth");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (kb.entity_count() == 0) throw std::invalid_argument("learn_latent on an empty knowledge base");

  std::vector<std::size_t> sorted_depths = depths;
  std::sort(sorted_depths.begin(), sorted_depths.end());
  sorted_depths.erase(std::unique(sorted_depths.begin(), sorted_depths.end()), sorted_depths.end());

  std::vector<EntityId> all(kb.entity_count());
  for (EntityId e = 0; e < all.size(); ++e) all[e] = e;
  std::vector<DepthContext> contexts;
  contexts.reserve(sorted_depths.size());
  for (std::size_t d : sorted_depths) {
    DepthContext ctx{d, TreeEncoder(kb, d), {}};
    ctx.encodings.resize(all.size());
    parallel_for(
        all.size(), [&](std::size_t e) { ctx.encodings[e] = ctx.encoder.encode(build_ntree(kb, all[e], d, options.tree)); },
        options.parallel);
    contexts.push_back(std::move(ctx));
  }

  const std::vector<ObjectSet> sets = ObjectSet::enumerate(kb);
  std::vector<Candidate> candidates;
  for (const auto& set : sets) {
    for (const auto& interp : interps) {
      for (const auto& ctx : contexts) candidates.push_back({&set, &interp, &ctx, {}});
    }
  }

  parallel_for(
      candidates.size(),
      [&](std::size_t i) {
        Candidate& c = candidates[i];
        const SimilarityMatrix m = candidate_matrix(kb, c);
        c.clustering = cluster(m, k_policy.resolve(m), seed);
        c.clustering.provenance = {c.interp->name(), c.context->depth, c.set->kind,
                                   c.set->kind == TargetKind::entity_type ? kb.schema().type_name(c.set->id)
                                                                          : kb.schema().relations()[c.set->id].name};
      },
      options.parallel);

  LatentRepresentation rep;
  rep.alpha = alpha;
  std::map<std::string, std::vector<std::size_t>> accepted_by_set;  // object-set key -> indices into rep.accepted
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Candidate& c = candidates[i];
    CandidateRecord record{i, c.set->key, c.interp->name(), c.context->depth, c.clustering.cluster_count, std::nullopt, false};
    auto& previous = accepted_by_set[c.set->key];
    for (std::size_t a : previous) {
      const double ari = adjusted_rand_index(c.clustering, rep.accepted[a]);
      record.max_ari = record.max_ari ? std::max(*record.max_ari, ari) : ari;
    }
    record.accepted = !record.max_ari || *record.max_ari <= alpha;
    if (record.accepted) {
      previous.push_back(rep.accepted.size());
      rep.accepted.push_back(c.clustering);
      const auto clusters = c.clustering.clusters();
      for (std::size_t k = 0; k < clusters.size(); ++k) {
        LatentPredicate p;
        p.name = latent_predicate_name(*c.set, *c.interp, c.context->depth, k);
        p.kind = c.set->kind;
        p.target = c.clustering.provenance.target;
        p.members = clusters[k];
        std::sort(p.members.begin(), p.members.end());
        p.provenance = {*c.interp, c.context->depth, k, c.set->key};
        rep.predicates.push_back(std::move(p));
      }
    }
    rep.log.push_back(std::move(record));
  }
  return rep;
}

KnowledgeBase export_latent_kb(const KnowledgeBase& kb, const LatentRepresentation& rep) {
  const Schema& original = kb.schema();
  Schema::Builder sb;
  for (const auto& t : original.types()) sb.add_type(t);
  if (original.label_type()) sb.set_label_type(original.type_name(*original.label_type()));

  std::map<std::string, std::uint32_t> fact_by_id;
  for (std::uint32_t f = 0; f < kb.relation_facts().size(); ++f) fact_by_id.emplace(kb.fact_id(f), f);

  for (const auto& p : rep.predicates) {
    if (p.kind == TargetKind::entity_type) {
      sb.add_unary(p.name, p.target);
    } else {
      auto r = original.find_relation(p.target);
      if (!r) throw std::invalid_argument("latent predicate over unknown relation '" + p.target + "'");
      std::vector<std::string> types;
      for (TypeId t : original.relations()[*r].arguments) types.push_back(original.type_name(t));
      sb.add_relation(p.name, types);
    }
  }

  KnowledgeBase::Builder b(sb.build());
  for (EntityId e = 0; e < kb.entity_count(); ++e) b.add_entity(kb.entity_name(e), original.type_name(kb.entity_type(e)));
  for (const auto& p : rep.predicates) {
    for (const auto& member : p.members) {
      if (p.kind == TargetKind::entity_type) {
        b.add_unary(p.name, member);
      } else {
        auto it = fact_by_id.find(member);
        if (it == fact_by_id.end()) throw std::invalid_argument("latent member '" + member + "' is not a fact of the knowledge base");
        std::vector<std::string> args;
        for (EntityId a : kb.relation_facts()[it->second].arguments) args.push_back(kb.entity_name(a));
        b.add_relation(p.name, args);
      }
    }
  }
  for (EntityId e = 0; e < kb.entity_count(); ++e) {
    if (auto l = kb.label_of(e)) b.set_label(kb.entity_name(e), kb.label_names()[*l]);
  }
  return b.build();
}

}  // namespace relatent
