#pragma once

// Shared fixtures and independent reference implementations for the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relatent/kbase.hpp"
#include "relatent/ntree.hpp"
#include "relatent/similarity.hpp"

namespace relatent::testing {

// Three professors: A and B advise two students and teach one course, C
// advises one student, teaches one course and belongs to a research group.
inline const char* kProfessorsSchema =
    "type Person.\n"
    "type Course.\n"
    "type Group.\n"
    "attribute position(Person, discrete).\n"
    "relation advisedBy(Person, Person).\n"
    "relation teaches(Person, Course).\n"
    "relation member(Person, Group).\n"
    "label Person.\n";

inline const char* kProfessorsFacts =
    "person(profA). person(profB). person(profC).\n"
    "person(s1). person(s2). person(s3). person(s4). person(s5).\n"
    "course(c1). course(c2). course(c3).\n"
    "group(g1).\n"
    "position(profA, faculty). position(profB, faculty). position(profC, faculty).\n"
    "advisedBy(s1, profA). advisedBy(s2, profA). teaches(profA, c1).\n"
    "advisedBy(s3, profB). advisedBy(s4, profB). teaches(profB, c2).\n"
    "advisedBy(s5, profC). teaches(profC, c3). member(profC, g1).\n"
    "label(profA, professor). label(profB, professor). label(profC, professor).\n"
    "label(s1, student). label(s2, student). label(s3, student). label(s4, student). label(s5, student).\n";

inline KnowledgeBase professors_kb() { return KnowledgeBase::parse(kProfessorsSchema, kProfessorsFacts); }

// a - b - c
inline KnowledgeBase chain_kb() {
  return KnowledgeBase::parse("type Node.\nrelation link(Node, Node).\n",
                              "node(a). node(b). node(c).\nlink(a, b). link(b, c).\n");
}

// Calls fn(assignment) for every set partition of n objects, as restricted
// growth strings.
template <typename Fn>
void for_each_partition(std::size_t n, Fn&& fn) {
  std::vector<std::size_t> a(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == n) {
      fn(a);
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      a[i] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) {
    fn(a);
    return;
  }
  a[0] = 0;
  rec(rec, 1, 1);
}

// Pair-counting ARI over all object pairs (Hubert-Arabie form).
inline double ari_pair_oracle(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  if (x == y) return 1.0;
  // Identical up to relabeling is also 1.
  double ss = 0, sd = 0, ds = 0, dd = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const bool a = x[i] == x[j], b = y[i] == y[j];
      if (a && b) ++ss;
      else if (a) ++sd;
      else if (b) ++ds;
      else ++dd;
    }
  }
  if (sd == 0 && ds == 0) return 1.0;
  const double den = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
  if (den == 0.0) return 0.0;
  return 2.0 * (ss * dd - sd * ds) / den;
}

// Core similarities computed from sparse frequency profiles, without the
// dense encoding or the vector kernels.
inline CoreSimVector reference_similarities(const NeighbourhoodTree& t1, const NeighbourhoodTree& t2,
                                            const KnowledgeBase& kb) {
  const FrequencyProfile p1 = frequency_profile(t1), p2 = frequency_profile(t2);
  const Schema& schema = kb.schema();
  const std::size_t d = t1.depth;

  struct LevelAttrs {
    std::map<AttrId, std::map<ValueId, double>> discrete;
    std::map<AttrId, double> numeric;
  };
  auto attrs_at = [](const LevelProfile& lp) {
    LevelAttrs out;
    for (const auto& [type, tp] : lp.types) {
      for (const auto& [a, dist] : tp.discrete) out.discrete[a] = dist;
      for (const auto& [a, m] : tp.numeric_mean) out.numeric[a] = m;
    }
    return out;
  };
  // Returns -1 when no attribute occurs on either side.
  auto attr_score = [&](const LevelProfile& l1, const LevelProfile& l2) {
    const LevelAttrs a = attrs_at(l1), b = attrs_at(l2);
    std::set<AttrId> all;
    for (const auto& [k, v] : a.discrete) all.insert(k);
    for (const auto& [k, v] : b.discrete) all.insert(k);
    for (const auto& [k, v] : a.numeric) all.insert(k);
    for (const auto& [k, v] : b.numeric) all.insert(k);
    if (all.empty()) return -1.0;
    double sum = 0.0;
    for (AttrId attr : all) {
      if (schema.attributes()[attr].kind == ValueKind::numeric) {
        if (!a.numeric.count(attr) || !b.numeric.count(attr)) continue;
        const double diff = std::fabs(a.numeric.at(attr) - b.numeric.at(attr));
        const double range = kb.numeric_range(attr);
        sum += range <= 0.0 ? (diff == 0.0 ? 1.0 : 0.0) : std::max(0.0, 1.0 - diff / range);
      } else {
        if (!a.discrete.count(attr) || !b.discrete.count(attr)) continue;
        std::map<ValueId, double> diff = a.discrete.at(attr);
        for (auto& [v, f] : diff) f = -f;
        for (const auto& [v, f] : b.discrete.at(attr)) diff[v] += f;
        double tv = 0.0;
        for (const auto& [v, f] : diff) tv += std::fabs(f);
        sum += std::max(0.0, 1.0 - 0.5 * tv);
      }
    }
    return sum / static_cast<double>(all.size());
  };

  CoreSimVector v;
  const double root = attr_score(p1.levels[0], p2.levels[0]);
  v[CoreSimilarity::root_attributes] = root < 0 ? 1.0 : root;

  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    const double s = attr_score(p1.levels[k], p2.levels[k]);
    if (s < 0) continue;
    num += s / static_cast<double>(k);
    den += 1.0 / static_cast<double>(k);
  }
  v[CoreSimilarity::neighbour_attributes] = den > 0 ? num / den : 1.0;

  if (t1.root == t2.root) {
    v[CoreSimilarity::connectivity] = 1.0;
  } else {
    auto share = [&](const NeighbourhoodTree& t, EntityId other) {
      double hits = 0, total = 0;
      for (std::size_t k = 1; k <= d; ++k) {
        for (const auto& vx : t.levels[k]) hits += vx.entity == other ? 1 : 0;
        total += static_cast<double>(t.levels[k].size());
      }
      return total > 0 ? hits / total : 0.0;
    };
    v[CoreSimilarity::connectivity] = 0.5 * (share(t1, t2.root) + share(t2, t1.root));
  }

  if (d == 0) {
    v[CoreSimilarity::vertex_identities] = t1.root == t2.root ? 1.0 : 0.0;
    v[CoreSimilarity::edge_types] = 1.0;
    return v;
  }
  double ids = 0.0, edges = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    const auto& l1 = t1.levels[k];
    const auto& l2 = t2.levels[k];
    if (l1.empty() && l2.empty()) {
      ids += 1.0;
      edges += 1.0;
      continue;
    }
    if (l1.empty() || l2.empty()) continue;
    std::map<EntityId, double> c1, c2;
    for (const auto& vx : l1) c1[vx.entity] += 1;
    for (const auto& vx : l2) c2[vx.entity] += 1;
    double mn = 0, mx = 0;
    std::set<EntityId> keys;
    for (const auto& [e, c] : c1) keys.insert(e);
    for (const auto& [e, c] : c2) keys.insert(e);
    for (EntityId e : keys) {
      const double a = c1.count(e) ? c1[e] : 0.0, b = c2.count(e) ? c2[e] : 0.0;
      mn += std::min(a, b);
      mx += std::max(a, b);
    }
    ids += mn / mx;
    const auto& e1 = p1.levels[k].edges;
    const auto& e2 = p2.levels[k].edges;
    std::set<RelId> rels;
    for (const auto& [r, f] : e1) rels.insert(r);
    for (const auto& [r, f] : e2) rels.insert(r);
    double tv = 0.0;
    for (RelId r : rels) tv += std::fabs((e1.count(r) ? e1.at(r) : 0.0) - (e2.count(r) ? e2.at(r) : 0.0));
    edges += std::max(0.0, 1.0 - 0.5 * tv);
  }
  v[CoreSimilarity::vertex_identities] = ids / static_cast<double>(d);
  v[CoreSimilarity::edge_types] = edges / static_cast<double>(d);
  return v;
}

}  // namespace relatent::testing
