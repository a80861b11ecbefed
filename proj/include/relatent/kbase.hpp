#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relatent/error.hpp"

namespace relatent {

using TypeId = std::uint32_t;
using AttrId = std::uint32_t;
using RelId = std::uint32_t;
using UnaryId = std::uint32_t;
using EntityId = std::uint32_t;
using ValueId = std::uint32_t;
using LabelId = std::uint32_t;

enum class ValueKind { discrete, numeric };

struct AttributeDecl {
  std::string name;
  TypeId subject;
  ValueKind kind;
};

struct RelationDecl {
  std::string name;
  std::vector<TypeId> arguments;
};

// Unary predicate over one entity type. Used for latent predicates minted
// over entity clusters; original data may declare them too.
struct UnaryDecl {
  std::string name;
  TypeId subject;
};

enum class PredicateKind { entity_type, attribute, relation, unary, label };

struct PredicateRef {
  PredicateKind kind;
  std::uint32_t id;
};

// Typed vocabulary of a knowledge base. Every category is stored sorted by
// name; ids are positions in those sorted lists.
class Schema {
 public:
  class Builder {
   public:
    Builder& add_type(std::string name);
    Builder& add_attribute(std::string name, std::string_view subject_type, ValueKind kind);
    Builder& add_relation(std::string name, const std::vector<std::string>& argument_types);
    Builder& add_unary(std::string name, std::string_view subject_type);
    Builder& set_label_type(std::string_view type);
    Schema build() const;

   private:
    friend class Schema;
    struct Pending {
      std::string name;
      std::vector<std::string> types;
      ValueKind kind = ValueKind::discrete;
      std::size_t line = 0;
    };
    std::vector<Pending> types_, attributes_, relations_, unaries_;
    std::optional<Pending> label_;
    std::size_t line_ = 0;
  };

  static Schema parse(std::string_view text);

  std::span<const std::string> types() const { return types_; }
  std::span<const AttributeDecl> attributes() const { return attributes_; }
  std::span<const RelationDecl> relations() const { return relations_; }
  std::span<const UnaryDecl> unaries() const { return unaries_; }
  std::optional<TypeId> label_type() const { return label_type_; }

  const std::string& type_name(TypeId t) const { return types_.at(t); }
  // Lower-cased type name used for entity declarations in fact files.
  const std::string& type_fact_name(TypeId t) const { return type_fact_names_.at(t); }

  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<TypeId> find_type_by_fact_name(std::string_view name) const;
  std::optional<AttrId> find_attribute(std::string_view name) const;
  std::optional<RelId> find_relation(std::string_view name) const;
  std::optional<UnaryId> find_unary(std::string_view name) const;
  // Resolves any predicate name usable in a fact file.
  std::optional<PredicateRef> find_predicate(std::string_view name) const;

  std::string serialize() const;

  bool operator==(const Schema& other) const;

 private:
  std::vector<std::string> types_;
  std::vector<std::string> type_fact_names_;
  std::vector<AttributeDecl> attributes_;
  std::vector<RelationDecl> relations_;
  std::vector<UnaryDecl> unaries_;
  std::optional<TypeId> label_type_;
  std::unordered_map<std::string, PredicateRef> predicate_index_;
  std::unordered_map<std::string, TypeId> type_index_;
};

struct AttrFact {
  AttrId attribute;
  ValueKind kind = ValueKind::discrete;
  ValueId value = 0;    // discrete attributes
  double number = 0.0;  // numeric attributes

  bool operator==(const AttrFact&) const = default;
};

struct RelationFact {
  RelId relation;
  std::vector<EntityId> arguments;

  bool operator==(const RelationFact&) const = default;
  auto operator<=>(const RelationFact&) const = default;
};

// One endpoint of a relation fact touching an entity.
struct Incidence {
  std::uint32_t fact;
  std::uint32_t position;
};

struct Grounding {
  std::string predicate;
  std::vector<std::string> arguments;

  bool operator==(const Grounding&) const = default;
  auto operator<=>(const Grounding&) const = default;
};

// Immutable, fully indexed relational knowledge base. Entity ids follow
// lexicographic order of entity names.
class KnowledgeBase {
 public:
  // Programmatic construction with the same validation as the parser.
  class Builder {
   public:
    explicit Builder(Schema schema);

    Builder& add_entity(std::string_view name, std::string_view type);
    Builder& add_attribute(std::string_view entity, std::string_view attribute, std::string_view value);
    Builder& add_relation(std::string_view relation, const std::vector<std::string>& arguments);
    Builder& add_unary(std::string_view predicate, std::string_view entity);
    Builder& set_label(std::string_view entity, std::string_view label);
    KnowledgeBase build();

    // Location attached to errors raised by subsequent calls.
    void set_location(std::size_t line, std::size_t column) {
      line_ = line;
      column_ = column;
    }

   private:
    [[noreturn]] void fail(ParseErrorKind kind, const std::string& message) const;
    TypeId entity_type(std::string_view entity) const;

    Schema schema_;
    std::map<std::string, TypeId, std::less<>> entities_;
    struct RawAttr {
      std::string entity;
      AttrId attribute;
      std::string value;
      double number;
    };
    std::vector<RawAttr> attrs_;
    std::vector<std::pair<RelId, std::vector<std::string>>> relations_;
    std::vector<std::pair<UnaryId, std::string>> unaries_;
    std::map<std::string, std::string, std::less<>> labels_;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
  };

  static KnowledgeBase parse(std::string_view schema_text, std::string_view facts_text);
  static KnowledgeBase parse(const Schema& schema, std::string_view facts_text);

  const Schema& schema() const { return schema_; }

  std::size_t entity_count() const { return entity_names_.size(); }
  const std::string& entity_name(EntityId e) const { return entity_names_.at(e); }
  TypeId entity_type(EntityId e) const { return entity_types_.at(e); }
  std::optional<EntityId> find_entity(std::string_view name) const;
  std::vector<EntityId> entities_of_type(TypeId t) const;

  std::span<const AttrFact> attributes_of(EntityId e) const { return attr_facts_.at(e); }
  std::size_t attribute_fact_count() const;
  const std::string& discrete_value(AttrId a, ValueId v) const { return discrete_values_.at(a).at(v); }
  std::size_t discrete_value_count(AttrId a) const { return discrete_values_.at(a).size(); }
  // max - min over every value of a numeric attribute; 0 when fewer than two facts.
  double numeric_range(AttrId a) const { return numeric_ranges_.at(a); }

  std::span<const RelationFact> relation_facts() const { return relation_facts_; }
  std::span<const RelationFact> facts_of(RelId r) const;
  std::uint32_t first_fact_of(RelId r) const { return relation_offsets_.at(r); }
  std::span<const Incidence> incidences(EntityId e) const { return adjacency_.at(e); }
  std::string fact_id(std::uint32_t fact) const;

  std::span<const EntityId> unary_members(UnaryId u) const { return unary_facts_.at(u); }

  bool has_labels() const { return !label_names_.empty(); }
  std::span<const std::string> label_names() const { return label_names_; }
  std::optional<LabelId> label_of(EntityId e) const { return entity_labels_.at(e); }

  // True groundings of any declared predicate, sorted by argument tuple.
  std::vector<Grounding> groundings(std::string_view predicate) const;
  std::size_t grounding_count(std::string_view predicate) const;

  // Canonical fact text; parse(schema.serialize(), serialize_facts()) reproduces this KB.
  std::string serialize_facts() const;

 private:
  KnowledgeBase() = default;

  Schema schema_;
  std::vector<std::string> entity_names_;
  std::vector<TypeId> entity_types_;
  std::unordered_map<std::string, EntityId> entity_index_;
  std::vector<std::vector<AttrFact>> attr_facts_;
  std::vector<std::vector<std::string>> discrete_values_;
  std::vector<double> numeric_ranges_;
  std::vector<RelationFact> relation_facts_;
  std::vector<std::uint32_t> relation_offsets_;  // size relations + 1
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<std::vector<EntityId>> unary_facts_;
  std::vector<std::string> label_names_;
  std::vector<std::optional<LabelId>> entity_labels_;
};

// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace relatent
