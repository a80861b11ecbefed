#include "relatent/kbase.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace relatent {

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string& what)
    : Error(line == 0 ? what
                      : "line " + std::to_string(line) +
                            (column ? ", column " + std::to_string(column) : std::string{}) + ": " + what),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_arg_char(char c) {
  return is_ident_char(c) || c == '-' || c == '+' || c == '.' || c == ':' || c == '\'';
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Character cursor with 1-based line/column tracking; '%' starts a comment.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_blank();
    return pos_ >= text_.size();
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(ParseErrorKind::syntax, line_, column_, message);
  }

  void expect(char c) {
    skip_blank();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'" +
           (pos_ < text_.size() ? std::string(" but found '") + text_[pos_] + "'" : std::string(" at end of input")));
    }
    advance();
  }

  bool accept(char c) {
    skip_blank();
    if (pos_ < text_.size() && text_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_blank();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string argument() {
    skip_blank();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_arg_char(text_[pos_])) advance();
    if (pos_ == start) fail("expected argument");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<std::string> argument_list() {
    expect('(');
    std::vector<std::string> args;
    args.push_back(argument());
    while (accept(',')) args.push_back(argument());
    expect(')');
    return args;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

// ---------------------------------------------------------------- Schema

Schema::Builder& Schema::Builder::add_type(std::string name) {
  types_.push_back({std::move(name), {}, ValueKind::discrete, line_});
  return *this;
}

Schema::Builder& Schema::Builder::add_attribute(std::string name, std::string_view subject_type, ValueKind kind) {
  attributes_.push_back({std::move(name), {std::string(subject_type)}, kind, line_});
  return *this;
}

Schema::Builder& Schema::Builder::add_relation(std::string name, const std::vector<std::string>& argument_types) {
  relations_.push_back({std::move(name), argument_types, ValueKind::discrete, line_});
  return *this;
}

Schema::Builder& Schema::Builder::add_unary(std::string name, std::string_view subject_type) {
  unaries_.push_back({std::move(name), {std::string(subject_type)}, ValueKind::discrete, line_});
  return *this;
}

Schema::Builder& Schema::Builder::set_label_type(std::string_view type) {
  if (label_) throw ParseError(ParseErrorKind::duplicate, line_, 0, "label type declared twice");
  label_ = Pending{"label", {std::string(type)}, ValueKind::discrete, line_};
  return *this;
}

Schema Schema::Builder::build() const {
  Schema s;
  auto by_name = [](const Pending& a, const Pending& b) { return a.name < b.name; };

  auto types = types_;
  std::sort(types.begin(), types.end(), by_name);
  for (const auto& t : types) {
    if (s.type_index_.count(t.name)) throw ParseError(ParseErrorKind::duplicate, t.line, 0, "duplicate type '" + t.name + "'");
    s.type_index_.emplace(t.name, static_cast<TypeId>(s.types_.size()));
    s.types_.push_back(t.name);
    s.type_fact_names_.push_back(lower(t.name));
  }

  auto claim = [&s](const std::string& name, PredicateRef ref, std::size_t line) {
    if (name == "label" || !s.predicate_index_.emplace(name, ref).second) {
      throw ParseError(ParseErrorKind::duplicate, line, 0, "predicate name '" + name + "' already in use");
    }
  };
  auto resolve = [&s](const Pending& p, const std::string& type) {
    auto it = s.type_index_.find(type);
    if (it == s.type_index_.end()) {
      throw ParseError(ParseErrorKind::unknown_name, p.line, 0, "unknown type '" + type + "' in declaration of '" + p.name + "'");
    }
    return it->second;
  };

  for (TypeId t = 0; t < s.types_.size(); ++t) {
    std::size_t line = 0;
    for (const auto& p : types_) if (p.name == s.types_[t]) line = p.line;
    claim(s.type_fact_names_[t], {PredicateKind::entity_type, t}, line);
  }

  auto attributes = attributes_;
  std::sort(attributes.begin(), attributes.end(), by_name);
  for (const auto& a : attributes) {
    auto id = static_cast<AttrId>(s.attributes_.size());
    claim(a.name, {PredicateKind::attribute, id}, a.line);
    s.attributes_.push_back({a.name, resolve(a, a.types.at(0)), a.kind});
  }

  auto relations = relations_;
  std::sort(relations.begin(), relations.end(), by_name);
  for (const auto& r : relations) {
    if (r.types.size() < 2) {
      throw ParseError(ParseErrorKind::arity_mismatch, r.line, 0, "relation '" + r.name + "' needs at least two arguments");
    }
    auto id = static_cast<RelId>(s.relations_.size());
    claim(r.name, {PredicateKind::relation, id}, r.line);
    RelationDecl decl{r.name, {}};
    for (const auto& t : r.types) decl.arguments.push_back(resolve(r, t));
    s.relations_.push_back(std::move(decl));
  }

  auto unaries = unaries_;
  std::sort(unaries.begin(), unaries.end(), by_name);
  for (const auto& u : unaries) {
    auto id = static_cast<UnaryId>(s.unaries_.size());
    claim(u.name, {PredicateKind::unary, id}, u.line);
    s.unaries_.push_back({u.name, resolve(u, u.types.at(0))});
  }

  if (label_) s.label_type_ = resolve(*label_, label_->types.at(0));
  return s;
}

Schema Schema::parse(std::string_view text) {
  Cursor cur(text);
  Builder b;
  while (!cur.at_end()) {
    b.line_ = cur.line();
    std::size_t column = cur.column();
    std::string keyword = cur.identifier();
    if (keyword == "type") {
      b.add_type(cur.identifier());
    } else if (keyword == "label") {
      b.set_label_type(cur.identifier());
    } else if (keyword == "attribute") {
      std::string name = cur.identifier();
      cur.expect('(');
      std::string subject = cur.identifier();
      cur.expect(',');
      std::string kind = cur.identifier();
      cur.expect(')');
      if (kind != "discrete" && kind != "numeric") {
        throw ParseError(ParseErrorKind::syntax, b.line_, column, "attribute kind must be 'discrete' or 'numeric', got '" + kind + "'");
      }
      b.add_attribute(name, subject, kind == "numeric" ? ValueKind::numeric : ValueKind::discrete);
    } else if (keyword == "relation" || keyword == "predicate") {
      std::string name = cur.identifier();
      cur.expect('(');
      std::vector<std::string> types{cur.identifier()};
      while (cur.accept(',')) types.push_back(cur.identifier());
      cur.expect(')');
      if (keyword == "predicate") {
        if (types.size() != 1) {
          throw ParseError(ParseErrorKind::arity_mismatch, b.line_, column, "predicate '" + name + "' must be unary");
        }
        b.add_unary(name, types[0]);
      } else {
        if (types.size() < 2) {
          throw ParseError(ParseErrorKind::arity_mismatch, b.line_, column, "relation '" + name + "' needs at least two arguments");
        }
        b.add_relation(name, types);
      }
    } else {
      throw ParseError(ParseErrorKind::syntax, b.line_, column, "unknown schema statement '" + keyword + "'");
    }
    cur.expect('.');
  }
  return b.build();
}

std::optional<TypeId> Schema::find_type(std::string_view name) const {
  auto it = type_index_.find(std::string(name));
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<PredicateRef> Schema::find_predicate(std::string_view name) const {
  if (name == "label") return PredicateRef{PredicateKind::label, 0};
  auto it = predicate_index_.find(std::string(name));
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeId> Schema::find_type_by_fact_name(std::string_view name) const {
  auto p = find_predicate(name);
  if (!p || p->kind != PredicateKind::entity_type) return std::nullopt;
  return p->id;
}
std::optional<AttrId> Schema::find_attribute(std::string_view name) const {
  auto p = find_predicate(name);
  if (!p || p->kind != PredicateKind::attribute) return std::nullopt;
  return p->id;
}
std::optional<RelId> Schema::find_relation(std::string_view name) const {
  auto p = find_predicate(name);
  if (!p || p->kind != PredicateKind::relation) return std::nullopt;
  return p->id;
}
std::optional<UnaryId> Schema::find_unary(std::string_view name) const {
  auto p = find_predicate(name);
  if (!p || p->kind != PredicateKind::unary) return std::nullopt;
  return p->id;
}

std::string Schema::serialize() const {
  std::ostringstream out;
  for (const auto& t : types_) out << "type " << t << ".\n";
  for (const auto& a : attributes_) {
    out << "attribute " << a.name << "(" << types_[a.subject] << ", "
        << (a.kind == ValueKind::numeric ? "numeric" : "discrete") << ").\n";
  }
  for (const auto& r : relations_) {
    out << "relation " << r.name << "(";
    for (std::size_t i = 0; i < r.arguments.size(); ++i) out << (i ? ", " : "") << types_[r.arguments[i]];
    out << ").\n";
  }
  for (const auto& u : unaries_) out << "predicate " << u.name << "(" << types_[u.subject] << ").\n";
  if (label_type_) out << "label " << types_[*label_type_] << ".\n";
  return out.str();
}

bool Schema::operator==(const Schema& other) const { return serialize() == other.serialize(); }

// ---------------------------------------------------------- KnowledgeBase

KnowledgeBase::Builder::Builder(Schema schema) : schema_(std::move(schema)) {}

void KnowledgeBase::Builder::fail(ParseErrorKind kind, const std::string& message) const {
  throw ParseError(kind, line_, column_, message);
}

TypeId KnowledgeBase::Builder::entity_type(std::string_view entity) const {
  auto it = entities_.find(entity);
  if (it == entities_.end()) fail(ParseErrorKind::unknown_name, "undeclared entity '" + std::string(entity) + "'");
  return it->second;
}

KnowledgeBase::Builder& KnowledgeBase::Builder::add_entity(std::string_view name, std::string_view type) {
  auto t = schema_.find_type(type);
  if (!t) t = schema_.find_type_by_fact_name(type);
  if (!t) fail(ParseErrorKind::unknown_name, "unknown type '" + std::string(type) + "'");
  if (!entities_.emplace(std::string(name), *t).second) {
    fail(ParseErrorKind::duplicate, "duplicate entity declaration '" + std::string(name) + "'");
  }
  return *this;
}

KnowledgeBase::Builder& KnowledgeBase::Builder::add_attribute(std::string_view entity, std::string_view attribute,
                                                              std::string_view value) {
  auto a = schema_.find_attribute(attribute);
  if (!a) fail(ParseErrorKind::unknown_name, "unknown attribute '" + std::string(attribute) + "'");
  const auto& decl = schema_.attributes()[*a];
  if (entity_type(entity) != decl.subject) {
    fail(ParseErrorKind::type_mismatch, "entity '" + std::string(entity) + "' is not of type " +
                                            schema_.type_name(decl.subject) + " required by '" + decl.name + "'");
  }
  double number = 0.0;
  if (decl.kind == ValueKind::numeric) {
    auto parsed = parse_double(value);
    if (!parsed) fail(ParseErrorKind::bad_value, "value '" + std::string(value) + "' of '" + decl.name + "' is not a finite number");
    number = *parsed;
  }
  attrs_.push_back({std::string(entity), *a, std::string(value), number});
  return *this;
}

KnowledgeBase::Builder& KnowledgeBase::Builder::add_relation(std::string_view relation,
                                                             const std::vector<std::string>& arguments) {
  auto r = schema_.find_relation(relation);
  if (!r) fail(ParseErrorKind::unknown_name, "unknown relation '" + std::string(relation) + "'");
  const auto& decl = schema_.relations()[*r];
  if (decl.arguments.size() != arguments.size()) {
    fail(ParseErrorKind::arity_mismatch, "relation '" + decl.name + "' expects " + std::to_string(decl.arguments.size()) +
                                             " arguments, got " + std::to_string(arguments.size()));
  }
  for (std::size_t i = 0; i < arguments.size(); ++i) {
    if (entity_type(arguments[i]) != decl.arguments[i]) {
      fail(ParseErrorKind::type_mismatch, "argument " + std::to_string(i + 1) + " of '" + decl.name + "' must be of type " +
                                              schema_.type_name(decl.arguments[i]));
    }
  }
  relations_.emplace_back(*r, arguments);
  return *this;
}

KnowledgeBase::Builder& KnowledgeBase::Builder::add_unary(std::string_view predicate, std::string_view entity) {
  auto u = schema_.find_unary(predicate);
  if (!u) fail(ParseErrorKind::unknown_name, "unknown predicate '" + std::string(predicate) + "'");
  if (entity_type(entity) != schema_.unaries()[*u].subject) {
    fail(ParseErrorKind::type_mismatch, "entity '" + std::string(entity) + "' has the wrong type for '" + std::string(predicate) + "'");
  }
  unaries_.emplace_back(*u, std::string(entity));
  return *this;
}

KnowledgeBase::Builder& KnowledgeBase::Builder::set_label(std::string_view entity, std::string_view label) {
  if (!schema_.label_type()) fail(ParseErrorKind::unknown_name, "label fact but the schema declares no label type");
  if (entity_type(entity) != *schema_.label_type()) {
    fail(ParseErrorKind::type_mismatch, "entity '" + std::string(entity) + "' is not of the label type " +
                                            schema_.type_name(*schema_.label_type()));
  }
  auto [it, inserted] = labels_.emplace(std::string(entity), std::string(label));
  if (!inserted && it->second != label) {
    fail(ParseErrorKind::duplicate, "entity '" + std::string(entity) + "' has conflicting labels");
  }
  return *this;
}

KnowledgeBase KnowledgeBase::Builder::build() {
  KnowledgeBase kb;
  kb.schema_ = schema_;
  const auto& schema = kb.schema_;

  for (const auto& [name, type] : entities_) {
    kb.entity_index_.emplace(name, static_cast<EntityId>(kb.entity_names_.size()));
    kb.entity_names_.push_back(name);
    kb.entity_types_.push_back(type);
  }
  const std::size_t n = kb.entity_names_.size();
  auto id_of = [&kb](const std::string& name) { return kb.entity_index_.at(name); };

  // Discrete value dictionaries, sorted per attribute.
  const std::size_t attr_count = schema.attributes().size();
  std::vector<std::set<std::string>> values(attr_count);
  for (const auto& raw : attrs_) {
    if (schema.attributes()[raw.attribute].kind == ValueKind::discrete) values[raw.attribute].insert(raw.value);
  }
  kb.discrete_values_.resize(attr_count);
  for (std::size_t a = 0; a < attr_count; ++a) kb.discrete_values_[a].assign(values[a].begin(), values[a].end());

  kb.attr_facts_.assign(n, {});
  std::vector<double> lo(attr_count, std::numeric_limits<double>::infinity());
  std::vector<double> hi(attr_count, -std::numeric_limits<double>::infinity());
  for (const auto& raw : attrs_) {
    AttrFact f{raw.attribute, schema.attributes()[raw.attribute].kind, 0, 0.0};
    if (f.kind == ValueKind::discrete) {
      const auto& dict = kb.discrete_values_[raw.attribute];
      f.value = static_cast<ValueId>(std::lower_bound(dict.begin(), dict.end(), raw.value) - dict.begin());
    } else {
      f.number = raw.number;
      lo[raw.attribute] = std::min(lo[raw.attribute], raw.number);
      hi[raw.attribute] = std::max(hi[raw.attribute], raw.number);
    }
    kb.attr_facts_[id_of(raw.entity)].push_back(f);
  }
  for (EntityId e = 0; e < n; ++e) {
    auto& facts = kb.attr_facts_[e];
    std::sort(facts.begin(), facts.end(), [](const AttrFact& x, const AttrFact& y) {
      return std::tie(x.attribute, x.value, x.number) < std::tie(y.attribute, y.value, y.number);
    });
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    for (std::size_t i = 1; i < facts.size(); ++i) {
      if (facts[i].attribute == facts[i - 1].attribute && facts[i].kind == ValueKind::numeric) {
        throw ParseError(ParseErrorKind::duplicate, 0, 0,
                         "entity '" + kb.entity_names_[e] + "' has more than one value for numeric attribute '" +
                             schema.attributes()[facts[i].attribute].name + "'");
      }
    }
  }
  kb.numeric_ranges_.assign(attr_count, 0.0);
  for (std::size_t a = 0; a < attr_count; ++a) {
    if (hi[a] > lo[a]) kb.numeric_ranges_[a] = hi[a] - lo[a];
  }

  for (const auto& [rel, args] : relations_) {
    RelationFact f{rel, {}};
    for (const auto& a : args) f.arguments.push_back(id_of(a));
    kb.relation_facts_.push_back(std::move(f));
  }
  std::sort(kb.relation_facts_.begin(), kb.relation_facts_.end());
  kb.relation_facts_.erase(std::unique(kb.relation_facts_.begin(), kb.relation_facts_.end()), kb.relation_facts_.end());
  kb.relation_offsets_.assign(schema.relations().size() + 1, 0);
  for (const auto& f : kb.relation_facts_) ++kb.relation_offsets_[f.relation + 1];
  for (std::size_t r = 0; r < schema.relations().size(); ++r) kb.relation_offsets_[r + 1] += kb.relation_offsets_[r];

  kb.adjacency_.assign(n, {});
  for (std::uint32_t i = 0; i < kb.relation_facts_.size(); ++i) {
    const auto& args = kb.relation_facts_[i].arguments;
    for (std::uint32_t p = 0; p < args.size(); ++p) kb.adjacency_[args[p]].push_back({i, p});
  }

  kb.unary_facts_.assign(schema.unaries().size(), {});
  for (const auto& [u, entity] : unaries_) kb.unary_facts_[u].push_back(id_of(entity));
  for (auto& members : kb.unary_facts_) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }

  std::set<std::string> label_set;
  for (const auto& [entity, label] : labels_) label_set.insert(label);
  kb.label_names_.assign(label_set.begin(), label_set.end());
  kb.entity_labels_.assign(n, std::nullopt);
  for (const auto& [entity, label] : labels_) {
    kb.entity_labels_[id_of(entity)] = static_cast<LabelId>(
        std::lower_bound(kb.label_names_.begin(), kb.label_names_.end(), label) - kb.label_names_.begin());
  }
  return kb;
}

KnowledgeBase KnowledgeBase::parse(std::string_view schema_text, std::string_view facts_text) {
  return parse(Schema::parse(schema_text), facts_text);
}

KnowledgeBase KnowledgeBase::parse(const Schema& schema, std::string_view facts_text) {
  struct Statement {
    std::string name;
    std::vector<std::string> args;
    std::size_t line, column;
  };
  std::vector<Statement> statements;
  Cursor cur(facts_text);
  while (!cur.at_end()) {
    Statement st{};
    st.line = cur.line();
    st.column = cur.column();
    st.name = cur.identifier();
    st.args = cur.argument_list();
    cur.expect('.');
    statements.push_back(std::move(st));
  }

  Builder b(schema);
  auto fail = [](const Statement& st, ParseErrorKind kind, const std::string& msg) -> void {
    throw ParseError(kind, st.line, st.column, msg);
  };
  // Entity declarations first so that facts may precede the declarations they use.
  for (const auto& st : statements) {
    auto ref = schema.find_predicate(st.name);
    if (!ref) fail(st, ParseErrorKind::unknown_name, "unknown predicate '" + st.name + "'");
    if (ref->kind != PredicateKind::entity_type) continue;
    if (st.args.size() != 1) fail(st, ParseErrorKind::arity_mismatch, "entity declaration '" + st.name + "' takes one argument");
    b.set_location(st.line, st.column);
    b.add_entity(st.args[0], schema.type_name(ref->id));
  }
  for (const auto& st : statements) {
    auto ref = *schema.find_predicate(st.name);
    b.set_location(st.line, st.column);
    switch (ref.kind) {
      case PredicateKind::entity_type:
        break;
      case PredicateKind::attribute:
        if (st.args.size() != 2) fail(st, ParseErrorKind::arity_mismatch, "attribute '" + st.name + "' takes two arguments");
        b.add_attribute(st.args[0], st.name, st.args[1]);
        break;
      case PredicateKind::relation:
        b.add_relation(st.name, st.args);
        break;
      case PredicateKind::unary:
        if (st.args.size() != 1) fail(st, ParseErrorKind::arity_mismatch, "predicate '" + st.name + "' takes one argument");
        b.add_unary(st.name, st.args[0]);
        break;
      case PredicateKind::label:
        if (st.args.size() != 2) fail(st, ParseErrorKind::arity_mismatch, "label takes two arguments");
        b.set_label(st.args[0], st.args[1]);
        break;
    }
  }
  b.set_location(0, 0);
  return b.build();
}

std::optional<EntityId> KnowledgeBase::find_entity(std::string_view name) const {
  auto it = entity_index_.find(std::string(name));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<EntityId> KnowledgeBase::entities_of_type(TypeId t) const {
  std::vector<EntityId> out;
  for (EntityId e = 0; e < entity_types_.size(); ++e) {
    if (entity_types_[e] == t) out.push_back(e);
  }
  return out;
}

std::size_t KnowledgeBase::attribute_fact_count() const {
  std::size_t total = 0;
  for (const auto& facts : attr_facts_) total += facts.size();
  return total;
}

std::span<const RelationFact> KnowledgeBase::facts_of(RelId r) const {
  return std::span<const RelationFact>(relation_facts_).subspan(relation_offsets_.at(r),
                                                                relation_offsets_.at(r + 1) - relation_offsets_.at(r));
}

std::string KnowledgeBase::fact_id(std::uint32_t fact) const {
  const auto& f = relation_facts_.at(fact);
  std::string out = schema_.relations()[f.relation].name + "(";
  for (std::size_t i = 0; i < f.arguments.size(); ++i) {
    if (i) out += ",";
    out += entity_names_[f.arguments[i]];
  }
  return out + ")";
}

std::vector<Grounding> KnowledgeBase::groundings(std::string_view predicate) const {
  auto ref = schema_.find_predicate(predicate);
  if (!ref) throw std::invalid_argument("unknown predicate '" + std::string(predicate) + "'");
  std::vector<Grounding> out;
  const std::string name(predicate);
  switch (ref->kind) {
    case PredicateKind::entity_type:
      for (EntityId e : entities_of_type(ref->id)) out.push_back({name, {entity_names_[e]}});
      break;
    case PredicateKind::attribute: {
      const auto& decl = schema_.attributes()[ref->id];
      for (EntityId e = 0; e < entity_count(); ++e) {
        for (const auto& f : attr_facts_[e]) {
          if (f.attribute != ref->id) continue;
          out.push_back({name, {entity_names_[e], decl.kind == ValueKind::numeric ? format_number(f.number)
                                                                                 : discrete_values_[f.attribute][f.value]}});
        }
      }
      break;
    }
    case PredicateKind::relation:
      for (const auto& f : facts_of(ref->id)) {
        Grounding g{name, {}};
        for (EntityId a : f.arguments) g.arguments.push_back(entity_names_[a]);
        out.push_back(std::move(g));
      }
      break;
    case PredicateKind::unary:
      for (EntityId e : unary_facts_[ref->id]) out.push_back({name, {entity_names_[e]}});
      break;
    case PredicateKind::label:
      for (EntityId e = 0; e < entity_count(); ++e) {
        if (entity_labels_[e]) out.push_back({name, {entity_names_[e], label_names_[*entity_labels_[e]]}});
      }
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t KnowledgeBase::grounding_count(std::string_view predicate) const {
  auto ref = schema_.find_predicate(predicate);
  if (!ref) throw std::invalid_argument("unknown predicate '" + std::string(predicate) + "'");
  switch (ref->kind) {
    case PredicateKind::relation:
      return facts_of(ref->id).size();
    case PredicateKind::unary:
      return unary_facts_[ref->id].size();
    default:
      return groundings(predicate).size();
  }
}

std::string KnowledgeBase::serialize_facts() const {
  std::ostringstream out;
  auto emit = [&out](const Grounding& g) {
    out << g.predicate << "(";
    for (std::size_t i = 0; i < g.arguments.size(); ++i) out << (i ? ", " : "") << g.arguments[i];
    out << ").\n";
  };
  auto emit_all = [&](const std::string& name) {
    for (const auto& g : groundings(name)) emit(g);
  };
  for (TypeId t = 0; t < schema_.types().size(); ++t) emit_all(schema_.type_fact_name(t));
  for (const auto& a : schema_.attributes()) emit_all(a.name);
  for (const auto& r : schema_.relations()) emit_all(r.name);
  for (const auto& u : schema_.unaries()) emit_all(u.name);
  if (schema_.label_type()) emit_all("label");
  return out.str();
}

}  // namespace relatent
