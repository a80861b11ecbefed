#include "relatent/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relatent/simd/kernels.hpp"

namespace relatent {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

SimilarityInterpretation::SimilarityInterpretation(std::string name,
                                                   const std::array<double, kCoreSimilarityCount>& raw_weights)
    : name_(std::move(name)) {
  double total = 0.0;
  for (double w : raw_weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("interpretation '" + name_ + "': weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("interpretation '" + name_ + "': all weights are zero");
  for (std::size_t i = 0; i < kCoreSimilarityCount; ++i) weights_[i] = raw_weights[i] / total;
}

std::vector<SimilarityInterpretation> parse_interpretations(std::string_view text) {
  std::vector<SimilarityInterpretation> out;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto c = line.find_first_of("%#"); c != std::string::npos) line.erase(c);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    if (keyword != "interp") throw ParseError(ParseErrorKind::syntax, line_no, 0, "expected 'interp', got '" + keyword + "'");
    std::string name;
    if (!(fields >> name)) throw ParseError(ParseErrorKind::syntax, line_no, 0, "missing interpretation name");
    bool ident = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
    for (char ch : name) ident = ident && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
    if (!ident) throw ParseError(ParseErrorKind::syntax, line_no, 0, "interpretation name '" + name + "' is not an identifier");
    std::array<double, kCoreSimilarityCount> w{};
    for (std::size_t i = 0; i < kCoreSimilarityCount; ++i) {
      std::string token;
      if (!(fields >> token)) throw ParseError(ParseErrorKind::arity_mismatch, line_no, 0, "interpretation needs five weights");
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), w[i]);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(ParseErrorKind::bad_value, line_no, 0, "weight '" + token + "' is not a number");
      }
    }
    std::string extra;
    if (fields >> extra) throw ParseError(ParseErrorKind::arity_mismatch, line_no, 0, "interpretation needs exactly five weights");
    if (!names.insert(name).second) throw ParseError(ParseErrorKind::duplicate, line_no, 0, "duplicate interpretation '" + name + "'");
    try {
      out.emplace_back(name, w);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ParseErrorKind::bad_value, line_no, 0, e.what());
    }
  }
  return out;
}

std::string serialize_interpretations(const std::vector<SimilarityInterpretation>& interps) {
  std::ostringstream out;
  for (const auto& ip : interps) {
    out << "interp " << ip.name();
    for (double w : ip.weights()) out << " " << format_number(w);
    out << "\n";
  }
  return out.str();
}

// ------------------------------------------------------------ TreeEncoder

TreeEncoder::TreeEncoder(const KnowledgeBase& kb, std::size_t depth)
    : kb_(&kb),
      depth_(depth),
      attr_count_(kb.schema().attributes().size()),
      rel_count_(kb.schema().relations().size()),
      entity_count_(kb.entity_count()) {
  attr_offset_.resize(attr_count_);
  attr_width_.resize(attr_count_);
  for (AttrId a = 0; a < attr_count_; ++a) {
    attr_offset_[a] = level_attr_width_;
    attr_width_[a] = kb.schema().attributes()[a].kind == ValueKind::numeric ? 1 : kb.discrete_value_count(a);
    level_attr_width_ += attr_width_[a];
  }
}

TreeEncoding TreeEncoder::encode(const NeighbourhoodTree& tree) const {
  if (tree.depth != depth_) throw std::invalid_argument("tree depth does not match encoder depth");
  const FrequencyProfile profile = frequency_profile(tree);
  TreeEncoding enc;
  enc.root = tree.root;
  const std::size_t levels = depth_ + 1;
  enc.attributes.assign(levels * level_attr_width_, 0.0);
  enc.attr_present.assign(levels * attr_count_, 0);
  enc.edges.assign(levels * rel_count_, 0.0);
  enc.identities.assign(depth_ * entity_count_, 0.0);
  enc.level_sizes.assign(levels, 0);

  for (std::size_t k = 0; k < levels; ++k) {
    const LevelProfile& lp = profile.levels[k];
    enc.level_sizes[k] = lp.vertex_count;
    for (const auto& [type, tp] : lp.types) {
      for (const auto& [attr, dist] : tp.discrete) {
        enc.attr_present[k * attr_count_ + attr] = 1;
        for (const auto& [value, freq] : dist) enc.attributes[k * level_attr_width_ + attr_offset_[attr] + value] = freq;
      }
      for (const auto& [attr, mean] : tp.numeric_mean) {
        enc.attr_present[k * attr_count_ + attr] = 1;
        enc.attributes[k * level_attr_width_ + attr_offset_[attr]] = mean;
      }
    }
    for (const auto& [rel, freq] : lp.edges) enc.edges[k * rel_count_ + rel] = freq;
    if (k >= 1) {
      for (const auto& v : tree.levels[k]) enc.identities[(k - 1) * entity_count_ + v.entity] += 1.0;
    }
  }
  return enc;
}

double TreeEncoder::attribute_similarity(std::size_t level, AttrId a, const TreeEncoding& x,
                                         const TreeEncoding& y) const {
  const std::size_t off = level * level_attr_width_ + attr_offset_[a];
  if (kb_->schema().attributes()[a].kind == ValueKind::numeric) {
    const double range = kb_->numeric_range(a);
    const double diff = std::fabs(x.attributes[off] - y.attributes[off]);
    if (range <= 0.0) return diff == 0.0 ? 1.0 : 0.0;
    return clamp01(1.0 - diff / range);
  }
  const double l1 = simd::l1_distance(std::span(x.attributes).subspan(off, attr_width_[a]),
                                      std::span(y.attributes).subspan(off, attr_width_[a]));
  return clamp01(1.0 - 0.5 * l1);
}

bool TreeEncoder::level_attribute_score(std::size_t level, const TreeEncoding& x, const TreeEncoding& y,
                                        double& score) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (AttrId a = 0; a < attr_count_; ++a) {
    const bool px = x.attr_present[level * attr_count_ + a] != 0;
    const bool py = y.attr_present[level * attr_count_ + a] != 0;
    if (!px && !py) continue;
    ++count;
    if (px && py) sum += attribute_similarity(level, a, x, y);
  }
  if (count == 0) return false;
  score = sum / static_cast<double>(count);
  return true;
}

CoreSimVector TreeEncoder::compare(const TreeEncoding& x, const TreeEncoding& y) const {
  CoreSimVector v;

  double root_score = 1.0;
  level_attribute_score(0, x, y, root_score);
  v[CoreSimilarity::root_attributes] = clamp01(root_score);

  double weighted = 0.0;
  double weights = 0.0;
  for (std::size_t k = 1; k <= depth_; ++k) {
    double s = 0.0;
    if (level_attribute_score(k, x, y, s)) {
      weighted += s / static_cast<double>(k);
      weights += 1.0 / static_cast<double>(k);
    }
  }
  v[CoreSimilarity::neighbour_attributes] = weights > 0.0 ? clamp01(weighted / weights) : 1.0;

  if (x.root == y.root) {
    v[CoreSimilarity::connectivity] = 1.0;
  } else {
    auto share = [this](const TreeEncoding& t, EntityId other) {
      double hits = 0.0;
      double total = 0.0;
      for (std::size_t k = 1; k <= depth_; ++k) {
        hits += t.identities[(k - 1) * entity_count_ + other];
        total += static_cast<double>(t.level_sizes[k]);
      }
      return total > 0.0 ? hits / total : 0.0;
    };
    v[CoreSimilarity::connectivity] = clamp01(0.5 * (share(x, y.root) + share(y, x.root)));
  }

  if (depth_ == 0) {
    v[CoreSimilarity::vertex_identities] = x.root == y.root ? 1.0 : 0.0;
    v[CoreSimilarity::edge_types] = 1.0;
    return v;
  }

  double identity_sum = 0.0;
  double edge_sum = 0.0;
  for (std::size_t k = 1; k <= depth_; ++k) {
    const bool ex = x.level_sizes[k] == 0;
    const bool ey = y.level_sizes[k] == 0;
    if (ex && ey) {
      identity_sum += 1.0;
      edge_sum += 1.0;
      continue;
    }
    if (ex || ey) continue;
    auto ids_x = std::span(x.identities).subspan((k - 1) * entity_count_, entity_count_);
    auto ids_y = std::span(y.identities).subspan((k - 1) * entity_count_, entity_count_);
    const simd::MinMaxSums mm = simd::min_max_sums(ids_x, ids_y);
    identity_sum += mm.max_sum > 0.0 ? mm.min_sum / mm.max_sum : 1.0;
    auto edges_x = std::span(x.edges).subspan(k * rel_count_, rel_count_);
    auto edges_y = std::span(y.edges).subspan(k * rel_count_, rel_count_);
    edge_sum += clamp01(1.0 - 0.5 * simd::l1_distance(edges_x, edges_y));
  }
  const double levels = static_cast<double>(depth_);
  v[CoreSimilarity::vertex_identities] = clamp01(identity_sum / levels);
  v[CoreSimilarity::edge_types] = clamp01(edge_sum / levels);
  return v;
}

CoreSimVector core_similarities(const NeighbourhoodTree& a, const NeighbourhoodTree& b, const KnowledgeBase& kb) {
  if (a.depth != b.depth) throw std::invalid_argument("core_similarities: trees have different depths");
  TreeEncoder encoder(kb, a.depth);
  return encoder.compare(encoder.encode(a), encoder.encode(b));
}

double combined_similarity(const CoreSimVector& v, const SimilarityInterpretation& interp) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kCoreSimilarityCount; ++i) sum += interp.weights()[i] * v.values[i];
  return clamp01(sum);
}

}  // namespace relatent
