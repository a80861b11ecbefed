#include "relatent/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relatent/parallel.hpp"

namespace relatent {

SimilarityMatrix SimilarityMatrix::from_pairs(std::vector<std::string> objects,
                                              const std::function<double(std::size_t, std::size_t)>& pair,
                                              bool parallel) {
  if (objects.empty()) throw std::invalid_argument("similarity matrix over an empty object list");
  SimilarityMatrix m;
  const std::size_t n = objects.size();
  m.objects_ = std::move(objects);
  m.values_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m.values_[i * n + i] = 1.0;
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double s = pair(i, j);
          m.values_[i * n + j] = s;
          m.values_[j * n + i] = s;
        }
      },
      parallel);
  return m;
}

SimilarityMatrix similarity_matrix(const KnowledgeBase& kb, const TreeEncoder& encoder,
                                   const std::vector<TreeEncoding>& encodings, const SimilarityInterpretation& interp,
                                   bool parallel) {
  std::vector<std::string> objects;
  objects.reserve(encodings.size());
  for (const auto& e : encodings) objects.push_back(kb.entity_name(e.root));
  return SimilarityMatrix::from_pairs(
      std::move(objects),
      [&](std::size_t i, std::size_t j) { return combined_similarity(encoder.compare(encodings[i], encodings[j]), interp); },
      parallel);
}

SimilarityMatrix similarity_matrix(const KnowledgeBase& kb, const std::vector<NeighbourhoodTree>& trees,
                                   const SimilarityInterpretation& interp, bool parallel) {
  if (trees.empty()) throw std::invalid_argument("similarity matrix over an empty tree list");
  TreeEncoder encoder(kb, trees.front().depth);
  std::vector<TreeEncoding> encodings(trees.size());
  parallel_for(trees.size(), [&](std::size_t i) { encodings[i] = encoder.encode(trees[i]); }, parallel);
  return similarity_matrix(kb, encoder, encodings, interp, parallel);
}

// ------------------------------------------------------------- Clustering

std::vector<std::vector<std::string>> Clustering::clusters() const {
  std::vector<std::vector<std::string>> out(cluster_count);
  for (std::size_t i = 0; i < objects.size(); ++i) out[assignment[i]].push_back(objects[i]);
  return out;
}

std::vector<std::size_t> Clustering::cluster_sizes() const {
  std::vector<std::size_t> sizes(cluster_count, 0);
  for (std::size_t c : assignment) ++sizes[c];
  return sizes;
}

namespace {

// Relabels clusters 0..k-1 in order of first appearance.
std::vector<std::size_t> canonical_labels(std::span<const std::size_t> labels) {
  std::map<std::size_t, std::size_t> remap;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (std::size_t l : labels) {
    auto [it, inserted] = remap.emplace(l, remap.size());
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

Dendrogram agglomerate(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  Dendrogram d;
  d.order.resize(n);
  std::iota(d.order.begin(), d.order.end(), std::size_t{0});
  std::stable_sort(d.order.begin(), d.order.end(),
                   [&m](std::size_t a, std::size_t b) { return m.objects()[a] < m.objects()[b]; });
  for (std::size_t i : d.order) d.objects.push_back(m.objects()[i]);

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = 1.0 - m.at(d.order[i], d.order[j]);
  }

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> nn(n, none);
  std::vector<double> nnd(n, inf);

  auto rescan = [&](std::size_t r) {
    nn[r] = none;
    nnd[r] = inf;
    for (std::size_t c = r + 1; c < n; ++c) {
      if (active[c] && dist[r * n + c] < nnd[r]) {
        nnd[r] = dist[r * n + c];
        nn[r] = c;
      }
    }
  };
  for (std::size_t r = 0; r < n; ++r) rescan(r);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t i = none;
    for (std::size_t r = 0; r < n; ++r) {
      if (active[r] && nn[r] != none && (i == none || nnd[r] < nnd[i])) i = r;
    }
    const std::size_t j = nn[i];
    d.merges.push_back({i, j, nnd[i]});

    const double si = static_cast<double>(size[i]);
    const double sj = static_cast<double>(size[j]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == i || k == j) continue;
      const double v = (si * dist[i * n + k] + sj * dist[j * n + k]) / (si + sj);
      dist[i * n + k] = v;
      dist[k * n + i] = v;
    }
    active[j] = false;
    size[i] += size[j];

    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r]) continue;
      if (r == i || nn[r] == i || nn[r] == j) {
        rescan(r);
      } else if (r < i) {
        const double v = dist[r * n + i];
        if (v < nnd[r] || (v == nnd[r] && i < nn[r])) {
          nnd[r] = v;
          nn[r] = i;
        }
      }
    }
  }
  return d;
}

std::vector<std::size_t> Dendrogram::cut(std::size_t k) const {
  const std::size_t n = objects.size();
  if (k < 1 || k > n) throw std::invalid_argument("cluster count out of range");
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s < n - k; ++s) parent[find(merges[s].right)] = find(merges[s].left);
  std::vector<std::size_t> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = find(i);
  return canonical_labels(roots);
}

Clustering cluster(const SimilarityMatrix& m, std::size_t k, std::uint64_t /*seed*/) {
  if (k < 1 || k > m.size()) {
    throw std::invalid_argument("cluster count " + std::to_string(k) + " outside [1, " + std::to_string(m.size()) + "]");
  }
  Dendrogram d = agglomerate(m);
  Clustering c;
  c.assignment = d.cut(k);
  c.objects = std::move(d.objects);
  c.cluster_count = k;
  return c;
}

double silhouette(const SimilarityMatrix& m, const Dendrogram& d, const std::vector<std::size_t>& assignment) {
  const std::size_t n = assignment.size();
  const std::size_t k = *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : assignment) ++sizes[c];
  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[assignment[i]] <= 1) continue;  // singleton contributes 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[assignment[j]] += 1.0 - m.at(d.order[i], d.order[j]);
    }
    const double a = sums[assignment[i]] / static_cast<double>(sizes[assignment[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != assignment[i] && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (std::isfinite(b) && denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::size_t select_k_silhouette(const SimilarityMatrix& m) {
  const std::size_t n = m.size();
  if (n <= 2) return n;
  const Dendrogram d = agglomerate(m);
  const auto upper = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
  std::size_t best_k = 2;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= std::min(upper, n); ++k) {
    const double s = silhouette(m, d, d.cut(k));
    if (s > best) {
      best = s;
      best_k = k;
    }
  }
  return best_k;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("ARI over partitions of different sizes");
  const auto ca = canonical_labels(a);
  const auto cb = canonical_labels(b);
  if (ca == cb) return 1.0;

  auto comb2 = [](std::int64_t x) { return x * (x - 1) / 2; };
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> table;
  std::map<std::size_t, std::int64_t> rows, cols;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    ++table[{ca[i], cb[i]}];
    ++rows[ca[i]];
    ++cols[cb[i]];
  }
  std::int64_t index = 0, sum_rows = 0, sum_cols = 0;
  for (const auto& [cell, count] : table) index += comb2(count);
  for (const auto& [r, count] : rows) sum_rows += comb2(count);
  for (const auto& [c, count] : cols) sum_cols += comb2(count);
  const double total = static_cast<double>(comb2(static_cast<std::int64_t>(ca.size())));
  const double expected = static_cast<double>(sum_rows) * static_cast<double>(sum_cols) / total;
  const double maximum = 0.5 * static_cast<double>(sum_rows + sum_cols);
  const double denom = maximum - expected;
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(index) - expected) / denom;
}

double adjusted_rand_index(const Clustering& a, const Clustering& b) {
  if (a.objects == b.objects) return adjusted_rand_index(a.assignment, b.assignment);
  if (a.objects.size() != b.objects.size()) throw std::invalid_argument("ARI over different object sets");
  std::map<std::string_view, std::size_t> where;
  for (std::size_t i = 0; i < b.objects.size(); ++i) where.emplace(b.objects[i], b.assignment[i]);
  std::vector<std::size_t> aligned;
  aligned.reserve(a.objects.size());
  for (const auto& o : a.objects) {
    auto it = where.find(o);
    if (it == where.end()) throw std::invalid_argument("ARI over different object sets");
    aligned.push_back(it->second);
  }
  return adjusted_rand_index(a.assignment, aligned);
}

std::string clustering_csv(const Clustering& c, const std::string& header_comment) {
  std::ostringstream out;
  out << header_comment;
  out << "# target=" << (c.provenance.kind == TargetKind::entity_type ? "type:" : "relation:") << c.provenance.target
      << " interpretation=" << c.provenance.interpretation << " depth=" << c.provenance.depth
      << " clusters=" << c.cluster_count << "\n";
  out << "object_id,cluster_index\n";
  for (std::size_t i = 0; i < c.objects.size(); ++i) {
    const std::string& id = c.objects[i];
    if (id.find_first_of(",\"") != std::string::npos) {
      out << '"';
      for (char ch : id) out << (ch == '"' ? "\"\"" : std::string(1, ch));
      out << '"';
    } else {
      out << id;
    }
    out << "," << c.assignment[i] << "\n";
  }
  return out.str();
}

}  // namespace relatent
