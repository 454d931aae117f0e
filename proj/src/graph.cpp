#include "socsearch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "socsearch/error.hpp"
#include "tsv.hpp"

namespace socsearch {

SocialGraph::SocialGraph(std::vector<std::int64_t> external_ids, std::vector<GeoPoint> locations,
                         std::span<const Edge> edges)
    : external_ids_(std::move(external_ids)), locations_(std::move(locations)) {
  const std::size_t n = locations_.size();
  if (external_ids_.size() != n) throw Error("external id count does not match location count");
  for (std::size_t i = 1; i < n; ++i)
    if (external_ids_[i - 1] >= external_ids_[i])
      throw Error("external ids must be strictly increasing");

  std::vector<std::size_t> deg(n + 1, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
    if (e.u == e.v) {
      ++self_loops_dropped_;
      continue;
    }
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  targets_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    targets_[cursor[e.u]++] = e.v;
    targets_[cursor[e.v]++] = e.u;
  }

  // Sort and dedupe each list, then compact.
  std::vector<std::size_t> new_offsets(n + 1, 0);
  std::size_t write = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) targets_[write++] = *it;
    new_offsets[i + 1] = write;
  }
  targets_.resize(write);
  offsets_ = std::move(new_offsets);
  for (std::size_t i = 0; i < n; ++i) max_degree_ = std::max(max_degree_, degree(static_cast<NodeId>(i)));
}

bool SocialGraph::adjacent(NodeId a, NodeId b) const noexcept {
  if (degree(a) > degree(b)) std::swap(a, b);
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::optional<NodeId> SocialGraph::find(std::int64_t external) const noexcept {
  const auto it = std::lower_bound(external_ids_.begin(), external_ids_.end(), external);
  if (it == external_ids_.end() || *it != external) return std::nullopt;
  return static_cast<NodeId>(it - external_ids_.begin());
}

std::vector<Edge> SocialGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

std::vector<std::size_t> SocialGraph::degrees() const {
  std::vector<std::size_t> out(node_count());
  for (NodeId u = 0; u < node_count(); ++u) out[u] = degree(u);
  return out;
}

SocialGraph SocialGraph::with_locations(std::vector<GeoPoint> locations) const {
  if (locations.size() != node_count()) throw Error("location count does not match node count");
  SocialGraph g = *this;
  g.locations_ = std::move(locations);
  return g;
}

SocialGraph SocialGraph::with_edges(std::span<const Edge> edges) const {
  return SocialGraph(external_ids_, locations_, edges);
}

// ---------------------------------------------------------------------------

SocialGraph load_graph(const std::string& edges_path, const std::string& locations_path) {
  auto rows = read_locations(locations_path);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].id == rows[i - 1].id)
      throw Error(locations_path + ": duplicate location for node " + std::to_string(rows[i].id));

  std::vector<std::int64_t> ids;
  std::vector<GeoPoint> locs;
  ids.reserve(rows.size());
  locs.reserve(rows.size());
  for (const auto& r : rows) {
    ids.push_back(r.id);
    locs.push_back(r.location);
  }

  auto dense = [&](std::int64_t ext) -> std::optional<NodeId> {
    const auto it = std::lower_bound(ids.begin(), ids.end(), ext);
    if (it == ids.end() || *it != ext) return std::nullopt;
    return static_cast<NodeId>(it - ids.begin());
  };

  std::vector<Edge> edges;
  detail::for_each_row(edges_path, [&](const auto& fields, std::size_t line) {
    if (fields.size() < 2) throw ParseError(edges_path, line, "expected two node ids");
    std::int64_t a = 0, b = 0;
    if (!detail::parse_number(fields[0], a) || !detail::parse_number(fields[1], b))
      throw ParseError(edges_path, line, "bad node id");
    const auto da = dense(a);
    if (!da) throw Error(edges_path + ":" + std::to_string(line) + ": node " + std::to_string(a) + " has no location");
    const auto db = dense(b);
    if (!db) throw Error(edges_path + ":" + std::to_string(line) + ": node " + std::to_string(b) + " has no location");
    edges.push_back({*da, *db});
  });
  return SocialGraph(std::move(ids), std::move(locs), edges);
}

void write_edges(const std::string& path, const SocialGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# node_id\tnode_id\n";
  for (const auto& e : g.edges()) out << g.external_id(e.u) << '\t' << g.external_id(e.v) << '\n';
}

void write_graph_locations(const std::string& path, const SocialGraph& g) {
  std::vector<LocatedNode> rows;
  rows.reserve(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) rows.push_back({g.external_id(u), g.location(u)});
  write_locations(path, rows);
}

SocialGraph induced_subgraph(const SocialGraph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  constexpr auto kAbsent = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> remap(g.node_count(), kAbsent);
  std::vector<std::int64_t> ids;
  std::vector<GeoPoint> locs;
  for (NodeId i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = i;
    ids.push_back(g.external_id(keep[i]));
    locs.push_back(g.location(keep[i]));
  }
  std::vector<Edge> edges;
  for (NodeId u : keep)
    for (NodeId v : g.neighbors(u))
      if (u < v && remap[v] != kAbsent) edges.push_back({remap[u], remap[v]});
  return SocialGraph(std::move(ids), std::move(locs), edges);
}

std::vector<std::uint32_t> component_labels(const SocialGraph& g) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(g.node_count(), kUnset);
  std::uint32_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if (label[v] == kUnset) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

SocialGraph giant_component(const SocialGraph& g) {
  if (g.node_count() == 0) throw Error("giant component of an empty graph");
  const auto label = component_labels(g);
  const auto count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> size(count, 0);
  for (auto l : label) ++size[l];
  // Labels follow smallest member, and dense order follows external id, so the
  // first maximum is the tie winner.
  const auto best = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
  if (size[best] == g.node_count()) return g;
  std::vector<NodeId> nodes;
  nodes.reserve(size[best]);
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (label[u] == best) nodes.push_back(u);
  return induced_subgraph(g, nodes);
}

std::vector<std::size_t> bfs_distances(const SocialGraph& g, NodeId s) {
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.node_count(), kInf);
  std::queue<NodeId> q;
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kInf) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

std::optional<std::size_t> bfs_hops(const SocialGraph& g, NodeId s, NodeId t) {
  if (s == t) return 0;
  // Bidirectional frontier expansion; cheap for the many queries stretch needs.
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::unordered_map<NodeId, std::size_t> ds{{s, 0}}, dt{{t, 0}};
  std::vector<NodeId> fs{s}, ft{t};
  std::size_t depth_s = 0, depth_t = 0;
  while (!fs.empty() && !ft.empty()) {
    const bool expand_s = fs.size() <= ft.size();
    auto& frontier = expand_s ? fs : ft;
    auto& mine = expand_s ? ds : dt;
    auto& other = expand_s ? dt : ds;
    auto& depth = expand_s ? depth_s : depth_t;
    std::vector<NodeId> next;
    std::size_t best = kInf;
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors(u)) {
        if (mine.count(v)) continue;
        mine.emplace(v, depth + 1);
        if (auto it = other.find(v); it != other.end())
          best = std::min(best, depth + 1 + it->second);
        next.push_back(v);
      }
    }
    if (best != kInf) return best;
    ++depth;
    frontier = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

PowerLawFit fit_power_law(std::span<const std::size_t> degrees, std::size_t d_min,
                          std::optional<std::size_t> d_max) {
  if (d_min < 1) throw Error("power-law fit needs d_min >= 1");
  std::size_t upper = 0;
  for (auto d : degrees)
    if (d >= d_min && (!d_max || d <= *d_max)) upper = std::max(upper, d);
  if (d_max) upper = *d_max;

  std::size_t n = 0;
  double sum_log = 0.0;
  std::size_t lo_seen = std::numeric_limits<std::size_t>::max(), hi_seen = 0;
  for (auto d : degrees) {
    if (d < d_min || d > upper) continue;
    ++n;
    sum_log += std::log(static_cast<double>(d));
    lo_seen = std::min(lo_seen, d);
    hi_seen = std::max(hi_seen, d);
  }
  if (n < 100) throw Error("power-law fit needs at least 100 degrees >= d_min");
  if (lo_seen == hi_seen) throw Error("power-law fit is degenerate: all degrees equal");

  const double mean_log = sum_log / static_cast<double>(n);
  std::vector<double> log_d;
  log_d.reserve(upper - d_min + 1);
  for (std::size_t d = d_min; d <= upper; ++d) log_d.push_back(std::log(static_cast<double>(d)));

  // The likelihood is maximal where E_gamma[ln d] = mean ln d. E_gamma[ln d] decreases in gamma.
  auto expected_log = [&](double gamma) {
    double z = 0.0, zl = 0.0;
    const double shift = -gamma * log_d.front();
    for (double l : log_d) {
      const double w = std::exp(-gamma * l - shift);
      z += w;
      zl += w * l;
    }
    return zl / z;
  };
  double lo = -20.0, hi = 20.0;
  if (expected_log(hi) > mean_log || expected_log(lo) < mean_log)
    throw Error("power-law fit diverged");
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (expected_log(mid) > mean_log)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), d_min, upper, n};
}

}  // namespace socsearch
