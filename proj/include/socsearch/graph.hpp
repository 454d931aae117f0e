#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socsearch/geo.hpp"

namespace socsearch {

/// Dense node index, 0..node_count-1. Dense ids follow ascending external id.
using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected friendship graph with a location per node. Immutable once built;
/// adjacency lists are sorted, symmetric, and free of self-loops and duplicates.
class SocialGraph {
 public:
  SocialGraph() = default;

  /// external_ids must be strictly increasing; edges refer to dense ids.
  /// Duplicate edges collapse and self-loops are dropped (and counted).
  SocialGraph(std::vector<std::int64_t> external_ids, std::vector<GeoPoint> locations,
              std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return locations_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId n) const noexcept {
    return {targets_.data() + offsets_[n], targets_.data() + offsets_[n + 1]};
  }
  std::size_t degree(NodeId n) const noexcept { return offsets_[n + 1] - offsets_[n]; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  bool adjacent(NodeId a, NodeId b) const noexcept;

  const GeoPoint& location(NodeId n) const noexcept { return locations_[n]; }
  std::span<const GeoPoint> locations() const noexcept { return locations_; }

  std::int64_t external_id(NodeId n) const noexcept { return external_ids_[n]; }
  std::span<const std::int64_t> external_ids() const noexcept { return external_ids_; }
  std::optional<NodeId> find(std::int64_t external) const noexcept;

  std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }

  /// Each undirected edge once, with u < v, in lexicographic order.
  std::vector<Edge> edges() const;
  std::vector<std::size_t> degrees() const;

  /// Same topology and ids, new node positions.
  SocialGraph with_locations(std::vector<GeoPoint> locations) const;
  /// Same nodes and positions, new edge set.
  SocialGraph with_edges(std::span<const Edge> edges) const;

 private:
  std::vector<std::int64_t> external_ids_;
  std::vector<GeoPoint> locations_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::size_t max_degree_ = 0;
  std::size_t self_loops_dropped_ = 0;
};

/// Reads a `u<TAB>v` edges file and a locations file. Nodes are every row of
/// the locations file; an edge endpoint without a location is an error.
SocialGraph load_graph(const std::string& edges_path, const std::string& locations_path);
void write_edges(const std::string& path, const SocialGraph& g);
void write_graph_locations(const std::string& path, const SocialGraph& g);

/// Induced subgraph on the given dense nodes (any order; duplicates ignored).
SocialGraph induced_subgraph(const SocialGraph& g, std::span<const NodeId> nodes);

/// Connected component label per node, numbered in order of smallest member.
std::vector<std::uint32_t> component_labels(const SocialGraph& g);

/// Largest connected component; ties go to the component holding the
/// smallest external id.
SocialGraph giant_component(const SocialGraph& g);

/// Minimum hop count between s and t, nullopt when unreachable.
std::optional<std::size_t> bfs_hops(const SocialGraph& g, NodeId s, NodeId t);

/// Hop distances from s to every node; unreachable nodes get SIZE_MAX.
std::vector<std::size_t> bfs_distances(const SocialGraph& g, NodeId s);

using DegreeSequence = std::vector<std::size_t>;

struct PowerLawFit {
  double gamma;
  std::size_t d_min;
  std::size_t d_max;
  std::size_t samples;  // degrees in [d_min, d_max]
};

/// Discrete maximum-likelihood fit of P(d) ~ d^-gamma on [d_min, d_max].
/// d_max defaults to the largest observed degree (truncated support).
/// Throws Error with fewer than 100 samples or a degenerate (single-valued) sample.
PowerLawFit fit_power_law(std::span<const std::size_t> degrees, std::size_t d_min = 1,
                          std::optional<std::size_t> d_max = std::nullopt);

inline double fit_power_law_exponent(std::span<const std::size_t> degrees,
                                     std::size_t d_min = 1) {
  return fit_power_law(degrees, d_min).gamma;
}

}  // namespace socsearch
