#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socsearch/graph.hpp"

namespace socsearch {

/// Index into CommunityAssignment::sizes().
using CommunityIndex = std::uint32_t;

/// How the shared-community size C_i is picked when two nodes share several.
enum class CommunityMetric { kSmallest, kLargest };

/// Node -> set of communities, plus community sizes. Immutable after build.
class CommunityAssignment {
 public:
  CommunityAssignment() = default;
  /// memberships[n] lists community indices of node n; labels[c] is the
  /// external community id of index c.
  CommunityAssignment(std::vector<std::vector<CommunityIndex>> memberships,
                      std::vector<std::int64_t> labels);

  std::size_t node_count() const noexcept { return memberships_.size(); }
  std::size_t community_count() const noexcept { return sizes_.size(); }
  std::span<const CommunityIndex> memberships(NodeId n) const { return memberships_.at(n); }
  std::size_t size(CommunityIndex c) const { return sizes_.at(c); }
  std::int64_t label(CommunityIndex c) const { return labels_.at(c); }
  std::span<const std::size_t> sizes() const noexcept { return sizes_; }

  /// Largest community with at least two members; nullopt if none exists.
  std::optional<std::size_t> c_max() const noexcept { return c_max_; }
  /// Like c_max() but throws Error when undefined.
  std::size_t require_c_max() const;

  /// Rows skipped on load because their node is not in the graph.
  std::size_t unknown_nodes_skipped = 0;

 private:
  std::vector<std::vector<CommunityIndex>> memberships_;  // sorted per node
  std::vector<std::int64_t> labels_;
  std::vector<std::size_t> sizes_;
  std::optional<std::size_t> c_max_;
};

/// Reads `node_id<TAB>community_id` rows (several rows per node allowed).
/// Graph nodes missing from the file get no membership.
CommunityAssignment load_communities(const std::string& path, const SocialGraph& g);
void write_communities(const std::string& path, const CommunityAssignment& a,
                       const SocialGraph& g);

/// Synchronous label propagation. Labels start as node ids; each sweep every
/// node takes the most frequent label among itself and its neighbors (ties go
/// to the smallest label). Stops at a fixed point or after max_sweeps.
/// Community labels are the external id of the node whose label won.
CommunityAssignment detect_communities(const SocialGraph& g, std::size_t max_sweeps = 100);

/// Size of the smallest (or largest) community containing both a and b.
std::optional<std::size_t> shared_community_size(const CommunityAssignment& assignment,
                                                 NodeId a, NodeId b,
                                                 CommunityMetric metric);

inline std::optional<std::size_t> smallest_shared_community_size(
    const CommunityAssignment& assignment, NodeId a, NodeId b) {
  return shared_community_size(assignment, a, b, CommunityMetric::kSmallest);
}

}  // namespace socsearch
