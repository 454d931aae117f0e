#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socsearch/communities.hpp"
#include "socsearch/geo.hpp"
#include "socsearch/graph.hpp"
#include "socsearch/knowledge.hpp"
#include "socsearch/netgen.hpp"

namespace socsearch {

enum class DistanceRelation { kFriends, kFof, kCommunities };

struct DistanceDistribution {
  std::vector<std::string> labels;  // one per bucket, overflow last
  std::vector<double> percent;      // macro-averaged density, in percent
  std::vector<double> cumulative;
  std::size_t contributors = 0;     // users (or communities) averaged over
};

/// Share of friends / FoF / community co-members per distance range.
/// friends, fof: each user with at least one such contact contributes the
/// fraction of those contacts per range; fractions are averaged over users.
/// communities: each community of two or more members contributes the
/// fraction of ordered member pairs per range; averaged over communities.
/// Throws Error for kCommunities without an assignment.
DistanceDistribution distance_distribution(const SocialGraph& g, DistanceRelation relation,
                                           const DistanceRanges& ranges,
                                           const CommunityAssignment* communities = nullptr);

struct CommunityReach {
  double own = 0.0;             // communities the node belongs to
  double via_friends = 0.0;     // distinct communities of its friends
  double via_fof = 0.0;         // of friends and all FoF
  double via_known_fof = 0.0;   // of friends and the FoF it knows
};

CommunityReach community_reach_stats(const SocialGraph& g, const CommunityAssignment& communities,
                                     const KnowledgeModel& knowledge);

struct ProminenceStats {
  std::size_t prominent = 0;
  std::size_t threshold_degree = 0;
  /// Every node reached the threshold, so nothing remains to average over.
  bool degenerate = false;
  std::size_t non_prominent = 0;
  // Averages over non-prominent nodes.
  double friends = 0.0;
  double prominent_friends = 0.0;
  double fof = 0.0;
  double prominent_fof = 0.0;
  double known_fof = 0.0;
  double prominent_known_fof = 0.0;
};

/// Prominent nodes: degree at least that of the ceil(top_fraction * n)-th
/// largest degree (ties at the threshold are included).
ProminenceStats prominence_stats(const SocialGraph& g, const KnowledgeModel& knowledge,
                                 double top_fraction = 0.01);

struct FofSizeStats {
  double friends = 0.0;
  double fof = 0.0;        // distinct FoF
  double known_fof = 0.0;  // distinct across all friends
};

FofSizeStats fof_size_stats(const SocialGraph& g, const KnowledgeModel& knowledge);

struct CellShare {
  CellId cell = 0;
  BoundingBox bounds;
  std::size_t count = 0;
  double fraction = 0.0;  // of located points
};

/// Nonempty cells by descending population (ties by cell id), cut to top_k
/// when top_k > 0.
std::vector<CellShare> cell_population_report(const RhomboidGrid& grid,
                                              std::span<const GeoPoint> locations,
                                              std::size_t top_k = 0);

std::string format_distance_tsv(const DistanceDistribution& d);
std::string format_cells_tsv(std::span<const CellShare> rows);

}  // namespace socsearch
