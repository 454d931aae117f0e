#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socsearch/communities.hpp"
#include "socsearch/graph.hpp"
#include "socsearch/knowledge.hpp"
#include "socsearch/rng.hpp"

namespace socsearch {

/// Weights of the distance, community and popularity scores. Either they sum
/// to one or all are zero (random forwarding).
class Weights {
 public:
  /// Throws Error unless each weight is in [0,1] and the invariant holds.
  Weights(double distance, double community, double popularity);
  static Weights random() { return {0.0, 0.0, 0.0}; }

  double distance() const noexcept { return distance_; }
  double community() const noexcept { return community_; }
  double popularity() const noexcept { return popularity_; }
  bool is_random() const noexcept {
    return distance_ == 0.0 && community_ == 0.0 && popularity_ == 0.0;
  }

 private:
  double distance_, community_, popularity_;
};

/// How known FoF enter the friend score beyond the target check.
enum class FofScoring {
  kMax,  // a friend scores the best of its own utility and its known FoF utilities
  kOff,  // FoF knowledge is only used to spot the target
};

struct RoutingOptions {
  std::size_t hop_limit = 50;
  FofScoring fof_scoring = FofScoring::kMax;
  bool direct_friend_shortcut = true;
  CommunityMetric community_metric = CommunityMetric::kSmallest;
  /// Overrides the geographic diameter used as D_max.
  std::optional<double> d_max_km;
};

/// Everything a routing decision reads. Holds references: the graph and the
/// community assignment must outlive the context.
class RoutingContext {
 public:
  /// Computes D_max (geographic diameter unless overridden), C_max and
  /// P_max = log2(max degree). Throws Error when D_max or P_max is not
  /// positive, or when the community weight is nonzero and C_max is undefined.
  RoutingContext(const SocialGraph& graph, const CommunityAssignment& communities,
                 KnowledgeModel knowledge, Weights weights, RoutingOptions options = {});
  // The context keeps references; temporaries would dangle.
  RoutingContext(SocialGraph&&, const CommunityAssignment&, KnowledgeModel, Weights,
                 RoutingOptions = {}) = delete;
  RoutingContext(const SocialGraph&, CommunityAssignment&&, KnowledgeModel, Weights,
                 RoutingOptions = {}) = delete;

  /// Same graph-derived constants, different weights and kappa.
  RoutingContext rebind(KnowledgeModel knowledge, Weights weights) const;

  const SocialGraph& graph() const noexcept { return *graph_; }
  const CommunityAssignment& communities() const noexcept { return *communities_; }
  const KnowledgeModel& knowledge() const noexcept { return knowledge_; }
  const Weights& weights() const noexcept { return weights_; }
  const RoutingOptions& options() const noexcept { return options_; }
  double d_max() const noexcept { return d_max_; }
  std::optional<std::size_t> c_max() const noexcept { return c_max_; }
  double p_max() const noexcept { return p_max_; }

 private:
  RoutingContext(const SocialGraph& graph, const CommunityAssignment& communities,
                 KnowledgeModel knowledge, Weights weights, RoutingOptions options,
                 double d_max, std::optional<std::size_t> c_max, double p_max);

  const SocialGraph* graph_;
  const CommunityAssignment* communities_;
  KnowledgeModel knowledge_;
  Weights weights_;
  RoutingOptions options_;
  double d_max_;
  std::optional<std::size_t> c_max_;
  double p_max_;
};

/// max(0, (D_current - D_i) / D_max) with great-circle distances to target.
double distance_score(const RoutingContext& ctx, NodeId current, NodeId i, NodeId target);
/// log2(degree(i)) / P_max.
double popularity_score(const RoutingContext& ctx, NodeId i);
/// 1 - (C_i - 1) / C_max, with C_i = C_max + 1 when no community is shared.
/// Throws Error when C_max is undefined.
double community_score(const RoutingContext& ctx, NodeId i, NodeId target);
double utility(const RoutingContext& ctx, NodeId current, NodeId i, NodeId target);

/// Scores within this absolute distance of the maximum count as ties.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Next recipient of the folder held by `current`, or nullopt at a dead end.
/// `visited` holds every node that already had the folder, including current.
///
/// Precedence: (1) the target itself if it is a friend (when the shortcut is
/// enabled); (2) the smallest unvisited friend through which the target is a
/// known FoF; (3) a uniformly random pick among unvisited friends with the
/// maximal effective score. A draw from `rng` happens only in (3) and only
/// when more than one friend ties.
std::optional<NodeId> select_next(const RoutingContext& ctx, NodeId current, NodeId target,
                                  std::span<const NodeId> visited, Rng& rng);

/// Effective score of friend f: U_f, raised to the best U_x over its known,
/// unvisited FoF when FoF scoring is on. Zero in random mode.
double effective_score(const RoutingContext& ctx, NodeId current, NodeId f, NodeId target,
                       std::span<const NodeId> visited);

enum class Termination { kDelivered, kHopLimit, kDeadEnd };

std::string to_string(Termination t);

struct TrialResult {
  bool success = false;
  std::vector<NodeId> path;  // starts at the start node
  std::size_t hops = 0;      // path.size() - 1
  Termination termination = Termination::kDeadEnd;
};

/// Runs one search of at most hop_limit forwards. Throws Error if start == target.
TrialResult route(const RoutingContext& ctx, NodeId start, NodeId target, Rng& rng);

}  // namespace socsearch
