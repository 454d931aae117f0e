#include "socsearch/routing.hpp"

#include <algorithm>
#include <cmath>

#include "socsearch/error.hpp"

namespace socsearch {

Weights::Weights(double distance, double community, double popularity)
    : distance_(distance), community_(community), popularity_(popularity) {
  for (double w : {distance, community, popularity})
    if (!(w >= 0.0 && w <= 1.0)) throw Error("weights must lie in [0, 1]");
  const double sum = distance + community + popularity;
  if (sum != 0.0 && std::abs(sum - 1.0) > 1e-9)
    throw Error("weights must sum to 1 or all be zero");
}

RoutingContext::RoutingContext(const SocialGraph& graph, const CommunityAssignment& communities,
                               KnowledgeModel knowledge, Weights weights, RoutingOptions options)
    : graph_(&graph),
      communities_(&communities),
      knowledge_(knowledge),
      weights_(weights),
      options_(std::move(options)),
      d_max_(0.0),
      c_max_(communities.c_max()),
      p_max_(0.0) {
  if (communities.node_count() != graph.node_count())
    throw Error("community assignment does not cover the graph");
  if (options_.d_max_km)
    d_max_ = *options_.d_max_km;
  else if (graph.node_count() >= 2)
    d_max_ = geographic_diameter(graph.locations());
  if (!(d_max_ > 0.0)) throw Error("D_max must be positive");
  if (graph.max_degree() >= 2) p_max_ = std::log2(static_cast<double>(graph.max_degree()));
  if (!(p_max_ > 0.0)) throw Error("P_max must be positive (largest degree below 2)");
  if (weights_.community() > 0.0 && !c_max_)
    throw Error("community weight is set but C_max is undefined");
}

RoutingContext::RoutingContext(const SocialGraph& graph, const CommunityAssignment& communities,
                               KnowledgeModel knowledge, Weights weights, RoutingOptions options,
                               double d_max, std::optional<std::size_t> c_max, double p_max)
    : graph_(&graph),
      communities_(&communities),
      knowledge_(knowledge),
      weights_(weights),
      options_(std::move(options)),
      d_max_(d_max),
      c_max_(c_max),
      p_max_(p_max) {
  if (weights_.community() > 0.0 && !c_max_)
    throw Error("community weight is set but C_max is undefined");
}

RoutingContext RoutingContext::rebind(KnowledgeModel knowledge, Weights weights) const {
  return RoutingContext(*graph_, *communities_, knowledge, weights, options_, d_max_, c_max_,
                        p_max_);
}

double distance_score(const RoutingContext& ctx, NodeId current, NodeId i, NodeId target) {
  const auto& g = ctx.graph();
  const double d_current = haversine_km(g.location(current), g.location(target));
  const double d_i = haversine_km(g.location(i), g.location(target));
  return std::max(0.0, (d_current - d_i) / ctx.d_max());
}

double popularity_score(const RoutingContext& ctx, NodeId i) {
  const auto deg = ctx.graph().degree(i);
  if (deg == 0) return 0.0;
  return std::log2(static_cast<double>(deg)) / ctx.p_max();
}

double community_score(const RoutingContext& ctx, NodeId i, NodeId target) {
  if (!ctx.c_max()) throw Error("C_max is undefined");
  const auto c_max = static_cast<double>(*ctx.c_max());
  const auto shared =
      shared_community_size(ctx.communities(), i, target, ctx.options().community_metric);
  const double c_i = shared ? static_cast<double>(*shared) : c_max + 1.0;
  return 1.0 - (c_i - 1.0) / c_max;
}

double utility(const RoutingContext& ctx, NodeId current, NodeId i, NodeId target) {
  const auto& w = ctx.weights();
  double u = 0.0;
  if (w.distance() > 0.0) u += w.distance() * distance_score(ctx, current, i, target);
  if (w.community() > 0.0) u += w.community() * community_score(ctx, i, target);
  if (w.popularity() > 0.0) u += w.popularity() * popularity_score(ctx, i);
  return u;
}

namespace {

bool contains(std::span<const NodeId> visited, NodeId x) {
  return std::find(visited.begin(), visited.end(), x) != visited.end();
}

}  // namespace

double effective_score(const RoutingContext& ctx, NodeId current, NodeId f, NodeId target,
                       std::span<const NodeId> visited) {
  if (ctx.weights().is_random()) return 0.0;
  double best = utility(ctx, current, f, target);
  if (ctx.options().fof_scoring == FofScoring::kMax && ctx.knowledge().kappa() > 0) {
    for (NodeId x : known_fof(ctx.knowledge(), ctx.graph(), current, f)) {
      if (contains(visited, x)) continue;
      best = std::max(best, utility(ctx, current, x, target));
    }
  }
  return best;
}

std::optional<NodeId> select_next(const RoutingContext& ctx, NodeId current, NodeId target,
                                  std::span<const NodeId> visited, Rng& rng) {
  const auto& g = ctx.graph();
  if (ctx.options().direct_friend_shortcut && g.adjacent(current, target)) return target;

  if (auto via = first_friend_knowing(ctx.knowledge(), g, current, target,
                                      [&](NodeId f) { return !contains(visited, f); }))
    return via;

  std::vector<NodeId> open;
  for (NodeId f : g.neighbors(current))
    if (!contains(visited, f)) open.push_back(f);
  if (open.empty()) return std::nullopt;
  if (ctx.weights().is_random()) return open.size() == 1 ? open[0] : open[uniform_index(rng, open.size())];

  std::vector<double> score(open.size());
  double best = 0.0;
  for (std::size_t k = 0; k < open.size(); ++k) {
    score[k] = effective_score(ctx, current, open[k], target, visited);
    best = std::max(best, score[k]);
  }
  std::vector<NodeId> ties;
  for (std::size_t k = 0; k < open.size(); ++k)
    if (score[k] >= best - kScoreTieTolerance) ties.push_back(open[k]);
  return ties.size() == 1 ? ties[0] : ties[uniform_index(rng, ties.size())];
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kDelivered:
      return "delivered";
    case Termination::kHopLimit:
      return "hop-limit";
    case Termination::kDeadEnd:
      return "dead-end";
  }
  return "unknown";
}

TrialResult route(const RoutingContext& ctx, NodeId start, NodeId target, Rng& rng) {
  if (start == target) throw Error("route start and target must differ");
  const auto n = ctx.graph().node_count();
  if (start >= n || target >= n) throw Error("route endpoint out of range");

  TrialResult r;
  r.path.push_back(start);
  NodeId current = start;
  while (r.path.size() - 1 < ctx.options().hop_limit) {
    const auto next = select_next(ctx, current, target, r.path, rng);
    if (!next) {
      r.termination = Termination::kDeadEnd;
      r.hops = r.path.size() - 1;
      return r;
    }
    r.path.push_back(*next);
    current = *next;
    if (current == target) {
      r.success = true;
      r.termination = Termination::kDelivered;
      r.hops = r.path.size() - 1;
      return r;
    }
  }
  r.termination = Termination::kHopLimit;
  r.hops = r.path.size() - 1;
  return r;
}

}  // namespace socsearch
