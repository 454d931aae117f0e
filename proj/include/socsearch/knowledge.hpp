#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "socsearch/graph.hpp"
#include "socsearch/rng.hpp"

namespace socsearch {

/// Bounded friends-of-friends knowledge.
///
/// For every (node n, friend f) pair the FoF candidates of f are ordered by a
/// keyed hash of (seed, n, f, candidate); n knows the first kappa of them.
/// The order never depends on kappa, so raising kappa only appends: the sets
/// known at kappa1 <= kappa2 are nested, and two models with the same seed
/// agree wherever they overlap. Stateless and thread-safe.
class KnowledgeModel {
 public:
  KnowledgeModel(std::size_t kappa, std::uint64_t seed) noexcept : kappa_(kappa), seed_(seed) {}

  std::size_t kappa() const noexcept { return kappa_; }
  std::uint64_t seed() const noexcept { return seed_; }
  KnowledgeModel with_kappa(std::size_t kappa) const noexcept { return {kappa, seed_}; }

  /// Ordering key of candidate x among the FoF of f as seen from n.
  std::uint64_t rank_key(NodeId n, NodeId f, NodeId x) const noexcept {
    return rank_key(pair_key(n, f), x);
  }
  /// rank_key split in two so callers ranking many candidates hash (n, f) once.
  std::uint64_t pair_key(NodeId n, NodeId f) const noexcept { return derive_seed(seed_, {n, f}); }
  static std::uint64_t rank_key(std::uint64_t pair, NodeId x) noexcept { return mix64(pair ^ mix64(x)); }

 private:
  std::size_t kappa_;
  std::uint64_t seed_;
};

/// Friends of f that are neither n nor friends of n, ascending.
/// Throws Error if f is not a friend of n.
std::vector<NodeId> fof_candidates(const SocialGraph& g, NodeId n, NodeId f);

/// The min(kappa, |candidates|) FoF that n knows through f, in permutation order.
std::vector<NodeId> known_fof(const KnowledgeModel& model, const SocialGraph& g, NodeId n,
                              NodeId f);

/// Whether n knows x as a FoF through friend f. Does not materialize the list.
bool knows_fof_via(const KnowledgeModel& model, const SocialGraph& g, NodeId n, NodeId f,
                   NodeId x);

/// Smallest friend f of n, accepted by `eligible`, through which n knows target.
template <class Eligible>
std::optional<NodeId> first_friend_knowing(const KnowledgeModel& model, const SocialGraph& g,
                                           NodeId n, NodeId target, Eligible&& eligible) {
  if (model.kappa() == 0 || target == n || g.adjacent(n, target)) return std::nullopt;
  // Mutual friends of n and target, ascending.
  const auto a = g.neighbors(n);
  const auto b = g.neighbors(target);
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      if (eligible(*i) && knows_fof_via(model, g, n, *i, target)) return *i;
      ++i;
      ++j;
    }
  }
  return std::nullopt;
}

/// Smallest friend of n through which n knows target, if any.
inline std::optional<NodeId> knows_target(const KnowledgeModel& model, const SocialGraph& g,
                                          NodeId n, NodeId target) {
  return first_friend_knowing(model, g, n, target, [](NodeId) { return true; });
}

}  // namespace socsearch
