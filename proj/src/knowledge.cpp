#include "socsearch/knowledge.hpp"

#include <algorithm>

#include "socsearch/error.hpp"

namespace socsearch {

namespace {

void require_friends(const SocialGraph& g, NodeId n, NodeId f) {
  if (n == f || !g.adjacent(n, f))
    throw Error("node " + std::to_string(g.external_id(f)) + " is not a friend of node " +
                std::to_string(g.external_id(n)));
}

bool is_candidate(const SocialGraph& g, NodeId n, NodeId f, NodeId x) {
  return x != n && x != f && !g.adjacent(n, x);
}

}  // namespace

std::vector<NodeId> fof_candidates(const SocialGraph& g, NodeId n, NodeId f) {
  require_friends(g, n, f);
  const auto nf = g.neighbors(f);
  const auto nn = g.neighbors(n);
  std::vector<NodeId> out;
  out.reserve(nf.size());
  // Both lists are sorted: set difference, then drop n.
  std::set_difference(nf.begin(), nf.end(), nn.begin(), nn.end(), std::back_inserter(out));
  std::erase(out, n);
  return out;
}

std::vector<NodeId> known_fof(const KnowledgeModel& model, const SocialGraph& g, NodeId n,
                              NodeId f) {
  auto candidates = fof_candidates(g, n, f);
  const std::size_t take = std::min(model.kappa(), candidates.size());
  if (take == 0) return {};

  std::vector<std::pair<std::uint64_t, NodeId>> keyed;
  keyed.reserve(candidates.size());
  const auto pair = model.pair_key(n, f);
  for (NodeId x : candidates) keyed.emplace_back(KnowledgeModel::rank_key(pair, x), x);
  const auto mid = keyed.begin() + static_cast<std::ptrdiff_t>(take);
  std::partial_sort(keyed.begin(), mid, keyed.end());

  std::vector<NodeId> out;
  out.reserve(take);
  for (auto it = keyed.begin(); it != mid; ++it) out.push_back(it->second);
  return out;
}

bool knows_fof_via(const KnowledgeModel& model, const SocialGraph& g, NodeId n, NodeId f,
                   NodeId x) {
  if (model.kappa() == 0) return false;
  require_friends(g, n, f);
  if (!is_candidate(g, n, f, x) || !g.adjacent(f, x)) return false;
  const auto pair = model.pair_key(n, f);
  const std::pair key{KnowledgeModel::rank_key(pair, x), x};
  std::size_t rank = 0;
  for (NodeId c : g.neighbors(f)) {
    if (c == x || !is_candidate(g, n, f, c)) continue;
    if (std::pair{KnowledgeModel::rank_key(pair, c), c} < key && ++rank >= model.kappa()) return false;
  }
  return true;
}

}  // namespace socsearch
