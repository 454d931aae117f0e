#include "socsearch/communities.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "socsearch/error.hpp"
#include "tsv.hpp"

namespace socsearch {

CommunityAssignment::CommunityAssignment(std::vector<std::vector<CommunityIndex>> memberships,
                                         std::vector<std::int64_t> labels)
    : memberships_(std::move(memberships)), labels_(std::move(labels)) {
  sizes_.assign(labels_.size(), 0);
  for (auto& m : memberships_) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    for (auto c : m) {
      if (c >= sizes_.size()) throw Error("community index out of range");
      ++sizes_[c];
    }
  }
  for (auto s : sizes_)
    if (s >= 2) c_max_ = std::max(c_max_.value_or(0), s);
}

std::size_t CommunityAssignment::require_c_max() const {
  if (!c_max_) throw Error("no community has two or more members; C_max is undefined");
  return *c_max_;
}

CommunityAssignment load_communities(const std::string& path, const SocialGraph& g) {
  std::vector<std::vector<CommunityIndex>> memberships(g.node_count());
  std::map<std::int64_t, CommunityIndex> index;
  std::vector<std::int64_t> labels;
  std::size_t skipped = 0;
  detail::for_each_row(path, [&](const auto& fields, std::size_t line) {
    if (fields.size() < 2) throw ParseError(path, line, "expected node_id and community_id");
    std::int64_t node = 0, community = 0;
    if (!detail::parse_number(fields[0], node)) throw ParseError(path, line, "bad node id");
    if (!detail::parse_number(fields[1], community))
      throw ParseError(path, line, "bad community id");
    const auto dense = g.find(node);
    if (!dense) {
      ++skipped;
      return;
    }
    auto [it, inserted] = index.try_emplace(community, static_cast<CommunityIndex>(labels.size()));
    if (inserted) labels.push_back(community);
    memberships[*dense].push_back(it->second);
  });
  CommunityAssignment out(std::move(memberships), std::move(labels));
  out.unknown_nodes_skipped = skipped;
  return out;
}

void write_communities(const std::string& path, const CommunityAssignment& a,
                       const SocialGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# node_id\tcommunity_id\n";
  for (NodeId u = 0; u < a.node_count(); ++u)
    for (auto c : a.memberships(u)) out << g.external_id(u) << '\t' << a.label(c) << '\n';
}

CommunityAssignment detect_communities(const SocialGraph& g, std::size_t max_sweeps) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> label(n), next(n);
  for (NodeId u = 0; u < n; ++u) label[u] = u;

  std::vector<std::size_t> count(n, 0);
  std::vector<NodeId> touched;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (NodeId u = 0; u < n; ++u) {
      touched.clear();
      auto bump = [&](NodeId l) {
        if (count[l]++ == 0) touched.push_back(l);
      };
      bump(label[u]);
      for (NodeId v : g.neighbors(u)) bump(label[v]);
      NodeId best = label[u];
      std::size_t best_count = 0;
      for (NodeId l : touched) {
        if (count[l] > best_count || (count[l] == best_count && l < best)) {
          best = l;
          best_count = count[l];
        }
      }
      for (NodeId l : touched) count[l] = 0;
      next[u] = best;
      changed |= best != label[u];
    }
    label.swap(next);
    if (!changed) break;
  }

  std::vector<std::int64_t> index(n, -1);
  std::vector<std::int64_t> labels;
  std::vector<std::vector<CommunityIndex>> memberships(n);
  for (NodeId u = 0; u < n; ++u) {
    auto& slot = index[label[u]];
    if (slot < 0) {
      slot = static_cast<std::int64_t>(labels.size());
      labels.push_back(g.external_id(label[u]));
    }
    memberships[u].push_back(static_cast<CommunityIndex>(slot));
  }
  return CommunityAssignment(std::move(memberships), std::move(labels));
}

std::optional<std::size_t> shared_community_size(const CommunityAssignment& assignment, NodeId a,
                                                 NodeId b, CommunityMetric metric) {
  const auto ma = assignment.memberships(a);
  const auto mb = assignment.memberships(b);
  std::optional<std::size_t> best;
  auto i = ma.begin();
  auto j = mb.begin();
  while (i != ma.end() && j != mb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      const std::size_t s = assignment.size(*i);
      if (!best || (metric == CommunityMetric::kSmallest ? s < *best : s > *best)) best = s;
      ++i;
      ++j;
    }
  }
  return best;
}

}  // namespace socsearch
