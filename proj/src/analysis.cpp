#include "socsearch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "socsearch/error.hpp"

namespace socsearch {

namespace {

/// Reusable "seen" marker keyed by a generation counter.
class Stamp {
 public:
  explicit Stamp(std::size_t n) : mark_(n, 0) {}
  void next() { ++gen_; }
  /// Marks i; returns true if it was not yet marked in this generation.
  bool mark(std::size_t i) {
    if (mark_[i] == gen_) return false;
    mark_[i] = gen_;
    return true;
  }
  bool marked(std::size_t i) const { return mark_[i] == gen_; }

 private:
  std::vector<std::uint64_t> mark_;
  std::uint64_t gen_ = 1;
};

/// FoF of n: nodes two hops away that are neither n nor friends of n.
void collect_fof(const SocialGraph& g, NodeId n, Stamp& seen, std::vector<NodeId>& out) {
  out.clear();
  seen.next();
  seen.mark(n);
  for (NodeId f : g.neighbors(n)) seen.mark(f);
  for (NodeId f : g.neighbors(n))
    for (NodeId x : g.neighbors(f))
      if (seen.mark(x)) out.push_back(x);
}

void collect_known_fof(const SocialGraph& g, const KnowledgeModel& k, NodeId n, Stamp& seen,
                       std::vector<NodeId>& out) {
  out.clear();
  seen.next();
  for (NodeId f : g.neighbors(n))
    for (NodeId x : known_fof(k, g, n, f))
      if (seen.mark(x)) out.push_back(x);
}

DistanceDistribution finish(const DistanceRanges& ranges, std::vector<double> sum,
                            std::size_t contributors) {
  DistanceDistribution d;
  d.contributors = contributors;
  double running = 0.0;
  for (std::size_t b = 0; b < ranges.bucket_count(); ++b) {
    d.labels.push_back(ranges.label(b));
    const double pct = contributors ? 100.0 * sum[b] / static_cast<double>(contributors) : 0.0;
    d.percent.push_back(pct);
    running += pct;
    d.cumulative.push_back(running);
  }
  return d;
}

}  // namespace

DistanceDistribution distance_distribution(const SocialGraph& g, DistanceRelation relation,
                                           const DistanceRanges& ranges,
                                           const CommunityAssignment* communities) {
  const std::size_t buckets = ranges.bucket_count();
  std::vector<double> sum(buckets, 0.0);
  std::vector<std::size_t> local(buckets);
  std::size_t contributors = 0;

  auto add_fractions = [&](std::size_t total) {
    for (std::size_t b = 0; b < buckets; ++b)
      sum[b] += static_cast<double>(local[b]) / static_cast<double>(total);
    ++contributors;
  };

  switch (relation) {
    case DistanceRelation::kFriends:
      for (NodeId u = 0; u < g.node_count(); ++u) {
        if (g.degree(u) == 0) continue;
        std::fill(local.begin(), local.end(), 0);
        for (NodeId v : g.neighbors(u))
          ++local[ranges.bucket(haversine_km(g.location(u), g.location(v)))];
        add_fractions(g.degree(u));
      }
      break;
    case DistanceRelation::kFof: {
      Stamp seen(g.node_count());
      std::vector<NodeId> fof;
      for (NodeId u = 0; u < g.node_count(); ++u) {
        collect_fof(g, u, seen, fof);
        if (fof.empty()) continue;
        std::fill(local.begin(), local.end(), 0);
        for (NodeId x : fof) ++local[ranges.bucket(haversine_km(g.location(u), g.location(x)))];
        add_fractions(fof.size());
      }
      break;
    }
    case DistanceRelation::kCommunities: {
      if (!communities) throw Error("community distance distribution needs an assignment");
      std::vector<std::vector<NodeId>> members(communities->community_count());
      for (NodeId u = 0; u < communities->node_count() && u < g.node_count(); ++u)
        for (auto c : communities->memberships(u)) members[c].push_back(u);
      for (const auto& m : members) {
        if (m.size() < 2) continue;
        std::fill(local.begin(), local.end(), 0);
        for (std::size_t i = 0; i < m.size(); ++i)
          for (std::size_t j = i + 1; j < m.size(); ++j)
            local[ranges.bucket(haversine_km(g.location(m[i]), g.location(m[j])))] += 2;
        add_fractions(m.size() * (m.size() - 1));
      }
      break;
    }
  }
  return finish(ranges, std::move(sum), contributors);
}

CommunityReach community_reach_stats(const SocialGraph& g, const CommunityAssignment& communities,
                                     const KnowledgeModel& knowledge) {
  CommunityReach r;
  const std::size_t n = g.node_count();
  if (n == 0) return r;
  if (communities.node_count() != n) throw Error("community assignment does not cover the graph");

  Stamp node_seen(n);
  Stamp comm(communities.community_count());
  std::vector<NodeId> fof;
  std::size_t own = 0, friends = 0, all = 0, known = 0;
  for (NodeId u = 0; u < n; ++u) {
    own += communities.memberships(u).size();

    comm.next();
    std::size_t via_friends = 0;
    auto absorb = [&](NodeId x, std::size_t& counter) {
      for (auto c : communities.memberships(x))
        if (comm.mark(c)) ++counter;
    };
    for (NodeId f : g.neighbors(u)) absorb(f, via_friends);
    friends += via_friends;

    // Friends' communities are already marked in this generation.
    std::size_t via_all = via_friends;
    collect_fof(g, u, node_seen, fof);
    for (NodeId x : fof) absorb(x, via_all);
    all += via_all;

    comm.next();
    std::size_t via_known = 0;
    for (NodeId f : g.neighbors(u)) absorb(f, via_known);
    collect_known_fof(g, knowledge, u, node_seen, fof);
    for (NodeId x : fof) absorb(x, via_known);
    known += via_known;
  }
  const auto denom = static_cast<double>(n);
  r.own = static_cast<double>(own) / denom;
  r.via_friends = static_cast<double>(friends) / denom;
  r.via_fof = static_cast<double>(all) / denom;
  r.via_known_fof = static_cast<double>(known) / denom;
  return r;
}

ProminenceStats prominence_stats(const SocialGraph& g, const KnowledgeModel& knowledge,
                                 double top_fraction) {
  ProminenceStats s;
  const std::size_t n = g.node_count();
  if (n == 0) return s;
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw Error("top_fraction must be in (0, 1]");

  auto degrees = g.degrees();
  std::sort(degrees.begin(), degrees.end(), std::greater<>());
  const auto k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(n) - 1e-9)), 1, n);
  s.threshold_degree = degrees[k - 1];

  std::vector<char> prominent(n, 0);
  for (NodeId u = 0; u < n; ++u)
    if (g.degree(u) >= s.threshold_degree) {
      prominent[u] = 1;
      ++s.prominent;
    }
  s.non_prominent = n - s.prominent;
  s.degenerate = s.non_prominent == 0;
  if (s.degenerate) return s;

  Stamp seen(n);
  std::vector<NodeId> set;
  for (NodeId u = 0; u < n; ++u) {
    if (prominent[u]) continue;
    s.friends += static_cast<double>(g.degree(u));
    for (NodeId f : g.neighbors(u)) s.prominent_friends += prominent[f];
    collect_fof(g, u, seen, set);
    s.fof += static_cast<double>(set.size());
    for (NodeId x : set) s.prominent_fof += prominent[x];
    collect_known_fof(g, knowledge, u, seen, set);
    s.known_fof += static_cast<double>(set.size());
    for (NodeId x : set) s.prominent_known_fof += prominent[x];
  }
  const auto denom = static_cast<double>(s.non_prominent);
  for (double* v : {&s.friends, &s.prominent_friends, &s.fof, &s.prominent_fof, &s.known_fof,
                    &s.prominent_known_fof})
    *v /= denom;
  return s;
}

FofSizeStats fof_size_stats(const SocialGraph& g, const KnowledgeModel& knowledge) {
  FofSizeStats s;
  const std::size_t n = g.node_count();
  if (n == 0) return s;
  Stamp seen(n);
  std::vector<NodeId> set;
  for (NodeId u = 0; u < n; ++u) {
    s.friends += static_cast<double>(g.degree(u));
    collect_fof(g, u, seen, set);
    s.fof += static_cast<double>(set.size());
    collect_known_fof(g, knowledge, u, seen, set);
    s.known_fof += static_cast<double>(set.size());
  }
  const auto denom = static_cast<double>(n);
  s.friends /= denom;
  s.fof /= denom;
  s.known_fof /= denom;
  return s;
}

std::vector<CellShare> cell_population_report(const RhomboidGrid& grid,
                                              std::span<const GeoPoint> locations,
                                              std::size_t top_k) {
  const auto pop = cell_populations(grid, locations);
  const std::size_t located = locations.size() - pop.outside;
  std::vector<CellShare> rows;
  for (CellId c = 0; c < grid.cell_count(); ++c) {
    if (pop.counts[c] == 0) continue;
    rows.push_back({c, grid.cell_bounds(c), pop.counts[c],
                    static_cast<double>(pop.counts[c]) / static_cast<double>(located)});
  }
  std::sort(rows.begin(), rows.end(), [](const CellShare& a, const CellShare& b) {
    return a.count > b.count || (a.count == b.count && a.cell < b.cell);
  });
  if (top_k > 0 && rows.size() > top_k) rows.resize(top_k);
  return rows;
}

std::string format_distance_tsv(const DistanceDistribution& d) {
  std::string out = "range_km\tpercent\tcumulative\n";
  char buf[128];
  for (std::size_t b = 0; b < d.labels.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%s\t%.2f\t%.2f\n", d.labels[b].c_str(), d.percent[b],
                  d.cumulative[b]);
    out += buf;
  }
  return out;
}

std::string format_cells_tsv(std::span<const CellShare> rows) {
  std::string out = "cell\tlat_min\tlat_max\tlon_min\tlon_max\tcount\tfraction\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%u\t%.4f\t%.4f\t%.4f\t%.4f\t%zu\t%.6f\n", r.cell,
                  r.bounds.lat_min, r.bounds.lat_max, r.bounds.lon_min, r.bounds.lon_max, r.count,
                  r.fraction);
    out += buf;
  }
  return out;
}

}  // namespace socsearch
