#include "socsearch/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "socsearch/error.hpp"

namespace socsearch {

// ---------------------------------------------------------------------------
// DistanceRanges

DistanceRanges::DistanceRanges(std::vector<double> breakpoints_km)
    : breakpoints_(std::move(breakpoints_km)) {
  if (breakpoints_.empty()) throw Error("distance ranges need at least one breakpoint");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > 0.0)) throw Error("distance breakpoints must be positive");
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
      throw Error("distance breakpoints must be strictly increasing");
  }
}

DistanceRanges DistanceRanges::standard() {
  return DistanceRanges({6.25, 12.5, 25, 50, 100, 200, 400, 800, 1600, 3200, 6400});
}

std::size_t DistanceRanges::bucket(double km) const noexcept {
  return static_cast<std::size_t>(
      std::lower_bound(breakpoints_.begin(), breakpoints_.end(), km) - breakpoints_.begin());
}

std::string DistanceRanges::label(std::size_t bucket) const {
  char buf[64];
  if (bucket == 0)
    std::snprintf(buf, sizeof buf, "<=%.2f", breakpoints_[0]);
  else if (bucket < breakpoints_.size())
    std::snprintf(buf, sizeof buf, "%.2f-%.2f", breakpoints_[bucket - 1], breakpoints_[bucket]);
  else
    std::snprintf(buf, sizeof buf, ">%.2f", breakpoints_.back());
  return buf;
}

std::vector<std::size_t> node_range_histograms(const SocialGraph& g, const DistanceRanges& ranges) {
  const std::size_t b = ranges.bucket_count();
  std::vector<std::size_t> hist(g.node_count() * b, 0);
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      ++hist[u * b + ranges.bucket(haversine_km(g.location(u), g.location(v)))];
  return hist;
}

// ---------------------------------------------------------------------------
// Embedding and friendship names

std::string EmbeddingSpec::name() const {
  switch (kind) {
    case EmbeddingKind::kOriginal:
      return "original";
    case EmbeddingKind::kUniformRandom:
      return "uniform-random";
    default:
      break;
  }
  std::string base = kind == EmbeddingKind::kExponential ? "exponential"
                     : kind == EmbeddingKind::kNormal    ? "normal"
                                                         : "zipf";
  if (within) base += *within == WithinCell::kGeographic ? "-geographic" : "-uniform";
  return base;
}

EmbeddingSpec EmbeddingSpec::parse(std::string_view name) {
  EmbeddingSpec s;
  if (name == "original") return s;
  if (name == "uniform-random" || name == "random") {
    s.kind = EmbeddingKind::kUniformRandom;
    return s;
  }
  const auto dash = name.find('-');
  const auto head = name.substr(0, dash);
  if (head == "exponential")
    s.kind = EmbeddingKind::kExponential;
  else if (head == "normal")
    s.kind = EmbeddingKind::kNormal;
  else if (head == "zipf")
    s.kind = EmbeddingKind::kZipf;
  else
    throw Error("unknown embedding '" + std::string(name) + "'");
  if (dash == std::string_view::npos) return s;  // within-cell left unset
  const auto tail = name.substr(dash + 1);
  if (tail == "geographic")
    s.within = WithinCell::kGeographic;
  else if (tail == "uniform")
    s.within = WithinCell::kUniform;
  else
    throw Error("unknown within-cell placement '" + std::string(tail) + "'");
  return s;
}

std::string FriendshipSpec::name() const {
  switch (kind) {
    case FriendshipKind::kOriginal:
      return "original";
    case FriendshipKind::kDegreeRangePreserving:
      return "degree-range-preserving";
    case FriendshipKind::kUniformRandom:
      return "uniform-random";
    case FriendshipKind::kExponential:
      return "exponential";
    case FriendshipKind::kPowerLaw:
      return "power-law";
  }
  return "unknown";
}

FriendshipSpec FriendshipSpec::parse(std::string_view name) {
  FriendshipSpec s;
  if (name == "original")
    s.kind = FriendshipKind::kOriginal;
  else if (name == "degree-range-preserving")
    s.kind = FriendshipKind::kDegreeRangePreserving;
  else if (name == "uniform-random")
    s.kind = FriendshipKind::kUniformRandom;
  else if (name == "exponential")
    s.kind = FriendshipKind::kExponential;
  else if (name == "power-law")
    s.kind = FriendshipKind::kPowerLaw;
  else
    throw Error("unknown friendship distribution '" + std::string(name) + "'");
  return s;
}

// ---------------------------------------------------------------------------
// Embeddings

std::vector<std::size_t> draw_cell_populations(const EmbeddingSpec& spec, std::size_t cells,
                                               double mean, double variance, Rng& rng) {
  std::vector<std::size_t> pop(cells, 0);
  switch (spec.kind) {
    case EmbeddingKind::kExponential: {
      if (!(mean > 0.0)) throw Error("exponential cell populations need a positive mean");
      std::exponential_distribution<double> dist(1.0 / mean);
      for (auto& p : pop) p = static_cast<std::size_t>(std::llround(dist(rng)));
      break;
    }
    case EmbeddingKind::kNormal: {
      if (!(mean > 0.0) || !(variance >= 0.0))
        throw Error("normal cell populations need a positive mean and a variance");
      std::normal_distribution<double> dist(mean, std::sqrt(variance));
      for (auto& p : pop) p = static_cast<std::size_t>(std::llround(std::max(0.0, dist(rng))));
      break;
    }
    case EmbeddingKind::kZipf: {
      if (!(spec.zipf_largest > 0.0)) throw Error("zipf needs a positive largest population");
      std::vector<std::size_t> order(cells);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t r = 0; r < cells; ++r)
        pop[order[r]] = static_cast<std::size_t>(std::llround(
            spec.zipf_largest / std::pow(static_cast<double>(r + 1), spec.zipf_exponent)));
      break;
    }
    default:
      throw Error("cell populations are only drawn for exponential, normal and zipf");
  }
  return pop;
}

std::vector<std::size_t> scale_populations(std::span<const std::size_t> populations,
                                           std::size_t total) {
  const double sum = std::accumulate(populations.begin(), populations.end(), 0.0,
                                     [](double a, std::size_t b) { return a + static_cast<double>(b); });
  if (sum <= 0.0) {
    if (total == 0) return std::vector<std::size_t>(populations.size(), 0);
    throw Error("cannot scale all-zero cell populations");
  }
  std::vector<std::size_t> out(populations.size());
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < populations.size(); ++i) {
    const double exact = static_cast<double>(populations[i]) * static_cast<double>(total) / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[i];
    remainder.emplace_back(exact - std::floor(exact), i);
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[remainder[k % remainder.size()].second];
  return out;
}

namespace {

GeoPoint place(const BoundingBox& cell, double u, double v) {
  GeoPoint p{cell.lat_min + u * (cell.lat_max - cell.lat_min),
             cell.lon_min + v * (cell.lon_max - cell.lon_min)};
  // Keep the half-open upper edge exclusive.
  if (p.lat >= cell.lat_max) p.lat = std::nextafter(cell.lat_max, cell.lat_min);
  if (p.lon >= cell.lon_max) p.lon = std::nextafter(cell.lon_max, cell.lon_min);
  return p;
}

struct Offset {
  double u, v;
};

}  // namespace

std::vector<GeoPoint> embed_nodes(const RhomboidGrid& grid, std::span<const GeoPoint> base,
                                  const EmbeddingSpec& spec, Rng& rng) {
  if (spec.kind == EmbeddingKind::kOriginal) return {base.begin(), base.end()};
  const std::size_t n = base.size();
  if (grid.cell_count() == 0) throw Error("grid has no cells");

  // Base statistics over populated cells.
  const auto base_pop = cell_populations(grid, base);
  std::vector<CellId> populated;
  std::vector<std::vector<Offset>> offsets(grid.cell_count());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (auto c = grid.locate(base[i])) {
      const auto b = grid.cell_bounds(*c);
      offsets[*c].push_back({(base[i].lat - b.lat_min) / (b.lat_max - b.lat_min),
                             (base[i].lon - b.lon_min) / (b.lon_max - b.lon_min)});
    }
  }
  for (CellId c = 0; c < grid.cell_count(); ++c)
    if (base_pop.counts[c] > 0) populated.push_back(c);
  const bool have_base = !populated.empty();
  if (!have_base) {
    populated.resize(grid.cell_count());
    std::iota(populated.begin(), populated.end(), 0);
  }

  std::vector<GeoPoint> out(n);
  if (spec.kind == EmbeddingKind::kUniformRandom) {
    for (auto& p : out) {
      const CellId c = populated[uniform_index(rng, populated.size())];
      p = place(grid.cell_bounds(c), uniform01(rng), uniform01(rng));
    }
    return out;
  }

  if (!spec.within) throw Error("embedding '" + spec.name() + "' needs a within-cell placement");
  double mean = 0.0, variance = 0.0;
  if (have_base) {
    for (CellId c : populated) mean += static_cast<double>(base_pop.counts[c]);
    mean /= static_cast<double>(populated.size());
    for (CellId c : populated) {
      const double d = static_cast<double>(base_pop.counts[c]) - mean;
      variance += d * d;
    }
    variance /= static_cast<double>(populated.size());
  }
  if (spec.mean) mean = *spec.mean;
  if (spec.variance) variance = *spec.variance;
  if (spec.kind != EmbeddingKind::kZipf && !have_base && !spec.mean)
    throw Error("embedding '" + spec.name() + "' needs a mean population or base locations");
  if (spec.kind == EmbeddingKind::kNormal && !have_base && !spec.variance)
    throw Error("normal embedding needs a variance or base locations");
  if (*spec.within == WithinCell::kGeographic && !have_base)
    throw Error("geographic placement needs base locations inside the grid");

  const auto raw = draw_cell_populations(spec, populated.size(), mean, variance, rng);
  const auto counts = scale_populations(raw, n);

  // Source cells for geographic placement, searchable by population.
  std::vector<std::pair<std::size_t, CellId>> by_pop;
  if (*spec.within == WithinCell::kGeographic)
    for (CellId c : populated) by_pop.emplace_back(base_pop.counts[c], c);
  std::sort(by_pop.begin(), by_pop.end());
  auto nearest_source = [&](std::size_t target) {
    auto it = std::lower_bound(by_pop.begin(), by_pop.end(), std::pair{target, CellId{0}});
    // Candidates: the first entry with pop >= target, and the smallest-id entry
    // with the largest pop below target.
    std::optional<std::pair<std::size_t, CellId>> best;
    auto consider = [&](std::size_t pop, CellId c) {
      const std::size_t gap = pop > target ? pop - target : target - pop;
      if (!best || gap < best->first || (gap == best->first && c < best->second))
        best = std::pair{gap, c};
    };
    if (it != by_pop.end()) consider(it->first, it->second);
    if (it != by_pop.begin()) {
      const std::size_t below = std::prev(it)->first;
      auto first_below = std::lower_bound(by_pop.begin(), it, std::pair{below, CellId{0}});
      consider(first_below->first, first_below->second);
    }
    return best->second;
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t next = 0;
  for (std::size_t k = 0; k < populated.size(); ++k) {
    const auto cell = grid.cell_bounds(populated[k]);
    if (*spec.within == WithinCell::kUniform) {
      for (std::size_t j = 0; j < counts[k]; ++j)
        out[order[next++]] = place(cell, uniform01(rng), uniform01(rng));
      continue;
    }
    if (counts[k] == 0) continue;
    auto source = offsets[nearest_source(counts[k])];
    std::shuffle(source.begin(), source.end(), rng);
    for (std::size_t j = 0; j < counts[k]; ++j) {
      const auto& o = source[j % source.size()];
      out[order[next++]] = place(cell, o.u, o.v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degree/range preserving rewiring

RewireResult rewire_preserving_degree_range(const SocialGraph& g, const RhomboidGrid& grid,
                                            const DistanceRanges& ranges, Rng& rng,
                                            std::optional<std::size_t> attempts) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId u = 0; u < n; ++u) adj[u].assign(g.neighbors(u).begin(), g.neighbors(u).end());

  std::vector<std::vector<NodeId>> members(grid.cell_count());
  std::vector<std::int64_t> cell_of(n, -1);
  for (NodeId u = 0; u < n; ++u) {
    if (auto c = grid.locate(g.location(u))) {
      members[*c].push_back(u);
      cell_of[u] = *c;
    }
  }
  std::vector<NodeId> eligible;
  for (NodeId u = 0; u < n; ++u)
    if (cell_of[u] >= 0 && members[static_cast<std::size_t>(cell_of[u])].size() >= 2 && !adj[u].empty())
      eligible.push_back(u);

  RewireResult result;
  result.attempts = attempts.value_or(10 * g.edge_count());
  if (eligible.empty()) {
    result.graph = g;
    return result;
  }

  auto has = [&](NodeId a, NodeId b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  auto erase = [&](NodeId a, NodeId b) {
    adj[a].erase(std::lower_bound(adj[a].begin(), adj[a].end(), b));
  };
  auto insert = [&](NodeId a, NodeId b) {
    adj[a].insert(std::lower_bound(adj[a].begin(), adj[a].end(), b), b);
  };
  auto bucket = [&](NodeId a, NodeId b) {
    return ranges.bucket(haversine_km(g.location(a), g.location(b)));
  };

  for (std::size_t t = 0; t < result.attempts; ++t) {
    const NodeId u = eligible[uniform_index(rng, eligible.size())];
    const auto& cell = members[static_cast<std::size_t>(cell_of[u])];
    NodeId v = cell[uniform_index(rng, cell.size() - 1)];
    if (v == u) v = cell.back();
    if (adj[v].empty()) continue;
    const NodeId x = adj[u][uniform_index(rng, adj[u].size())];
    const NodeId y = adj[v][uniform_index(rng, adj[v].size())];
    if (x == y || x == v || y == u) continue;
    if (has(u, y) || has(v, x)) continue;
    const auto b = bucket(u, x);
    if (bucket(v, y) != b || bucket(u, y) != b || bucket(v, x) != b) continue;
    erase(u, x);
    erase(x, u);
    erase(v, y);
    erase(y, v);
    insert(u, y);
    insert(y, u);
    insert(v, x);
    insert(x, v);
    ++result.swaps;
  }

  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) edges.push_back({u, v});
  result.graph = g.with_edges(edges);
  return result;
}

// ---------------------------------------------------------------------------
// Random graphs

namespace {

SocialGraph bare_graph(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::int64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return SocialGraph(std::move(ids), std::vector<GeoPoint>(n), edges);
}

}  // namespace

SocialGraph erdos_renyi(std::size_t n, double mean_degree, Rng& rng) {
  if (n < 2) throw Error("erdos_renyi needs at least two nodes");
  const double max_degree = static_cast<double>(n - 1);
  if (!(mean_degree > 0.0) || mean_degree > max_degree)
    throw Error("erdos_renyi mean degree must be in (0, n-1]");
  const double p = mean_degree / max_degree;

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(static_cast<double>(n) * mean_degree / 2.0 * 1.05) + 16);
  if (p >= 1.0) {
    for (NodeId v = 1; v < n; ++v)
      for (NodeId w = 0; w < v; ++w) edges.push_back({w, v});
    return bare_graph(n, edges);
  }
  // Geometric skipping over the lower triangle.
  const double log_q = std::log1p(-p);
  std::int64_t v = 1, w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = uniform01(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.push_back({static_cast<NodeId>(w), static_cast<NodeId>(v)});
  }
  return bare_graph(n, edges);
}

std::size_t power_law_upper_for_mean(double gamma, std::size_t d_min, double target_mean,
                                     std::size_t limit) {
  if (d_min < 1) throw Error("power-law d_min must be at least 1");
  if (limit < d_min) throw Error("power-law degree range is empty");
  double s0 = 0.0, s1 = 0.0, prev_mean = 0.0;
  for (std::size_t d = d_min; d <= limit; ++d) {
    const double w = std::pow(static_cast<double>(d), -gamma);
    s0 += w;
    s1 += w * static_cast<double>(d);
    const double mean = s1 / s0;
    if (mean >= target_mean) {
      if (d > d_min && target_mean - prev_mean < mean - target_mean) return d - 1;
      return d;
    }
    prev_mean = mean;
  }
  throw Error("power-law mean degree unreachable within the degree limit");
}

DegreeSequence sample_degree_sequence(DegreeDistribution kind, std::size_t n,
                                      const DegreeParams& params, Rng& rng) {
  DegreeSequence seq(n, 0);
  if (n == 0) return seq;
  if (kind == DegreeDistribution::kExponential) {
    if (!(params.mean >= 1.0)) throw Error("exponential degrees need a mean of at least 1");
    std::geometric_distribution<std::size_t> dist(1.0 / params.mean);
    for (auto& d : seq) d = 1 + dist(rng);
  } else {
    if (!(params.gamma > 0.0)) throw Error("power-law exponent must be positive");
    const std::size_t lo = std::max<std::size_t>(1, params.d_min);
    const std::size_t limit = std::max<std::size_t>(lo, n > 1 ? n - 1 : 1);
    const std::size_t hi =
        params.d_max ? *params.d_max : power_law_upper_for_mean(params.gamma, lo, params.mean, limit);
    if (hi < lo) throw Error("power-law degree range is empty");
    std::vector<double> w;
    w.reserve(hi - lo + 1);
    for (std::size_t d = lo; d <= hi; ++d) w.push_back(std::pow(static_cast<double>(d), -params.gamma));
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    for (auto& d : seq) d = lo + dist(rng);
  }
  const std::size_t sum = std::accumulate(seq.begin(), seq.end(), std::size_t{0});
  if (sum % 2 == 1) ++seq[uniform_index(rng, n)];
  return seq;
}

ConfigurationModelResult configuration_model(const DegreeSequence& seq, Rng& rng,
                                             std::size_t retry_rounds) {
  const std::size_t total = std::accumulate(seq.begin(), seq.end(), std::size_t{0});
  if (total % 2 != 0) throw Error("configuration model needs an even degree sum");
  if (seq.size() < 2 && total > 0) throw Error("configuration model needs at least two nodes");

  std::vector<NodeId> stubs;
  stubs.reserve(total);
  for (NodeId u = 0; u < seq.size(); ++u) stubs.insert(stubs.end(), seq[u], u);

  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::unordered_set<std::uint64_t> present;
  present.reserve(total);
  std::vector<Edge> edges;
  edges.reserve(total / 2);

  for (std::size_t round = 0; round <= retry_rounds && !stubs.empty(); ++round) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<NodeId> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const NodeId a = stubs[i], b = stubs[i + 1];
      if (a == b || !present.insert(key(a, b)).second) {
        leftover.push_back(a);
        leftover.push_back(b);
        continue;
      }
      edges.push_back({a, b});
    }
    stubs = std::move(leftover);
  }

  // Leftover pairs are mostly self-loops and repeats around hubs. Splice each
  // one into a random existing edge {c, d}: {c, d} becomes {a, c} and {b, d}.
  std::vector<NodeId> dropped;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId a = stubs[i], b = stubs[i + 1];
    if (a != b && present.insert(key(a, b)).second) {
      edges.push_back({a, b});
      continue;
    }
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !edges.empty() && !placed; ++attempt) {
      const std::size_t k = uniform_index(rng, edges.size());
      auto [c, d] = edges[k];
      if (uniform01(rng) < 0.5) std::swap(c, d);
      if (c == a || c == b || d == a || d == b) continue;
      if (present.count(key(a, c)) || present.count(key(b, d))) continue;
      present.erase(key(c, d));
      present.insert(key(a, c));
      present.insert(key(b, d));
      edges[k] = {a, c};
      edges.push_back({b, d});
      placed = true;
    }
    if (!placed) {
      dropped.push_back(a);
      dropped.push_back(b);
    }
  }
  stubs = std::move(dropped);
  ConfigurationModelResult out{bare_graph(seq.size(), edges), stubs.size()};
  return out;
}

SocialGraph geo_small_world(const RhomboidGrid& grid, std::size_t n, double mean_degree,
                            const GeoSmallWorldParams& params, Rng& rng) {
  if (n < 2) throw Error("geo_small_world needs at least two nodes");
  if (!(mean_degree > 0.0) || mean_degree > static_cast<double>(n - 1))
    throw Error("geo_small_world mean degree must be in (0, n-1]");
  if (grid.cell_count() == 0) throw Error("grid has no cells");

  std::vector<GeoPoint> loc(n);
  for (auto& p : loc)
    p = place(grid.cell_bounds(static_cast<CellId>(uniform_index(rng, grid.cell_count()))),
              uniform01(rng), uniform01(rng));

  const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * mean_degree / 2.0));
  std::vector<std::size_t> out_count(n, 0);
  for (std::size_t e = 0; e < m; ++e) ++out_count[uniform_index(rng, n)];

  std::unordered_set<std::uint64_t> present;
  present.reserve(2 * m);
  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<double> cdf(n);
  for (NodeId u = 0; u < n; ++u) {
    if (out_count[u] == 0) continue;
    double acc = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (v != u)
        acc += std::pow(haversine_km(loc[u], loc[v]) + params.core_km, -params.distance_exponent);
      cdf[v] = acc;
    }
    for (std::size_t k = 0; k < out_count[u]; ++k) {
      for (int tries = 0; tries < 32; ++tries) {
        const double r = uniform01(rng) * acc;
        auto v = static_cast<NodeId>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
        if (v >= n) v = static_cast<NodeId>(n - 1);
        if (v == u) continue;
        const NodeId a = std::min(u, v), b = std::max(u, v);
        if (!present.insert((static_cast<std::uint64_t>(a) << 32) | b).second) continue;
        edges.push_back({a, b});
        break;
      }
    }
  }
  std::vector<std::int64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return SocialGraph(std::move(ids), std::move(loc), edges);
}

}  // namespace socsearch
