// End-to-end acceptance checks. One PASS/FAIL/SKIP line per criterion; the
// exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "socsearch/analysis.hpp"
#include "socsearch/communities.hpp"
#include "socsearch/experiment.hpp"
#include "socsearch/geo.hpp"
#include "socsearch/graph.hpp"
#include "socsearch/knowledge.hpp"
#include "socsearch/netgen.hpp"
#include "socsearch/routing.hpp"
#include "support.hpp"

using namespace socsearch;

namespace {

struct Outcome {
  enum class Status { kPass, kFail, kSkip } status;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Status::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Status::kFail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Status::kSkip, std::move(d)}; }
Outcome verdict(bool ok, std::string d) { return ok ? pass(std::move(d)) : fail(std::move(d)); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

Outcome knowledge_nesting() {
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = make_rng(101, {});
  std::size_t checks = 0, violations = 0;
  for (int gi = 0; gi < 100; ++gi) {
    const std::size_t n = 20 + uniform_index(rng, 181);
    const double p = (2.0 + 18.0 * uniform01(rng)) / static_cast<double>(n);
    const auto g = testing::random_graph(n, p, rng);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      for (NodeId u = 0; u < n; ++u)
        for (NodeId f : g.neighbors(u)) {
          std::size_t lo = uniform_index(rng, 51), hi = uniform_index(rng, 51);
          if (lo > hi) std::swap(lo, hi);
          const auto small = known_fof(KnowledgeModel(lo, seed), g, u, f);
          const auto large = known_fof(KnowledgeModel(hi, seed), g, u, f);
          ++checks;
          violations += small.size() > large.size() ||
                        !std::equal(small.begin(), small.end(), large.begin());
        }
  }
  const double secs = seconds_since(t0);
  return verdict(violations == 0 && secs < 10.0,
                 fmt("%zu (kappa1 <= kappa2) prefix checks, %zu violations, %.2f s", checks,
                     violations, secs));
}

Outcome rewire_preservation() {
  const auto grid = build_grid({38.0, 41.0, -100.0, -96.0}, 70.0);
  const auto ranges = DistanceRanges::standard();
  auto rng = make_rng(102, {});
  const auto g = geo_small_world(grid, 1000, 12, GeoSmallWorldParams{}, rng);
  const auto r = rewire_preserving_degree_range(g, grid, ranges, rng, 10000);
  const bool degrees = r.graph.degrees() == g.degrees();
  const bool hist = node_range_histograms(r.graph, ranges) == node_range_histograms(g, ranges);
  return verdict(degrees && hist && r.swaps > 0,
                 fmt("%zu attempts, %zu swaps, degrees %s, range histograms %s", r.attempts,
                     r.swaps, degrees ? "identical" : "differ", hist ? "identical" : "differ"));
}

// Brute-force re-implementation of one search, written against the rules
// rather than the library internals.
struct Oracle {
  const SocialGraph& g;
  std::vector<std::vector<NodeId>> members;  // per community
  std::vector<std::set<std::size_t>> node_comms;
  std::size_t kappa;
  std::uint64_t seed;
  Weights w;
  double d_max = 0.0, p_max = 0.0, c_max = 0.0;

  Oracle(const SocialGraph& graph, const std::vector<std::vector<NodeId>>& comms,
         std::size_t kappa_, std::uint64_t seed_, Weights w_)
      : g(graph), members(comms), node_comms(graph.node_count()), kappa(kappa_), seed(seed_),
        w(w_) {
    for (std::size_t c = 0; c < members.size(); ++c) {
      for (NodeId x : members[c]) node_comms[x].insert(c);
      if (members[c].size() >= 2) c_max = std::max(c_max, double(members[c].size()));
    }
    for (NodeId a = 0; a < g.node_count(); ++a)
      for (NodeId b = 0; b < g.node_count(); ++b)
        d_max = std::max(d_max, haversine_km(g.location(a), g.location(b)));
    std::size_t top = 0;
    for (NodeId a = 0; a < g.node_count(); ++a) top = std::max(top, g.degree(a));
    p_max = std::log2(double(top));
  }

  bool friends(NodeId a, NodeId b) const {
    const auto nb = g.neighbors(a);
    return std::find(nb.begin(), nb.end(), b) != nb.end();
  }

  std::vector<NodeId> known(NodeId n, NodeId f) const {
    const KnowledgeModel keys(0, seed);
    std::vector<std::pair<std::uint64_t, NodeId>> cand;
    for (NodeId x = 0; x < g.node_count(); ++x)
      if (x != n && friends(f, x) && !friends(n, x)) cand.push_back({keys.rank_key(n, f, x), x});
    std::sort(cand.begin(), cand.end());
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < cand.size() && i < kappa; ++i) out.push_back(cand[i].second);
    return out;
  }

  double score(NodeId cur, NodeId i, NodeId t) const {
    double u = 0.0;
    if (w.distance() > 0.0) {
      const double gain = haversine_km(g.location(cur), g.location(t)) -
                          haversine_km(g.location(i), g.location(t));
      u += w.distance() * std::max(0.0, gain / d_max);
    }
    if (w.community() > 0.0) {
      double ci = c_max + 1.0;
      for (std::size_t c : node_comms[i])
        if (node_comms[t].count(c)) ci = std::min(ci, double(members[c].size()));
      u += w.community() * (1.0 - (ci - 1.0) / c_max);
    }
    if (w.popularity() > 0.0) u += w.popularity() * std::log2(double(g.degree(i))) / p_max;
    return u;
  }

  std::vector<NodeId> run(NodeId s, NodeId t, Rng& rng, std::size_t hop_limit) const {
    std::vector<NodeId> path{s};
    auto seen = [&](NodeId x) { return std::find(path.begin(), path.end(), x) != path.end(); };
    while (path.size() - 1 < hop_limit && path.back() != t) {
      const NodeId cur = path.back();
      if (friends(cur, t)) {
        path.push_back(t);
        continue;
      }
      std::vector<NodeId> open;
      for (NodeId f = 0; f < g.node_count(); ++f)
        if (friends(cur, f) && !seen(f)) open.push_back(f);
      std::optional<NodeId> next;
      for (NodeId f : open) {
        const auto k = known(cur, f);
        if (std::find(k.begin(), k.end(), t) != k.end()) {
          next = f;
          break;
        }
      }
      if (!next && !open.empty()) {
        std::vector<NodeId> pool = open;
        if (!w.is_random()) {
          std::vector<double> eff;
          for (NodeId f : open) {
            double e = score(cur, f, t);
            for (NodeId x : known(cur, f))
              if (!seen(x)) e = std::max(e, score(cur, x, t));
            eff.push_back(e);
          }
          const double best = *std::max_element(eff.begin(), eff.end());
          pool.clear();
          for (std::size_t i = 0; i < open.size(); ++i)
            if (eff[i] >= best - 1e-12) pool.push_back(open[i]);
        }
        next = pool.size() == 1 ? pool[0] : pool[uniform_index(rng, pool.size())];
      }
      if (!next) break;
      path.push_back(*next);
    }
    return path;
  }
};

Outcome routing_oracle() {
  const std::vector<Weights> weights{Weights(0, 0, 0), Weights(1, 0, 0), Weights(0, 1, 0),
                                     Weights(0, 0, 1), Weights(0.25, 0.25, 0.5)};
  auto rng = make_rng(103, {});
  std::size_t graphs = 0, searches = 0, mismatches = 0;
  while (graphs < 50) {
    const std::size_t n = 3 + uniform_index(rng, 8);
    const auto g = testing::random_graph(n, 0.25 + 0.5 * uniform01(rng), rng);
    if (g.max_degree() < 2) continue;
    ++graphs;
    // Overlapping random communities: some nodes in two, some in none.
    std::vector<std::vector<NodeId>> comms(3);
    std::vector<std::vector<CommunityIndex>> memberships(n);
    for (NodeId x = 0; x < n; ++x)
      for (CommunityIndex c = 0; c < 3; ++c)
        if (uniform01(rng) < 0.45) {
          comms[c].push_back(x);
          memberships[x].push_back(c);
        }
    if (std::none_of(comms.begin(), comms.end(), [](const auto& m) { return m.size() >= 2; })) {
      comms[0] = {0, 1};
      for (auto& m : memberships) std::erase(m, CommunityIndex{0});
      memberships[0].insert(memberships[0].begin(), 0);
      memberships[1].insert(memberships[1].begin(), 0);
    }
    const CommunityAssignment assignment(memberships, {0, 1, 2});
    for (const auto& w : weights)
      for (std::size_t kappa : {0, 1, 2, 12}) {
        const std::uint64_t kseed = graphs * 7 + kappa;
        const RoutingContext ctx(g, assignment, KnowledgeModel(kappa, kseed), w);
        const Oracle oracle(g, comms, kappa, kseed, w);
        for (NodeId s = 0; s < n; ++s)
          for (NodeId t = 0; t < n; ++t) {
            if (s == t) continue;
            for (std::uint64_t r = 0; r < 3; ++r) {
              auto a = make_rng(9, {graphs, s, t, r});
              auto b = a;
              const auto got = route(ctx, s, t, a).path;
              const auto want = oracle.run(s, t, b, ctx.options().hop_limit);
              ++searches;
              mismatches += got != want;
            }
          }
      }
  }
  return verdict(mismatches == 0, fmt("%zu graphs, %zu searches, %zu path mismatches", graphs,
                                      searches, mismatches));
}

Outcome score_ranges() {
  const std::vector<Weights> weights{Weights(1, 0, 0), Weights(0, 1, 0), Weights(0, 0, 1),
                                     Weights(0.25, 0.25, 0.5)};
  auto rng = make_rng(104, {});
  std::size_t evaluated = 0, out_of_range = 0, instances = 0;
  while (instances < 20) {
    const auto g = testing::random_graph(30 + uniform_index(rng, 30), 0.15, rng);
    const auto comms = detect_communities(g);
    if (g.max_degree() < 2 || !comms.c_max()) continue;
    ++instances;
    for (const auto& w : weights) {
      const RoutingContext ctx(g, comms, KnowledgeModel(6, instances), w);
      auto in_unit = [&](double x) {
        ++evaluated;
        out_of_range += !(x >= 0.0 && x <= 1.0);
      };
      for (NodeId cur = 0; cur < g.node_count(); ++cur)
        for (NodeId t = 0; t < g.node_count(); ++t) {
          if (cur == t) continue;
          std::vector<NodeId> visited{cur};
          for (NodeId f : g.neighbors(cur)) {
            in_unit(distance_score(ctx, cur, f, t));
            in_unit(community_score(ctx, f, t));
            in_unit(popularity_score(ctx, f));
            in_unit(utility(ctx, cur, f, t));
            in_unit(effective_score(ctx, cur, f, t, visited));
          }
        }
    }
  }
  return verdict(out_of_range == 0,
                 fmt("%zu instances, %zu scores, %zu outside [0,1]", instances, evaluated,
                     out_of_range));
}

// Shared by the stretch, FoF benefit and random baseline criteria.
struct SyntheticRun {
  ExperimentReport report;
  double seconds = 0.0;
  std::string error;
};

const SyntheticRun& synthetic_run() {
  static const SyntheticRun run = [] {
    SyntheticRun out;
    ExperimentConfig c;
    c.weights = {Weights::random(), Weights(0.25, 0.25, 0.5)};
    c.kappas = {0, 12};
    c.pair_count = 100;
    c.repetitions = 100;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out.report = run_experiment(c);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.seconds = seconds_since(t0);
    return out;
  }();
  return run;
}

const MetricsRow* find_row(const ExperimentReport& r, const Weights& w, std::size_t kappa) {
  for (const auto& row : r.rows)
    if (row.kappa == kappa && row.weights.distance() == w.distance() &&
        row.weights.community() == w.community() && row.weights.popularity() == w.popularity())
      return &row;
  return nullptr;
}

Outcome stretch_floor() {
  const auto& run = synthetic_run();
  if (!run.error.empty()) return fail("experiment failed: " + run.error);
  double lowest = INFINITY;
  std::size_t rows = 0;
  for (const auto& row : run.report.rows) {
    if (row.success_rate == 0.0) continue;
    ++rows;
    lowest = std::min(lowest, row.min_pair_stretch);
  }
  return verdict(rows > 0 && lowest >= 1.0,
                 fmt("smallest per-pair stretch %.4f over %zu rows", lowest, rows));
}

Outcome fof_benefit() {
  const auto& run = synthetic_run();
  if (!run.error.empty()) return fail("experiment failed: " + run.error);
  const Weights w(0.25, 0.25, 0.5);
  const auto* k0 = find_row(run.report, w, 0);
  const auto* k12 = find_row(run.report, w, 12);
  if (!k0 || !k12) return fail("missing rows");
  const double gain = 100.0 * (k12->success_rate - k0->success_rate);
  return verdict(gain >= 5.0 && run.seconds < 300.0,
                 fmt("success %.2f%% at kappa 0, %.2f%% at kappa 12 (+%.2f points), %.1f s",
                     100.0 * k0->success_rate, 100.0 * k12->success_rate, gain, run.seconds));
}

Outcome random_baseline() {
  const auto& run = synthetic_run();
  if (!run.error.empty()) return fail("experiment failed: " + run.error);
  const auto* k0 = find_row(run.report, Weights::random(), 0);
  const auto* k12 = find_row(run.report, Weights::random(), 12);
  if (!k0 || !k12) return fail("missing rows");
  const double sigma = std::hypot(k0->success_se, k12->success_se);
  const double gap = k12->success_rate - k0->success_rate;
  return verdict(gap > 3.0 * sigma,
                 fmt("random forwarding %.2f%% at kappa 0, %.2f%% at kappa 12, gap %.1f sigma",
                     100.0 * k0->success_rate, 100.0 * k12->success_rate,
                     sigma > 0 ? gap / sigma : INFINITY));
}

Outcome grid_count() {
  const auto bbox = contiguous_us_bbox();
  const auto masked = build_grid(bbox, 70.0, &contiguous_us_territory()).cell_count();
  const auto bare = build_grid(bbox, 70.0).cell_count();
  const bool ok = std::abs(double(masked) - 1860.0) <= 186.0;
  return verdict(ok, fmt("%zu land cells at 70 km (expected 1860 +/- 10%%); %zu over the full "
                         "bounding box",
                         masked, bare));
}

Outcome generator_calibration() {
  auto rng = make_rng(105, {});
  const auto er = erdos_renyi(10000, 12.0, rng);
  const double er_err = std::abs(double(er.edge_count()) - 60000.0) / 60000.0;

  DegreeParams p;
  p.gamma = 1.49;
  const auto seq = sample_degree_sequence(DegreeDistribution::kPowerLaw, 75000, p, rng);
  const double gamma = fit_power_law_exponent(seq);

  EmbeddingSpec zipf = EmbeddingSpec::parse("zipf-uniform");
  const auto pops = draw_cell_populations(zipf, 1766, 50.0, 100.0, rng);
  const auto top = *std::max_element(pops.begin(), pops.end());

  const bool ok = er_err <= 0.01 && std::abs(gamma - 1.49) <= 0.1 && top == 10700;
  return verdict(ok, fmt("G(n,p) edges %zu (%.2f%% off 60000), fitted gamma %.3f (target 1.49), "
                         "largest zipf cell %zu",
                         er.edge_count(), 100.0 * er_err, gamma, top));
}

Outcome real_network_reproduction() {
  const char* edges = std::getenv("SOCSEARCH_GOWALLA_EDGES");
  const char* locations = std::getenv("SOCSEARCH_GOWALLA_LOCATIONS");
  if (!edges || !locations)
    return skip("set SOCSEARCH_GOWALLA_EDGES and SOCSEARCH_GOWALLA_LOCATIONS "
                "(optionally SOCSEARCH_GOWALLA_COMMUNITIES) to run");
  ExperimentConfig c;
  c.network.kind = NetworkSource::Kind::kFiles;
  c.network.edges_path = edges;
  c.network.locations_path = locations;
  if (const char* comms = std::getenv("SOCSEARCH_GOWALLA_COMMUNITIES"))
    c.network.communities_path = comms;
  c.weights = {Weights(0.25, 0.25, 0.5)};
  c.kappas = {12};
  try {
    const auto r = run_experiment(c);
    const auto& row = r.rows.at(0);
    const double pct = 100.0 * row.success_rate;
    return verdict(std::abs(pct - 88.25) <= 5.0 && std::abs(row.stretch - 1.99) <= 0.3,
                   fmt("success %.2f%% (expected 88.25 +/- 5), stretch %.3f (expected 1.99 "
                       "+/- 0.3)",
                       pct, row.stretch));
  } catch (const std::exception& e) {
    return fail(std::string("experiment failed: ") + e.what());
  }
}

Outcome determinism() {
  testing::TempDir dir;
  auto rng = make_rng(106, {});
  const auto g = testing::random_graph(150, 0.05, rng);
  write_edges(dir.path("edges.tsv"), g);
  write_graph_locations(dir.path("locations.tsv"), g);

  ExperimentConfig c;
  c.network.kind = NetworkSource::Kind::kFiles;
  c.network.edges_path = dir.path("edges.tsv");
  c.network.locations_path = dir.path("locations.tsv");
  c.kappas = {0, 6};
  c.pair_count = 20;
  c.repetitions = 10;
  c.min_separation_km = 300;
  c.friendships = {FriendshipSpec{}, FriendshipSpec::parse("degree-range-preserving")};
  c.samples_per_spec = 2;
  c.runs_per_sample = 3;
  c.threads = 1;
  const auto one = format_metrics_csv(run_experiment(c));
  c.threads = 4;
  const auto four = format_metrics_csv(run_experiment(c));
  const bool threads_ok = one == four;

  const std::string cfg = dir.file("run.cfg", "network = files\n"
                                              "edges = edges.tsv\n"
                                              "locations = locations.tsv\n"
                                              "kappas = 0, 6\n"
                                              "pair_count = 20\n"
                                              "repetitions = 10\n"
                                              "min_separation_km = 300\n");
  bool cli_ok = true;
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "3"}) {
    const std::string out = dir.path(std::string("cli") + threads);
    const std::string cmd = std::string("\"") + SOCSEARCH_CLI_PATH + "\" experiment run --config \"" +
                            cfg + "\" --out \"" + out + "\" --threads " + threads + " >/dev/null 2>&1";
    cli_ok = cli_ok && std::system(cmd.c_str()) == 0;
    outputs.push_back(read_file(out + "/metrics.csv"));
  }
  cli_ok = cli_ok && !outputs[0].empty() && outputs[0] == outputs[1];
  return verdict(threads_ok && cli_ok,
                 fmt("library 1 vs 4 threads %s; CLI runs %s", threads_ok ? "identical" : "differ",
                     cli_ok ? "identical" : "differ or failed"));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"knowledge-nesting", knowledge_nesting},
      {"rewire-preservation", rewire_preservation},
      {"routing-oracle", routing_oracle},
      {"score-ranges", score_ranges},
      {"stretch-floor", stretch_floor},
      {"fof-benefit", fof_benefit},
      {"random-baseline", random_baseline},
      {"grid-count", grid_count},
      {"generator-calibration", generator_calibration},
      {"real-network-reproduction", real_network_reproduction},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::Status::kPass   ? "PASS"
                      : o.status == Outcome::Status::kSkip ? "SKIP"
                                                           : "FAIL";
    failures += o.status == Outcome::Status::kFail;
    std::printf("%s %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
