#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socsearch/communities.hpp"
#include "socsearch/graph.hpp"
#include "socsearch/netgen.hpp"
#include "socsearch/routing.hpp"

namespace socsearch {

using NodePair = std::pair<NodeId, NodeId>;

/// n (start, target) pairs of distinct nodes at least min_km apart, drawn
/// uniformly by rejection. Throws Error when the 10^6-draw cap is hit first.
std::vector<NodePair> sample_pairs(const SocialGraph& g, std::size_t n, double min_km, Rng& rng);

/// Where the base network comes from.
struct NetworkSource {
  enum class Kind { kFiles, kSynthetic };
  Kind kind = Kind::kSynthetic;
  std::string edges_path;
  std::string locations_path;
  std::string communities_path;  // optional
  std::size_t synthetic_nodes = 5000;
  double synthetic_mean_degree = 12.0;
  GeoSmallWorldParams synthetic_params;
  std::uint64_t synthetic_seed = 7;
};

struct ExperimentConfig {
  NetworkSource network;
  std::vector<Weights> weights{Weights(0, 0, 0), Weights(1, 0, 0), Weights(0, 1, 0),
                               Weights(0, 0, 1), Weights(0.25, 0.25, 0.5)};
  std::vector<std::size_t> kappas{0, 3, 6, 12, 24, 48};
  std::size_t pair_count = 100;
  double min_separation_km = 1000.0;
  std::size_t repetitions = 100;
  std::size_t hop_limit = 50;
  std::uint64_t knowledge_seed = 1;
  std::uint64_t pair_seed = 2;
  std::uint64_t decision_seed = 3;
  std::uint64_t generator_seed = 4;
  std::vector<EmbeddingSpec> embeddings{EmbeddingSpec{}};
  std::vector<FriendshipSpec> friendships{FriendshipSpec{}};
  std::size_t samples_per_spec = 10;
  std::size_t runs_per_sample = 10;
  FofScoring fof_scoring = FofScoring::kMax;
  bool direct_friend_shortcut = true;
  CommunityMetric community_metric = CommunityMetric::kSmallest;
  std::optional<double> d_max_km;
  double grid_side_km = 70.0;
  bool grid_us_territory = true;
  std::optional<std::size_t> rewire_attempts;
  /// Worker threads; 0 picks hardware concurrency. Never affects results.
  std::size_t threads = 0;

  /// Throws Error on invariant violations.
  void validate() const;
};

/// Parses a `key = value` file. Lists are comma separated; weights entries are
/// `w_d,w_c,w_p` triples separated by `;` and accept fractions like `1/4`.
/// Unknown keys are an error.
ExperimentConfig parse_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config_text(const std::string& text,
                                              const std::string& origin = "<config>");

/// Outcome of one (start, target) pair across all of its runs.
struct PairOutcome {
  NodeId start = 0;
  NodeId target = 0;
  std::size_t runs = 0;
  std::size_t delivered = 0;
  std::size_t delivered_hops = 0;         // sum over delivered runs
  std::optional<std::size_t> shortest;    // BFS hops
  std::vector<std::uint8_t> run_success;  // per run, 0/1
};

struct StretchSummary {
  std::vector<std::optional<double>> per_pair;  // nullopt when excluded
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;     // zero deliveries or unreachable
  std::size_t unreachable = 0;
};

/// Per pair: mean delivered hop count over BFS hops. Pairs with no delivery or
/// no path are excluded and counted. Aggregate: mean and standard error over
/// the included pairs.
StretchSummary compute_stretch(std::span<const PairOutcome> outcomes);

struct MetricsRow {
  std::string embedding;
  std::string friendship;
  Weights weights = Weights::random();
  std::size_t kappa = 0;
  double success_rate = 0.0;
  double success_se = 0.0;    // std of per-run success rates / sqrt(runs)
  double stretch = 0.0;
  double stretch_se = 0.0;
  double mean_hops = 0.0;     // over delivered trials
  std::size_t pairs_excluded = 0;
  std::size_t trials = 0;
  std::size_t runs = 0;
  double min_pair_stretch = 0.0;  // smallest included per-pair stretch
};

struct SampleInfo {
  std::string embedding;
  std::string friendship;
  std::size_t sample = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t giant_nodes = 0;
  std::size_t giant_edges = 0;
  std::size_t swaps = 0;
  std::size_t dropped_stubs = 0;
  std::size_t communities = 0;
  double d_max_km = 0.0;
};

struct ExperimentReport {
  std::vector<MetricsRow> rows;
  std::vector<SampleInfo> samples;
};

/// Runs the full matrix embeddings x friendships x weights x kappa. For each
/// (embedding, friendship) pair, samples_per_spec network samples are built
/// (one when both are "original"); each routes pair_count pairs for
/// runs_per_sample runs (repetitions when both are "original"). Decision
/// streams are keyed by (decision_seed, sample, pair, run) and knowledge by
/// (knowledge_seed, sample), so results do not depend on thread count.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// metrics.csv content; fixed formatting, byte-stable for equal inputs.
std::string format_metrics_csv(const ExperimentReport& report);
std::string format_manifest(const ExperimentConfig& config, const ExperimentReport& report);

/// Writes metrics.csv and manifest.txt into dir (created if missing).
void write_experiment_outputs(const std::string& dir, const ExperimentConfig& config,
                              const ExperimentReport& report);

/// Loads (or synthesizes) the base network, restricted to its giant component.
SocialGraph load_base_network(const NetworkSource& source, const RhomboidGrid& grid);

RhomboidGrid experiment_grid(const ExperimentConfig& config);

}  // namespace socsearch
