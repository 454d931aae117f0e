#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socsearch/geo.hpp"
#include "socsearch/graph.hpp"
#include "socsearch/rng.hpp"

namespace socsearch {

// ---------------------------------------------------------------------------
// Distance ranges

/// Doubling distance buckets: [0, 6.25], (6.25, 12.5], ..., (3200, 6400], and
/// an overflow bucket for anything beyond the last breakpoint.
class DistanceRanges {
 public:
  /// Breakpoints must be strictly increasing and positive.
  explicit DistanceRanges(std::vector<double> breakpoints_km);
  static DistanceRanges standard();

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  /// Number of buckets including the overflow bucket.
  std::size_t bucket_count() const noexcept { return breakpoints_.size() + 1; }
  std::size_t bucket(double km) const noexcept;
  std::string label(std::size_t bucket) const;

 private:
  std::vector<double> breakpoints_;
};

/// Per-node histogram of friend distances over the ranges, flattened as
/// node * bucket_count + bucket.
std::vector<std::size_t> node_range_histograms(const SocialGraph& g, const DistanceRanges& ranges);

// ---------------------------------------------------------------------------
// Node embeddings

enum class EmbeddingKind { kOriginal, kUniformRandom, kExponential, kNormal, kZipf };
enum class WithinCell { kGeographic, kUniform };

struct EmbeddingSpec {
  EmbeddingKind kind = EmbeddingKind::kOriginal;
  /// Required for exponential, normal and zipf.
  std::optional<WithinCell> within;
  /// Mean cell population; defaults to the mean over nonempty base cells.
  std::optional<double> mean;
  /// Cell population variance (normal); defaults to the base variance.
  std::optional<double> variance;
  double zipf_largest = 10700.0;
  double zipf_exponent = 1.0;

  /// e.g. "original", "uniform-random", "zipf-geographic".
  std::string name() const;
  static EmbeddingSpec parse(std::string_view name);
};

/// Unscaled per-cell populations for exponential, normal or zipf specs.
/// Zipf assigns round(largest / rank^exponent) to a random permutation of cells.
std::vector<std::size_t> draw_cell_populations(const EmbeddingSpec& spec, std::size_t cells,
                                               double mean, double variance, Rng& rng);

/// Proportional rescale to `total` with largest-remainder rounding.
std::vector<std::size_t> scale_populations(std::span<const std::size_t> populations,
                                           std::size_t total);

/// New position per node (same count and order as `base`). Base positions
/// define the populated cells, the population statistics and, for geographic
/// placement, the within-cell offsets that get copied.
std::vector<GeoPoint> embed_nodes(const RhomboidGrid& grid, std::span<const GeoPoint> base,
                                  const EmbeddingSpec& spec, Rng& rng);

// ---------------------------------------------------------------------------
// Friendship null models

enum class FriendshipKind {
  kOriginal,
  kDegreeRangePreserving,
  kUniformRandom,
  kExponential,
  kPowerLaw
};

struct FriendshipSpec {
  FriendshipKind kind = FriendshipKind::kOriginal;
  /// Defaults to the mean degree of the original graph.
  std::optional<double> mean_degree;
  double gamma = 1.49;
  std::size_t d_min = 1;
  /// Power-law upper degree; chosen to match the mean degree when absent.
  std::optional<std::size_t> d_max;

  std::string name() const;
  static FriendshipSpec parse(std::string_view name);
};

struct RewireResult {
  SocialGraph graph;
  std::size_t attempts = 0;
  std::size_t swaps = 0;
};

/// Swaps (u,x),(v,y) -> (u,y),(v,x) for u, v in the same cell when all four
/// distances fall in one range bucket. Keeps every degree and every per-node
/// range histogram exactly. Default budget: 10 x edge count.
RewireResult rewire_preserving_degree_range(const SocialGraph& g, const RhomboidGrid& grid,
                                            const DistanceRanges& ranges, Rng& rng,
                                            std::optional<std::size_t> attempts = std::nullopt);

/// G(n, p) with p = mean_degree / (n - 1). Nodes get ids 0..n-1 at (0, 0).
SocialGraph erdos_renyi(std::size_t n, double mean_degree, Rng& rng);

enum class DegreeDistribution { kExponential, kPowerLaw };

struct DegreeParams {
  double mean = 12.0;
  double gamma = 1.49;
  std::size_t d_min = 1;
  std::optional<std::size_t> d_max;
};

/// Smallest d_max whose truncated power-law mean is closest to target_mean.
/// Throws Error if no d_max <= limit reaches it.
std::size_t power_law_upper_for_mean(double gamma, std::size_t d_min, double target_mean,
                                     std::size_t limit);

/// n degrees >= 1 with even sum. Exponential draws are geometric on {1, 2, ...}
/// with the given mean.
DegreeSequence sample_degree_sequence(DegreeDistribution kind, std::size_t n,
                                      const DegreeParams& params, Rng& rng);

struct ConfigurationModelResult {
  SocialGraph graph;
  std::size_t dropped_stubs = 0;
};

/// Stub matching; self-loops and multi-edges are re-matched for up to
/// `retry_rounds` rounds, then spliced into a random existing edge. Stubs that
/// still fit nowhere are dropped.
ConfigurationModelResult configuration_model(const DegreeSequence& seq, Rng& rng,
                                             std::size_t retry_rounds = 100);

struct GeoSmallWorldParams {
  double distance_exponent = 2.0;
  double core_km = 10.0;
};

/// Nodes placed uniformly over the grid cells; each edge links a uniform node
/// to a partner drawn with weight (distance + core_km)^-distance_exponent.
SocialGraph geo_small_world(const RhomboidGrid& grid, std::size_t n, double mean_degree,
                            const GeoSmallWorldParams& params, Rng& rng);

}  // namespace socsearch
