#include "socsearch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "socsearch/error.hpp"
#include "socsearch/version.hpp"

namespace socsearch {

std::vector<NodePair> sample_pairs(const SocialGraph& g, std::size_t n, double min_km, Rng& rng) {
  constexpr std::size_t kDrawCap = 1'000'000;
  if (g.node_count() < 2) throw Error("pair sampling needs at least two nodes");
  std::vector<NodePair> pairs;
  pairs.reserve(n);
  std::size_t draws = 0;
  while (pairs.size() < n) {
    if (draws++ >= kDrawCap)
      throw Error("found only " + std::to_string(pairs.size()) + " of " + std::to_string(n) +
                  " pairs at least " + std::to_string(min_km) + " km apart within " +
                  std::to_string(kDrawCap) + " draws");
    const auto a = static_cast<NodeId>(uniform_index(rng, g.node_count()));
    const auto b = static_cast<NodeId>(uniform_index(rng, g.node_count()));
    if (a == b || haversine_km(g.location(a), g.location(b)) < min_km) continue;
    pairs.emplace_back(a, b);
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  if (pair_count < 1) throw Error("pair_count must be at least 1");
  if (repetitions < 1) throw Error("repetitions must be at least 1");
  if (samples_per_spec < 1 || runs_per_sample < 1)
    throw Error("samples_per_spec and runs_per_sample must be at least 1");
  if (weights.empty() || kappas.empty()) throw Error("weights and kappas must be non-empty");
  if (embeddings.empty() || friendships.empty())
    throw Error("embeddings and friendships must be non-empty");
  if (!(min_separation_km >= 0.0)) throw Error("min_separation_km must be non-negative");
  if (!(grid_side_km > 0.0)) throw Error("grid.side_km must be positive");
  if (network.kind == NetworkSource::Kind::kFiles &&
      (network.edges_path.empty() || network.locations_path.empty()))
    throw Error("network = files needs edges and locations");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto piece = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(s.substr(0, slash), &used);
      if (used != slash) throw Error("");
      const auto den_str = s.substr(slash + 1);
      const double den = std::stod(den_str, &used);
      if (used != den_str.size() || den == 0.0) throw Error("");
      return num / den;
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error("");
    return v;
  } catch (const std::exception&) {
    throw Error("bad number '" + s + "'");
  }
}

std::uint64_t parse_unsigned(const std::string& s) {
  try {
    std::size_t used = 0;
    if (!s.empty() && s[0] == '-') throw Error("");
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw Error("");
    return v;
  } catch (const std::exception&) {
    throw Error("bad unsigned integer '" + s + "'");
  }
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw Error("bad boolean '" + s + "'");
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? p : (base / path).string();
}

}  // namespace

ExperimentConfig parse_experiment_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig c;
  const auto base_dir = origin.empty() || origin[0] == '<'
                            ? std::filesystem::path()
                            : std::filesystem::path(origin).parent_path();
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty() || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(origin, line_no, "expected key = value");
    const auto key = trim(std::string_view(t).substr(0, eq));
    const auto value = trim(std::string_view(t).substr(eq + 1));
    try {
      if (key == "network") {
        if (value == "files")
          c.network.kind = NetworkSource::Kind::kFiles;
        else if (value == "synthetic")
          c.network.kind = NetworkSource::Kind::kSynthetic;
        else
          throw Error("network must be files or synthetic");
      } else if (key == "edges") {
        c.network.edges_path = resolve(base_dir, value);
      } else if (key == "locations") {
        c.network.locations_path = resolve(base_dir, value);
      } else if (key == "communities") {
        c.network.communities_path = resolve(base_dir, value);
      } else if (key == "synthetic.nodes") {
        c.network.synthetic_nodes = parse_unsigned(value);
      } else if (key == "synthetic.mean_degree") {
        c.network.synthetic_mean_degree = parse_real(value);
      } else if (key == "synthetic.distance_exponent") {
        c.network.synthetic_params.distance_exponent = parse_real(value);
      } else if (key == "synthetic.core_km") {
        c.network.synthetic_params.core_km = parse_real(value);
      } else if (key == "synthetic.seed") {
        c.network.synthetic_seed = parse_unsigned(value);
      } else if (key == "weights") {
        c.weights.clear();
        for (const auto& triple : split(value, ';')) {
          const auto parts = split(triple, ',');
          if (parts.size() != 3) throw Error("weights entries need three values");
          c.weights.emplace_back(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]));
        }
      } else if (key == "kappas") {
        c.kappas.clear();
        for (const auto& k : split(value, ',')) c.kappas.push_back(parse_unsigned(k));
      } else if (key == "pair_count") {
        c.pair_count = parse_unsigned(value);
      } else if (key == "min_separation_km") {
        c.min_separation_km = parse_real(value);
      } else if (key == "repetitions") {
        c.repetitions = parse_unsigned(value);
      } else if (key == "hop_limit") {
        c.hop_limit = parse_unsigned(value);
      } else if (key == "knowledge_seed") {
        c.knowledge_seed = parse_unsigned(value);
      } else if (key == "pair_seed") {
        c.pair_seed = parse_unsigned(value);
      } else if (key == "decision_seed") {
        c.decision_seed = parse_unsigned(value);
      } else if (key == "generator_seed") {
        c.generator_seed = parse_unsigned(value);
      } else if (key == "embeddings") {
        c.embeddings.clear();
        for (const auto& e : split(value, ',')) c.embeddings.push_back(EmbeddingSpec::parse(e));
      } else if (key == "friendships") {
        c.friendships.clear();
        for (const auto& f : split(value, ',')) c.friendships.push_back(FriendshipSpec::parse(f));
      } else if (key == "samples_per_spec") {
        c.samples_per_spec = parse_unsigned(value);
      } else if (key == "runs_per_sample") {
        c.runs_per_sample = parse_unsigned(value);
      } else if (key == "fof_scoring") {
        if (value == "max")
          c.fof_scoring = FofScoring::kMax;
        else if (value == "off")
          c.fof_scoring = FofScoring::kOff;
        else
          throw Error("fof_scoring must be max or off");
      } else if (key == "direct_friend_shortcut") {
        c.direct_friend_shortcut = parse_bool(value);
      } else if (key == "community_metric") {
        if (value == "smallest")
          c.community_metric = CommunityMetric::kSmallest;
        else if (value == "largest")
          c.community_metric = CommunityMetric::kLargest;
        else
          throw Error("community_metric must be smallest or largest");
      } else if (key == "d_max_km") {
        c.d_max_km = parse_real(value);
      } else if (key == "grid.side_km") {
        c.grid_side_km = parse_real(value);
      } else if (key == "grid.territory") {
        if (value == "us")
          c.grid_us_territory = true;
        else if (value == "none")
          c.grid_us_territory = false;
        else
          throw Error("grid.territory must be us or none");
      } else if (key == "rewire_attempts") {
        c.rewire_attempts = parse_unsigned(value);
      } else if (key == "threads") {
        c.threads = parse_unsigned(value);
      } else {
        throw Error("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(origin, line_no, e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config_text(buf.str(), path);
}

// ---------------------------------------------------------------------------
// Stretch

StretchSummary compute_stretch(std::span<const PairOutcome> outcomes) {
  StretchSummary s;
  s.per_pair.reserve(outcomes.size());
  double sum = 0.0;
  std::vector<double> values;
  for (const auto& o : outcomes) {
    if (!o.shortest || *o.shortest == 0) {
      ++s.unreachable;
      ++s.excluded;
      s.per_pair.push_back(std::nullopt);
      continue;
    }
    if (o.delivered == 0) {
      ++s.excluded;
      s.per_pair.push_back(std::nullopt);
      continue;
    }
    const double v = static_cast<double>(o.delivered_hops) / static_cast<double>(o.delivered) /
                     static_cast<double>(*o.shortest);
    s.per_pair.push_back(v);
    values.push_back(v);
    sum += v;
  }
  s.included = values.size();
  if (s.included > 0) {
    s.mean = sum / static_cast<double>(s.included);
    if (s.included > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.standard_error = std::sqrt(ss / static_cast<double>(s.included - 1)) /
                         std::sqrt(static_cast<double>(s.included));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Matrix execution

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Sample {
  SocialGraph graph;  // giant component
  CommunityAssignment communities;
  SampleInfo info;
};

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Sample build_sample(const ExperimentConfig& config, const RhomboidGrid& grid,
                    const SocialGraph& base, const CommunityAssignment* base_communities,
                    const EmbeddingSpec& embedding, const FriendshipSpec& friendship,
                    std::size_t sample_index) {
  Rng rng = make_rng(config.generator_seed,
                     {fnv1a(embedding.name()), fnv1a(friendship.name()), sample_index});
  SampleInfo info{embedding.name(), friendship.name(), sample_index};

  SocialGraph g = base;
  if (embedding.kind != EmbeddingKind::kOriginal)
    g = base.with_locations(embed_nodes(grid, base.locations(), embedding, rng));

  const double mean_degree =
      friendship.mean_degree.value_or(2.0 * static_cast<double>(base.edge_count()) /
                                      static_cast<double>(base.node_count()));
  switch (friendship.kind) {
    case FriendshipKind::kOriginal:
      break;
    case FriendshipKind::kDegreeRangePreserving: {
      auto r = rewire_preserving_degree_range(g, grid, DistanceRanges::standard(), rng,
                                              config.rewire_attempts);
      info.swaps = r.swaps;
      g = std::move(r.graph);
      break;
    }
    case FriendshipKind::kUniformRandom: {
      const auto er = erdos_renyi(g.node_count(), mean_degree, rng);
      g = g.with_edges(er.edges());
      break;
    }
    case FriendshipKind::kExponential:
    case FriendshipKind::kPowerLaw: {
      DegreeParams params;
      params.mean = mean_degree;
      params.gamma = friendship.gamma;
      params.d_min = friendship.d_min;
      params.d_max = friendship.d_max;
      const auto kind = friendship.kind == FriendshipKind::kExponential
                            ? DegreeDistribution::kExponential
                            : DegreeDistribution::kPowerLaw;
      const auto seq = sample_degree_sequence(kind, g.node_count(), params, rng);
      auto cm = configuration_model(seq, rng);
      info.dropped_stubs = cm.dropped_stubs;
      g = g.with_edges(cm.graph.edges());
      break;
    }
  }
  info.nodes = g.node_count();
  info.edges = g.edge_count();

  Sample s;
  s.graph = giant_component(g);
  info.giant_nodes = s.graph.node_count();
  info.giant_edges = s.graph.edge_count();
  if (friendship.kind == FriendshipKind::kOriginal && base_communities)
    s.communities = *base_communities;  // same node set as the base giant component
  else
    s.communities = detect_communities(s.graph);
  info.communities = s.communities.community_count();
  s.info = info;
  return s;
}

void append_fixed(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

}  // namespace

RhomboidGrid experiment_grid(const ExperimentConfig& config) {
  return build_grid(contiguous_us_bbox(), config.grid_side_km,
                    config.grid_us_territory ? &contiguous_us_territory() : nullptr);
}

SocialGraph load_base_network(const NetworkSource& source, const RhomboidGrid& grid) {
  if (source.kind == NetworkSource::Kind::kFiles)
    return giant_component(load_graph(source.edges_path, source.locations_path));
  Rng rng = make_rng(source.synthetic_seed, {0x5eed});
  return giant_component(geo_small_world(grid, source.synthetic_nodes,
                                         source.synthetic_mean_degree, source.synthetic_params,
                                         rng));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto grid = experiment_grid(config);
  const SocialGraph base = load_base_network(config.network, grid);

  std::optional<CommunityAssignment> base_communities;
  if (!config.network.communities_path.empty())
    base_communities = load_communities(config.network.communities_path, base);
  else
    base_communities = detect_communities(base);

  RoutingOptions options;
  options.hop_limit = config.hop_limit;
  options.fof_scoring = config.fof_scoring;
  options.direct_friend_shortcut = config.direct_friend_shortcut;
  options.community_metric = config.community_metric;
  options.d_max_km = config.d_max_km;

  ExperimentReport report;
  for (const auto& embedding : config.embeddings) {
    for (const auto& friendship : config.friendships) {
      const bool original = embedding.kind == EmbeddingKind::kOriginal &&
                            friendship.kind == FriendshipKind::kOriginal;
      const std::size_t samples = original ? 1 : config.samples_per_spec;
      const std::size_t runs = original ? config.repetitions : config.runs_per_sample;
      const std::size_t cells = config.weights.size() * config.kappas.size();
      // outcomes[cell][sample * pairs + pair]
      std::vector<std::vector<PairOutcome>> outcomes(cells);

      for (std::size_t s = 0; s < samples; ++s) {
        const std::string tag =
            "[" + embedding.name() + " / " + friendship.name() + " sample " + std::to_string(s) + "] ";
        try {
          Sample sample = build_sample(config, grid, base,
                                       base_communities ? &*base_communities : nullptr,
                                       embedding, friendship, s);
          const auto& g = sample.graph;
          const RoutingContext ctx0(g, sample.communities,
                                    KnowledgeModel(0, derive_seed(config.knowledge_seed, {s})),
                                    Weights::random(), options);
          sample.info.d_max_km = ctx0.d_max();
          Rng pair_rng = make_rng(config.pair_seed, {s});
          const auto pairs = sample_pairs(g, config.pair_count, config.min_separation_km, pair_rng);
          std::vector<std::optional<std::size_t>> shortest(pairs.size());
          parallel_for(pairs.size(), config.threads, [&](std::size_t p) {
            shortest[p] = bfs_hops(g, pairs[p].first, pairs[p].second);
          });

          for (std::size_t wi = 0; wi < config.weights.size(); ++wi) {
            for (std::size_t ki = 0; ki < config.kappas.size(); ++ki) {
              const auto ctx = ctx0.rebind(ctx0.knowledge().with_kappa(config.kappas[ki]),
                                           config.weights[wi]);
              auto& cell = outcomes[wi * config.kappas.size() + ki];
              const std::size_t offset = cell.size();
              cell.resize(offset + pairs.size());
              parallel_for(pairs.size(), config.threads, [&](std::size_t p) {
                PairOutcome o;
                o.start = pairs[p].first;
                o.target = pairs[p].second;
                o.shortest = shortest[p];
                o.runs = runs;
                o.run_success.resize(runs);
                for (std::size_t r = 0; r < runs; ++r) {
                  Rng rng = make_rng(config.decision_seed, {s, p, r});
                  const auto trial = route(ctx, o.start, o.target, rng);
                  o.run_success[r] = trial.success ? 1 : 0;
                  if (trial.success) {
                    ++o.delivered;
                    o.delivered_hops += trial.hops;
                  }
                }
                cell[offset + p] = std::move(o);
              });
            }
          }
          report.samples.push_back(sample.info);
        } catch (const std::exception& e) {
          throw Error(tag + e.what());
        }
      }

      for (std::size_t wi = 0; wi < config.weights.size(); ++wi) {
        for (std::size_t ki = 0; ki < config.kappas.size(); ++ki) {
          const auto& cell = outcomes[wi * config.kappas.size() + ki];
          MetricsRow row;
          row.embedding = embedding.name();
          row.friendship = friendship.name();
          row.weights = config.weights[wi];
          row.kappa = config.kappas[ki];
          row.runs = samples * runs;

          std::vector<double> run_rate(row.runs, 0.0);
          std::size_t delivered = 0, hops = 0;
          for (std::size_t i = 0; i < cell.size(); ++i) {
            const std::size_t s = i / config.pair_count;
            for (std::size_t r = 0; r < runs; ++r) run_rate[s * runs + r] += cell[i].run_success[r];
            delivered += cell[i].delivered;
            hops += cell[i].delivered_hops;
          }
          row.trials = cell.size() * runs;
          row.success_rate = static_cast<double>(delivered) / static_cast<double>(row.trials);
          for (auto& v : run_rate) v /= static_cast<double>(config.pair_count);
          if (row.runs > 1) {
            double mean = 0.0;
            for (double v : run_rate) mean += v;
            mean /= static_cast<double>(row.runs);
            double ss = 0.0;
            for (double v : run_rate) ss += (v - mean) * (v - mean);
            row.success_se = std::sqrt(ss / static_cast<double>(row.runs - 1)) /
                             std::sqrt(static_cast<double>(row.runs));
          }
          row.mean_hops = delivered ? static_cast<double>(hops) / static_cast<double>(delivered) : 0.0;
          const auto stretch = compute_stretch(cell);
          row.stretch = stretch.mean;
          row.stretch_se = stretch.standard_error;
          row.pairs_excluded = stretch.excluded;
          bool first = true;
          for (const auto& v : stretch.per_pair) {
            if (!v) continue;
            if (first || *v < row.min_pair_stretch) row.min_pair_stretch = *v;
            first = false;
          }
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  return report;
}

std::string format_metrics_csv(const ExperimentReport& report) {
  std::string out =
      "embedding,friendship,w_d,w_c,w_p,kappa,success_rate,success_se,stretch,stretch_se,"
      "mean_hops,pairs_excluded\n";
  for (const auto& r : report.rows) {
    out += r.embedding + ',' + r.friendship + ',';
    append_fixed(out, r.weights.distance());
    out += ',';
    append_fixed(out, r.weights.community());
    out += ',';
    append_fixed(out, r.weights.popularity());
    out += ',' + std::to_string(r.kappa) + ',';
    append_fixed(out, r.success_rate);
    out += ',';
    append_fixed(out, r.success_se);
    out += ',';
    append_fixed(out, r.stretch);
    out += ',';
    append_fixed(out, r.stretch_se);
    out += ',';
    append_fixed(out, r.mean_hops);
    out += ',' + std::to_string(r.pairs_excluded) + '\n';
  }
  return out;
}

std::string format_manifest(const ExperimentConfig& c, const ExperimentReport& report) {
  std::ostringstream m;
  m << "socsearch_version = " << kVersion << '\n';
  m << "network = " << (c.network.kind == NetworkSource::Kind::kFiles ? "files" : "synthetic") << '\n';
  if (c.network.kind == NetworkSource::Kind::kFiles) {
    m << "edges = " << c.network.edges_path << '\n';
    m << "locations = " << c.network.locations_path << '\n';
    m << "communities = " << (c.network.communities_path.empty() ? "<label-propagation>" : c.network.communities_path) << '\n';
  } else {
    m << "synthetic.nodes = " << c.network.synthetic_nodes << '\n';
    m << "synthetic.mean_degree = " << c.network.synthetic_mean_degree << '\n';
    m << "synthetic.distance_exponent = " << c.network.synthetic_params.distance_exponent << '\n';
    m << "synthetic.core_km = " << c.network.synthetic_params.core_km << '\n';
    m << "synthetic.seed = " << c.network.synthetic_seed << '\n';
  }
  m << "knowledge_seed = " << c.knowledge_seed << '\n';
  m << "pair_seed = " << c.pair_seed << '\n';
  m << "decision_seed = " << c.decision_seed << '\n';
  m << "generator_seed = " << c.generator_seed << '\n';
  m << "pair_count = " << c.pair_count << '\n';
  m << "min_separation_km = " << c.min_separation_km << '\n';
  m << "repetitions = " << c.repetitions << '\n';
  m << "samples_per_spec = " << c.samples_per_spec << '\n';
  m << "runs_per_sample = " << c.runs_per_sample << '\n';
  m << "hop_limit = " << c.hop_limit << '\n';
  m << "fof_scoring = " << (c.fof_scoring == FofScoring::kMax ? "max" : "off") << '\n';
  m << "direct_friend_shortcut = " << (c.direct_friend_shortcut ? "true" : "false") << '\n';
  m << "community_metric = " << (c.community_metric == CommunityMetric::kSmallest ? "smallest" : "largest") << '\n';
  m << "grid.side_km = " << c.grid_side_km << '\n';
  m << "grid.territory = " << (c.grid_us_territory ? "us" : "none") << '\n';
  if (c.d_max_km) m << "d_max_km = " << *c.d_max_km << '\n';
  m << "kappas =";
  for (std::size_t i = 0; i < c.kappas.size(); ++i) m << (i ? ", " : " ") << c.kappas[i];
  m << "\nweights =";
  for (std::size_t i = 0; i < c.weights.size(); ++i)
    m << (i ? "; " : " ") << c.weights[i].distance() << ',' << c.weights[i].community() << ','
      << c.weights[i].popularity();
  m << "\nembeddings =";
  for (std::size_t i = 0; i < c.embeddings.size(); ++i)
    m << (i ? ", " : " ") << c.embeddings[i].name();
  m << "\nfriendships =";
  for (std::size_t i = 0; i < c.friendships.size(); ++i)
    m << (i ? ", " : " ") << c.friendships[i].name();
  m << '\n';
  if (c.rewire_attempts) m << "rewire_attempts = " << *c.rewire_attempts << '\n';
  for (const auto& s : report.samples) {
    m << "sample " << s.embedding << ' ' << s.friendship << ' ' << s.sample << ": nodes=" << s.nodes
      << " edges=" << s.edges << " giant_nodes=" << s.giant_nodes << " giant_edges=" << s.giant_edges
      << " swaps=" << s.swaps << " dropped_stubs=" << s.dropped_stubs
      << " communities=" << s.communities << " d_max_km=" << s.d_max_km << '\n';
  }
  return m.str();
}

void write_experiment_outputs(const std::string& dir, const ExperimentConfig& config,
                              const ExperimentReport& report) {
  std::filesystem::create_directories(dir);
  const auto root = std::filesystem::path(dir);
  {
    std::ofstream out(root / "metrics.csv", std::ios::binary);
    if (!out) throw Error("cannot write metrics.csv in " + dir);
    out << format_metrics_csv(report);
  }
  std::ofstream out(root / "manifest.txt", std::ios::binary);
  if (!out) throw Error("cannot write manifest.txt in " + dir);
  out << format_manifest(config, report);
}

}  // namespace socsearch
