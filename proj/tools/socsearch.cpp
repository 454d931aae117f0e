// Command-line front end: experiments, single routes, analyses, generators.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "socsearch/analysis.hpp"
#include "socsearch/error.hpp"
#include "socsearch/experiment.hpp"
#include "socsearch/version.hpp"

using namespace socsearch;

namespace {

struct GraphArgs {
  std::vector<std::string> files;  // edges, locations
  std::string communities;
};

void add_graph_options(CLI::App* cmd, GraphArgs& args) {
  cmd->add_option("--graph", args.files, "Edges file and locations file")
      ->expected(2)
      ->required();
  cmd->add_option("--communities", args.communities,
                  "Community file (detected by label propagation when absent)");
}

CommunityAssignment communities_for(const SocialGraph& g, const GraphArgs& args) {
  if (!args.communities.empty()) return load_communities(args.communities, g);
  return detect_communities(g);
}

Weights parse_weights(const std::string& text) {
  // Reuse the config parser so fractions like 1/4 are accepted.
  return parse_experiment_config_text("weights = " + text, "--weights").weights.front();
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  f << content;
}

NodeId require_node(const SocialGraph& g, std::int64_t external, const char* what) {
  auto n = g.find(external);
  if (!n) throw Error(std::string(what) + " node " + std::to_string(external) + " not in graph");
  return *n;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized social search on geographic social networks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // experiment run
  auto* experiment = app.add_subcommand("experiment", "Run a routing experiment matrix");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "Run the matrix described by a config file");
  std::string config_path, out_dir;
  std::optional<std::size_t> threads;
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // route one
  auto* route_cmd = app.add_subcommand("route", "Route single searches");
  route_cmd->require_subcommand(1);
  auto* one = route_cmd->add_subcommand("one", "Route one search and print its path as TSV");
  GraphArgs route_graph;
  std::int64_t start_id = 0, target_id = 0;
  std::size_t kappa = 12, hop_limit = 50;
  std::string weights_text = "1/4,1/4,1/2", route_out;
  std::uint64_t knowledge_seed = 1, decision_seed = 3;
  add_graph_options(one, route_graph);
  one->add_option("--start", start_id, "Start node id")->required();
  one->add_option("--target", target_id, "Target node id")->required();
  one->add_option("--kappa", kappa, "Known FoF per friend")->capture_default_str();
  one->add_option("--weights", weights_text, "w_d,w_c,w_p")->capture_default_str();
  one->add_option("--hop-limit", hop_limit)->capture_default_str();
  one->add_option("--knowledge-seed", knowledge_seed)->capture_default_str();
  one->add_option("--decision-seed", decision_seed)->capture_default_str();
  one->add_option("--out", route_out, "Output file (stdout by default)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Descriptive statistics of a network");
  GraphArgs analyze_graph;
  std::string what, analyze_out = "-";
  std::size_t analyze_kappa = 12, top_k = 0;
  std::uint64_t analyze_seed = 1;
  double grid_side = 70.0, top_fraction = 0.01;
  analyze->add_option("what", what, "distances | reach | prominence | cells")
      ->required()
      ->check(CLI::IsMember({"distances", "reach", "prominence", "cells"}));
  add_graph_options(analyze, analyze_graph);
  analyze->add_option("--kappa", analyze_kappa)->capture_default_str();
  analyze->add_option("--knowledge-seed", analyze_seed)->capture_default_str();
  analyze->add_option("--grid-side-km", grid_side)->capture_default_str();
  analyze->add_option("--top-fraction", top_fraction)->capture_default_str();
  analyze->add_option("--top-k", top_k, "Rows of the cells table (0 = all)");
  analyze->add_option("--out", analyze_out, "Output TSV (stdout by default)");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic network");
  std::string kind = "geo-small-world", gen_out;
  std::size_t nodes = 5000;
  double mean_degree = 12.0, gamma = 1.49;
  std::uint64_t gen_seed = 7;
  GeoSmallWorldParams geo_params;
  generate->add_option("--kind", kind)
      ->check(CLI::IsMember({"geo-small-world", "uniform-random", "exponential", "power-law"}))
      ->capture_default_str();
  generate->add_option("--nodes", nodes)->capture_default_str();
  generate->add_option("--mean-degree", mean_degree)->capture_default_str();
  generate->add_option("--gamma", gamma)->capture_default_str();
  generate->add_option("--distance-exponent", geo_params.distance_exponent)->capture_default_str();
  generate->add_option("--core-km", geo_params.core_km)->capture_default_str();
  generate->add_option("--seed", gen_seed)->capture_default_str();
  generate->add_option("--out", gen_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = parse_experiment_config(config_path);
      if (threads) config.threads = *threads;
      const auto report = run_experiment(config);
      write_experiment_outputs(out_dir, config, report);
      std::fprintf(stderr, "wrote %zu rows to %s\n", report.rows.size(), out_dir.c_str());
    } else if (*one) {
      const auto g = load_graph(route_graph.files[0], route_graph.files[1]);
      const auto communities = communities_for(g, route_graph);
      RoutingOptions options;
      options.hop_limit = hop_limit;
      const auto weights = parse_weights(weights_text);
      const RoutingContext ctx(g, communities, KnowledgeModel(kappa, knowledge_seed), weights,
                               options);
      const NodeId s = require_node(g, start_id, "start");
      const NodeId t = require_node(g, target_id, "target");
      auto rng = make_rng(decision_seed, {s, t});
      const auto result = route(ctx, s, t, rng);

      std::string out = "hop\tnode\tlat\tlon\tkm_to_target\n";
      for (std::size_t i = 0; i < result.path.size(); ++i) {
        const NodeId n = result.path[i];
        const auto& p = g.location(n);
        out += std::to_string(i) + "\t" + std::to_string(g.external_id(n)) + "\t" +
               fmt("%.6f", p.lat) + "\t" + fmt("%.6f", p.lon) + "\t" +
               fmt("%.3f", haversine_km(p, g.location(t))) + "\n";
      }
      out += "# " + to_string(result.termination) + " hops=" + std::to_string(result.hops) +
             "\n";
      emit(route_out, out);
    } else if (*analyze) {
      const auto g = load_graph(analyze_graph.files[0], analyze_graph.files[1]);
      const KnowledgeModel knowledge(analyze_kappa, analyze_seed);
      std::string out;
      if (what == "distances") {
        const auto ranges = DistanceRanges::standard();
        const auto friends = distance_distribution(g, DistanceRelation::kFriends, ranges);
        const auto fof = distance_distribution(g, DistanceRelation::kFof, ranges);
        const auto communities = communities_for(g, analyze_graph);
        const auto comm =
            distance_distribution(g, DistanceRelation::kCommunities, ranges, &communities);
        out = "range_km\tfriends\tfriends_cum\tfof\tfof_cum\tcommunities\tcommunities_cum\n";
        for (std::size_t b = 0; b < friends.labels.size(); ++b)
          out += friends.labels[b] + "\t" + fmt("%.2f", friends.percent[b]) + "\t" +
                 fmt("%.2f", friends.cumulative[b]) + "\t" + fmt("%.2f", fof.percent[b]) + "\t" +
                 fmt("%.2f", fof.cumulative[b]) + "\t" + fmt("%.2f", comm.percent[b]) + "\t" +
                 fmt("%.2f", comm.cumulative[b]) + "\n";
      } else if (what == "reach") {
        const auto communities = communities_for(g, analyze_graph);
        const auto r = community_reach_stats(g, communities, knowledge);
        out = "statistic\tvalue\n";
        out += "communities_per_node\t" + fmt("%.4f", r.own) + "\n";
        out += "via_friends\t" + fmt("%.4f", r.via_friends) + "\n";
        out += "via_all_fof\t" + fmt("%.4f", r.via_fof) + "\n";
        out += "via_known_fof\t" + fmt("%.4f", r.via_known_fof) + "\n";
      } else if (what == "prominence") {
        const auto p = prominence_stats(g, knowledge, top_fraction);
        const auto f = fof_size_stats(g, knowledge);
        out = "statistic\tvalue\n";
        out += "prominent_nodes\t" + std::to_string(p.prominent) + "\n";
        out += "threshold_degree\t" + std::to_string(p.threshold_degree) + "\n";
        out += "degenerate\t" + std::string(p.degenerate ? "1" : "0") + "\n";
        out += "friends\t" + fmt("%.4f", p.friends) + "\n";
        out += "prominent_friends\t" + fmt("%.4f", p.prominent_friends) + "\n";
        out += "fof\t" + fmt("%.4f", p.fof) + "\n";
        out += "prominent_fof\t" + fmt("%.4f", p.prominent_fof) + "\n";
        out += "known_fof\t" + fmt("%.4f", p.known_fof) + "\n";
        out += "prominent_known_fof\t" + fmt("%.4f", p.prominent_known_fof) + "\n";
        out += "all_nodes_friends\t" + fmt("%.4f", f.friends) + "\n";
        out += "all_nodes_fof\t" + fmt("%.4f", f.fof) + "\n";
        out += "all_nodes_known_fof\t" + fmt("%.4f", f.known_fof) + "\n";
      } else {
        const auto grid =
            build_grid(contiguous_us_bbox(), grid_side, &contiguous_us_territory());
        const auto rows = cell_population_report(grid, g.locations(), top_k);
        out = format_cells_tsv(rows);
      }
      emit(analyze_out, out);
    } else if (*generate) {
      const auto grid = build_grid(contiguous_us_bbox(), 70.0, &contiguous_us_territory());
      auto rng = make_rng(gen_seed, {0});
      auto g = geo_small_world(grid, nodes, mean_degree, geo_params, rng);
      std::size_t dropped = 0;
      if (kind == "uniform-random") {
        const auto er = erdos_renyi(nodes, mean_degree, rng);
        const auto edges = er.edges();
        g = g.with_edges(edges);
      } else if (kind != "geo-small-world") {
        DegreeParams params;
        params.mean = mean_degree;
        params.gamma = gamma;
        const auto seq = sample_degree_sequence(
            kind == "power-law" ? DegreeDistribution::kPowerLaw : DegreeDistribution::kExponential,
            nodes, params, rng);
        auto cm = configuration_model(seq, rng);
        dropped = cm.dropped_stubs;
        const auto edges = cm.graph.edges();
        g = g.with_edges(edges);
      }
      std::filesystem::create_directories(gen_out);
      const auto dir = std::filesystem::path(gen_out);
      write_edges((dir / "edges.tsv").string(), g);
      write_graph_locations((dir / "locations.tsv").string(), g);
      std::string manifest = "version\t" + std::string(kVersion) + "\n";
      manifest += "kind\t" + kind + "\n";
      manifest += "nodes\t" + std::to_string(g.node_count()) + "\n";
      manifest += "edges\t" + std::to_string(g.edge_count()) + "\n";
      manifest += "mean_degree\t" + fmt("%.4f", mean_degree) + "\n";
      manifest += "seed\t" + std::to_string(gen_seed) + "\n";
      manifest += "dropped_stubs\t" + std::to_string(dropped) + "\n";
      emit((dir / "manifest.txt").string(), manifest);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
