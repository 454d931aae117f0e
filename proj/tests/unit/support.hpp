#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "socsearch/graph.hpp"
#include "socsearch/rng.hpp"

namespace testing {

using socsearch::Edge;
using socsearch::GeoPoint;
using socsearch::NodeId;
using socsearch::SocialGraph;

/// Graph with ids 0..n-1; locations default to points spread along a parallel.
inline SocialGraph make_graph(std::size_t n, const std::vector<Edge>& edges,
                              std::vector<GeoPoint> locations = {}) {
  std::vector<std::int64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::int64_t>(i);
  if (locations.empty())
    for (std::size_t i = 0; i < n; ++i) locations.push_back({40.0, -100.0 + 0.5 * double(i)});
  return SocialGraph(std::move(ids), std::move(locations), edges);
}

inline GeoPoint random_us_point(socsearch::Rng& rng) {
  return {25.0 + 24.0 * socsearch::uniform01(rng), -124.0 + 57.0 * socsearch::uniform01(rng)};
}

/// G(n, p) with random US locations.
inline SocialGraph random_graph(std::size_t n, double p, socsearch::Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (socsearch::uniform01(rng) < p) edges.push_back({u, v});
  std::vector<GeoPoint> loc;
  for (std::size_t i = 0; i < n; ++i) loc.push_back(random_us_point(rng));
  return make_graph(n, edges, loc);
}

inline SocialGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return make_graph(n, edges);
}

inline SocialGraph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return make_graph(leaves + 1, edges);
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("socsearch_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
