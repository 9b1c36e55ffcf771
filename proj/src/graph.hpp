#ifndef EVROUTER_GRAPH_HPP
#define EVROUTER_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace evr {

/// WLTP-style driving pattern classes used to pick coefficient sets per link.
enum class Pattern : int { Slow = 0, Medium = 1, High = 2, ExtraHigh = 3, Overall = 4 };

constexpr int kPatternCount = 5;

const char* to_string(Pattern p);
std::optional<Pattern> parse_pattern(std::string_view s);

struct Vertex {
  std::int64_t id = 0;
  double elevation_m = 0.0;
  std::optional<double> lat;  // informational only
  std::optional<double> lon;
};

struct Edge {
  std::int32_t from = 0;  // dense vertex index
  std::int32_t to = 0;
  double length_m = 0.0;
  double avg_speed_kmh = 0.0;
  std::optional<Pattern> pattern;
};

// Raw input rows before id resolution. `line` is the locus reported in
// validation errors (CSV line number, JSON array index, generator ordinal).
struct VertexRecord {
  std::int64_t id = 0;
  double elevation_m = 0.0;
  std::optional<double> lat;
  std::optional<double> lon;
  int line = -1;
};

struct EdgeRecord {
  std::int64_t from_id = 0;
  std::int64_t to_id = 0;
  double length_m = 0.0;
  double avg_speed_kmh = 0.0;
  std::optional<Pattern> pattern;
  int line = -1;
};

/// Steeper links are rejected as elevation-data errors; the energy model is
/// never evaluated outside this range.
constexpr double kMaxAbsGradient = 0.30;

/// Directed road network with per-vertex elevation. Immutable once built;
/// safe for concurrent reads. Parallel edges and one-way pairs are allowed.
class RoadGraph {
 public:
  /// Resolves vertex ids, validates every invariant (unique ids, finite
  /// elevation, positive length/speed, endpoints exist, |gradient| bound) and
  /// builds the adjacency index. Throws ValidationError with the offending
  /// record's locus.
  RoadGraph(std::vector<VertexRecord> vertices, std::vector<EdgeRecord> edges,
            std::string_view source = "graph");

  std::int32_t vertex_count() const { return static_cast<std::int32_t>(vertices_.size()); }
  std::int32_t edge_count() const { return static_cast<std::int32_t>(edges_.size()); }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Vertex& vertex(std::int32_t idx) const { return vertices_[idx]; }
  const Edge& edge(std::int32_t idx) const { return edges_[idx]; }

  /// Outgoing edge indices of vertex `u`, ordered by (target, edge index).
  std::span<const std::int32_t> out_edges(std::int32_t u) const {
    return {adj_edges_.data() + adj_offsets_[u],
            adj_edges_.data() + adj_offsets_[u + 1]};
  }

  double elevation(std::int32_t v) const { return vertices_[v].elevation_m; }

  /// Elevation difference h(to) - h(from) in meters.
  double delta_h(std::int32_t edge_idx) const {
    const Edge& e = edges_[edge_idx];
    return vertices_[e.to].elevation_m - vertices_[e.from].elevation_m;
  }

  /// Road gradient s = sin(theta) = delta_h / length. Bounded by validation.
  double gradient(std::int32_t edge_idx) const {
    return delta_h(edge_idx) / edges_[edge_idx].length_m;
  }

  /// Dense index for an external vertex id; throws ValidationError if unknown.
  std::int32_t index_of(std::int64_t vertex_id) const;

  double mean_abs_gradient() const;
  double max_abs_gradient() const;

  /// True when every vertex is reachable from `root` and vice versa.
  bool strongly_connected(std::int32_t root = 0) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> adj_offsets_;
  std::vector<std::int32_t> adj_edges_;
  std::unordered_map<std::int64_t, std::int32_t> id_index_;
};

enum class GraphFormat { CsvPair, Json };

std::optional<GraphFormat> parse_graph_format(std::string_view s);

/// Loads a graph. CsvPair expects `path` to be a directory holding
/// vertices.csv and edges.csv; Json expects a single document. When no
/// format is given it is inferred (directory -> csv-pair, file -> json).
RoadGraph load_graph(const std::string& path, std::optional<GraphFormat> format = {});

/// Writes the graph. Json is the canonical round-trip format.
void save_graph(const RoadGraph& graph, const std::string& path, GraphFormat format);

nlohmann::json graph_to_json(const RoadGraph& graph);
RoadGraph graph_from_json(const nlohmann::json& doc, std::string_view source = "graph");

/// Summary block used by the gen-graph stats sidecar.
nlohmann::json graph_stats(const RoadGraph& graph);

}  // namespace evr

#endif  // EVROUTER_GRAPH_HPP
