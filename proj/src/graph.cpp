#include "graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fs = std::filesystem;

namespace evr {

const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::Slow: return "Slow";
    case Pattern::Medium: return "Medium";
    case Pattern::High: return "High";
    case Pattern::ExtraHigh: return "ExtraHigh";
    case Pattern::Overall: return "Overall";
  }
  return "?";
}

std::optional<Pattern> parse_pattern(std::string_view s) {
  if (s == "Slow") return Pattern::Slow;
  if (s == "Medium") return Pattern::Medium;
  if (s == "High") return Pattern::High;
  if (s == "ExtraHigh") return Pattern::ExtraHigh;
  if (s == "Overall") return Pattern::Overall;
  return std::nullopt;
}

RoadGraph::RoadGraph(std::vector<VertexRecord> vrecs, std::vector<EdgeRecord> erecs,
                     std::string_view source) {
  const std::string src(source);
  auto locus = [&](const char* what, int record, int line) {
    std::string s = src + ": " + what + " record " + std::to_string(record);
    if (line >= 0) s += " (line " + std::to_string(line) + ")";
    return s;
  };

  vertices_.reserve(vrecs.size());
  id_index_.reserve(vrecs.size() * 2);
  for (std::size_t i = 0; i < vrecs.size(); ++i) {
    const VertexRecord& r = vrecs[i];
    if (!std::isfinite(r.elevation_m)) {
      throw ValidationError(locus("vertex", static_cast<int>(i), r.line) +
                            ": elevation is not finite");
    }
    if (!id_index_.emplace(r.id, static_cast<std::int32_t>(vertices_.size())).second) {
      throw ValidationError(locus("vertex", static_cast<int>(i), r.line) +
                            ": duplicate vertex id " + std::to_string(r.id));
    }
    vertices_.push_back(Vertex{r.id, r.elevation_m, r.lat, r.lon});
  }
  const auto& index = id_index_;

  edges_.reserve(erecs.size());
  for (std::size_t i = 0; i < erecs.size(); ++i) {
    const EdgeRecord& r = erecs[i];
    auto from_it = index.find(r.from_id);
    auto to_it = index.find(r.to_id);
    if (from_it == index.end() || to_it == index.end()) {
      const std::int64_t bad = from_it == index.end() ? r.from_id : r.to_id;
      throw ValidationError(locus("edge", static_cast<int>(i), r.line) +
                            ": references unknown vertex id " + std::to_string(bad));
    }
    if (!(r.length_m > 0.0) || !std::isfinite(r.length_m)) {
      throw ValidationError(locus("edge", static_cast<int>(i), r.line) +
                            ": length must be > 0, got " + std::to_string(r.length_m));
    }
    if (!(r.avg_speed_kmh > 0.0) || !std::isfinite(r.avg_speed_kmh)) {
      throw ValidationError(locus("edge", static_cast<int>(i), r.line) +
                            ": avg_speed must be > 0, got " + std::to_string(r.avg_speed_kmh));
    }
    const double dh = vertices_[to_it->second].elevation_m -
                      vertices_[from_it->second].elevation_m;
    const double s = dh / r.length_m;
    if (std::abs(s) > kMaxAbsGradient) {
      std::ostringstream msg;
      msg << locus("edge", static_cast<int>(i), r.line) << ": gradient |s|=" << std::abs(s)
          << " exceeds " << kMaxAbsGradient << " (" << r.from_id << "->" << r.to_id
          << "), likely an elevation data error";
      throw ValidationError(msg.str());
    }
    edges_.push_back(Edge{from_it->second, to_it->second, r.length_m, r.avg_speed_kmh,
                          r.pattern});
  }

  // CSR adjacency, deterministic order: (from, to, edge index).
  const std::int32_t n = vertex_count();
  adj_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges_) adj_offsets_[static_cast<std::size_t>(e.from) + 1]++;
  for (std::int32_t v = 0; v < n; ++v) adj_offsets_[v + 1] += adj_offsets_[v];
  adj_edges_.resize(edges_.size());
  std::vector<std::int32_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (std::int32_t ei = 0; ei < edge_count(); ++ei) {
    adj_edges_[cursor[edges_[ei].from]++] = ei;
  }
  for (std::int32_t v = 0; v < n; ++v) {
    std::sort(adj_edges_.begin() + adj_offsets_[v], adj_edges_.begin() + adj_offsets_[v + 1],
              [&](std::int32_t a, std::int32_t b) {
                if (edges_[a].to != edges_[b].to) return edges_[a].to < edges_[b].to;
                return a < b;
              });
  }
}

std::int32_t RoadGraph::index_of(std::int64_t vertex_id) const {
  const auto it = id_index_.find(vertex_id);
  if (it == id_index_.end()) {
    throw ValidationError("unknown vertex id " + std::to_string(vertex_id));
  }
  return it->second;
}

double RoadGraph::mean_abs_gradient() const {
  if (edges_.empty()) return 0.0;
  double sum = 0.0;
  for (std::int32_t ei = 0; ei < edge_count(); ++ei) sum += std::abs(gradient(ei));
  return sum / static_cast<double>(edges_.size());
}

double RoadGraph::max_abs_gradient() const {
  double mx = 0.0;
  for (std::int32_t ei = 0; ei < edge_count(); ++ei)
    mx = std::max(mx, std::abs(gradient(ei)));
  return mx;
}

bool RoadGraph::strongly_connected(std::int32_t root) const {
  const std::int32_t n = vertex_count();
  if (n == 0) return false;
  auto sweep = [&](bool forward) {
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::int32_t> stack{root};
    seen[root] = 1;
    std::int32_t count = 1;
    // Reverse adjacency built on demand for the backward sweep.
    std::vector<std::vector<std::int32_t>> radj;
    if (!forward) {
      radj.resize(n);
      for (const Edge& e : edges_) radj[e.to].push_back(e.from);
    }
    while (!stack.empty()) {
      const std::int32_t u = stack.back();
      stack.pop_back();
      if (forward) {
        for (std::int32_t ei : out_edges(u)) {
          const std::int32_t v = edges_[ei].to;
          if (!seen[v]) {
            seen[v] = 1;
            ++count;
            stack.push_back(v);
          }
        }
      } else {
        for (std::int32_t v : radj[u]) {
          if (!seen[v]) {
            seen[v] = 1;
            ++count;
            stack.push_back(v);
          }
        }
      }
    }
    return count == n;
  };
  return sweep(true) && sweep(false);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double_field(const std::string& field, const std::string& file, int line,
                          const char* name) {
  const std::string t = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(file + " line " + std::to_string(line) + ": bad " + name + " '" +
                     field + "'");
  }
  return value;
}

std::int64_t parse_int_field(const std::string& field, const std::string& file, int line,
                             const char* name) {
  const std::string t = trim(field);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(file + " line " + std::to_string(line) + ": bad " + name + " '" +
                     field + "'");
  }
  return value;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

RoadGraph load_csv_pair(const std::string& dir) {
  const std::string vpath = (fs::path(dir) / "vertices.csv").string();
  const std::string epath = (fs::path(dir) / "edges.csv").string();

  std::vector<VertexRecord> vrecs;
  {
    const auto lines = read_lines(vpath);
    if (lines.empty()) throw ParseError(vpath + ": empty file");
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || trim(header[0]) != "id" || trim(header[1]) != "elevation_m") {
      throw ParseError(vpath + " line 1: expected header 'id,elevation_m[,lat,lon]'");
    }
    const bool has_coords = header.size() >= 4;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      const auto f = split_csv_line(lines[i]);
      const int line_no = static_cast<int>(i) + 1;
      if (f.size() < 2) throw ParseError(vpath + " line " + std::to_string(line_no) + ": too few fields");
      VertexRecord r;
      r.id = parse_int_field(f[0], vpath, line_no, "id");
      r.elevation_m = parse_double_field(f[1], vpath, line_no, "elevation_m");
      if (has_coords && f.size() >= 4 && !trim(f[2]).empty()) {
        r.lat = parse_double_field(f[2], vpath, line_no, "lat");
        r.lon = parse_double_field(f[3], vpath, line_no, "lon");
      }
      r.line = line_no;
      vrecs.push_back(r);
    }
  }

  std::vector<EdgeRecord> erecs;
  {
    const auto lines = read_lines(epath);
    if (lines.empty()) throw ParseError(epath + ": empty file");
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 4 || trim(header[0]) != "from" || trim(header[1]) != "to") {
      throw ParseError(epath +
                       " line 1: expected header 'from,to,length_m,avg_speed_kmh[,pattern]'");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      const auto f = split_csv_line(lines[i]);
      const int line_no = static_cast<int>(i) + 1;
      if (f.size() < 4) throw ParseError(epath + " line " + std::to_string(line_no) + ": too few fields");
      EdgeRecord r;
      r.from_id = parse_int_field(f[0], epath, line_no, "from");
      r.to_id = parse_int_field(f[1], epath, line_no, "to");
      r.length_m = parse_double_field(f[2], epath, line_no, "length_m");
      r.avg_speed_kmh = parse_double_field(f[3], epath, line_no, "avg_speed_kmh");
      if (f.size() >= 5 && !trim(f[4]).empty()) {
        const auto p = parse_pattern(trim(f[4]));
        if (!p) {
          throw ParseError(epath + " line " + std::to_string(line_no) + ": unknown pattern '" +
                           f[4] + "'");
        }
        r.pattern = p;
      }
      r.line = line_no;
      erecs.push_back(r);
    }
  }
  return RoadGraph(std::move(vrecs), std::move(erecs), epath);
}

void save_csv_pair(const RoadGraph& g, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "vertices.csv");
    if (!out) throw IoError("cannot write vertices.csv under " + dir);
    const bool coords = !g.vertices().empty() && g.vertices().front().lat.has_value();
    out << (coords ? "id,elevation_m,lat,lon\n" : "id,elevation_m\n");
    for (const Vertex& v : g.vertices()) {
      out << v.id << ',' << format_g6(v.elevation_m);
      if (coords) out << ',' << format_g6(v.lat.value_or(0)) << ',' << format_g6(v.lon.value_or(0));
      out << '\n';
    }
  }
  {
    std::ofstream out(fs::path(dir) / "edges.csv");
    if (!out) throw IoError("cannot write edges.csv under " + dir);
    out << "from,to,length_m,avg_speed_kmh,pattern\n";
    for (const Edge& e : g.edges()) {
      out << g.vertices()[e.from].id << ',' << g.vertices()[e.to].id << ','
          << format_g6(e.length_m) << ',' << format_g6(e.avg_speed_kmh) << ','
          << (e.pattern ? to_string(*e.pattern) : "") << '\n';
    }
  }
}

}  // namespace

nlohmann::json graph_to_json(const RoadGraph& g) {
  nlohmann::json doc;
  auto& jv = doc["vertices"] = nlohmann::json::array();
  for (const Vertex& v : g.vertices()) {
    nlohmann::json item{{"id", v.id}, {"elevation_m", v.elevation_m}};
    if (v.lat) item["lat"] = *v.lat;
    if (v.lon) item["lon"] = *v.lon;
    jv.push_back(std::move(item));
  }
  auto& je = doc["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::json item{{"from", g.vertices()[e.from].id},
                        {"to", g.vertices()[e.to].id},
                        {"length_m", e.length_m},
                        {"avg_speed_kmh", e.avg_speed_kmh}};
    if (e.pattern) item["pattern"] = to_string(*e.pattern);
    je.push_back(std::move(item));
  }
  return doc;
}

RoadGraph graph_from_json(const nlohmann::json& doc, std::string_view source) {
  const std::string src(source);
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges")) {
    throw ParseError(src + ": expected object with 'vertices' and 'edges'");
  }
  std::vector<VertexRecord> vrecs;
  int idx = 0;
  for (const auto& item : doc.at("vertices")) {
    VertexRecord r;
    try {
      r.id = item.at("id").get<std::int64_t>();
      r.elevation_m = item.at("elevation_m").get<double>();
      if (item.contains("lat")) r.lat = item.at("lat").get<double>();
      if (item.contains("lon")) r.lon = item.at("lon").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(src + ": vertices[" + std::to_string(idx) + "]: " + e.what());
    }
    r.line = idx++;
    vrecs.push_back(r);
  }
  std::vector<EdgeRecord> erecs;
  idx = 0;
  for (const auto& item : doc.at("edges")) {
    EdgeRecord r;
    try {
      r.from_id = item.at("from").get<std::int64_t>();
      r.to_id = item.at("to").get<std::int64_t>();
      r.length_m = item.at("length_m").get<double>();
      r.avg_speed_kmh = item.at("avg_speed_kmh").get<double>();
      if (item.contains("pattern")) {
        const auto p = parse_pattern(item.at("pattern").get<std::string>());
        if (!p) throw ParseError("unknown pattern");
        r.pattern = p;
      }
    } catch (const ParseError&) {
      throw ParseError(src + ": edges[" + std::to_string(idx) + "]: unknown pattern");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(src + ": edges[" + std::to_string(idx) + "]: " + e.what());
    }
    r.line = idx++;
    erecs.push_back(r);
  }
  return RoadGraph(std::move(vrecs), std::move(erecs), src);
}

std::optional<GraphFormat> parse_graph_format(std::string_view s) {
  if (s == "csv" || s == "csv-pair") return GraphFormat::CsvPair;
  if (s == "json") return GraphFormat::Json;
  return std::nullopt;
}

RoadGraph load_graph(const std::string& path, std::optional<GraphFormat> format) {
  if (!format) {
    format = fs::is_directory(path) ? GraphFormat::CsvPair : GraphFormat::Json;
  }
  if (*format == GraphFormat::CsvPair) return load_csv_pair(path);

  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return graph_from_json(doc, path);
}

void save_graph(const RoadGraph& graph, const std::string& path, GraphFormat format) {
  if (format == GraphFormat::CsvPair) {
    save_csv_pair(graph, path);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << graph_to_json(graph).dump(1) << '\n';
}

nlohmann::json graph_stats(const RoadGraph& g) {
  double total_len = 0.0;
  double min_elev = g.vertices().empty() ? 0.0 : kInf;
  double max_elev = g.vertices().empty() ? 0.0 : -kInf;
  for (const Vertex& v : g.vertices()) {
    min_elev = std::min(min_elev, v.elevation_m);
    max_elev = std::max(max_elev, v.elevation_m);
  }
  for (const Edge& e : g.edges()) total_len += e.length_m;
  const double m = static_cast<double>(g.edge_count());
  const double n = static_cast<double>(g.vertex_count());
  return nlohmann::json{
      {"vertex_count", g.vertex_count()},
      {"edge_count", g.edge_count()},
      {"avg_out_degree", n > 0 ? m / n : 0.0},
      {"mean_abs_gradient", g.mean_abs_gradient()},
      {"max_abs_gradient", g.max_abs_gradient()},
      {"elevation_min_m", min_elev},
      {"elevation_max_m", max_elev},
      {"mean_edge_length_m", m > 0 ? total_len / m : 0.0},
      {"strongly_connected", g.strongly_connected()},
  };
}

}  // namespace evr
