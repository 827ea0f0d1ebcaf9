#pragma once

// Scene-graph JSON and label CSV readers/writers.
//
//   graphs: {"graphs":[{"id":..,"nodes":[{"id":..,"concept":..}],
//                       "edges":[{"src":..,"dst":..,"predicate":..}]}]}
//   labels: CSV with header "graph_id,label"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cfged/error.hpp"
#include "cfged/graph.hpp"
#include "json.hpp"

namespace cfged {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::kIo, "short write to '" + path.string() + "'");
}

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

inline std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline const nlohmann::json& require_field(const nlohmann::json& obj,
                                           const char* key,
                                           const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw Error(ErrorKind::kParse, where + ": missing field '" + key + "'");
  return obj.at(key);
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
  const auto& v = require_field(obj, key, where);
  if (!v.is_string())
    throw Error(ErrorKind::kParse, where + ": field '" + key + "' is not a string");
  return v.get<std::string>();
}

}  // namespace detail

// Parses the graph document; `source` names the file in error messages.
inline std::vector<SceneGraph> parse_graphs(const std::string& text,
                                            const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                source + ":" + std::to_string(detail::line_of_offset(text, e.byte)) +
                    ": " + e.what());
  }
  const auto& arr = detail::require_field(doc, "graphs", source);
  if (!arr.is_array())
    throw Error(ErrorKind::kParse, source + ": 'graphs' is not an array");

  std::vector<SceneGraph> graphs;
  graphs.reserve(arr.size());
  for (std::size_t gi = 0; gi < arr.size(); ++gi) {
    const auto& jg = arr[gi];
    const std::string where = source + ": graphs[" + std::to_string(gi) + "]";
    SceneGraph g;
    g.id = detail::require_string(jg, "id", where);
    const auto& nodes = detail::require_field(jg, "nodes", where);
    if (!nodes.is_array())
      throw Error(ErrorKind::kParse, where + ": 'nodes' is not an array");
    for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
      const std::string nwhere = where + ".nodes[" + std::to_string(ni) + "]";
      g.nodes.push_back({detail::require_string(nodes[ni], "id", nwhere),
                         detail::require_string(nodes[ni], "concept", nwhere)});
    }
    if (jg.contains("edges")) {
      const auto& edges = jg.at("edges");
      if (!edges.is_array())
        throw Error(ErrorKind::kParse, where + ": 'edges' is not an array");
      for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const std::string ewhere = where + ".edges[" + std::to_string(ei) + "]";
        g.edges.push_back({detail::require_string(edges[ei], "src", ewhere),
                           detail::require_string(edges[ei], "dst", ewhere),
                           detail::require_string(edges[ei], "predicate", ewhere)});
      }
    }
    try {
      validate(g);
    } catch (const Error& e) {
      throw Error(ErrorKind::kConsistency, where + ": " + e.message());
    }
    graphs.push_back(std::move(g));
  }
  return graphs;
}

// Labels CSV: header "graph_id,label"; blank lines ignored.
inline std::map<std::string, std::string> parse_labels(const std::string& text,
                                                       const std::string& source) {
  std::map<std::string, std::string> labels;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    const auto fields = detail::split_line(line, ',');
    const std::string where = source + ":" + std::to_string(lineno);
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "graph_id" || fields[1] != "label")
        throw Error(ErrorKind::kParse, where + ": expected header 'graph_id,label'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw Error(ErrorKind::kParse, where + ": expected 'graph_id,label'");
    if (!labels.emplace(fields[0], fields[1]).second)
      throw Error(ErrorKind::kConsistency,
                  where + ": graph '" + fields[0] + "' labelled twice");
  }
  if (!header_seen)
    throw Error(ErrorKind::kParse, source + ": empty labels file");
  return labels;
}

// Loads and validates a dataset. Requires at least two classes.
inline LabeledDataset load_dataset(const std::filesystem::path& graphs_path,
                                   const std::filesystem::path& labels_path) {
  auto graphs = parse_graphs(detail::read_file(graphs_path), graphs_path.string());
  auto labels = parse_labels(detail::read_file(labels_path), labels_path.string());
  LabeledDataset ds(std::move(graphs), std::move(labels));
  ds.require_two_classes();
  return ds;
}

inline nlohmann::ordered_json graphs_to_json(const std::vector<SceneGraph>& graphs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& g : graphs) {
    nlohmann::ordered_json jg;
    jg["id"] = g.id;
    jg["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes)
      jg["nodes"].push_back({{"id", n.node_id}, {"concept", n.concept_name}});
    jg["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges)
      jg["edges"].push_back(
          {{"src", e.source}, {"dst", e.target}, {"predicate", e.predicate}});
    arr.push_back(std::move(jg));
  }
  return nlohmann::ordered_json{{"graphs", std::move(arr)}};
}

inline std::string format_labels(const LabeledDataset& ds) {
  std::string out = "graph_id,label\n";
  for (const auto& g : ds.graphs()) out += g.id + "," + ds.label_of(g.id) + "\n";
  return out;
}

inline void save_dataset(const LabeledDataset& ds,
                         const std::filesystem::path& graphs_path,
                         const std::filesystem::path& labels_path) {
  detail::write_file(graphs_path, graphs_to_json(ds.graphs()).dump(1) + "\n");
  detail::write_file(labels_path, format_labels(ds));
}

}  // namespace cfged
