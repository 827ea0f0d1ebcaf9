#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cfged/graph.hpp"
#include "json.hpp"

namespace cfged {

enum class EditKind { kReplace, kDelete, kInsert };
enum class EditTarget { kNode, kEdge };

struct NodeRef {
  std::string id;
  std::string concept_name;
  bool operator==(const NodeRef&) const = default;
};

struct EdgeRef {
  std::string source;
  std::string target;
  std::string predicate;
  bool operator==(const EdgeRef&) const = default;
};

using ElementRef = std::variant<NodeRef, EdgeRef>;

// One edit. `from` refers to the source graph, `to` to the target graph.
struct EditOp {
  EditKind kind;
  EditTarget target;
  std::optional<ElementRef> from;
  std::optional<ElementRef> to;
  double cost = 0.0;

  static EditOp replace_node(NodeRef a, NodeRef b, double cost) {
    return {EditKind::kReplace, EditTarget::kNode, std::move(a), std::move(b), cost};
  }
  static EditOp delete_node(NodeRef a, double cost) {
    return {EditKind::kDelete, EditTarget::kNode, std::move(a), std::nullopt, cost};
  }
  static EditOp insert_node(NodeRef b, double cost) {
    return {EditKind::kInsert, EditTarget::kNode, std::nullopt, std::move(b), cost};
  }
  static EditOp replace_edge(EdgeRef a, EdgeRef b, double cost) {
    return {EditKind::kReplace, EditTarget::kEdge, std::move(a), std::move(b), cost};
  }
  static EditOp delete_edge(EdgeRef a, double cost) {
    return {EditKind::kDelete, EditTarget::kEdge, std::move(a), std::nullopt, cost};
  }
  static EditOp insert_edge(EdgeRef b, double cost) {
    return {EditKind::kInsert, EditTarget::kEdge, std::nullopt, std::move(b), cost};
  }
};

// Ordered edits turning a source graph into a target graph. Label-preserving
// node matches produce no op, so `node_map` records every matched
// (source node id, target node id) pair; replay needs it to place inserted
// edges.
struct EditPath {
  std::vector<EditOp> ops;
  double total_cost = 0.0;
  std::vector<std::pair<std::string, std::string>> node_map;
};

inline double sum_op_costs(const EditPath& path) {
  double total = 0.0;
  for (const auto& op : path.ops) total += op.cost;
  return total;
}

inline std::string_view to_string(EditKind k) {
  switch (k) {
    case EditKind::kReplace: return "replace";
    case EditKind::kDelete: return "delete";
    case EditKind::kInsert: return "insert";
  }
  return "?";
}

inline std::string_view to_string(EditTarget t) {
  return t == EditTarget::kNode ? "node" : "edge";
}

inline nlohmann::ordered_json to_json(const ElementRef& ref) {
  if (const auto* n = std::get_if<NodeRef>(&ref))
    return {{"id", n->id}, {"concept", n->concept_name}};
  const auto& e = std::get<EdgeRef>(ref);
  return {{"src", e.source}, {"dst", e.target}, {"predicate", e.predicate}};
}

inline nlohmann::ordered_json to_json(const EditPath& path) {
  nlohmann::ordered_json ops = nlohmann::ordered_json::array();
  for (const auto& op : path.ops) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(op.kind);
    j["target"] = to_string(op.target);
    j["from"] = op.from ? to_json(*op.from) : nlohmann::ordered_json(nullptr);
    j["to"] = op.to ? to_json(*op.to) : nlohmann::ordered_json(nullptr);
    j["cost"] = op.cost;
    ops.push_back(std::move(j));
  }
  nlohmann::ordered_json map = nlohmann::ordered_json::array();
  for (const auto& [a, b] : path.node_map) map.push_back({{"from", a}, {"to", b}});
  return {{"ops", std::move(ops)},
          {"total_cost", path.total_cost},
          {"node_map", std::move(map)}};
}

struct ReplayResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

// Applies `path` to `source` and checks that the result equals `target`:
// same node ids (through node_map) with the same concepts, and the same
// multiset of (source, target, predicate) edges. Every op must reference an
// element present at the time it is applied.
inline ReplayResult replay(const SceneGraph& source, const EditPath& path,
                           const SceneGraph& target) {
  auto fail = [](std::string why) { return ReplayResult{false, std::move(why)}; };

  std::map<std::string, std::string> nodes;  // working id -> concept
  for (const auto& n : source.nodes) nodes[n.node_id] = n.concept_name;
  std::multiset<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& e : source.edges) edges.emplace(e.source, e.target, e.predicate);

  // target id -> working id
  std::unordered_map<std::string, std::string> to_working;
  std::set<std::string> matched_sources;
  for (const auto& [a, b] : path.node_map) {
    if (!nodes.count(a)) return fail("node_map references unknown source node " + a);
    if (!to_working.emplace(b, a).second)
      return fail("node_map maps two nodes onto " + b);
    if (!matched_sources.insert(a).second)
      return fail("node_map maps source node " + a + " twice");
  }
  const std::string kInsertedPrefix = std::string("\x01") + "ins:";

  auto working_edge = [&](const EdgeRef& e) -> std::optional<std::tuple<std::string, std::string, std::string>> {
    auto s = to_working.find(e.source);
    auto t = to_working.find(e.target);
    if (s == to_working.end() || t == to_working.end()) return std::nullopt;
    return std::make_tuple(s->second, t->second, e.predicate);
  };
  auto remove_edge = [&](const EdgeRef& e) {
    auto it = edges.find({e.source, e.target, e.predicate});
    if (it == edges.end()) return false;
    edges.erase(it);
    return true;
  };

  for (const auto& op : path.ops) {
    if (op.cost < 0.0) return fail("negative op cost");
    const bool want_from = op.kind != EditKind::kInsert;
    const bool want_to = op.kind != EditKind::kDelete;
    if (want_from != op.from.has_value() || want_to != op.to.has_value())
      return fail("op has wrong operands for its kind");
    if (op.target == EditTarget::kNode) {
      const NodeRef* a = op.from ? std::get_if<NodeRef>(&*op.from) : nullptr;
      const NodeRef* b = op.to ? std::get_if<NodeRef>(&*op.to) : nullptr;
      if ((want_from && !a) || (want_to && !b)) return fail("node op with edge operand");
      if (a) {
        auto it = nodes.find(a->id);
        if (it == nodes.end() || it->second != a->concept_name)
          return fail("node " + a->id + " absent or relabelled before op");
      }
      switch (op.kind) {
        case EditKind::kReplace: {
          auto m = to_working.find(b->id);
          if (m == to_working.end() || m->second != a->id)
            return fail("replace " + a->id + "->" + b->id + " not in node_map");
          nodes[a->id] = b->concept_name;
          break;
        }
        case EditKind::kDelete:
          if (matched_sources.count(a->id))
            return fail("deleted node " + a->id + " is also matched");
          nodes.erase(a->id);
          break;
        case EditKind::kInsert: {
          if (to_working.count(b->id)) return fail("inserted node " + b->id + " already present");
          const std::string wid = kInsertedPrefix + b->id;
          to_working.emplace(b->id, wid);
          nodes[wid] = b->concept_name;
          break;
        }
      }
    } else {
      const EdgeRef* a = op.from ? std::get_if<EdgeRef>(&*op.from) : nullptr;
      const EdgeRef* b = op.to ? std::get_if<EdgeRef>(&*op.to) : nullptr;
      if ((want_from && !a) || (want_to && !b)) return fail("edge op with node operand");
      if (a && !remove_edge(*a))
        return fail("edge " + a->source + "->" + a->target + " (" + a->predicate +
                    ") absent before op");
      if (b) {
        auto w = working_edge(*b);
        if (!w) return fail("inserted edge endpoint has no counterpart");
        edges.insert(*w);
      }
    }
  }

  // Translate the working graph into target ids and compare.
  std::unordered_map<std::string, std::string> to_target;
  for (const auto& [tid, wid] : to_working) to_target[wid] = tid;
  std::map<std::string, std::string> result_nodes;
  for (const auto& [wid, name] : nodes) {
    auto it = to_target.find(wid);
    if (it == to_target.end()) return fail("node " + wid + " survives without a match");
    result_nodes[it->second] = name;
  }
  std::map<std::string, std::string> want_nodes;
  for (const auto& n : target.nodes) want_nodes[n.node_id] = n.concept_name;
  if (result_nodes != want_nodes) return fail("node sets differ after replay");

  std::multiset<std::tuple<std::string, std::string, std::string>> result_edges;
  for (const auto& [s, t, p] : edges) {
    auto si = to_target.find(s);
    auto ti = to_target.find(t);
    if (si == to_target.end() || ti == to_target.end() || !nodes.count(s) ||
        !nodes.count(t))
      return fail("edge left dangling on a deleted node");
    result_edges.emplace(si->second, ti->second, p);
  }
  std::multiset<std::tuple<std::string, std::string, std::string>> want_edges;
  for (const auto& e : target.edges) want_edges.emplace(e.source, e.target, e.predicate);
  if (result_edges != want_edges) return fail("edge multisets differ after replay");
  return {true, {}};
}

}  // namespace cfged
