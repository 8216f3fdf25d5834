#pragma once

#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"
#include "circuit.hpp"
#include "error.hpp"

namespace pcdt {

inline constexpr int document_version = 1;

namespace detail {

using json = nlohmann::ordered_json;

inline void expect_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) {
    throw error(errc::schema_error, where + ": expected an object");
  }
  std::set<std::string> want(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!want.contains(k)) {
      throw error(errc::schema_error, where + ": unexpected field \"" + k + "\"");
    }
  }
  for (const auto& k : want) {
    if (!obj.contains(k)) {
      throw error(errc::schema_error, where + ": missing field \"" + k + "\"");
    }
  }
}

inline std::uint64_t get_index(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw error(errc::schema_error, where + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline Node parse_node(const json& j, std::size_t& id_out, std::size_t position) {
  const std::string where = "nodes[" + std::to_string(position) + "]";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw error(errc::schema_error, where + ": missing or non-string \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "leaf") {
    expect_keys(j, {"id", "kind", "var", "negated"}, where);
  } else if (kind == "sum") {
    expect_keys(j, {"id", "kind", "children", "weights"}, where);
  } else if (kind == "product") {
    expect_keys(j, {"id", "kind", "children"}, where);
  } else {
    throw error(errc::schema_error, where + ": unknown kind \"" + kind + "\"");
  }
  id_out = get_index(j["id"], where + ".id");
  if (kind == "leaf") {
    if (!j["negated"].is_boolean()) {
      throw error(errc::schema_error, where + ".negated: expected a boolean");
    }
    const auto var = get_index(j["var"], where + ".var");
    if (var > std::numeric_limits<std::uint32_t>::max()) {
      throw error(errc::bad_variable, where + ": variable " + std::to_string(var) + " out of range");
    }
    return Node::leaf(Indicator{VarId{static_cast<std::uint32_t>(var)}, j["negated"].get<bool>()});
  }
  if (!j["children"].is_array()) {
    throw error(errc::schema_error, where + ".children: expected an array");
  }
  std::vector<NodeId> kids;
  for (const auto& ch : j["children"]) {
    const auto v = get_index(ch, where + ".children");
    if (v > std::numeric_limits<NodeId>::max()) {
      throw error(errc::dangling_child, where + ": child " + std::to_string(v) + " out of range");
    }
    kids.push_back(static_cast<NodeId>(v));
  }
  if (kind == "product") {
    return Node::product(std::move(kids));
  }
  if (!j["weights"].is_array()) {
    throw error(errc::schema_error, where + ".weights: expected an array");
  }
  std::vector<double> ws;
  for (const auto& w : j["weights"]) {
    if (!w.is_number()) {
      throw error(errc::schema_error, where + ".weights: expected numbers");
    }
    ws.push_back(w.get<double>());
  }
  return Node::sum(std::move(kids), std::move(ws));
}

} // namespace detail

/// Parses a circuit document and validates it through build_circuit.
inline Circuit parse_circuit(std::string_view text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw error(errc::parse_error, e.what());
  }
  detail::expect_keys(doc, {"version", "num_vars", "root", "nodes"}, "document");
  if (!doc["version"].is_number_integer() || doc["version"].get<std::int64_t>() != document_version) {
    throw error(errc::schema_error, "document: unsupported version");
  }
  const auto num_vars = detail::get_index(doc["num_vars"], "num_vars");
  const auto root = detail::get_index(doc["root"], "root");
  if (!doc["nodes"].is_array()) {
    throw error(errc::schema_error, "nodes: expected an array");
  }
  const auto& arr = doc["nodes"];
  std::vector<std::optional<Node>> slots(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::size_t id = 0;
    Node n = detail::parse_node(arr[i], id, i);
    if (id >= arr.size() || slots[id]) {
      throw error(errc::schema_error, "nodes[" + std::to_string(i) + "]: id " + std::to_string(id) +
                                          " is duplicated or outside 0.." + std::to_string(arr.size()));
    }
    slots[id] = std::move(n);
  }
  std::vector<Node> nodes;
  nodes.reserve(slots.size());
  for (auto& s : slots) {
    nodes.push_back(std::move(*s));
  }
  if (root > std::numeric_limits<NodeId>::max()) {
    throw error(errc::invalid_input, "root out of range");
  }
  return build_circuit(num_vars, std::move(nodes), static_cast<NodeId>(root));
}

/// Canonical document: nodes in id order, fields in a fixed order. Weights
/// use the shortest decimal form that reads back to the same double.
inline std::string serialize_circuit(const Circuit& c) {
  detail::json doc;
  doc["version"] = document_version;
  doc["num_vars"] = c.num_vars();
  doc["root"] = c.root();
  auto& arr = doc["nodes"] = detail::json::array();
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.node(id);
    detail::json j;
    j["id"] = id;
    j["kind"] = to_string(n.kind);
    if (n.is_leaf()) {
      j["var"] = n.indicator.var.index;
      j["negated"] = n.indicator.negated;
    } else {
      j["children"] = n.children;
      if (n.is_sum()) {
        j["weights"] = n.weights;
      }
    }
    arr.push_back(std::move(j));
  }
  return doc.dump(1) + "\n";
}

inline Circuit read_circuit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw error(errc::io_error, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw error(errc::io_error, "cannot open " + path + " for writing");
  }
  out << text;
  if (!out.flush()) {
    throw error(errc::io_error, "write to " + path + " failed");
  }
}

inline void write_circuit(const Circuit& c, const std::string& path) { write_text(path, serialize_circuit(c)); }

/// Graphviz digraph: one statement per node and one per edge.
inline std::string to_dot(const Circuit& c) {
  std::ostringstream out;
  out << "digraph pc {\n";
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.node(id);
    out << "  n" << id << " [";
    switch (n.kind) {
    case NodeKind::sum: out << "label=\"+\", shape=ellipse"; break;
    case NodeKind::product: out << "label=\"×\", shape=box"; break;
    case NodeKind::leaf:
      out << "label=\"" << (n.indicator.negated ? "~x_" : "x_") << n.indicator.var.index << "\", shape=plaintext";
      break;
    }
    out << "];\n";
  }
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.node(id);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      out << "  n" << id << " -> n" << n.children[i];
      if (n.is_sum() && n.weights[i] != 1.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", n.weights[i]);
        out << " [label=\"" << buf << "\"]";
      }
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

inline std::string to_text(const ValidityReport& r) {
  std::ostringstream out;
  auto line = [&](const char* name, bool flag, const std::optional<Witness>& w) {
    out << name << '=' << (flag ? "true" : "false");
    if (w) {
      out << " (node " << w->node << ": " << w->description << ')';
    }
    out << '\n';
  };
  line("decomposable", r.decomposable, r.decomposable_witness);
  line("smooth", r.smooth, r.smooth_witness);
  line("homogeneous", r.homogeneous, r.homogeneous_witness);
  line("normalized", r.normalized, r.normalized_witness);
  line("monotone", r.monotone, r.monotone_witness);
  return out.str();
}

inline std::string to_text(const Stats& s) {
  std::ostringstream out;
  out << "nodes=" << s.num_nodes << '\n'
      << "edges=" << s.num_edges << '\n'
      << "depth=" << s.depth << '\n'
      << "max_fanout=" << s.max_fanout << '\n'
      << "is_tree=" << (s.is_tree ? "true" : "false") << '\n'
      << "root_degree=" << s.degree_of_root << '\n';
  return out.str();
}

inline std::string to_csv(const Stats& s) {
  std::ostringstream out;
  out << "nodes,edges,depth,max_fanout,is_tree,root_degree\n"
      << s.num_nodes << ',' << s.num_edges << ',' << s.depth << ',' << s.max_fanout << ','
      << (s.is_tree ? 1 : 0) << ',' << s.degree_of_root << '\n';
  return out.str();
}

} // namespace pcdt
