#include "tapc/graph_io.hpp"

#include <sstream>

#include "json.hpp"
#include "tapc/error.hpp"

namespace tapc {

namespace {

using nlohmann::json;

json edge_list(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.from + 1, e.to + 1});
  return out;
}

std::string dump(int p, const std::vector<Edge>& directed, const std::vector<Edge>& undirected) {
  json doc;
  doc["p"] = p;
  doc["directed"] = edge_list(directed);
  doc["undirected"] = edge_list(undirected);
  return doc.dump();
}

std::string dot(std::string_view name, int p, const std::vector<Edge>& directed,
                const std::vector<Edge>& undirected) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (int v = 0; v < p; ++v) os << "  " << v + 1 << ";\n";
  for (const Edge& e : directed) os << "  " << e.from + 1 << " -> " << e.to + 1 << ";\n";
  for (const Edge& e : undirected)
    os << "  " << e.from + 1 << " -> " << e.to + 1 << " [dir=none];\n";
  os << "}\n";
  return os.str();
}

struct ParsedGraph {
  int p = 0;
  std::vector<Edge> directed;
  std::vector<Edge> undirected;
};

ParsedGraph parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("p") || !doc["p"].is_number_integer()) {
    throw ConfigError("graph JSON: missing integer field \"p\"");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "p" && key != "directed" && key != "undirected" && key != "fingerprint") {
      throw ConfigError("graph JSON: unknown key \"" + key + "\"");
    }
  }
  ParsedGraph out;
  out.p = doc["p"].get<int>();
  if (out.p < 1) throw ConfigError("graph JSON: p must be positive");
  auto read = [&](const char* key, std::vector<Edge>& into) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_array()) throw ConfigError(std::string("graph JSON: \"") + key + "\" must be an array");
    for (const json& pair : doc[key]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer()) {
        throw ConfigError(std::string("graph JSON: bad edge in \"") + key + "\": " + pair.dump());
      }
      const int u = pair[0].get<int>() - 1;
      const int v = pair[1].get<int>() - 1;
      if (u < 0 || v < 0 || u >= out.p || v >= out.p) {
        throw ConfigError("graph JSON: edge label out of range: " + pair.dump());
      }
      into.push_back({u, v});
    }
  };
  read("directed", out.directed);
  read("undirected", out.undirected);
  return out;
}

}  // namespace

std::string to_dot(const Dag& g, std::string_view name) { return dot(name, g.size(), g.edges(), {}); }
std::string to_dot(const Pdag& g, std::string_view name) {
  return dot(name, g.size(), g.directed_edges(), g.undirected_edges());
}
std::string to_dot(const RolledGraph& g, std::string_view name) {
  return dot(name, g.size(), g.edges(), {});
}

std::string to_json(const Dag& g) { return dump(g.size(), g.edges(), {}); }
std::string to_json(const Pdag& g) {
  return dump(g.size(), g.directed_edges(), g.undirected_edges());
}
std::string to_json(const RolledGraph& g) { return dump(g.size(), g.edges(), {}); }

Pdag pdag_from_json(std::string_view text) {
  const ParsedGraph parsed = parse(text);
  Pdag out(parsed.p);
  try {
    for (const Edge& e : parsed.directed) out.add_directed(e.from, e.to);
    for (const Edge& e : parsed.undirected) out.add_undirected(e.from, e.to);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("graph JSON: ") + e.what());
  }
  return out;
}

Dag dag_from_json(std::string_view text) {
  const ParsedGraph parsed = parse(text);
  if (!parsed.undirected.empty()) throw ConfigError("graph JSON: a DAG cannot have undirected edges");
  try {
    return Dag(parsed.p, parsed.directed);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("graph JSON: ") + e.what());
  }
}

RolledGraph rolled_from_json(std::string_view text) {
  const ParsedGraph parsed = parse(text);
  RolledGraph out(parsed.p);
  for (const Edge& e : parsed.directed) out.add_edge(e.from, e.to);
  for (const Edge& e : parsed.undirected) {
    out.add_edge(e.from, e.to);
    out.add_edge(e.to, e.from);
  }
  return out;
}

}  // namespace tapc
