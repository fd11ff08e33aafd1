#pragma once

#include <string>
#include <string_view>

#include "tapc/graph.hpp"

namespace tapc {

// Emitters print 1-based node labels. JSON uses
// {"p": int, "directed": [[u,v],...], "undirected": [[u,v],...]}.

std::string to_dot(const Dag& g, std::string_view name = "G");
std::string to_dot(const Pdag& g, std::string_view name = "G");
std::string to_dot(const RolledGraph& g, std::string_view name = "G");

std::string to_json(const Dag& g);
std::string to_json(const Pdag& g);
std::string to_json(const RolledGraph& g);

/// Parses the JSON layout above. Throws ConfigError on malformed input.
Pdag pdag_from_json(std::string_view text);
Dag dag_from_json(std::string_view text);
/// Undirected entries are read as edges in both directions.
RolledGraph rolled_from_json(std::string_view text);

}  // namespace tapc
