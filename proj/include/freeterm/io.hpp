#pragma once

#include <string>
#include <vector>

#include "freeterm/distsim.hpp"
#include "freeterm/models.hpp"

#include "json.hpp"

namespace freeterm {

// Model files are JSON:
//
//   {
//     "provenance": "fig1a",            optional free-form origin tag
//     "states": 6,
//     "labels": ["a", "b", "c"],
//     "names": ["start", ...],          optional, one per state
//     "start": 0,                       optional
//     "delta": [[1, 2, 0], ...],        per state, per label
//     "query": {
//       "values": [false, ...],         per state, any JSON scalar
//       "order": [[false, true]] | null pairs of value literals
//     }
//   }
//
// Serialization is canonical: fixed key order, two-space indent, the order
// reduced to its covering pairs and sorted. Loading what was saved and
// saving again is byte-identical.
struct LoadedModel {
    Model model;
    std::vector<std::string> warnings;
};

LoadedModel model_from_json(const nlohmann::json& j);
nlohmann::ordered_json model_to_json(const Model& m);

// Graphviz view: one node per state labeled with its name and query value,
// doubled border for Boolean true, merged parallel edges, optional shading
// of the freely terminating states.
std::string to_dot(const Model& m, const std::vector<std::uint8_t>* ft = nullptr);

// {"nodes": 3, "edges": [[0, 1], [1, 2]]}
Network network_from_json(const nlohmann::json& j);

// [{"fact": {"rel": "R", "tuple": [1]}, "nodes": [0, 2]}, ...] plus an
// optional "default" node list; both fall back to every node.
PolicySpec policy_from_json(const nlohmann::json& j, std::uint32_t nodes);

FactUniverse universe_from_json(const nlohmann::json& j);

nlohmann::json parse_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
std::string canonical_text(const nlohmann::ordered_json& j);

} // namespace freeterm
