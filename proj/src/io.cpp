#include "freeterm/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "freeterm/errors.hpp"
#include "freeterm/graph.hpp"

namespace freeterm {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end())
        throw input_error(std::string("model file is missing the '") + name + "' field");
    return *it;
}

std::string value_label(const nlohmann::json& v) {
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

LoadedModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw input_error("model file must be a JSON object");
    const std::uint64_t states = field(j, "states").get<std::uint64_t>();
    std::vector<std::string> labels = field(j, "labels").get<std::vector<std::string>>();

    const nlohmann::json& rows = field(j, "delta");
    if (!rows.is_array() || rows.size() != states)
        throw input_error("delta must have one row per state");
    std::vector<StateId> delta;
    delta.reserve(states * labels.size());
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != labels.size())
            throw input_error("each delta row needs one target per label");
        for (const auto& t : row)
            delta.push_back(t.get<StateId>());
    }

    std::optional<StateId> start;
    if (j.contains("start") && !j.at("start").is_null())
        start = j.at("start").get<StateId>();
    std::vector<std::string> names;
    if (j.contains("names"))
        names = j.at("names").get<std::vector<std::string>>();
    std::string provenance;
    if (j.contains("provenance"))
        provenance = j.at("provenance").get<std::string>();

    const nlohmann::json& qj = field(j, "query");
    const nlohmann::json& vals = field(qj, "values");
    if (!vals.is_array() || vals.size() != states)
        throw input_error("query.values must have one entry per state");
    std::vector<nlohmann::json> values(vals.begin(), vals.end());
    std::optional<std::vector<std::pair<nlohmann::json, nlohmann::json>>> order;
    if (qj.contains("order") && !qj.at("order").is_null()) {
        order.emplace();
        for (const auto& p : qj.at("order")) {
            if (!p.is_array() || p.size() != 2)
                throw input_error("query.order entries must be [low, high] value pairs");
            order->emplace_back(p.at(0), p.at(1));
        }
    }

    LoadedModel out{{Semiautomaton(static_cast<StateId>(states), std::move(labels),
                                   std::move(delta), start, std::move(names),
                                   std::move(provenance)),
                     Query::from_values(values, order)},
                    {}};
    if (out.model.automaton.start()) {
        const TransitionGraph g(out.model.automaton);
        const auto reach = reach_set(g, *out.model.automaton.start());
        if (reach.size() != out.model.automaton.num_states())
            out.warnings.push_back("start state reaches " + std::to_string(reach.size()) + " of " +
                                   std::to_string(out.model.automaton.num_states()) + " states");
    }
    return out;
}

nlohmann::ordered_json model_to_json(const Model& m) {
    const Semiautomaton& a = m.automaton;
    nlohmann::ordered_json j;
    if (!a.provenance().empty())
        j["provenance"] = a.provenance();
    j["states"] = a.num_states();
    j["labels"] = a.label_names();
    if (!a.state_names().empty())
        j["names"] = a.state_names();
    if (a.start())
        j["start"] = *a.start();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (StateId s = 0; s < a.num_states(); ++s) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (LabelId l = 0; l < a.num_labels(); ++l)
            row.push_back(a.next(s, l));
        rows.push_back(std::move(row));
    }
    j["delta"] = std::move(rows);

    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (StateId s = 0; s < a.num_states(); ++s)
        vals.push_back(nlohmann::ordered_json(m.query.value(s)));
    j["query"]["values"] = std::move(vals);
    if (m.query.result_order()) {
        const PartialOrder& ord = *m.query.result_order();
        const std::uint32_t d = m.query.domain_size();
        nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
        for (std::uint32_t i = 0; i < d; ++i)
            for (std::uint32_t k = 0; k < d; ++k) {
                if (i == k || !ord.le(i, k))
                    continue;
                bool covering = true;
                for (std::uint32_t mid = 0; mid < d && covering; ++mid)
                    if (mid != i && mid != k && ord.le(i, mid) && ord.le(mid, k))
                        covering = false;
                if (covering)
                    pairs.push_back(nlohmann::ordered_json::array(
                        {nlohmann::ordered_json(m.query.domain_value(i)),
                         nlohmann::ordered_json(m.query.domain_value(k))}));
            }
        j["query"]["order"] = std::move(pairs);
    } else {
        j["query"]["order"] = nullptr;
    }
    return j;
}

std::string to_dot(const Model& m, const std::vector<std::uint8_t>* ft) {
    const Semiautomaton& a = m.automaton;
    std::ostringstream out;
    out << "digraph model {\n  rankdir=LR;\n  node [shape=circle, fontsize=11];\n";
    if (!a.provenance().empty())
        out << "  label=\"" << dot_escape(a.provenance()) << "\";\n  labelloc=t;\n";
    if (a.start())
        out << "  __start [shape=point];\n";
    for (StateId s = 0; s < a.num_states(); ++s) {
        out << "  n" << s << " [label=\"" << dot_escape(a.display_name(s)) << "\\n"
            << dot_escape(value_label(m.query.value(s))) << "\"";
        if (m.query.value(s) == nlohmann::json(true))
            out << ", peripheries=2";
        if (ft && (*ft)[s])
            out << ", style=filled, fillcolor=\"#cde6f7\"";
        out << "];\n";
    }
    if (a.start())
        out << "  __start -> n" << *a.start() << ";\n";
    std::map<std::pair<StateId, StateId>, std::string> edges;
    for (StateId s = 0; s < a.num_states(); ++s)
        for (LabelId l = 0; l < a.num_labels(); ++l) {
            std::string& lbl = edges[{s, a.next(s, l)}];
            if (!lbl.empty())
                lbl += ",";
            lbl += a.label_names()[l];
        }
    for (const auto& [key, lbl] : edges)
        out << "  n" << key.first << " -> n" << key.second << " [label=\"" << dot_escape(lbl)
            << "\"];\n";
    out << "}\n";
    return out.str();
}

Network network_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw input_error("network file needs 'nodes' and 'edges'");
    const std::uint32_t nodes = j.at("nodes").get<std::uint32_t>();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw input_error("network edges must be [u, v] pairs");
        edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
    }
    return Network::make(nodes, std::move(edges));
}

PolicySpec policy_from_json(const nlohmann::json& j, std::uint32_t nodes) {
    if (!j.is_object())
        throw input_error("policy file must be a JSON object");
    PolicySpec spec;
    auto node_list = [nodes](const nlohmann::json& arr) {
        std::vector<std::uint32_t> out;
        for (const auto& v : arr) {
            const std::uint32_t n = v.get<std::uint32_t>();
            if (n >= nodes)
                throw input_error("policy names unknown node " + std::to_string(n));
            out.push_back(n);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        if (out.empty())
            throw input_error("policy node lists must not be empty");
        return out;
    };
    if (j.contains("default") && !j.at("default").is_null())
        spec.default_nodes = node_list(j.at("default"));
    if (j.contains("entries"))
        for (const auto& e : j.at("entries")) {
            if (!e.is_object() || !e.contains("fact") || !e.contains("nodes"))
                throw input_error("policy entries need 'fact' and 'nodes'");
            spec.entries[fact_from_json(e.at("fact"))] = node_list(e.at("nodes"));
        }
    return spec;
}

FactUniverse universe_from_json(const nlohmann::json& j) {
    if (!j.is_array())
        throw input_error("universe file must be an array of facts");
    std::vector<Fact> facts;
    for (const auto& f : j)
        facts.push_back(fact_from_json(f));
    return make_universe(std::move(facts));
}

nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write " + path);
    out << text;
    if (!out)
        throw input_error("write to " + path + " failed");
}

std::string canonical_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace freeterm
