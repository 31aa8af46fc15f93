// JSON-bridge bindings: every operation takes and returns JSON text, so the
// python side stays a thin json.loads/dumps wrapper and the extension never
// has to mirror the C++ types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "freeterm/ft_analysis.hpp"
#include "freeterm/graph.hpp"
#include "freeterm/io.hpp"
#include "freeterm/minimize.hpp"
#include "freeterm/models.hpp"
#include "freeterm/query_expr.hpp"
#include "freeterm/report.hpp"

namespace py = pybind11;
namespace ft = freeterm;

namespace {

std::string model_text(const ft::Model& m) {
    return ft::canonical_text(ft::model_to_json(m));
}

ft::Model parse_model(const std::string& text) {
    return ft::model_from_json(nlohmann::json::parse(text)).model;
}

std::string gen_fig1(const std::string& variant) {
    if (variant.size() != 1)
        throw ft::input_error("variant must be one of a, b, c, d");
    return model_text(ft::gen_fig1(variant[0]));
}

std::string gen_powerset(const std::vector<std::string>& atoms, const std::string& contains) {
    const auto it = std::find(atoms.begin(), atoms.end(), contains);
    if (it == atoms.end())
        throw ft::input_error("'" + contains + "' is not one of the atoms");
    const std::uint32_t bit = static_cast<std::uint32_t>(it - atoms.begin());
    return model_text(ft::gen_powerset_union(
        atoms, [bit](std::uint32_t mask) { return nlohmann::json(((mask >> bit) & 1u) != 0); }));
}

std::string gen_two_phase(const std::vector<std::string>& atoms) {
    return model_text(ft::gen_two_phase_set(atoms));
}

std::string gen_g_counter(std::uint32_t replicas, std::uint32_t cap, bool with_merge) {
    return model_text(ft::gen_g_counter(replicas, cap, with_merge));
}

std::string gen_pn_counter(std::uint32_t replicas, std::uint32_t cap) {
    return model_text(ft::gen_pn_counter(replicas, cap));
}

std::string gen_tc(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                   std::uint32_t source, std::uint32_t target, bool cycle_query) {
    return model_text(ft::gen_tc_fixpoint(edges, source, target, cycle_query));
}

std::string canonical(const std::string& model_json) { return model_text(parse_model(model_json)); }

std::string analyze(const std::string& model_json, bool with_algebra, std::uint32_t bound) {
    const ft::Model m = parse_model(model_json);
    const ft::AnalyzeOptions opt{with_algebra, bound};
    return ft::analyze_to_json(m, ft::analyze_model(m, opt)).dump();
}

std::string minimize(const std::string& model_json, bool collapse_only) {
    const ft::Model m = parse_model(model_json);
    ft::Model result{m.automaton, m.query};
    ft::CollapseMap map;
    std::vector<std::string> warnings;
    if (collapse_only) {
        ft::CollapseResult c = ft::collapse_fixpoint(m.automaton, m.query);
        result = ft::Model{std::move(c.automaton), std::move(c.query)};
        map = std::move(c.map);
    } else {
        ft::MinimizeResult mr = ft::minimize_moore(m.automaton, m.query);
        result = ft::Model{std::move(mr.automaton), std::move(mr.query)};
        map = std::move(mr.map);
        warnings = std::move(mr.warnings);
    }
    nlohmann::json j;
    j["model"] = nlohmann::json(ft::model_to_json(result));
    nlohmann::json arr = nlohmann::json::array();
    for (ft::StateId s : map.old_to_new) {
        if (s == ft::invalid_state)
            arr.push_back(nullptr);
        else
            arr.push_back(s);
    }
    j["old_to_new"] = std::move(arr);
    j["warnings"] = warnings;
    return j.dump();
}

std::string check_prop(const std::string& model_json, const std::string& prop) {
    const ft::Model m = parse_model(model_json);
    const ft::PropVerdict v = ft::run_check_prop(m, prop);
    nlohmann::json j;
    j["prop"] = prop;
    j["status"] = v.holds() ? "holds" : (v.fails() ? "fails" : "not_applicable");
    j["detail"] = v.detail;
    nlohmann::json states = nlohmann::json::array();
    for (ft::StateId s : v.states)
        states.push_back(m.automaton.display_name(s));
    j["states"] = std::move(states);
    return j.dump();
}

std::string to_dot(const std::string& model_json, bool shade_ft) {
    const ft::Model m = parse_model(model_json);
    if (!shade_ft)
        return ft::to_dot(m);
    const ft::FtVerdict v = ft::all_ft_states(ft::build_graph(m.automaton), m.query);
    return ft::to_dot(m, &v.ft);
}

ft::FactUniverse universe_or_input(const std::string& universe_json, const ft::Instance& input) {
    if (universe_json.empty())
        return ft::make_universe(std::vector<ft::Fact>(input.begin(), input.end()));
    return ft::universe_from_json(nlohmann::json::parse(universe_json));
}

std::string check_cf(const std::string& network_json, const std::string& query,
                     const std::string& instance_json, const std::string& universe_json,
                     std::uint32_t trials, std::uint64_t seed) {
    const ft::Network net = ft::network_from_json(nlohmann::json::parse(network_json));
    const ft::Instance input = ft::instance_from_json(nlohmann::json::parse(instance_json));
    const ft::FactUniverse u = universe_or_input(universe_json, input);
    const ft::DistQuery q = ft::resolve_bool_query(query);
    const ft::CfCheckResult res = ft::check_cf_correct(net, q, input, u, trials, seed);
    nlohmann::json j;
    j["input_ft"] = res.input_ft;
    j["input_value"] = res.input_value;
    j["runs"] = res.runs;
    j["discrepancies"] = res.discrepancies;
    j["notes"] = res.notes;
    return j.dump();
}

std::string simulate(const std::string& network_json, const std::string& query,
                     const std::string& instance_json, const std::string& universe_json,
                     std::uint64_t seed, bool all_metadata) {
    const ft::Network net = ft::network_from_json(nlohmann::json::parse(network_json));
    const ft::Instance input = ft::instance_from_json(nlohmann::json::parse(instance_json));
    const ft::FactUniverse u = universe_or_input(universe_json, input);
    const ft::DistQuery q = ft::resolve_bool_query(query);
    ft::RunSchedule sched;
    sched.seed = seed;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<ft::Instance> parts(net.nodes);
    for (const ft::Fact& f : input)
        parts[rng() % net.nodes].insert(f);
    if (all_metadata)
        return ft::run_with_all_metadata(net, parts, q.eval, u, sched).to_json().dump();
    const ft::ReadyPolicy ready = ft::ft_ready_policy(u, q.eval);
    return ft::run(net, parts, q.eval, ready, sched).to_json().dump();
}

} // namespace

PYBIND11_MODULE(_freeterm, m) {
    m.doc() = "Free-termination analysis of finite semiautomata with queries (JSON bridge)";

    py::register_exception<ft::input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<ft::cap_exceeded>(m, "CapExceeded", PyExc_RuntimeError);

    m.def("gen_fig1", &gen_fig1, py::arg("variant"),
          "Reference DFA family over {a,b,c}; variant a, b, c or d. Returns model JSON text.");
    m.def("gen_powerset", &gen_powerset, py::arg("atoms"), py::arg("contains"),
          "Union-driven powerset machine with a membership query.");
    m.def("gen_two_phase", &gen_two_phase, py::arg("atoms"), "Two-phase set over the atoms.");
    m.def("gen_g_counter", &gen_g_counter, py::arg("replicas"), py::arg("cap"),
          py::arg("with_merge") = true, "Grow-only counter with a raw-sum query.");
    m.def("gen_pn_counter", &gen_pn_counter, py::arg("replicas"), py::arg("cap"),
          "Increment/decrement counter with a signed-sum query.");
    m.def("gen_tc", &gen_tc, py::arg("edges"), py::arg("source"), py::arg("target"),
          py::arg("cycle_query") = false,
          "Naive transitive-closure round chain with a path or cycle query.");
    m.def("canonical", &canonical, py::arg("model_json"),
          "Parse model JSON text and re-serialize it canonically.");
    m.def("analyze", &analyze, py::arg("model_json"), py::arg("with_algebra") = true,
          py::arg("commutativity_bound") = 3,
          "FT verdicts, behavior category and algebra flags as report JSON text.");
    m.def("minimize", &minimize, py::arg("model_json"), py::arg("collapse_only") = false,
          "Query-preserving minimization; returns {model, old_to_new, warnings} JSON text.");
    m.def("check_prop", &check_prop, py::arg("model_json"), py::arg("prop"),
          "Run one named property check; returns {prop, status, detail, states} JSON text.");
    m.def("check_prop_names", &ft::check_prop_names, "Names accepted by check_prop.");
    m.def("to_dot", &to_dot, py::arg("model_json"), py::arg("shade_ft") = true,
          "Graphviz text, optionally shading the freely terminating states.");
    m.def("check_cf", &check_cf, py::arg("network_json"), py::arg("query"),
          py::arg("instance_json"), py::arg("universe_json") = std::string(),
          py::arg("trials") = 25, py::arg("seed") = 0,
          "Seeded runs checked against the FT prediction; returns a summary JSON text.");
    m.def("simulate", &simulate, py::arg("network_json"), py::arg("query"),
          py::arg("instance_json"), py::arg("universe_json") = std::string(),
          py::arg("seed") = 0, py::arg("all_metadata") = false,
          "One seeded run; returns the trace JSON text.");
}
