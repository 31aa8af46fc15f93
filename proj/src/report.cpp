#include "freeterm/report.hpp"

#include <algorithm>
#include <sstream>

#include "freeterm/minimize.hpp"

namespace freeterm {

namespace {

PropVerdict verdict(PropVerdict::Status st, std::string detail, std::vector<StateId> states = {}) {
    PropVerdict v;
    v.status = st;
    v.detail = std::move(detail);
    v.states = std::move(states);
    return v;
}

PropVerdict holds(std::string d) { return verdict(PropVerdict::Status::holds, std::move(d)); }
PropVerdict na(std::string d) { return verdict(PropVerdict::Status::not_applicable, std::move(d)); }
PropVerdict fails(std::string d, std::vector<StateId> states) {
    return verdict(PropVerdict::Status::fails, std::move(d), std::move(states));
}

// The query's result order: the explicit one when present, else false <= true
// synthesized for Boolean value domains.
std::optional<PartialOrder> effective_result_order(const Query& q) {
    if (q.result_order())
        return q.result_order();
    std::optional<std::uint32_t> id_false, id_true;
    for (std::uint32_t i = 0; i < q.domain_size(); ++i) {
        if (!q.domain_value(i).is_boolean())
            return std::nullopt;
        (q.domain_value(i).get<bool>() ? id_true : id_false) = i;
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (id_false && id_true)
        pairs.emplace_back(*id_false, *id_true);
    return PartialOrder::from_pairs(q.domain_size(), pairs);
}

bool is_boolean_domain(const Query& q) {
    for (std::uint32_t i = 0; i < q.domain_size(); ++i)
        if (!q.domain_value(i).is_boolean())
            return false;
    return true;
}

// Minimal states carrying the value true; for a monotone Boolean query these
// are the threshold antichain that reproduces it.
Antichain minimal_true_states(const PartialOrder& ord, const Query& q) {
    std::vector<StateId> trues;
    for (StateId s = 0; s < q.num_states(); ++s)
        if (q.value(s) == nlohmann::json(true))
            trues.push_back(s);
    return Antichain{ord.minimal_of(trues)};
}

PropVerdict prop_inflationary_maximal(const TransitionGraph& g, const Query& q) {
    if (!is_acyclic(g))
        return na("transition graph is cyclic, so it has no natural order");
    const PartialOrder ord = natural_order(g);
    const FtVerdict v = all_ft_states(g, q);
    std::vector<StateId> offenders;
    for (StateId s : ord.maximal_elements())
        if (!v.is_ft(s))
            offenders.push_back(s);
    if (!offenders.empty())
        return fails("a maximal state does not freely terminate", std::move(offenders));
    return holds(std::to_string(ord.maximal_elements().size()) +
                 " maximal state(s), every one freely terminating");
}

PropVerdict prop_top_in_r(const TransitionGraph& g, const Query& q) {
    if (!is_acyclic(g))
        return na("transition graph is cyclic, so it has no natural order");
    const auto ord_r = effective_result_order(q);
    if (!ord_r)
        return na("query values carry no result order");
    const PartialOrder ord = natural_order(g);
    if (!is_monotone_query(q, ord, *ord_r))
        return na("query is not monotone");
    const FtVerdict v = all_ft_states(g, q);
    std::vector<std::uint8_t> value_maximal(q.domain_size(), 1);
    for (std::uint32_t a = 0; a < q.domain_size(); ++a)
        for (std::uint32_t b = 0; b < q.domain_size(); ++b)
            if (a != b && ord_r->le(a, b))
                value_maximal[a] = 0;
    std::vector<StateId> offenders;
    for (StateId s = 0; s < g.automaton().num_states(); ++s)
        if (value_maximal[q.value_id(s)] && !v.is_ft(s))
            offenders.push_back(s);
    if (!offenders.empty())
        return fails("a state with a maximal query value does not freely terminate",
                     std::move(offenders));
    return holds("every state whose value is maximal in the result order freely terminates");
}

PropVerdict prop_threshold_ft(const TransitionGraph& g, const Query& q) {
    if (!is_acyclic(g))
        return na("transition graph is cyclic, so it has no natural order");
    if (!is_boolean_domain(q))
        return na("query is not Boolean");
    const PartialOrder ord = natural_order(g);
    const auto ord_r = effective_result_order(q);
    if (!is_monotone_query(q, ord, *ord_r))
        return na("query is not monotone");
    const Antichain c = minimal_true_states(ord, q);
    if (c.states.empty())
        return na("query is constant false, so there is no threshold antichain");

    const std::vector<StateId> up = ft_of_threshold(g, ord, c);
    const FtVerdict v = all_ft_states(g, q);
    std::vector<StateId> offenders;
    for (StateId s : up)
        if (!v.is_ft(s))
            offenders.push_back(s);
    if (!offenders.empty())
        return fails("a state at or above the antichain does not freely terminate",
                     std::move(offenders));
    if (is_join_semilattice(ord).is_semilattice) {
        std::vector<StateId> extra;
        for (StateId s : v.ft_states())
            if (!std::binary_search(up.begin(), up.end(), s))
                extra.push_back(s);
        if (!extra.empty())
            return fails("an FT state lies outside the antichain's upward closure "
                         "despite the semilattice structure",
                         std::move(extra));
        return holds("FT set equals the antichain's upward closure (" +
                     std::to_string(up.size()) + " state(s))");
    }
    return holds("the antichain's upward closure of " + std::to_string(up.size()) +
                 " state(s) freely terminates (equality not implied without joins)");
}

PropVerdict prop_acyclic_threshold(const TransitionGraph& g, const Query& q) {
    if (!is_acyclic(g))
        return na("transition graph is cyclic, so it has no natural order");
    if (!is_boolean_domain(q))
        return na("query is not Boolean");
    const PartialOrder ord = natural_order(g);
    const auto ord_r = effective_result_order(q);
    if (!is_monotone_query(q, ord, *ord_r))
        return na("query is not monotone");
    const Antichain c = minimal_true_states(ord, q);
    const Query thresh = threshold_query(ord, c);
    std::vector<StateId> offenders;
    for (StateId s = 0; s < q.num_states(); ++s)
        if ((q.value(s) == nlohmann::json(true)) != (thresh.value(s) == nlohmann::json(true)))
            offenders.push_back(s);
    if (!offenders.empty())
        return fails("query disagrees with the threshold query of its minimal true states",
                     std::move(offenders));
    return holds("query is the threshold query of its " + std::to_string(c.states.size()) +
                 " minimal true state(s)");
}

std::optional<PropVerdict> semilattice_gate(const TransitionGraph& g) {
    if (!is_acyclic(g))
        return na("transition graph is cyclic, so it has no natural order");
    if (!is_join_semilattice(natural_order(g)).is_semilattice)
        return na("natural order is not a join-semilattice");
    return std::nullopt;
}

std::optional<PropVerdict> commutativity_gate(const TransitionGraph& g) {
    const Semiautomaton& a = g.automaton();
    if (!a.start())
        return na("automaton has no start state");
    if (reach_set(g, *a.start()).size() != a.num_states())
        return na("start state does not reach every state");
    return std::nullopt;
}

} // namespace

AnalyzeResult analyze_model(const Model& m, const AnalyzeOptions& opt) {
    const TransitionGraph g = build_graph(m.automaton);
    AnalyzeResult r;
    r.verdict = all_ft_states(g, m.query);
    r.category = classify_behavior(g, m.query, r.verdict);
    if (opt.with_algebra)
        r.algebra = algebra_report(g, m.query, opt.commutativity_bound);
    return r;
}

nlohmann::json analyze_to_json(const Model& m, const AnalyzeResult& r) {
    const Semiautomaton& a = m.automaton;
    nlohmann::json j;
    j["states"] = a.num_states();
    j["labels"] = a.num_labels();
    if (!a.provenance().empty())
        j["provenance"] = a.provenance();
    j["category"] = r.category;
    nlohmann::json fts = nlohmann::json::array();
    for (StateId s : r.verdict.ft_states())
        fts.push_back(a.display_name(s));
    j["ft_states"] = std::move(fts);
    nlohmann::json wit = nlohmann::json::object();
    for (StateId s = 0; s < a.num_states(); ++s)
        if (const auto w = r.verdict.witness_for(s))
            wit[a.display_name(s)] = a.display_name(*w);
    j["witnesses"] = std::move(wit);

    if (r.algebra) {
        const AlgebraReport& al = *r.algebra;
        nlohmann::json aj;
        aj["acyclic"] = al.acyclic;
        aj["inflationary"] =
            al.inflationary_natural ? nlohmann::json(*al.inflationary_natural) : nullptr;
        nlohmann::json ids = nlohmann::json::array();
        for (StateId s : al.identities)
            ids.push_back(a.display_name(s));
        aj["identity_states"] = std::move(ids);
        aj["all_invertible"] = al.invertible_everywhere;
        aj["join_semilattice"] =
            al.join_semilattice ? nlohmann::json(*al.join_semilattice) : nullptr;
        aj["commutative_update"] = al.commutative_update;
        aj["commutative_query"] = al.commutative_query;
        aj["commutativity_bound"] = al.commutativity_bound;
        aj["query_monotone"] = al.query_monotone ? nlohmann::json(*al.query_monotone) : nullptr;
        aj["query_antitone"] = al.query_antitone ? nlohmann::json(*al.query_antitone) : nullptr;
        if (al.ft_antichain) {
            nlohmann::json ac = nlohmann::json::array();
            for (StateId s : al.ft_antichain->states)
                ac.push_back(a.display_name(s));
            aj["ft_antichain"] = std::move(ac);
        } else {
            aj["ft_antichain"] = nullptr;
        }
        j["algebra"] = std::move(aj);
    }
    return j;
}

std::string analyze_to_text(const Model& m, const AnalyzeResult& r) {
    const Semiautomaton& a = m.automaton;
    std::ostringstream out;
    out << "model: " << (a.provenance().empty() ? "(unnamed)" : a.provenance()) << " ("
        << a.num_states() << " states, " << a.num_labels() << " labels)\n";
    out << "category: " << r.category << "\n";
    const auto fts = r.verdict.ft_states();
    out << "ft states (" << fts.size() << "):";
    for (StateId s : fts)
        out << " " << a.display_name(s);
    out << "\n";
    std::uint32_t shown = 0;
    for (StateId s = 0; s < a.num_states() && shown < 20; ++s)
        if (const auto w = r.verdict.witness_for(s)) {
            out << "  " << a.display_name(s) << " is not FT: reaches " << a.display_name(*w)
                << " with value " << m.query.value(*w).dump() << "\n";
            ++shown;
        }
    if (fts.size() + shown < a.num_states())
        out << "  (" << a.num_states() - fts.size() - shown << " more non-FT states)\n";

    if (r.algebra) {
        const AlgebraReport& al = *r.algebra;
        auto tri = [](const std::optional<bool>& v) {
            return v ? (*v ? "yes" : "no") : "n/a";
        };
        out << "algebra:\n";
        out << "  acyclic: " << (al.acyclic ? "yes" : "no") << "\n";
        out << "  inflationary (natural order): " << tri(al.inflationary_natural) << "\n";
        out << "  identity states: " << al.identities.size() << "\n";
        out << "  all invertible: " << (al.invertible_everywhere ? "yes" : "no") << "\n";
        out << "  join semilattice: " << tri(al.join_semilattice) << "\n";
        out << "  commutative update: " << (al.commutative_update ? "yes" : "no") << "\n";
        out << "  commutative query (bound " << al.commutativity_bound
            << "): " << (al.commutative_query ? "yes" : "no") << "\n";
        out << "  query monotone: " << tri(al.query_monotone) << "\n";
        out << "  query antitone: " << tri(al.query_antitone) << "\n";
        if (al.ft_antichain) {
            out << "  ft antichain:";
            for (StateId s : al.ft_antichain->states)
                out << " " << a.display_name(s);
            out << "\n";
        }
    }
    return out.str();
}

std::vector<std::string> check_prop_names() {
    return {
        "inflationary-monotone-implies-ft",
        "top-in-r-free-terminates",
        "inflationary-threshold-ft",
        "acyclic-implies-threshold",
        "semilattice-ft-same-value",
        "fts-reachable",
        "inverse-curse",
        "commutative-same-ft-value",
        "commutative-always-reachable",
        "collapsed-fixpoint",
        "minimal-ft-acyclic",
    };
}

PropVerdict run_check_prop(const Model& m, const std::string& name) {
    const TransitionGraph g = build_graph(m.automaton);
    const Query& q = m.query;

    if (name == "inflationary-monotone-implies-ft")
        return prop_inflationary_maximal(g, q);
    if (name == "top-in-r-free-terminates")
        return prop_top_in_r(g, q);
    if (name == "inflationary-threshold-ft")
        return prop_threshold_ft(g, q);
    if (name == "acyclic-implies-threshold")
        return prop_acyclic_threshold(g, q);
    if (name == "semilattice-ft-same-value") {
        if (auto gate = semilattice_gate(g))
            return *gate;
        return check_semilattice_ft_props(g, q).same_value;
    }
    if (name == "fts-reachable") {
        if (auto gate = semilattice_gate(g))
            return *gate;
        return check_semilattice_ft_props(g, q).all_reach_ft;
    }
    if (name == "inverse-curse")
        return check_inverse_curse(g, q);
    if (name == "commutative-same-ft-value") {
        if (auto gate = commutativity_gate(g))
            return *gate;
        return check_commutativity_ft_props(g, q).same_value;
    }
    if (name == "commutative-always-reachable") {
        if (auto gate = commutativity_gate(g))
            return *gate;
        return check_commutativity_ft_props(g, q).always_reachable;
    }
    if (name == "collapsed-fixpoint")
        return check_collapsed_fixpoint(g, q);
    if (name == "minimal-ft-acyclic") {
        if (!m.automaton.start())
            return na("needs a start state to certify minimality");
        const MinimizeResult mr = minimize_moore(m.automaton, q);
        if (mr.automaton.num_states() != m.automaton.num_states())
            return na("machine is not minimal (" + std::to_string(mr.automaton.num_states()) +
                      " of " + std::to_string(m.automaton.num_states()) +
                      " states after minimization); minimize it first");
        return check_minimal_ft_acyclicity(g, q);
    }

    std::string names;
    for (const std::string& n : check_prop_names())
        names += (names.empty() ? "" : ", ") + n;
    throw input_error("unknown property '" + name + "'; known: " + names);
}

std::string verdict_to_text(const PropVerdict& v, const Model& m) {
    std::ostringstream out;
    switch (v.status) {
    case PropVerdict::Status::holds: out << "holds"; break;
    case PropVerdict::Status::fails: out << "FAILS"; break;
    case PropVerdict::Status::not_applicable: out << "not applicable"; break;
    }
    if (!v.detail.empty())
        out << ": " << v.detail;
    if (!v.states.empty()) {
        out << " [";
        for (std::size_t i = 0; i < v.states.size() && i < 8; ++i)
            out << (i ? ", " : "") << m.automaton.display_name(v.states[i]);
        if (v.states.size() > 8)
            out << ", ...";
        out << "]";
    }
    return out.str();
}

} // namespace freeterm
