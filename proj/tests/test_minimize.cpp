#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>

#include "freeterm/ft_analysis.hpp"
#include "freeterm/minimize.hpp"
#include "freeterm/models.hpp"

#include "oracles.hpp"

using namespace freeterm;

namespace {

// Walk the collapse map: every old state's value must survive the renaming.
void check_map_preserves_values(const Semiautomaton& olda, const Query& oldq,
                                const Semiautomaton& newa, const Query& newq,
                                const CollapseMap& map) {
    REQUIRE(map.old_to_new.size() == olda.num_states());
    for (StateId s = 0; s < olda.num_states(); ++s) {
        const StateId t = map.old_to_new[s];
        if (t == invalid_state)
            continue;
        REQUIRE(t < newa.num_states());
        CHECK(newq.value(t) == oldq.value(s));
    }
}

bool all_self_loops(const Semiautomaton& a, StateId s) {
    for (LabelId l = 0; l < a.num_labels(); ++l)
        if (a.next(s, l) != s)
            return false;
    return true;
}

} // namespace

TEST_CASE("collapse_closure merges one settled region") {
    const Model m = gen_fig1('b');
    // state 4 (accept) is FT and absorbing already; collapsing it is a no-op
    const CollapseResult same = collapse_closure(m.automaton, m.query, 4);
    CHECK(same.automaton.num_states() == m.automaton.num_states());

    // grow-only set over {a,b}: state 3 = {a,b} is FT with closure {3}
    const Model gos = gen_powerset_union({"a", "b"}, [](std::uint32_t mask) {
        return std::popcount(mask) >= 2;
    });
    // state 1 = {a} is not FT ({a,b} answers differently)
    CHECK_THROWS_AS(collapse_closure(gos.automaton, gos.query, 1), input_error);

    // "contains a": state 1 = {a} is FT, closure {1, 3} collapses to one state
    const Model ca = gen_powerset_union({"a", "b"}, [](std::uint32_t mask) {
        return (mask & 1u) != 0;
    });
    const CollapseResult r = collapse_closure(ca.automaton, ca.query, 1);
    CHECK(r.automaton.num_states() == 3);
    CHECK(all_self_loops(r.automaton, r.collapsed_into));
    CHECK(r.query.value(r.collapsed_into) == nlohmann::json(true));
    check_map_preserves_values(ca.automaton, ca.query, r.automaton, r.query, r.map);
    CHECK(r.map.old_to_new[1] == r.collapsed_into);
    CHECK(r.map.old_to_new[3] == r.collapsed_into);

    const EquivalenceResult eq =
        check_equivalence(ca.automaton, ca.query, r.automaton, r.query);
    CHECK(eq.equivalent);
    CHECK(oracle::agree_on_words(ca.automaton, ca.query, r.automaton, r.query, 6));
}

TEST_CASE("collapse_fixpoint makes ft equal all-self-loops") {
    std::mt19937_64 rng(59);
    for (int iter = 0; iter < 120; ++iter) {
        const std::uint32_t n = 2 + rng() % 24;
        const Semiautomaton a = oracle::random_automaton(rng, n, 1 + rng() % 3);
        const Query q = (iter % 2) ? oracle::random_query(rng, n, 2 + rng() % 3)
                                   : oracle::random_nonconstant_bool_query(rng, n);
        const CollapseResult r = collapse_fixpoint(a, q);
        check_map_preserves_values(a, q, r.automaton, r.query, r.map);
        CHECK(check_equivalence(a, q, r.automaton, r.query).equivalent);

        const TransitionGraph g(r.automaton);
        const FtVerdict v = all_ft_states(g, r.query);
        for (StateId s = 0; s < r.automaton.num_states(); ++s)
            CHECK(v.is_ft(s) == all_self_loops(r.automaton, s));
        CHECK(check_collapsed_fixpoint(g, r.query).holds());
    }

    // pn-counter: the only FT state is the saturated pair, which collapses
    // into a self-loop sink
    const Model pn = gen_pn_counter(1, 1);
    const CollapseResult r = collapse_fixpoint(pn.automaton, pn.query);
    const TransitionGraph g(r.automaton);
    const FtVerdict v = all_ft_states(g, r.query);
    for (StateId s = 0; s < r.automaton.num_states(); ++s)
        CHECK(v.is_ft(s) == all_self_loops(r.automaton, s));
}

TEST_CASE("moore minimization reaches the signature count") {
    std::mt19937_64 rng(61);
    for (int iter = 0; iter < 120; ++iter) {
        const std::uint32_t n = 2 + rng() % 7; // small enough for word signatures
        const Semiautomaton a = oracle::random_automaton(rng, n, 1 + rng() % 2);
        const Query q = oracle::random_query(rng, n, 1 + rng() % 3);
        const MinimizeResult r = minimize_moore(a, q);
        CHECK(r.automaton.num_states() == oracle::minimal_state_count(a, q));
        CHECK(check_equivalence(a, q, r.automaton, r.query).equivalent);
        CHECK(oracle::agree_on_words(a, q, r.automaton, r.query, 5));
        check_map_preserves_values(a, q, r.automaton, r.query, r.map);

        // minimizing twice changes nothing
        const MinimizeResult again = minimize_moore(r.automaton, r.query);
        CHECK(again.automaton.num_states() == r.automaton.num_states());
    }
}

TEST_CASE("pn-counter with one replica and cap 1 is already minimal") {
    const Model pn = gen_pn_counter(1, 1);
    REQUIRE(pn.automaton.num_states() == 4);
    const MinimizeResult r = minimize_moore(pn.automaton, pn.query);
    CHECK(r.automaton.num_states() == 4);
    CHECK(r.warnings.empty());
}

TEST_CASE("unreachable states are stripped with a warning") {
    // state 2 is unreachable from start 0
    const Semiautomaton a(3, {"a"}, {1, 1, 2}, 0);
    const Query q = Query::from_values({"u", "v", "w"});
    const MinimizeResult r = minimize_moore(a, q);
    CHECK(r.automaton.num_states() == 2);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("unreachable") != std::string::npos);
    CHECK(r.map.old_to_new[2] == invalid_state);

    // no start state: nothing to minimize from
    const Semiautomaton nostart(2, {"a"}, {1, 1});
    CHECK_THROWS_AS(minimize_moore(nostart, Query::boolean({false, true})), input_error);
}

TEST_CASE("equivalence check returns a shortest separating word") {
    const Model f1a = gen_fig1('a');
    const Model f1c = gen_fig1('c');
    const EquivalenceResult eq =
        check_equivalence(f1a.automaton, f1a.query, f1c.automaton, f1c.query);
    REQUIRE_FALSE(eq.equivalent);
    // the word must actually separate the machines
    const StateId t1 = oracle::walk(f1a.automaton, *f1a.automaton.start(), eq.distinguishing);
    const StateId t2 = oracle::walk(f1c.automaton, *f1c.automaton.start(), eq.distinguishing);
    CHECK(f1a.query.value(t1) != f1c.query.value(t2));
    // and no shorter word may separate them
    for (const auto& w : oracle::words(3, eq.distinguishing.empty()
                                              ? 0
                                              : static_cast<std::uint32_t>(
                                                    eq.distinguishing.size() - 1))) {
        const StateId u1 = oracle::walk(f1a.automaton, *f1a.automaton.start(), w);
        const StateId u2 = oracle::walk(f1c.automaton, *f1c.automaton.start(), w);
        CHECK(f1a.query.value(u1) == f1c.query.value(u2));
    }

    // label alphabets must match
    const Semiautomaton other(1, {"x"}, {0}, 0);
    CHECK_THROWS_AS(check_equivalence(f1a.automaton, f1a.query, other, Query::boolean({true})),
                    input_error);
}

TEST_CASE("random machines: minimized forms are equivalent to the originals") {
    std::mt19937_64 rng(67);
    for (int iter = 0; iter < 60; ++iter) {
        const std::uint32_t n = 2 + rng() % 30;
        const Semiautomaton a = oracle::random_automaton(rng, n, 1 + rng() % 3);
        const Query q = oracle::random_query(rng, n, 2 + rng() % 4);
        const MinimizeResult r = minimize_moore(a, q);
        const EquivalenceResult eq = check_equivalence(a, q, r.automaton, r.query);
        CHECK(eq.equivalent);

        // perturbing one reachable value breaks equivalence, and the
        // separating word is genuine
        std::vector<nlohmann::json> vals;
        for (StateId s = 0; s < n; ++s)
            vals.push_back(q.value(s));
        const auto reach = oracle::closure(a, 0);
        const StateId bump = *reach.rbegin();
        vals[bump] = "poison";
        const Query q2 = Query::from_values(vals);
        const EquivalenceResult ne = check_equivalence(a, q, a, q2);
        REQUIRE_FALSE(ne.equivalent);
        const StateId t = oracle::walk(a, 0, ne.distinguishing);
        CHECK(q.value(t) != q2.value(t));
    }
}

TEST_CASE("minimal ft acyclicity flags collapsible loops") {
    // Two accepting states swapped by label b: FT but sitting on a 2-cycle,
    // which minimization merges away.
    const Semiautomaton a(3, {"a", "b"}, {/*0*/ 1, 0, /*1*/ 1, 2, /*2*/ 2, 1}, 0);
    const Query q = Query::boolean({false, true, true});
    const TransitionGraph g(a);
    const FtVerdict v = all_ft_states(g, q);
    CHECK(v.is_ft(1));
    CHECK(v.is_ft(2));
    const PropVerdict before = check_minimal_ft_acyclicity(g, q);
    CHECK(before.fails());
    CHECK(before.states.size() >= 2);

    const MinimizeResult r = minimize_moore(a, q);
    CHECK(r.automaton.num_states() == 2);
    CHECK(check_minimal_ft_acyclicity(TransitionGraph(r.automaton), r.query).holds());

    // fig1 machines are minimal already and pass directly
    for (char variant : {'a', 'b', 'c', 'd'}) {
        const Model m = gen_fig1(variant);
        CHECK(check_minimal_ft_acyclicity(TransitionGraph(m.automaton), m.query).holds());
    }
}
