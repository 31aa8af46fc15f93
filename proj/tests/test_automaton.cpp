#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "freeterm/automaton.hpp"
#include "freeterm/graph.hpp"

#include "oracles.hpp"

using namespace freeterm;

namespace {

Semiautomaton tiny(std::vector<StateId> delta, std::uint32_t n, std::uint32_t labels) {
    std::vector<std::string> names;
    for (std::uint32_t l = 0; l < labels; ++l)
        names.push_back(std::string(1, static_cast<char>('a' + l)));
    return Semiautomaton(n, std::move(names), std::move(delta));
}

} // namespace

TEST_CASE("semiautomaton validates its table") {
    CHECK_THROWS_AS(Semiautomaton(0, {"a"}, {}), input_error);
    CHECK_THROWS_AS(Semiautomaton(1, {}, {}), input_error);
    CHECK_THROWS_AS(Semiautomaton(2, {"a"}, {0}), input_error);      // wrong size
    CHECK_THROWS_AS(Semiautomaton(2, {"a"}, {0, 2}), input_error);   // target range
    CHECK_THROWS_AS(Semiautomaton(2, {"a"}, {0, 1}, 2), input_error); // start range
    CHECK_THROWS_AS(Semiautomaton(2, {"a"}, {0, 1}, 0, {"x"}), input_error);

    const Semiautomaton a = tiny({1, 0}, 2, 1);
    CHECK(a.next(0, 0) == 1);
    CHECK(a.display_name(1) == "s1");
    CHECK(apply_sequence(a, 0, {0, 0, 0}) == 1);
}

TEST_CASE("partial order closes and checks antisymmetry") {
    const PartialOrder ord = PartialOrder::from_pairs(4, {{0, 1}, {1, 2}});
    CHECK(ord.le(0, 2));
    CHECK(ord.le(3, 3));
    CHECK_FALSE(ord.le(2, 0));
    CHECK_FALSE(ord.le(0, 3));
    CHECK(ord.up_set(0) == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(ord.maximal_elements() == std::vector<std::uint32_t>{2, 3});
    CHECK(ord.minimal_of({1, 2, 3}) == std::vector<std::uint32_t>{1, 3});
    CHECK(ord.is_antichain({1, 3}));
    CHECK_FALSE(ord.is_antichain({0, 2}));

    CHECK_THROWS_AS(PartialOrder::from_pairs(2, {{0, 1}, {1, 0}}), input_error);
}

TEST_CASE("random closures are reflexive transitive antisymmetric") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        const std::uint32_t n = 2 + rng() % 7;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::uint32_t k = 0; k < n; ++k) {
            // a < b keeps the closure antisymmetric by construction
            std::uint32_t a = rng() % n, b = rng() % n;
            if (a != b)
                pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
        const PartialOrder ord = PartialOrder::from_pairs(n, pairs);
        for (std::uint32_t a = 0; a < n; ++a) {
            CHECK(ord.le(a, a));
            for (std::uint32_t b = 0; b < n; ++b) {
                if (a != b && ord.le(a, b))
                    CHECK_FALSE(ord.le(b, a));
                for (std::uint32_t c = 0; c < n; ++c)
                    if (ord.le(a, b) && ord.le(b, c))
                        CHECK(ord.le(a, c));
            }
        }
    }
}

TEST_CASE("natural order matches closure reachability") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 40; ++iter) {
        const Semiautomaton a = oracle::random_acyclic(rng, 2 + rng() % 30, 1 + rng() % 3);
        const TransitionGraph g(a);
        const PartialOrder ord = PartialOrder::natural(g);
        for (StateId s = 0; s < a.num_states(); ++s) {
            const auto cl = oracle::closure(a, s);
            for (StateId t = 0; t < a.num_states(); ++t)
                CHECK(ord.le(s, t) == (cl.count(t) > 0));
        }
    }
}

TEST_CASE("natural order rejects cycles") {
    const Semiautomaton a = tiny({1, 0}, 2, 1);
    CHECK_THROWS_AS(PartialOrder::natural(TransitionGraph(a)), input_error);
}

TEST_CASE("query interning keeps first-use order and value lookups") {
    const Query q = Query::from_values({"x", "y", "x", "z"});
    CHECK(q.domain_size() == 3);
    CHECK(q.value_id(0) == q.value_id(2));
    CHECK(q.value(3) == nlohmann::json("z"));
    CHECK_FALSE(q.constant());

    const Query qb = Query::boolean({false, true});
    REQUIRE(qb.result_order());
    const std::uint32_t f = qb.value_id(0), t = qb.value_id(1);
    CHECK(qb.result_order()->le(f, t));
    CHECK_FALSE(qb.result_order()->le(t, f));

    // order pairs must name values that occur
    const std::vector<std::pair<nlohmann::json, nlohmann::json>> bad{{"x", "missing"}};
    CHECK_THROWS_AS(Query::from_values({"x", "y"}, bad), input_error);
}

TEST_CASE("scc ids agree with mutual reachability and are sinks-first") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 40; ++iter) {
        const Semiautomaton a = oracle::random_automaton(rng, 2 + rng() % 40, 1 + rng() % 3);
        const TransitionGraph g(a);
        std::vector<std::set<StateId>> cl(a.num_states());
        for (StateId s = 0; s < a.num_states(); ++s)
            cl[s] = oracle::closure(a, s);
        for (StateId s = 0; s < a.num_states(); ++s)
            for (StateId t = 0; t < a.num_states(); ++t) {
                const bool same = cl[s].count(t) && cl[t].count(s);
                CHECK((g.scc_of(s) == g.scc_of(t)) == same);
                // reachability can only decrease the component id
                if (cl[s].count(t))
                    CHECK(g.scc_of(s) >= g.scc_of(t));
            }
        for (std::uint32_t c = 0; c < g.scc_count(); ++c) {
            for (std::uint32_t d : g.scc_succ(c))
                CHECK(d < c);
            CHECK(g.scc_members(c).size() == g.scc_size(c));
        }
    }
}

TEST_CASE("reach_set equals the definitional closure") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 30; ++iter) {
        const Semiautomaton a = oracle::random_automaton(rng, 2 + rng() % 25, 1 + rng() % 4);
        const TransitionGraph g(a);
        for (StateId s = 0; s < a.num_states(); ++s) {
            const auto got = reach_set(g, s);
            const auto want = oracle::closure(a, s);
            CHECK(got.size() == want.size());
            CHECK(std::set<StateId>(got.begin(), got.end()) == want);
        }
    }
}

TEST_CASE("bounded reach_set grows level by level") {
    // 0 -> 1 -> 2 -> 3 chain
    const Semiautomaton a = tiny({1, 2, 3, 3}, 4, 1);
    const TransitionGraph g(a);
    CHECK(reach_set(g, 0, 0) == std::vector<StateId>{0});
    CHECK(reach_set(g, 0, 1) == std::vector<StateId>{0, 1});
    CHECK(reach_set(g, 0, 2) == std::vector<StateId>{0, 1, 2});
    CHECK(reaches(g, 0, 3));
    CHECK_FALSE(reaches(g, 3, 0));
}
