#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "freeterm/automaton.hpp"

namespace freeterm {

struct Model {
    Semiautomaton automaton;
    Query query;
};

/// The four reference DFAs of the fig1 family over {a, b, c}, one per
/// behavior class:
///   a: "contains an a"                                        -> class 1
///   b: "two a's, and if two b's then both a's come first"     -> class 2
///   c: "odd number of b's"                                    -> class 3
///   d: "starts with b and odd #b, or else contains two a's"   -> class 4
/// The query is acceptance (true on accepting states).
Model gen_fig1(char variant);

/// Powerset machine over a finite universe: states are subsets (state id =
/// bitmask), one label per atom, U(S, x) = S + {x}. value_of maps a mask to
/// the query value of that subset. Universe capped at 20 atoms.
Model gen_powerset_union(const std::vector<std::string>& atoms,
                         const std::function<nlohmann::json(std::uint32_t mask)>& value_of);

/// Grow-only set: the powerset machine with per-atom inserts and, when
/// with_merge is set, one merge label per possible incoming set. The query is
/// the identity (each state is its own value).
Model gen_grow_only_set(const std::vector<std::string>& atoms, bool with_merge);

/// Two-phase set: states are (inserted, deleted) mask pairs, inserts and
/// deletes per atom, query is the visible set inserted - deleted. Deleting is
/// final, which is what makes removal-heavy states settle. Universe capped at
/// 10 atoms.
Model gen_two_phase_set(const std::vector<std::string>& atoms);

/// Grow-only counter: states are per-replica count vectors, inc(j) saturates
/// at cap, and with_merge adds one elementwise-max label per vector. Query is
/// the raw sum. (cap+1)^replicas capped at one million states.
Model gen_g_counter(std::uint32_t replicas, std::uint32_t cap, bool with_merge = true);

/// Counter with increments and decrements: states are (pos, neg) vector
/// pairs, both saturating at cap; query is sum(pos) - sum(neg). Inflationary
/// in the pair order even though the query value can move both ways.
Model gen_pn_counter(std::uint32_t replicas, std::uint32_t cap);

/// Naive-evaluation chain for transitive closure over a fixed edge set: state
/// i holds the path facts after i rounds, one "step" label advances a round,
/// and the fixpoint state self-loops. Query is "path(source, target) derived"
/// or, with cycle_query, "some path(x, x) derived". At most 8 vertices.
Model gen_tc_fixpoint(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                      std::uint32_t source, std::uint32_t target, bool cycle_query = false);

/// "{a,c}" style rendering of a subset of the atom list; shared by the set
/// models and their tests.
std::string set_name(std::uint32_t mask, const std::vector<std::string>& atoms);

} // namespace freeterm
