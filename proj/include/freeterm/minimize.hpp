#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freeterm/algebra.hpp"
#include "freeterm/graph.hpp"

namespace freeterm {

/// Old-to-new state renumbering produced by a collapse or minimization step.
/// States dropped as unreachable map to invalid_state.
struct CollapseMap {
    std::vector<StateId> old_to_new;
};

struct CollapseResult {
    Semiautomaton automaton;
    Query query;
    CollapseMap map;
    StateId collapsed_into = invalid_state; // new id of the merged closure
};

/// Merge the closure of a freely terminating state into one self-looping
/// state. The closure carries a single query value, so queries are preserved;
/// rejects s when it is not FT. The merged state takes the numbering slot of
/// the closure's lowest old id.
CollapseResult collapse_closure(const Semiautomaton& a, const Query& q, StateId s);

/// collapse_closure until no FT state has a closure larger than itself,
/// always picking the lowest-index such state. In the result, a state is FT
/// exactly when all of its outgoing transitions are self-loops.
CollapseResult collapse_fixpoint(const Semiautomaton& a, const Query& q);

struct MinimizeResult {
    Semiautomaton automaton;
    Query query;
    CollapseMap map;
    std::vector<std::string> warnings;
};

/// Coarsest query-respecting partition of the reachable states, by iterated
/// refinement on (value, successor block) signatures. Needs a start state;
/// unreachable states are stripped with a warning. Blocks are numbered by
/// their lowest old member.
MinimizeResult minimize_moore(const Semiautomaton& a, const Query& q);

struct EquivalenceResult {
    bool equivalent = false;
    std::vector<LabelId> distinguishing; // shortest separating sequence when inequivalent
};

/// Do both machines answer every label sequence from their start states with
/// the same query value? Product-machine BFS; requires both starts and equal
/// label alphabets. The returned sequence, when present, is shortest.
EquivalenceResult check_equivalence(const Semiautomaton& a1, const Query& q1,
                                    const Semiautomaton& a2, const Query& q2);

/// In a collapsed machine, FT states are exactly the states whose transitions
/// are all self-loops. Meaningful after collapse_fixpoint.
PropVerdict check_collapsed_fixpoint(const TransitionGraph& g, const Query& q);

/// No FT state may lie on a cycle through two or more states. Meaningful for
/// minimized machines; the verdict carries an offending cycle when it fails.
PropVerdict check_minimal_ft_acyclicity(const TransitionGraph& g, const Query& q);

} // namespace freeterm
