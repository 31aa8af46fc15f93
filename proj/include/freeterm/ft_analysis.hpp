#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "freeterm/graph.hpp"

namespace freeterm {

/// Per-state free-termination verdicts. A state s is freely terminating when
/// every state reachable from it carries the same query value as s itself.
/// Non-FT states get a witness: some reachable state with a different value.
struct FtVerdict {
    std::vector<std::uint8_t> ft;     // 1 per freely terminating state
    std::vector<StateId> witness;     // invalid_state for FT states

    bool is_ft(StateId s) const { return ft[s] != 0; }
    std::optional<StateId> witness_for(StateId s) const {
        return ft[s] ? std::nullopt : std::optional<StateId>(witness[s]);
    }
    /// Ascending list of the freely terminating states.
    std::vector<StateId> ft_states() const;
};

/// Definitional check for a single state: walk its closure and compare values.
/// Returns the verdict together with a witness when the state is not FT.
struct SingleFt {
    bool ft;
    std::optional<StateId> witness;
};
SingleFt is_ft_state(const TransitionGraph& g, const Query& q, StateId s);

/// All free-termination verdicts in one pass, linear in |D| + |E|:
/// condense to SCCs, throw away every SCC that mixes query values plus
/// everything that reaches one, then sweep the remaining DAG in reverse
/// topological order (an SCC is FT iff all successors are FT with its value).
FtVerdict all_ft_states(const TransitionGraph& g, const Query& q);

/// Brute force: is_ft_state for every state. Quadratic; guarded by a state cap
/// so it cannot be pointed at a large automaton by accident.
FtVerdict ft_oracle(const TransitionGraph& g, const Query& q, std::uint32_t state_cap = 4096);

/// Behavior class of a machine, by what its runs can settle into:
///   1: every state reaches an FT state and all FT states agree on one value
///   2: every state reaches an FT state but FT values differ
///   3: no FT states at all
///   4: some states reach an FT state, others never can
int classify_behavior(const TransitionGraph& g, const Query& q);
int classify_behavior(const TransitionGraph& g, const Query& q, const FtVerdict& verdict);

} // namespace freeterm
