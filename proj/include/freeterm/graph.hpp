#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freeterm/automaton.hpp"

namespace freeterm {

/// Transition graph of a semiautomaton together with its SCC decomposition and
/// condensation. Immutable after construction; safe to share across threads.
///
/// The edge multiset is exactly {(s, l, U(s,l))}, so |E| = |D| * |L| by
/// construction. SCC ids are assigned in reverse topological order: every
/// condensation edge goes from a higher scc id to a lower one, so iterating
/// scc ids ascending visits successors before predecessors.
class TransitionGraph {
public:
    explicit TransitionGraph(const Semiautomaton& a);

    const Semiautomaton& automaton() const { return a_; }
    std::uint32_t num_states() const { return a_.num_states(); }
    std::uint32_t num_labels() const { return a_.num_labels(); }

    StateId next(StateId s, LabelId l) const { return a_.next(s, l); }

    std::uint32_t scc_of(StateId s) const { return scc_of_[s]; }
    std::uint32_t scc_count() const { return scc_count_; }
    std::uint32_t scc_size(std::uint32_t c) const { return scc_off_[c + 1] - scc_off_[c]; }

    /// Members of an SCC, ascending by state id.
    std::span<const StateId> scc_members(std::uint32_t c) const {
        return {scc_states_.data() + scc_off_[c], scc_states_.data() + scc_off_[c + 1]};
    }

    /// Distinct condensation successors (self excluded), ascending.
    std::span<const std::uint32_t> scc_succ(std::uint32_t c) const {
        return {cond_succ_.data() + cond_succ_off_[c], cond_succ_.data() + cond_succ_off_[c + 1]};
    }

    /// Distinct condensation predecessors (self excluded), ascending.
    std::span<const std::uint32_t> scc_pred(std::uint32_t c) const {
        return {cond_pred_.data() + cond_pred_off_[c], cond_pred_.data() + cond_pred_off_[c + 1]};
    }

    /// True when some SCC holds two or more states, i.e. the graph has a cycle
    /// that is not a self-loop.
    bool has_proper_cycle() const { return scc_count_ != num_states(); }

private:
    void compute_sccs();
    void build_condensation();

    Semiautomaton a_;
    std::vector<std::uint32_t> scc_of_;
    std::uint32_t scc_count_ = 0;
    std::vector<std::uint32_t> scc_off_;   // CSR over scc_states_
    std::vector<StateId> scc_states_;
    std::vector<std::uint32_t> cond_succ_off_, cond_succ_;
    std::vector<std::uint32_t> cond_pred_off_, cond_pred_;
};

TransitionGraph build_graph(const Semiautomaton& a);

/// States reachable from s by at most max_len transitions (all of them when
/// max_len is absent), ascending. Includes s itself.
std::vector<StateId> reach_set(const TransitionGraph& g, StateId s,
                               std::optional<std::uint32_t> max_len = std::nullopt);

/// True iff t is reachable from s (zero or more transitions).
bool reaches(const TransitionGraph& g, StateId s, StateId t);

} // namespace freeterm
