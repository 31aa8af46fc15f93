#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freeterm/ft_analysis.hpp"
#include "freeterm/graph.hpp"

namespace freeterm {

/// Pairwise-incomparable states, ascending by state id.
struct Antichain {
    std::vector<StateId> states;
};

/// Outcome of one algebraic property check. not_applicable means the
/// property's hypotheses do not hold for this input, so it claims nothing.
struct PropVerdict {
    enum class Status { holds, fails, not_applicable };
    Status status = Status::not_applicable;
    std::string detail;
    std::vector<StateId> states; // counterexample states, when failing

    bool holds() const { return status == Status::holds; }
    bool fails() const { return status == Status::fails; }
};

/// Acyclic up to self-loops: no cycle through two or more states.
bool is_acyclic(const TransitionGraph& g);

/// Reachability order of an acyclic graph: s <= t iff t in U^inf(s).
/// Rejects cyclic graphs.
PartialOrder natural_order(const TransitionGraph& g);

/// Every transition moves up (respectively down) the given order, weakly.
bool is_inflationary(const TransitionGraph& g, const PartialOrder& order_d);
bool is_deflationary(const TransitionGraph& g, const PartialOrder& order_d);

/// s <= s' implies Q(s) <= Q(s') (monotone) or Q(s) >= Q(s') (antitone).
/// order_r must cover exactly the query's value domain.
bool is_monotone_query(const Query& q, const PartialOrder& order_d, const PartialOrder& order_r);
bool is_antitone_query(const Query& q, const PartialOrder& order_d, const PartialOrder& order_r);

/// Boolean query "is the state at or above some element of c". Rejects c if it
/// is not an antichain of order_d.
Query threshold_query(const PartialOrder& order_d, const Antichain& c);

/// Upward closure of the antichain c: the threshold query's settled region for
/// an inflationary automaton. Rejects non-inflationary graphs and non-antichains.
/// Equals the exact FT set whenever joins are reachable (natural order of a
/// join-semilattice, or any order with a top); in general it is a subset.
std::vector<StateId> ft_of_threshold(const TransitionGraph& g, const PartialOrder& order_d,
                                     const Antichain& c);

/// Minimal FT states under the natural order. Requires an acyclic graph with
/// at least one FT state. Every state at or above a returned element takes
/// that element's query value.
Antichain extract_antichain(const TransitionGraph& g, const Query& q);

/// Join-semilattice test: every pair has a least upper bound. On success the
/// join table is filled (row-major n*n); on failure a witness pair is set.
struct JoinResult {
    bool is_semilattice = false;
    std::vector<std::uint32_t> join; // join[a*n+b], only when is_semilattice
    std::optional<std::pair<std::uint32_t, std::uint32_t>> counterexample;
};
JoinResult is_join_semilattice(const PartialOrder& order_d);

/// For automata whose natural order is a join-semilattice: all FT states agree
/// on one query value, and when any FT state exists every state reaches one.
/// Rejects inputs that are cyclic or not semilattices.
struct SemilatticeFtReport {
    PropVerdict same_value;
    PropVerdict all_reach_ft;
};
SemilatticeFtReport check_semilattice_ft_props(const TransitionGraph& g, const Query& q);

/// States whose closure is the whole state set, ascending.
std::vector<StateId> identity_states(const TransitionGraph& g);

/// Every state reaches an identity state.
bool all_invertible(const TransitionGraph& g);

/// When every state is invertible and the query is not constant, no state can
/// freely terminate. not_applicable when the hypotheses fail.
PropVerdict check_inverse_curse(const TransitionGraph& g, const Query& q);

/// Label functions commute pairwise: s.a.b == s.b.a for all s. Single labels
/// suffice; commutation of whole sequences follows by induction.
bool is_commutative_update(const Semiautomaton& a);

/// Q(s.x.y) == Q(s.y.x) for all label sequences x, y up to the given length.
/// Unlike updates, single labels are not enough for queries, hence the bound.
bool is_commutative_query(const Semiautomaton& a, const Query& q, std::uint32_t bound = 3);

/// FT consequences of commutativity, for automata with a start state that
/// reaches every state (rejected otherwise):
///   - commutative query: all FT states share one value
///   - commutative update: if any state is FT, every state reaches an FT state
struct CommutativityReport {
    bool update_commutative = false;
    bool query_commutative = false;
    std::uint32_t bound = 3;
    PropVerdict same_value;      // not_applicable unless query_commutative
    PropVerdict always_reachable; // not_applicable unless update_commutative
};
CommutativityReport check_commutativity_ft_props(const TransitionGraph& g, const Query& q,
                                                 std::uint32_t bound = 3);

/// Flag summary used by analyze reports.
struct AlgebraReport {
    bool acyclic = false;
    std::optional<bool> inflationary_natural; // absent when cyclic
    std::vector<StateId> identities;
    bool invertible_everywhere = false;
    std::optional<bool> join_semilattice;     // absent when cyclic
    bool commutative_update = false;
    bool commutative_query = false;
    std::uint32_t commutativity_bound = 3;
    std::optional<bool> query_monotone;       // absent without a result order
    std::optional<bool> query_antitone;
    std::optional<Antichain> ft_antichain;    // absent unless acyclic with FT states
};
AlgebraReport algebra_report(const TransitionGraph& g, const Query& q,
                             std::uint32_t commutativity_bound = 3);

} // namespace freeterm
