#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "freeterm/errors.hpp"

namespace freeterm {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr StateId invalid_state = std::numeric_limits<StateId>::max();

class TransitionGraph; // graph.hpp

/// Finite semiautomaton (D, L, U): a dense state set, a finite label alphabet
/// and a total update function U : D x L -> D stored as a row-major table.
///
/// States are 0..num_states()-1. Labels are 0..num_labels()-1 and carry a
/// display name. The optional start state marks a designated initial state;
/// nothing in the analyses requires it except minimization and equivalence.
class Semiautomaton {
public:
    Semiautomaton(std::uint32_t num_states,
                  std::vector<std::string> label_names,
                  std::vector<StateId> delta,
                  std::optional<StateId> start = std::nullopt,
                  std::vector<std::string> state_names = {},
                  std::string provenance = {});

    std::uint32_t num_states() const { return num_states_; }
    std::uint32_t num_labels() const { return static_cast<std::uint32_t>(label_names_.size()); }

    StateId next(StateId s, LabelId l) const { return delta_[static_cast<std::size_t>(s) * num_labels() + l]; }

    const std::vector<StateId>& delta() const { return delta_; }
    const std::vector<std::string>& label_names() const { return label_names_; }
    const std::string& label_name(LabelId l) const { return label_names_[l]; }

    std::optional<StateId> start() const { return start_; }

    /// True when explicit display names were supplied.
    bool has_state_names() const { return !state_names_.empty(); }
    const std::vector<std::string>& state_names() const { return state_names_; }

    /// Display name: the stored name, or "s<i>" when none was supplied.
    std::string display_name(StateId s) const;

    /// Free-form note naming the construction this automaton came from ("fig1a",
    /// "powerset:{a,b,c}", ...). Carried through serialization untouched.
    const std::string& provenance() const { return provenance_; }
    void set_provenance(std::string p) { provenance_ = std::move(p); }

private:
    std::uint32_t num_states_;
    std::vector<std::string> label_names_;
    std::vector<StateId> delta_;
    std::optional<StateId> start_;
    std::vector<std::string> state_names_;
    std::string provenance_;
};

/// Walk a label sequence from s through the update table.
StateId apply_sequence(const Semiautomaton& a, StateId s, const std::vector<LabelId>& seq);

/// Finite partial order over a dense domain 0..n-1.
///
/// Two representations behind one interface: a closed bit-matrix of up-sets for
/// domains up to matrix_cap (le() is then O(1), which the quadratic monotonicity
/// checks rely on), and a successor-list fallback above the cap where le() does
/// an on-demand BFS.
class PartialOrder {
public:
    static constexpr std::uint32_t matrix_cap = 4096;

    /// Reflexive-transitive closure of the given le-pairs. Rejects input whose
    /// closure violates antisymmetry. Domain must fit the bit-matrix.
    static PartialOrder from_pairs(std::uint32_t n,
                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& le_pairs);

    /// Reachability order of an acyclic transition graph: a <= b iff b is
    /// reachable from a. Rejects graphs with a cycle through two or more states.
    static PartialOrder natural(const TransitionGraph& g);

    std::uint32_t size() const { return n_; }
    bool le(std::uint32_t a, std::uint32_t b) const;

    /// All b with a <= b, ascending.
    std::vector<std::uint32_t> up_set(std::uint32_t a) const;

    /// Elements with no strictly greater element, ascending.
    std::vector<std::uint32_t> maximal_elements() const;

    /// Elements of the given set that are minimal within it, ascending.
    std::vector<std::uint32_t> minimal_of(const std::vector<std::uint32_t>& subset) const;

    /// True when no two distinct elements of the set are comparable.
    bool is_antichain(const std::vector<std::uint32_t>& subset) const;

    bool has_matrix() const { return !up_.empty(); }

private:
    PartialOrder() = default;

    const std::uint64_t* row(std::uint32_t a) const { return up_.data() + static_cast<std::size_t>(a) * words_; }
    bool bit(std::uint32_t a, std::uint32_t b) const {
        return (row(a)[b >> 6] >> (b & 63)) & 1u;
    }

    std::uint32_t n_ = 0;
    std::uint32_t words_ = 0;
    std::vector<std::uint64_t> up_; // matrix mode: row a = bitset of {b : a <= b}

    // fallback mode: deduplicated direct-successor lists, CSR layout
    std::vector<std::uint32_t> succ_off_;
    std::vector<std::uint32_t> succ_;
};

/// Per-state query Q : D -> R for a finite result set R.
///
/// Result values are arbitrary JSON scalars interned into dense ids; analyses
/// only ever compare ids. An optional partial order on R supports the
/// monotone/antitone checks; it is indexed by value id.
class Query {
public:
    Query(std::vector<std::uint32_t> value_ids,
          std::vector<nlohmann::json> domain,
          std::optional<PartialOrder> result_order = std::nullopt);

    /// Intern per-state values, preserving first-use order of distinct values.
    /// order_pairs, when given, lists (lower, higher) value literals.
    static Query from_values(const std::vector<nlohmann::json>& per_state,
                             const std::optional<std::vector<std::pair<nlohmann::json, nlohmann::json>>>&
                                 order_pairs = std::nullopt);

    /// Boolean query with the order false <= true attached.
    static Query boolean(const std::vector<bool>& truth);

    std::uint32_t num_states() const { return static_cast<std::uint32_t>(value_ids_.size()); }
    std::uint32_t value_id(StateId s) const { return value_ids_[s]; }
    const nlohmann::json& value(StateId s) const { return domain_[value_ids_[s]]; }

    std::uint32_t domain_size() const { return static_cast<std::uint32_t>(domain_.size()); }
    const nlohmann::json& domain_value(std::uint32_t id) const { return domain_[id]; }
    const std::vector<nlohmann::json>& domain() const { return domain_; }

    const std::optional<PartialOrder>& result_order() const { return result_order_; }

    bool constant() const { return domain_.size() <= 1; }

private:
    std::vector<std::uint32_t> value_ids_;
    std::vector<nlohmann::json> domain_;
    std::optional<PartialOrder> result_order_;
};

} // namespace freeterm
