#include "freeterm/automaton.hpp"

#include <algorithm>
#include <queue>

#include "freeterm/graph.hpp"

namespace freeterm {

Semiautomaton::Semiautomaton(std::uint32_t num_states,
                             std::vector<std::string> label_names,
                             std::vector<StateId> delta,
                             std::optional<StateId> start,
                             std::vector<std::string> state_names,
                             std::string provenance)
    : num_states_(num_states),
      label_names_(std::move(label_names)),
      delta_(std::move(delta)),
      start_(start),
      state_names_(std::move(state_names)),
      provenance_(std::move(provenance)) {
    if (num_states_ == 0)
        throw input_error("semiautomaton needs at least one state");
    if (label_names_.empty())
        throw input_error("semiautomaton needs at least one label");
    const std::size_t expect = static_cast<std::size_t>(num_states_) * label_names_.size();
    if (delta_.size() != expect)
        throw input_error("update table has " + std::to_string(delta_.size()) +
                          " entries, expected " + std::to_string(expect));
    for (StateId t : delta_)
        if (t >= num_states_)
            throw input_error("update table targets unknown state " + std::to_string(t));
    if (start_ && *start_ >= num_states_)
        throw input_error("start state " + std::to_string(*start_) + " out of range");
    if (!state_names_.empty() && state_names_.size() != num_states_)
        throw input_error("state name list length does not match state count");
}

std::string Semiautomaton::display_name(StateId s) const {
    if (s < state_names_.size() && !state_names_[s].empty())
        return state_names_[s];
    return "s" + std::to_string(s);
}

StateId apply_sequence(const Semiautomaton& a, StateId s, const std::vector<LabelId>& seq) {
    if (s >= a.num_states())
        throw input_error("apply_sequence: state out of range");
    for (LabelId l : seq) {
        if (l >= a.num_labels())
            throw input_error("apply_sequence: label out of range");
        s = a.next(s, l);
    }
    return s;
}

namespace {

std::uint32_t word_count(std::uint32_t n) { return (n + 63) / 64; }

} // namespace

PartialOrder PartialOrder::from_pairs(
    std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& le_pairs) {
    if (n > matrix_cap)
        throw cap_exceeded("explicit partial order limited to " + std::to_string(matrix_cap) +
                           " elements, got " + std::to_string(n));
    PartialOrder po;
    po.n_ = n;
    po.words_ = word_count(n);
    po.up_.assign(static_cast<std::size_t>(n) * po.words_, 0);
    auto set_bit = [&](std::uint32_t a, std::uint32_t b) {
        po.up_[static_cast<std::size_t>(a) * po.words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
    };
    for (std::uint32_t a = 0; a < n; ++a)
        set_bit(a, a);
    for (auto [a, b] : le_pairs) {
        if (a >= n || b >= n)
            throw input_error("order pair references element out of range");
        set_bit(a, b);
    }
    // Transitive closure: repeatedly OR successor rows until a fixpoint. The
    // domain is small (matrix_cap at most), so the quadratic sweep is fine.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t a = 0; a < n; ++a) {
            std::uint64_t* ra = po.up_.data() + static_cast<std::size_t>(a) * po.words_;
            for (std::uint32_t b = 0; b < n; ++b) {
                if (b == a || !((ra[b >> 6] >> (b & 63)) & 1u))
                    continue;
                const std::uint64_t* rb = po.up_.data() + static_cast<std::size_t>(b) * po.words_;
                for (std::uint32_t w = 0; w < po.words_; ++w) {
                    std::uint64_t merged = ra[w] | rb[w];
                    if (merged != ra[w]) {
                        ra[w] = merged;
                        changed = true;
                    }
                }
            }
        }
    }
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            if (po.bit(a, b) && po.bit(b, a))
                throw input_error("order pairs violate antisymmetry between " + std::to_string(a) +
                                  " and " + std::to_string(b));
    return po;
}

PartialOrder PartialOrder::natural(const TransitionGraph& g) {
    if (g.has_proper_cycle())
        throw input_error("natural order requires an acyclic transition graph "
                          "(a cycle through two or more states exists)");
    const std::uint32_t n = g.num_states();
    PartialOrder po;
    po.n_ = n;
    if (n <= matrix_cap) {
        po.words_ = word_count(n);
        po.up_.assign(static_cast<std::size_t>(n) * po.words_, 0);
        // Acyclic, so every SCC is a singleton and ascending scc id is reverse
        // topological order: successors are finished before their predecessors.
        std::vector<StateId> state_of_scc(n);
        for (StateId s = 0; s < n; ++s)
            state_of_scc[g.scc_of(s)] = s;
        for (std::uint32_t c = 0; c < n; ++c) {
            const StateId s = state_of_scc[c];
            std::uint64_t* rs = po.up_.data() + static_cast<std::size_t>(s) * po.words_;
            rs[s >> 6] |= std::uint64_t{1} << (s & 63);
            for (LabelId l = 0; l < g.num_labels(); ++l) {
                const StateId t = g.next(s, l);
                if (t == s)
                    continue;
                const std::uint64_t* rt = po.up_.data() + static_cast<std::size_t>(t) * po.words_;
                for (std::uint32_t w = 0; w < po.words_; ++w)
                    rs[w] |= rt[w];
            }
        }
        return po;
    }
    // Large domain: keep deduplicated successor lists and answer le() by BFS.
    po.succ_off_.assign(n + 1, 0);
    std::vector<StateId> tmp;
    for (StateId s = 0; s < n; ++s) {
        tmp.clear();
        for (LabelId l = 0; l < g.num_labels(); ++l) {
            const StateId t = g.next(s, l);
            if (t != s)
                tmp.push_back(t);
        }
        std::sort(tmp.begin(), tmp.end());
        tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
        po.succ_off_[s + 1] = po.succ_off_[s] + static_cast<std::uint32_t>(tmp.size());
        po.succ_.insert(po.succ_.end(), tmp.begin(), tmp.end());
    }
    return po;
}

bool PartialOrder::le(std::uint32_t a, std::uint32_t b) const {
    if (a >= n_ || b >= n_)
        throw input_error("le: element out of range");
    if (a == b)
        return true;
    if (has_matrix())
        return bit(a, b);
    std::vector<bool> seen(n_, false);
    std::vector<std::uint32_t> stack{a};
    seen[a] = true;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (std::uint32_t i = succ_off_[u]; i < succ_off_[u + 1]; ++i) {
            const std::uint32_t v = succ_[i];
            if (v == b)
                return true;
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return false;
}

std::vector<std::uint32_t> PartialOrder::up_set(std::uint32_t a) const {
    if (a >= n_)
        throw input_error("up_set: element out of range");
    std::vector<std::uint32_t> out;
    if (has_matrix()) {
        for (std::uint32_t b = 0; b < n_; ++b)
            if (bit(a, b))
                out.push_back(b);
        return out;
    }
    std::vector<bool> seen(n_, false);
    std::vector<std::uint32_t> stack{a};
    seen[a] = true;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (std::uint32_t i = succ_off_[u]; i < succ_off_[u + 1]; ++i)
            if (!seen[succ_[i]]) {
                seen[succ_[i]] = true;
                stack.push_back(succ_[i]);
            }
    }
    for (std::uint32_t b = 0; b < n_; ++b)
        if (seen[b])
            out.push_back(b);
    return out;
}

std::vector<std::uint32_t> PartialOrder::maximal_elements() const {
    std::vector<std::uint32_t> out;
    if (has_matrix()) {
        for (std::uint32_t a = 0; a < n_; ++a) {
            bool maximal = true;
            for (std::uint32_t b = 0; b < n_ && maximal; ++b)
                if (b != a && bit(a, b))
                    maximal = false;
            if (maximal)
                out.push_back(a);
        }
        return out;
    }
    for (std::uint32_t a = 0; a < n_; ++a)
        if (succ_off_[a] == succ_off_[a + 1])
            out.push_back(a);
    return out;
}

std::vector<std::uint32_t> PartialOrder::minimal_of(const std::vector<std::uint32_t>& subset) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a : subset) {
        bool minimal = true;
        for (std::uint32_t b : subset)
            if (b != a && le(b, a)) {
                minimal = false;
                break;
            }
        if (minimal)
            out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool PartialOrder::is_antichain(const std::vector<std::uint32_t>& subset) const {
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            if (subset[i] == subset[j])
                return false;
            if (le(subset[i], subset[j]) || le(subset[j], subset[i]))
                return false;
        }
    return true;
}

Query::Query(std::vector<std::uint32_t> value_ids,
             std::vector<nlohmann::json> domain,
             std::optional<PartialOrder> result_order)
    : value_ids_(std::move(value_ids)),
      domain_(std::move(domain)),
      result_order_(std::move(result_order)) {
    if (value_ids_.empty())
        throw input_error("query needs at least one state");
    if (domain_.empty())
        throw input_error("query value domain is empty");
    for (std::uint32_t id : value_ids_)
        if (id >= domain_.size())
            throw input_error("query value id out of range");
    if (result_order_ && result_order_->size() != domain_.size())
        throw input_error("result order size does not match query value domain");
}

Query Query::from_values(
    const std::vector<nlohmann::json>& per_state,
    const std::optional<std::vector<std::pair<nlohmann::json, nlohmann::json>>>& order_pairs) {
    std::vector<nlohmann::json> domain;
    std::vector<std::uint32_t> ids;
    ids.reserve(per_state.size());
    auto intern = [&](const nlohmann::json& v) {
        for (std::uint32_t i = 0; i < domain.size(); ++i)
            if (domain[i] == v)
                return i;
        domain.push_back(v);
        return static_cast<std::uint32_t>(domain.size() - 1);
    };
    for (const auto& v : per_state)
        ids.push_back(intern(v));
    std::optional<PartialOrder> order;
    if (order_pairs) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        auto find = [&](const nlohmann::json& v) -> std::uint32_t {
            for (std::uint32_t i = 0; i < domain.size(); ++i)
                if (domain[i] == v)
                    return i;
            throw input_error("result order mentions value " + v.dump() +
                              " that no state takes");
        };
        for (const auto& [lo, hi] : *order_pairs)
            pairs.emplace_back(find(lo), find(hi));
        order = PartialOrder::from_pairs(static_cast<std::uint32_t>(domain.size()), pairs);
    }
    return Query(std::move(ids), std::move(domain), std::move(order));
}

Query Query::boolean(const std::vector<bool>& truth) {
    std::vector<nlohmann::json> per_state;
    per_state.reserve(truth.size());
    for (bool b : truth)
        per_state.emplace_back(b);
    std::vector<std::pair<nlohmann::json, nlohmann::json>> pairs{{false, true}};
    // Drop the pair if the query is constant; the order may only mention
    // values some state actually takes.
    bool has_true = false, has_false = false;
    for (bool b : truth)
        (b ? has_true : has_false) = true;
    if (!(has_true && has_false))
        return from_values(per_state, std::nullopt);
    return from_values(per_state, pairs);
}

} // namespace freeterm
