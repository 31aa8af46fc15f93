#include "freeterm/ft_analysis.hpp"

#include <algorithm>
#include <deque>

namespace freeterm {

std::vector<StateId> FtVerdict::ft_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < ft.size(); ++s)
        if (ft[s])
            out.push_back(s);
    return out;
}

SingleFt is_ft_state(const TransitionGraph& g, const Query& q, StateId s) {
    if (s >= g.num_states())
        throw input_error("is_ft_state: state out of range");
    if (q.num_states() != g.num_states())
        throw input_error("query does not match automaton state count");
    const std::uint32_t want = q.value_id(s);
    std::vector<bool> seen(g.num_states(), false);
    std::vector<StateId> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
        const StateId u = stack.back();
        stack.pop_back();
        if (q.value_id(u) != want)
            return {false, u};
        for (LabelId l = 0; l < g.num_labels(); ++l) {
            const StateId v = g.next(u, l);
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return {true, std::nullopt};
}

FtVerdict all_ft_states(const TransitionGraph& g, const Query& q) {
    if (q.num_states() != g.num_states())
        throw input_error("query does not match automaton state count");
    const std::uint32_t n = g.num_states();
    const std::uint32_t k = g.scc_count();
    constexpr std::uint32_t none = 0xffffffffu;

    // Per-SCC query value; mixed SCCs additionally remember the two
    // lowest-index states carrying distinct values, so any state that lands
    // here can be handed a witness with a value other than its own.
    std::vector<std::uint32_t> value(k);
    std::vector<std::uint8_t> mixed(k, 0);
    std::vector<StateId> rep_a(k, invalid_state), rep_b(k, invalid_state);
    for (std::uint32_t c = 0; c < k; ++c) {
        const auto members = g.scc_members(c);
        value[c] = q.value_id(members.front());
        rep_a[c] = members.front();
        for (StateId s : members)
            if (q.value_id(s) != value[c]) {
                mixed[c] = 1;
                rep_b[c] = s;
                break;
            }
    }

    // Everything that reaches a mixed SCC can never settle: mark those SCCs by
    // a reverse BFS over the condensation, remembering which mixed SCC first
    // poisoned each one.
    std::vector<std::uint32_t> poison(k, none);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t c = 0; c < k; ++c)
        if (mixed[c]) {
            poison[c] = c;
            queue.push_back(c);
        }
    while (!queue.empty()) {
        const std::uint32_t c = queue.front();
        queue.pop_front();
        for (std::uint32_t p : g.scc_pred(c))
            if (poison[p] == none) {
                poison[p] = poison[c];
                queue.push_back(p);
            }
    }

    // Reverse topological sweep over the surviving SCCs. Ascending scc id is
    // reverse topological order, so every successor verdict is already final.
    std::vector<std::uint8_t> scc_ft(k, 0);
    std::vector<StateId> scc_witness(k, invalid_state);
    for (std::uint32_t c = 0; c < k; ++c) {
        if (poison[c] != none)
            continue;
        scc_ft[c] = 1;
        for (std::uint32_t d : g.scc_succ(c)) {
            if (scc_ft[d] && value[d] == value[c])
                continue;
            scc_ft[c] = 0;
            scc_witness[c] = (value[d] != value[c]) ? g.scc_members(d).front() : scc_witness[d];
            break;
        }
    }

    FtVerdict out;
    out.ft.assign(n, 0);
    out.witness.assign(n, invalid_state);
    for (StateId s = 0; s < n; ++s) {
        const std::uint32_t c = g.scc_of(s);
        if (poison[c] != none) {
            const std::uint32_t m = poison[c];
            out.witness[s] = (q.value_id(rep_a[m]) != q.value_id(s)) ? rep_a[m] : rep_b[m];
        } else if (scc_ft[c]) {
            out.ft[s] = 1;
        } else {
            out.witness[s] = scc_witness[c];
        }
    }
    return out;
}

FtVerdict ft_oracle(const TransitionGraph& g, const Query& q, std::uint32_t state_cap) {
    if (g.num_states() > state_cap)
        throw cap_exceeded("ft_oracle capped at " + std::to_string(state_cap) +
                           " states, got " + std::to_string(g.num_states()));
    FtVerdict out;
    out.ft.assign(g.num_states(), 0);
    out.witness.assign(g.num_states(), invalid_state);
    for (StateId s = 0; s < g.num_states(); ++s) {
        const SingleFt r = is_ft_state(g, q, s);
        out.ft[s] = r.ft ? 1 : 0;
        if (!r.ft)
            out.witness[s] = *r.witness;
    }
    return out;
}

int classify_behavior(const TransitionGraph& g, const Query& q) {
    return classify_behavior(g, q, all_ft_states(g, q));
}

int classify_behavior(const TransitionGraph& g, const Query& q, const FtVerdict& verdict) {
    const std::uint32_t n = g.num_states();
    bool any_ft = false;
    for (StateId s = 0; s < n; ++s)
        if (verdict.ft[s])
            any_ft = true;
    if (!any_ft)
        return 3;

    // Which states can reach an FT state: reverse BFS over the condensation
    // seeded with the SCCs that contain one.
    std::vector<std::uint8_t> can_settle(g.scc_count(), 0);
    std::deque<std::uint32_t> queue;
    for (StateId s = 0; s < n; ++s) {
        const std::uint32_t c = g.scc_of(s);
        if (verdict.ft[s] && !can_settle[c]) {
            can_settle[c] = 1;
            queue.push_back(c);
        }
    }
    while (!queue.empty()) {
        const std::uint32_t c = queue.front();
        queue.pop_front();
        for (std::uint32_t p : g.scc_pred(c))
            if (!can_settle[p]) {
                can_settle[p] = 1;
                queue.push_back(p);
            }
    }
    for (StateId s = 0; s < n; ++s)
        if (!can_settle[g.scc_of(s)])
            return 4;

    std::uint32_t seen_value = 0;
    bool have_value = false;
    for (StateId s = 0; s < n; ++s) {
        if (!verdict.ft[s])
            continue;
        if (!have_value) {
            seen_value = q.value_id(s);
            have_value = true;
        } else if (q.value_id(s) != seen_value) {
            return 2;
        }
    }
    return 1;
}

} // namespace freeterm
