#include "freeterm/minimize.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "freeterm/ft_analysis.hpp"

namespace freeterm {

CollapseResult collapse_closure(const Semiautomaton& a, const Query& q, StateId s) {
    if (s >= a.num_states())
        throw input_error("collapse_closure: state out of range");
    const TransitionGraph g(a);
    const SingleFt ftr = is_ft_state(g, q, s);
    if (!ftr.ft)
        throw input_error("collapse_closure: state " + std::to_string(s) +
                          " does not freely terminate (witness " +
                          std::to_string(*ftr.witness) + ")");
    const std::vector<StateId> closure = reach_set(g, s);
    std::vector<bool> in_closure(a.num_states(), false);
    for (StateId u : closure)
        in_closure[u] = true;

    CollapseMap map;
    map.old_to_new.assign(a.num_states(), invalid_state);
    StateId next_id = 0;
    StateId merged = invalid_state;
    for (StateId u = 0; u < a.num_states(); ++u) {
        if (in_closure[u]) {
            if (merged == invalid_state)
                merged = next_id++;
            map.old_to_new[u] = merged;
        } else {
            map.old_to_new[u] = next_id++;
        }
    }

    const std::uint32_t new_n = next_id;
    std::vector<StateId> delta(static_cast<std::size_t>(new_n) * a.num_labels());
    std::vector<nlohmann::json> values(new_n);
    std::vector<std::string> names(a.has_state_names() ? new_n : 0);
    for (StateId u = 0; u < a.num_states(); ++u) {
        const StateId nu = map.old_to_new[u];
        if (nu == merged && u != s && in_closure[u])
            continue; // the closure row is written once, from s
        const StateId src = (nu == merged) ? s : u;
        for (LabelId l = 0; l < a.num_labels(); ++l) {
            const StateId t = a.next(src, l);
            // A closure is transition-closed, so edges out of it stay inside
            // and the merged state self-loops on every label.
            delta[static_cast<std::size_t>(nu) * a.num_labels() + l] =
                (nu == merged) ? merged : map.old_to_new[t];
        }
        values[nu] = q.value(src);
        if (!names.empty())
            names[nu] = (nu == merged) ? a.display_name(s) : a.state_names()[u];
    }
    std::optional<StateId> start;
    if (a.start())
        start = map.old_to_new[*a.start()];

    CollapseResult out{
        Semiautomaton(new_n, a.label_names(), std::move(delta), start, std::move(names),
                      a.provenance()),
        Query::from_values(values), map, merged};
    return out;
}

CollapseResult collapse_fixpoint(const Semiautomaton& a, const Query& q) {
    CollapseResult acc{a, q, CollapseMap{}, invalid_state};
    acc.map.old_to_new.resize(a.num_states());
    for (StateId s = 0; s < a.num_states(); ++s)
        acc.map.old_to_new[s] = s;

    for (;;) {
        const TransitionGraph g(acc.automaton);
        const FtVerdict verdict = all_ft_states(g, acc.query);
        StateId pick = invalid_state;
        for (StateId s = 0; s < g.num_states() && pick == invalid_state; ++s) {
            if (!verdict.ft[s])
                continue;
            bool self_only = true;
            for (LabelId l = 0; l < g.num_labels() && self_only; ++l)
                self_only = g.next(s, l) == s;
            if (!self_only)
                pick = s;
        }
        if (pick == invalid_state)
            return acc;
        CollapseResult step = collapse_closure(acc.automaton, acc.query, pick);
        for (StateId s = 0; s < a.num_states(); ++s)
            if (acc.map.old_to_new[s] != invalid_state)
                acc.map.old_to_new[s] = step.map.old_to_new[acc.map.old_to_new[s]];
        acc.automaton = std::move(step.automaton);
        acc.query = std::move(step.query);
        acc.collapsed_into = step.collapsed_into;
    }
}

MinimizeResult minimize_moore(const Semiautomaton& a, const Query& q) {
    if (!a.start())
        throw input_error("minimization needs a start state");
    if (q.num_states() != a.num_states())
        throw input_error("query does not match automaton state count");
    const TransitionGraph g(a);
    const std::vector<StateId> reachable = reach_set(g, *a.start());

    std::vector<std::string> warnings;
    if (reachable.size() < a.num_states())
        warnings.push_back("stripped " + std::to_string(a.num_states() - reachable.size()) +
                           " unreachable states");

    const std::uint32_t nl = a.num_labels();
    const std::uint32_t m = static_cast<std::uint32_t>(reachable.size());
    std::vector<std::uint32_t> idx_of(a.num_states(), 0xffffffffu);
    for (std::uint32_t i = 0; i < m; ++i)
        idx_of[reachable[i]] = i;

    // Refine blocks on (block, successor blocks per label) signatures until
    // stable. Blocks are numbered by first occurrence in ascending old-state
    // order, which makes the block order follow each block's lowest member.
    std::vector<std::uint32_t> block(m);
    {
        std::map<std::uint32_t, std::uint32_t> first_seen;
        for (std::uint32_t i = 0; i < m; ++i) {
            const std::uint32_t v = q.value_id(reachable[i]);
            auto [it, inserted] = first_seen.emplace(v, static_cast<std::uint32_t>(first_seen.size()));
            block[i] = it->second;
        }
    }
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> sig_block;
        std::vector<std::uint32_t> next_block(m);
        std::vector<std::uint32_t> sig(nl + 1);
        for (std::uint32_t i = 0; i < m; ++i) {
            sig[0] = block[i];
            for (LabelId l = 0; l < nl; ++l)
                sig[l + 1] = block[idx_of[a.next(reachable[i], l)]];
            auto [it, inserted] = sig_block.emplace(sig, static_cast<std::uint32_t>(sig_block.size()));
            next_block[i] = it->second;
        }
        // Renumber by first occurrence so block ids stay ordered by lowest member.
        std::vector<std::uint32_t> renumber(sig_block.size(), 0xffffffffu);
        std::uint32_t fresh = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
            if (renumber[next_block[i]] == 0xffffffffu)
                renumber[next_block[i]] = fresh++;
            next_block[i] = renumber[next_block[i]];
        }
        const bool stable = std::equal(block.begin(), block.end(), next_block.begin());
        block.swap(next_block);
        if (stable)
            break;
    }

    const std::uint32_t k = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<StateId> rep(k, invalid_state);
    for (std::uint32_t i = 0; i < m; ++i)
        if (rep[block[i]] == invalid_state)
            rep[block[i]] = reachable[i];

    std::vector<StateId> delta(static_cast<std::size_t>(k) * nl);
    std::vector<nlohmann::json> values(k);
    std::vector<std::string> names(a.has_state_names() ? k : 0);
    for (std::uint32_t b = 0; b < k; ++b) {
        const StateId r = rep[b];
        for (LabelId l = 0; l < nl; ++l)
            delta[static_cast<std::size_t>(b) * nl + l] = block[idx_of[a.next(r, l)]];
        values[b] = q.value(r);
        if (!names.empty())
            names[b] = a.state_names()[r];
    }
    CollapseMap map;
    map.old_to_new.assign(a.num_states(), invalid_state);
    for (std::uint32_t i = 0; i < m; ++i)
        map.old_to_new[reachable[i]] = block[i];
    return MinimizeResult{Semiautomaton(k, a.label_names(), std::move(delta),
                                        block[idx_of[*a.start()]], std::move(names),
                                        a.provenance()),
                          Query::from_values(values), std::move(map), std::move(warnings)};
}

EquivalenceResult check_equivalence(const Semiautomaton& a1, const Query& q1,
                                    const Semiautomaton& a2, const Query& q2) {
    if (!a1.start() || !a2.start())
        throw input_error("equivalence needs start states on both machines");
    if (a1.label_names() != a2.label_names())
        throw input_error("equivalence needs identical label alphabets");
    if (q1.num_states() != a1.num_states() || q2.num_states() != a2.num_states())
        throw input_error("query does not match automaton state count");

    const std::uint64_t n2 = a2.num_states();
    const std::uint64_t total = static_cast<std::uint64_t>(a1.num_states()) * n2;
    constexpr std::uint64_t pair_cap = 64u * 1024 * 1024;
    if (total > pair_cap)
        throw cap_exceeded("product machine with " + std::to_string(total) + " pairs");

    constexpr std::uint64_t unseen = ~std::uint64_t{0};
    std::vector<std::uint64_t> parent(total, unseen);
    std::vector<LabelId> via(total, 0);
    std::deque<std::uint64_t> queue;
    const std::uint64_t root = static_cast<std::uint64_t>(*a1.start()) * n2 + *a2.start();
    parent[root] = root;
    queue.push_back(root);

    auto rebuild = [&](std::uint64_t p) {
        std::vector<LabelId> seq;
        while (parent[p] != p) {
            seq.push_back(via[p]);
            p = parent[p];
        }
        std::reverse(seq.begin(), seq.end());
        return seq;
    };

    while (!queue.empty()) {
        const std::uint64_t p = queue.front();
        queue.pop_front();
        const StateId u = static_cast<StateId>(p / n2);
        const StateId v = static_cast<StateId>(p % n2);
        if (q1.value(u) != q2.value(v))
            return {false, rebuild(p)};
        for (LabelId l = 0; l < a1.num_labels(); ++l) {
            const std::uint64_t np =
                static_cast<std::uint64_t>(a1.next(u, l)) * n2 + a2.next(v, l);
            if (parent[np] == unseen) {
                parent[np] = p;
                via[np] = l;
                queue.push_back(np);
            }
        }
    }
    return {true, {}};
}

PropVerdict check_collapsed_fixpoint(const TransitionGraph& g, const Query& q) {
    const FtVerdict verdict = all_ft_states(g, q);
    for (StateId s = 0; s < g.num_states(); ++s) {
        bool self_only = true;
        for (LabelId l = 0; l < g.num_labels() && self_only; ++l)
            self_only = g.next(s, l) == s;
        if (self_only != (verdict.ft[s] != 0))
            return {PropVerdict::Status::fails,
                    self_only ? "self-looping state is not FT"
                              : "FT state still has an outgoing transition",
                    {s}};
    }
    return {PropVerdict::Status::holds, "FT states are exactly the self-loop-only states", {}};
}

PropVerdict check_minimal_ft_acyclicity(const TransitionGraph& g, const Query& q) {
    const FtVerdict verdict = all_ft_states(g, q);
    for (StateId s = 0; s < g.num_states(); ++s) {
        if (!verdict.ft[s] || g.scc_size(g.scc_of(s)) < 2)
            continue;
        // Recover a cycle through s inside its SCC by BFS back to s.
        const std::uint32_t scc = g.scc_of(s);
        std::vector<StateId> parent(g.num_states(), invalid_state);
        std::deque<StateId> queue{s};
        std::vector<StateId> cycle;
        while (!queue.empty() && cycle.empty()) {
            const StateId u = queue.front();
            queue.pop_front();
            for (LabelId l = 0; l < g.num_labels(); ++l) {
                const StateId v = g.next(u, l);
                if (v == u || g.scc_of(v) != scc)
                    continue;
                if (v == s) {
                    cycle.push_back(s);
                    for (StateId w = u; w != s && w != invalid_state; w = parent[w])
                        cycle.push_back(w);
                    cycle.push_back(s);
                    std::reverse(cycle.begin(), cycle.end());
                    break;
                }
                if (parent[v] == invalid_state) {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        return {PropVerdict::Status::fails, "FT state lies on a cycle", cycle};
    }
    return {PropVerdict::Status::holds, "no FT state lies on a proper cycle", {}};
}

} // namespace freeterm
