#include "freeterm/graph.hpp"

#include <algorithm>
#include <queue>

namespace freeterm {

TransitionGraph::TransitionGraph(const Semiautomaton& a) : a_(a) {
    compute_sccs();
    build_condensation();
}

// Tarjan with an explicit frame stack. State spaces up to about a million
// states must not overflow a call stack, so nothing here recurses.
void TransitionGraph::compute_sccs() {
    const std::uint32_t n = num_states();
    const std::uint32_t nl = num_labels();
    constexpr std::uint32_t unvisited = 0xffffffffu;

    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<StateId> stack;
    scc_of_.assign(n, 0);
    scc_count_ = 0;

    struct Frame {
        StateId v;
        LabelId li;
    };
    std::vector<Frame> frames;
    std::uint32_t next_index = 0;

    for (StateId root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.li < nl) {
                const StateId w = next(f.v, f.li++);
                if (index[w] == unvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const StateId v = f.v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                StateId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc_of_[w] = scc_count_;
                } while (w != v);
                ++scc_count_;
            }
        }
    }

    scc_off_.assign(scc_count_ + 1, 0);
    for (StateId s = 0; s < n; ++s)
        ++scc_off_[scc_of_[s] + 1];
    for (std::uint32_t c = 0; c < scc_count_; ++c)
        scc_off_[c + 1] += scc_off_[c];
    scc_states_.resize(n);
    std::vector<std::uint32_t> fill(scc_off_.begin(), scc_off_.end() - 1);
    for (StateId s = 0; s < n; ++s)
        scc_states_[fill[scc_of_[s]]++] = s;
}

void TransitionGraph::build_condensation() {
    const std::uint32_t n = num_states();
    const std::uint32_t nl = num_labels();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (StateId s = 0; s < n; ++s) {
        const std::uint32_t cs = scc_of_[s];
        for (LabelId l = 0; l < nl; ++l) {
            const std::uint32_t ct = scc_of_[next(s, l)];
            if (cs != ct)
                edges.emplace_back(cs, ct);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    cond_succ_off_.assign(scc_count_ + 1, 0);
    cond_pred_off_.assign(scc_count_ + 1, 0);
    for (auto [u, v] : edges) {
        ++cond_succ_off_[u + 1];
        ++cond_pred_off_[v + 1];
    }
    for (std::uint32_t c = 0; c < scc_count_; ++c) {
        cond_succ_off_[c + 1] += cond_succ_off_[c];
        cond_pred_off_[c + 1] += cond_pred_off_[c];
    }
    cond_succ_.resize(edges.size());
    cond_pred_.resize(edges.size());
    std::vector<std::uint32_t> sf(cond_succ_off_.begin(), cond_succ_off_.end() - 1);
    std::vector<std::uint32_t> pf(cond_pred_off_.begin(), cond_pred_off_.end() - 1);
    for (auto [u, v] : edges)
        cond_succ_[sf[u]++] = v;
    // Second pass ordered by target keeps predecessor lists ascending.
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.second < b.second || (a.second == b.second && a.first < b.first); });
    for (auto [u, v] : edges)
        cond_pred_[pf[v]++] = u;
}

TransitionGraph build_graph(const Semiautomaton& a) { return TransitionGraph(a); }

std::vector<StateId> reach_set(const TransitionGraph& g, StateId s,
                               std::optional<std::uint32_t> max_len) {
    if (s >= g.num_states())
        throw input_error("reach_set: state out of range");
    std::vector<bool> seen(g.num_states(), false);
    std::vector<StateId> frontier{s}, next_frontier, out;
    seen[s] = true;
    std::uint32_t depth = 0;
    while (!frontier.empty() && (!max_len || depth < *max_len)) {
        next_frontier.clear();
        for (StateId u : frontier)
            for (LabelId l = 0; l < g.num_labels(); ++l) {
                const StateId v = g.next(u, l);
                if (!seen[v]) {
                    seen[v] = true;
                    next_frontier.push_back(v);
                }
            }
        frontier.swap(next_frontier);
        ++depth;
    }
    for (StateId v = 0; v < g.num_states(); ++v)
        if (seen[v])
            out.push_back(v);
    return out;
}

bool reaches(const TransitionGraph& g, StateId s, StateId t) {
    if (s >= g.num_states() || t >= g.num_states())
        throw input_error("reaches: state out of range");
    if (s == t)
        return true;
    std::vector<bool> seen(g.num_states(), false);
    std::vector<StateId> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
        const StateId u = stack.back();
        stack.pop_back();
        for (LabelId l = 0; l < g.num_labels(); ++l) {
            const StateId v = g.next(u, l);
            if (v == t)
                return true;
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return false;
}

} // namespace freeterm
