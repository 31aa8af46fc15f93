#include "freeterm/algebra.hpp"

#include <algorithm>
#include <deque>

namespace freeterm {

bool is_acyclic(const TransitionGraph& g) { return !g.has_proper_cycle(); }

PartialOrder natural_order(const TransitionGraph& g) { return PartialOrder::natural(g); }

bool is_inflationary(const TransitionGraph& g, const PartialOrder& order_d) {
    if (order_d.size() != g.num_states())
        throw input_error("order does not match automaton state count");
    for (StateId s = 0; s < g.num_states(); ++s)
        for (LabelId l = 0; l < g.num_labels(); ++l)
            if (!order_d.le(s, g.next(s, l)))
                return false;
    return true;
}

bool is_deflationary(const TransitionGraph& g, const PartialOrder& order_d) {
    if (order_d.size() != g.num_states())
        throw input_error("order does not match automaton state count");
    for (StateId s = 0; s < g.num_states(); ++s)
        for (LabelId l = 0; l < g.num_labels(); ++l)
            if (!order_d.le(g.next(s, l), s))
                return false;
    return true;
}

namespace {

bool monotone_impl(const Query& q, const PartialOrder& order_d, const PartialOrder& order_r,
                   bool antitone) {
    if (order_d.size() != q.num_states())
        throw input_error("state order does not match query state count");
    if (order_r.size() != q.domain_size())
        throw input_error("result order does not cover the query value domain");
    const std::uint32_t n = q.num_states();
    for (StateId s = 0; s < n; ++s)
        for (StateId t : order_d.up_set(s)) {
            const std::uint32_t a = q.value_id(s), b = q.value_id(t);
            if (antitone ? !order_r.le(b, a) : !order_r.le(a, b))
                return false;
        }
    return true;
}

} // namespace

bool is_monotone_query(const Query& q, const PartialOrder& order_d, const PartialOrder& order_r) {
    return monotone_impl(q, order_d, order_r, false);
}

bool is_antitone_query(const Query& q, const PartialOrder& order_d, const PartialOrder& order_r) {
    return monotone_impl(q, order_d, order_r, true);
}

Query threshold_query(const PartialOrder& order_d, const Antichain& c) {
    for (StateId s : c.states)
        if (s >= order_d.size())
            throw input_error("threshold element out of range");
    if (!order_d.is_antichain(c.states))
        throw input_error("threshold set is not an antichain");
    std::vector<bool> truth(order_d.size(), false);
    for (StateId lo : c.states)
        for (std::uint32_t s : order_d.up_set(lo))
            truth[s] = true;
    return Query::boolean(truth);
}

std::vector<StateId> ft_of_threshold(const TransitionGraph& g, const PartialOrder& order_d,
                                     const Antichain& c) {
    if (!is_inflationary(g, order_d))
        throw input_error("ft_of_threshold requires an inflationary automaton");
    if (!order_d.is_antichain(c.states))
        throw input_error("threshold set is not an antichain");
    std::vector<bool> in(g.num_states(), false);
    for (StateId lo : c.states)
        for (std::uint32_t s : order_d.up_set(lo))
            in[s] = true;
    std::vector<StateId> out;
    for (StateId s = 0; s < g.num_states(); ++s)
        if (in[s])
            out.push_back(s);
    return out;
}

Antichain extract_antichain(const TransitionGraph& g, const Query& q) {
    if (!is_acyclic(g))
        throw input_error("antichain extraction requires an acyclic graph");
    const FtVerdict verdict = all_ft_states(g, q);
    const std::vector<StateId> ft = verdict.ft_states();
    if (ft.empty())
        throw input_error("antichain extraction requires at least one FT state");
    const PartialOrder order = natural_order(g);
    Antichain out;
    out.states = order.minimal_of(ft);
    return out;
}

JoinResult is_join_semilattice(const PartialOrder& order_d) {
    const std::uint32_t n = order_d.size();
    JoinResult r;
    r.join.assign(static_cast<std::size_t>(n) * n, 0);
    for (std::uint32_t a = 0; a < n; ++a) {
        const std::vector<std::uint32_t> up_a = order_d.up_set(a);
        for (std::uint32_t b = a; b < n; ++b) {
            std::vector<std::uint32_t> common;
            for (std::uint32_t x : up_a)
                if (order_d.le(b, x))
                    common.push_back(x);
            std::uint32_t least = 0;
            bool found = false;
            for (std::uint32_t cand : common) {
                bool below_all = true;
                for (std::uint32_t x : common)
                    if (!order_d.le(cand, x)) {
                        below_all = false;
                        break;
                    }
                if (below_all) {
                    least = cand;
                    found = true;
                    break;
                }
            }
            if (!found) {
                r.is_semilattice = false;
                r.join.clear();
                r.counterexample = {a, b};
                return r;
            }
            r.join[static_cast<std::size_t>(a) * n + b] = least;
            r.join[static_cast<std::size_t>(b) * n + a] = least;
        }
    }
    r.is_semilattice = true;
    return r;
}

SemilatticeFtReport check_semilattice_ft_props(const TransitionGraph& g, const Query& q) {
    const PartialOrder order = natural_order(g); // rejects cyclic input
    const JoinResult jr = is_join_semilattice(order);
    if (!jr.is_semilattice)
        throw input_error("natural order is not a join-semilattice (no lub for " +
                          std::to_string(jr.counterexample->first) + ", " +
                          std::to_string(jr.counterexample->second) + ")");
    const FtVerdict verdict = all_ft_states(g, q);
    const std::vector<StateId> ft = verdict.ft_states();

    SemilatticeFtReport rep;
    if (ft.empty()) {
        rep.same_value = {PropVerdict::Status::holds, "no FT states, vacuous", {}};
        rep.all_reach_ft = {PropVerdict::Status::holds, "no FT states, vacuous", {}};
        return rep;
    }
    rep.same_value = {PropVerdict::Status::holds, "all FT states share one query value", {}};
    for (StateId s : ft)
        if (q.value_id(s) != q.value_id(ft.front())) {
            rep.same_value = {PropVerdict::Status::fails, "FT states with distinct values",
                              {ft.front(), s}};
            break;
        }

    // Reverse reachability from the FT set over the condensation.
    std::vector<std::uint8_t> can(g.scc_count(), 0);
    std::deque<std::uint32_t> queue;
    for (StateId s : ft)
        if (!can[g.scc_of(s)]) {
            can[g.scc_of(s)] = 1;
            queue.push_back(g.scc_of(s));
        }
    while (!queue.empty()) {
        const std::uint32_t c = queue.front();
        queue.pop_front();
        for (std::uint32_t p : g.scc_pred(c))
            if (!can[p]) {
                can[p] = 1;
                queue.push_back(p);
            }
    }
    rep.all_reach_ft = {PropVerdict::Status::holds, "every state reaches an FT state", {}};
    for (StateId s = 0; s < g.num_states(); ++s)
        if (!can[g.scc_of(s)]) {
            rep.all_reach_ft = {PropVerdict::Status::fails,
                                "state cannot reach any FT state", {s}};
            break;
        }
    return rep;
}

namespace {

// Bitset-per-SCC reachability over the condensation; above the cap a per-SCC
// BFS keeps results exact at the cost of time.
constexpr std::uint32_t scc_bitset_cap = 16384;

std::vector<std::uint8_t> sccs_reaching_all(const TransitionGraph& g) {
    const std::uint32_t k = g.scc_count();
    std::vector<std::uint8_t> full(k, 0);
    if (k <= scc_bitset_cap) {
        const std::uint32_t words = (k + 63) / 64;
        std::vector<std::uint64_t> rows(static_cast<std::size_t>(k) * words, 0);
        for (std::uint32_t c = 0; c < k; ++c) {
            std::uint64_t* rc = rows.data() + static_cast<std::size_t>(c) * words;
            rc[c >> 6] |= std::uint64_t{1} << (c & 63);
            for (std::uint32_t d : g.scc_succ(c)) {
                const std::uint64_t* rd = rows.data() + static_cast<std::size_t>(d) * words;
                for (std::uint32_t w = 0; w < words; ++w)
                    rc[w] |= rd[w];
            }
        }
        for (std::uint32_t c = 0; c < k; ++c) {
            const std::uint64_t* rc = rows.data() + static_cast<std::size_t>(c) * words;
            std::uint32_t count = 0;
            for (std::uint32_t w = 0; w < words; ++w)
                count += static_cast<std::uint32_t>(__builtin_popcountll(rc[w]));
            full[c] = (count == k) ? 1 : 0;
        }
        return full;
    }
    for (std::uint32_t c = 0; c < k; ++c) {
        std::vector<bool> seen(k, false);
        std::vector<std::uint32_t> stack{c};
        seen[c] = true;
        std::uint32_t count = 1;
        while (!stack.empty()) {
            const std::uint32_t u = stack.back();
            stack.pop_back();
            for (std::uint32_t d : g.scc_succ(u))
                if (!seen[d]) {
                    seen[d] = true;
                    ++count;
                    stack.push_back(d);
                }
        }
        full[c] = (count == k) ? 1 : 0;
    }
    return full;
}

} // namespace

std::vector<StateId> identity_states(const TransitionGraph& g) {
    const std::vector<std::uint8_t> full = sccs_reaching_all(g);
    std::vector<StateId> out;
    for (StateId s = 0; s < g.num_states(); ++s)
        if (full[g.scc_of(s)])
            out.push_back(s);
    return out;
}

bool all_invertible(const TransitionGraph& g) {
    const std::vector<std::uint8_t> full = sccs_reaching_all(g);
    std::vector<std::uint8_t> can(g.scc_count(), 0);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t c = 0; c < g.scc_count(); ++c)
        if (full[c]) {
            can[c] = 1;
            queue.push_back(c);
        }
    while (!queue.empty()) {
        const std::uint32_t c = queue.front();
        queue.pop_front();
        for (std::uint32_t p : g.scc_pred(c))
            if (!can[p]) {
                can[p] = 1;
                queue.push_back(p);
            }
    }
    for (std::uint32_t c = 0; c < g.scc_count(); ++c)
        if (!can[c])
            return false;
    return true;
}

PropVerdict check_inverse_curse(const TransitionGraph& g, const Query& q) {
    if (q.num_states() != g.num_states())
        throw input_error("query does not match automaton state count");
    if (q.constant())
        return {PropVerdict::Status::not_applicable, "query is constant", {}};
    if (!all_invertible(g))
        return {PropVerdict::Status::not_applicable, "not every state is invertible", {}};
    const FtVerdict verdict = all_ft_states(g, q);
    for (StateId s = 0; s < g.num_states(); ++s)
        if (verdict.ft[s])
            return {PropVerdict::Status::fails,
                    "invertible automaton with a non-constant query has an FT state", {s}};
    return {PropVerdict::Status::holds, "no state freely terminates", {}};
}

bool is_commutative_update(const Semiautomaton& a) {
    for (StateId s = 0; s < a.num_states(); ++s)
        for (LabelId x = 0; x < a.num_labels(); ++x)
            for (LabelId y = x + 1; y < a.num_labels(); ++y)
                if (a.next(a.next(s, x), y) != a.next(a.next(s, y), x))
                    return false;
    return true;
}

bool is_commutative_query(const Semiautomaton& a, const Query& q, std::uint32_t bound) {
    if (q.num_states() != a.num_states())
        throw input_error("query does not match automaton state count");
    const std::uint32_t n = a.num_states();
    const std::uint32_t nl = a.num_labels();

    // Enumerate every label sequence up to the bound as a whole-domain map
    // t[s] = s.seq; then s.x.y is just ty[tx[s]].
    std::vector<std::vector<StateId>> maps;
    std::size_t level_begin = 0;
    {
        std::vector<StateId> identity(n);
        for (StateId s = 0; s < n; ++s)
            identity[s] = s;
        maps.push_back(std::move(identity)); // the empty sequence, not checked against itself
    }
    for (std::uint32_t len = 1; len <= bound; ++len) {
        const std::size_t level_end = maps.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (LabelId l = 0; l < nl; ++l) {
                std::vector<StateId> m(n);
                for (StateId s = 0; s < n; ++s)
                    m[s] = a.next(maps[i][s], l);
                maps.push_back(std::move(m));
            }
        level_begin = level_end;
    }
    const std::size_t seqs = maps.size() - 1; // skip the empty sequence
    const std::size_t work = seqs * seqs * n;
    constexpr std::size_t budget = 200u * 1000 * 1000;
    if (work > budget)
        throw cap_exceeded("query commutativity check needs " + std::to_string(work) +
                           " comparisons, over the budget of " + std::to_string(budget));
    for (std::size_t x = 1; x < maps.size(); ++x)
        for (std::size_t y = x + 1; y < maps.size(); ++y)
            for (StateId s = 0; s < n; ++s)
                if (q.value_id(maps[y][maps[x][s]]) != q.value_id(maps[x][maps[y][s]]))
                    return false;
    return true;
}

CommutativityReport check_commutativity_ft_props(const TransitionGraph& g, const Query& q,
                                                 std::uint32_t bound) {
    const Semiautomaton& a = g.automaton();
    if (!a.start())
        throw input_error("commutativity FT properties need a start state");
    if (reach_set(g, *a.start()).size() != g.num_states())
        throw input_error("commutativity FT properties need a start state reaching every state");

    CommutativityReport rep;
    rep.bound = bound;
    rep.update_commutative = is_commutative_update(a);
    rep.query_commutative = is_commutative_query(a, q, bound);

    const FtVerdict verdict = all_ft_states(g, q);
    const std::vector<StateId> ft = verdict.ft_states();

    if (!rep.query_commutative) {
        rep.same_value = {PropVerdict::Status::not_applicable, "query not commutative at bound", {}};
    } else if (ft.empty()) {
        rep.same_value = {PropVerdict::Status::holds, "no FT states, vacuous", {}};
    } else {
        rep.same_value = {PropVerdict::Status::holds, "all FT states share one query value", {}};
        for (StateId s : ft)
            if (q.value_id(s) != q.value_id(ft.front())) {
                rep.same_value = {PropVerdict::Status::fails, "FT states with distinct values",
                                  {ft.front(), s}};
                break;
            }
    }

    if (!rep.update_commutative) {
        rep.always_reachable = {PropVerdict::Status::not_applicable, "update not commutative", {}};
    } else if (ft.empty()) {
        rep.always_reachable = {PropVerdict::Status::holds, "no FT states, vacuous", {}};
    } else {
        std::vector<std::uint8_t> can(g.scc_count(), 0);
        std::deque<std::uint32_t> queue;
        for (StateId s : ft)
            if (!can[g.scc_of(s)]) {
                can[g.scc_of(s)] = 1;
                queue.push_back(g.scc_of(s));
            }
        while (!queue.empty()) {
            const std::uint32_t c = queue.front();
            queue.pop_front();
            for (std::uint32_t p : g.scc_pred(c))
                if (!can[p]) {
                    can[p] = 1;
                    queue.push_back(p);
                }
        }
        rep.always_reachable = {PropVerdict::Status::holds, "every state reaches an FT state", {}};
        for (StateId s = 0; s < g.num_states(); ++s)
            if (!can[g.scc_of(s)]) {
                rep.always_reachable = {PropVerdict::Status::fails,
                                        "state cannot reach any FT state", {s}};
                break;
            }
    }
    return rep;
}

AlgebraReport algebra_report(const TransitionGraph& g, const Query& q,
                             std::uint32_t commutativity_bound) {
    AlgebraReport rep;
    rep.acyclic = is_acyclic(g);
    rep.identities = identity_states(g);
    rep.invertible_everywhere = all_invertible(g);
    rep.commutative_update = is_commutative_update(g.automaton());
    rep.commutativity_bound = commutativity_bound;
    rep.commutative_query = is_commutative_query(g.automaton(), q, commutativity_bound);
    if (rep.acyclic) {
        const PartialOrder order = natural_order(g);
        rep.inflationary_natural = is_inflationary(g, order);
        rep.join_semilattice = is_join_semilattice(order).is_semilattice;
        if (q.result_order()) {
            rep.query_monotone = is_monotone_query(q, order, *q.result_order());
            rep.query_antitone = is_antitone_query(q, order, *q.result_order());
        }
        const FtVerdict verdict = all_ft_states(g, q);
        if (!verdict.ft_states().empty())
            rep.ft_antichain = extract_antichain(g, q);
    }
    return rep;
}

} // namespace freeterm
