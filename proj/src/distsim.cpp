#include "freeterm/distsim.hpp"

#include <algorithm>
#include <cassert>
#include <random>

#include "freeterm/ft_analysis.hpp"
#include "freeterm/graph.hpp"
#include "freeterm/models.hpp"

namespace freeterm {

nlohmann::json value_to_json(const Value& v) {
    if (std::holds_alternative<std::int64_t>(v))
        return std::get<std::int64_t>(v);
    return std::get<std::string>(v);
}

Value value_from_json(const nlohmann::json& j) {
    if (j.is_number_integer())
        return j.get<std::int64_t>();
    if (j.is_string())
        return j.get<std::string>();
    throw input_error("fact constants must be integers or strings, got " + j.dump());
}

std::string value_to_string(const Value& v) {
    if (std::holds_alternative<std::int64_t>(v))
        return std::to_string(std::get<std::int64_t>(v));
    return std::get<std::string>(v);
}

std::string Fact::to_string() const {
    std::string out = rel + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ",";
        out += value_to_string(args[i]);
    }
    out += ")";
    return out;
}

nlohmann::json fact_to_json(const Fact& f) {
    nlohmann::json tuple = nlohmann::json::array();
    for (const Value& v : f.args)
        tuple.push_back(value_to_json(v));
    return nlohmann::json{{"rel", f.rel}, {"tuple", tuple}};
}

Fact fact_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rel") || !j.contains("tuple"))
        throw input_error("fact needs rel and tuple fields: " + j.dump());
    Fact f;
    f.rel = j.at("rel").get<std::string>();
    for (const auto& a : j.at("tuple"))
        f.args.push_back(value_from_json(a));
    return f;
}

nlohmann::json instance_to_json(const Instance& i) {
    nlohmann::json out = nlohmann::json::array();
    for (const Fact& f : i)
        out.push_back(fact_to_json(f));
    return out;
}

Instance instance_from_json(const nlohmann::json& j) {
    if (!j.is_array())
        throw input_error("instance must be an array of facts");
    Instance out;
    for (const auto& f : j)
        out.insert(fact_from_json(f));
    return out;
}

Network Network::make(std::uint32_t nodes,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    if (nodes == 0)
        throw input_error("network needs at least one node");
    Network net;
    net.nodes = nodes;
    net.adjacency.assign(nodes, {});
    for (auto [u, v] : edges) {
        if (u >= nodes || v >= nodes)
            throw input_error("network edge references unknown node");
        if (u == v)
            throw input_error("network self-edges are not allowed");
        net.adjacency[u].push_back(v);
        net.adjacency[v].push_back(u);
    }
    for (auto& a : net.adjacency) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    net.edges = std::move(edges);
    // Connectivity: a partitioned network can never flood to quiescence.
    std::vector<bool> seen(nodes, false);
    std::vector<std::uint32_t> stack{0};
    seen[0] = true;
    std::uint32_t count = 1;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (std::uint32_t v : net.adjacency[u])
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                stack.push_back(v);
            }
    }
    if (count != nodes)
        throw input_error("network is not connected");
    return net;
}

FactUniverse make_universe(std::vector<Fact> facts) {
    std::sort(facts.begin(), facts.end());
    const auto dup = std::unique(facts.begin(), facts.end());
    if (dup != facts.end())
        throw input_error("universe has duplicate facts");
    if (facts.empty())
        throw input_error("universe must not be empty");
    return FactUniverse{std::move(facts)};
}

std::uint32_t FactUniverse::index_of(const Fact& f) const {
    const auto it = std::lower_bound(facts.begin(), facts.end(), f);
    if (it == facts.end() || *it != f)
        throw input_error("fact " + f.to_string() +
                          " is outside the supplied universe; extend the domain bound");
    return static_cast<std::uint32_t>(it - facts.begin());
}

std::uint32_t FactUniverse::mask_of(const Instance& i) const {
    std::uint32_t mask = 0;
    for (const Fact& f : i)
        mask |= 1u << index_of(f);
    return mask;
}

Instance FactUniverse::instance_of(std::uint32_t mask) const {
    Instance out;
    for (std::uint32_t i = 0; i < facts.size(); ++i)
        if (mask & (1u << i))
            out.insert(facts[i]);
    return out;
}

std::set<Value> adom(const Instance& i) {
    std::set<Value> out;
    for (const Fact& f : i)
        out.insert(f.args.begin(), f.args.end());
    return out;
}

std::vector<std::uint8_t> ft_table(const FactUniverse& u, const BoolQuery& query) {
    std::vector<std::string> atoms;
    atoms.reserve(u.size());
    for (const Fact& f : u.facts)
        atoms.push_back(f.to_string());
    const Model m = gen_powerset_union(
        atoms, [&](std::uint32_t mask) { return nlohmann::json(query(u.instance_of(mask))); });
    const TransitionGraph g(m.automaton);
    const FtVerdict verdict = all_ft_states(g, m.query);
    return verdict.ft;
}

ReadyPolicy ft_ready_policy(const FactUniverse& u, const BoolQuery& query) {
    auto table = ft_table(u, query);
    return [table = std::move(table), u](const Instance& s) { return table[u.mask_of(s)] != 0; };
}

namespace {

nlohmann::json event_to_json(const TraceEvent& e) {
    nlohmann::json j{{"step", e.step}, {"kind", e.kind}, {"node", e.node}};
    if (e.peer)
        j["peer"] = *e.peer;
    if (e.fact)
        j["fact"] = fact_to_json(*e.fact);
    if (e.tuple) {
        nlohmann::json t = nlohmann::json::array();
        for (const Value& v : *e.tuple)
            t.push_back(value_to_json(v));
        j["tuple"] = t;
    }
    return j;
}

// Shared flooding machinery: states, buffers, send accounting, the random
// interleaving phase and the fair/complete drain. Ready-firing differs per
// run flavor and is supplied as the on_change hook, invoked once per node at
// the start and after every state change.
struct FloodEngine {
    const Network& net;
    RunSchedule sched;
    std::mt19937_64 rng;

    std::vector<Instance> state;
    std::vector<std::map<Fact, std::uint32_t>> buf;
    std::map<std::tuple<Fact, std::uint32_t, std::uint32_t>, std::uint32_t> sent;

    std::vector<TraceEvent> events;
    std::uint32_t step = 0;
    std::uint32_t last_change = 0;

    std::function<void(std::uint32_t)> on_change = [](std::uint32_t) {};
    std::function<bool(const Fact&)> floodable = [](const Fact&) { return true; };

    FloodEngine(const Network& n, std::vector<Instance> initial, const RunSchedule& s)
        : net(n), sched(s), rng(s.seed), state(std::move(initial)), buf(n.nodes) {
        if (state.size() != net.nodes)
            throw input_error("need exactly one starting instance per node");
    }

    void emit(TraceEvent e) {
        e.step = step;
        events.push_back(std::move(e));
    }

    void send(std::uint32_t v, const Fact& f, std::uint32_t u) {
        ++step;
        ++sent[{f, v, u}];
        ++buf[u][f];
        emit({0, "produce", v, u, f, std::nullopt});
    }

    void consume(std::uint32_t v, const Fact& f) {
        ++step;
        auto it = buf[v].find(f);
        if (--it->second == 0)
            buf[v].erase(it);
        emit({0, "consume", v, std::nullopt, f, std::nullopt});
        if (state[v].insert(f).second) {
            last_change = step;
            on_change(v);
        }
    }

    std::uint32_t sent_count(const Fact& f, std::uint32_t v, std::uint32_t u) const {
        const auto it = sent.find({f, v, u});
        return it == sent.end() ? 0 : it->second;
    }

    struct Action {
        bool is_send;
        std::uint32_t node;
        std::uint32_t peer;
        Fact fact;
    };

    void random_phase() {
        std::vector<Action> acts;
        for (std::uint32_t n = 0; n < sched.max_steps; ++n) {
            acts.clear();
            for (std::uint32_t v = 0; v < net.nodes; ++v) {
                for (const Fact& f : state[v])
                    if (floodable(f))
                        for (std::uint32_t u : net.adjacency[v])
                            if (sent_count(f, v, u) < sched.resend_cap)
                                acts.push_back({true, v, u, f});
                for (const auto& [f, cnt] : buf[v])
                    acts.push_back({false, v, 0, f});
            }
            if (acts.empty())
                return;
            const Action& a = acts[rng() % acts.size()];
            if (a.is_send)
                send(a.node, a.fact, a.peer);
            else
                consume(a.node, a.fact);
        }
    }

    void drain() {
        bool progress = true;
        while (progress) {
            progress = false;
            if (sched.complete)
                for (std::uint32_t v = 0; v < net.nodes; ++v)
                    for (const Fact& f : state[v]) {
                        if (!floodable(f))
                            continue;
                        for (std::uint32_t u : net.adjacency[v])
                            if (sent_count(f, v, u) == 0) {
                                send(v, f, u);
                                progress = true;
                            }
                    }
            if (sched.fair)
                for (std::uint32_t v = 0; v < net.nodes; ++v)
                    while (!buf[v].empty()) {
                        consume(v, buf[v].begin()->first);
                        progress = true;
                    }
        }
    }

    void initial_sweep() {
        for (std::uint32_t v = 0; v < net.nodes; ++v)
            on_change(v);
    }
};

} // namespace

nlohmann::json RunTrace::to_json() const {
    nlohmann::json ev = nlohmann::json::array();
    for (const TraceEvent& e : events)
        ev.push_back(event_to_json(e));
    nlohmann::json states = nlohmann::json::array();
    for (const Instance& s : final_states)
        states.push_back(instance_to_json(s));
    nlohmann::json ready = nlohmann::json::array();
    for (std::uint8_t r : final_ready)
        ready.push_back(r != 0);
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& o : outputs)
        outs.push_back(o);
    return nlohmann::json{{"seed", seed},
                          {"quiescence_step", quiescence_step},
                          {"events", ev},
                          {"final", {{"ready", ready}, {"states", states}, {"outputs", outs}}}};
}

RunTrace run(const Network& net, const std::vector<Instance>& partitions,
             const BoolQuery& query, const ReadyPolicy& ready, const RunSchedule& sched) {
    FloodEngine eng(net, partitions, sched);
    std::vector<std::uint8_t> fired(net.nodes, 0);
    std::vector<nlohmann::json> outputs(net.nodes, nullptr);
    eng.on_change = [&](std::uint32_t v) {
        if (!fired[v] && ready(eng.state[v])) {
            fired[v] = 1;
            outputs[v] = query(eng.state[v]);
            eng.emit({0, "ready", v, std::nullopt, std::nullopt, std::nullopt});
        }
    };
    eng.initial_sweep();
    eng.random_phase();
    eng.drain();

    RunTrace trace;
    trace.seed = sched.seed;
    trace.events = std::move(eng.events);
    trace.quiescence_step = eng.last_change;
    trace.final_states = std::move(eng.state);
    trace.final_ready = std::move(fired);
    trace.outputs = std::move(outputs);
    return trace;
}

CfCheckResult check_cf_correct(const Network& net, const DistQuery& query, const Instance& input,
                               const FactUniverse& u, std::uint32_t trials,
                               std::uint64_t base_seed) {
    const std::vector<std::uint8_t> table = ft_table(u, query.eval);
    CfCheckResult res;
    res.input_ft = table[u.mask_of(input)] != 0;
    res.input_value = query.eval(input);
    const ReadyPolicy policy = [&table, &u](const Instance& s) { return table[u.mask_of(s)] != 0; };

    for (std::uint32_t t = 0; t < trials; ++t) {
        RunSchedule sched;
        sched.seed = base_seed + t;
        std::mt19937_64 part_rng(sched.seed ^ 0x9e3779b97f4a7c15ull);
        std::vector<Instance> parts(net.nodes);
        for (const Fact& f : input)
            parts[part_rng() % net.nodes].insert(f);
        const RunTrace trace = run(net, parts, query.eval, policy, sched);
        ++res.runs;

        bool bad = false;
        if (res.input_ft) {
            for (std::uint32_t v = 0; v < net.nodes; ++v) {
                if (!trace.final_ready[v]) {
                    res.notes.push_back("seed " + std::to_string(sched.seed) + ": node " +
                                        std::to_string(v) + " never became ready on an FT input");
                    bad = true;
                } else if (trace.outputs[v] != nlohmann::json(res.input_value)) {
                    res.notes.push_back("seed " + std::to_string(sched.seed) + ": node " +
                                        std::to_string(v) + " fired ready with the wrong value");
                    bad = true;
                }
                if (trace.final_states[v] != input) {
                    res.notes.push_back("seed " + std::to_string(sched.seed) + ": node " +
                                        std::to_string(v) + " did not quiesce at the input");
                    bad = true;
                }
            }
        } else {
            for (std::uint32_t v = 0; v < net.nodes; ++v)
                if (trace.final_ready[v]) {
                    res.notes.push_back("seed " + std::to_string(sched.seed) + ": node " +
                                        std::to_string(v) + " fired ready on a non-FT input");
                    bad = true;
                }
        }
        if (bad)
            ++res.discrepancies;
    }
    return res;
}

PerTupleTrace per_tuple_ready_run(const Network& net, const std::vector<Instance>& partitions,
                                  const SetQuery& query, const std::vector<Tuple>& candidates,
                                  const FactUniverse& u, const RunSchedule& sched) {
    // One membership FT table per candidate output tuple, over the same
    // universe. Membership of t is itself a Boolean query.
    std::vector<std::vector<std::uint8_t>> tables;
    tables.reserve(candidates.size());
    for (const Tuple& t : candidates)
        tables.push_back(ft_table(
            u, [&query, &t](const Instance& s) { return query(s).count(t) > 0; }));

    FloodEngine eng(net, partitions, sched);
    std::vector<std::vector<std::uint8_t>> fired(net.nodes,
                                                 std::vector<std::uint8_t>(candidates.size(), 0));
    std::vector<std::vector<std::uint8_t>> member(net.nodes,
                                                  std::vector<std::uint8_t>(candidates.size(), 0));
    eng.on_change = [&](std::uint32_t v) {
        const std::uint32_t mask = u.mask_of(eng.state[v]);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (fired[v][c] || !tables[c][mask])
                continue;
            fired[v][c] = 1;
            member[v][c] = query(eng.state[v]).count(candidates[c]) ? 1 : 0;
            eng.emit({0, "ready-tuple", v, std::nullopt, std::nullopt, candidates[c]});
        }
    };
    eng.initial_sweep();
    eng.random_phase();
    eng.drain();

    PerTupleTrace out;
    out.base.seed = sched.seed;
    out.base.events = std::move(eng.events);
    out.base.quiescence_step = eng.last_change;
    out.base.final_states = std::move(eng.state);
    out.base.final_ready.assign(net.nodes, 0);
    for (std::uint32_t v = 0; v < net.nodes; ++v) {
        bool all = true;
        for (std::uint8_t f : fired[v])
            all = all && f;
        out.base.final_ready[v] = all ? 1 : 0;
        out.base.outputs.push_back(nullptr);
    }
    out.candidates = candidates;
    out.tuple_ready = std::move(fired);
    out.tuple_member = std::move(member);
    return out;
}

RunTrace run_with_all_metadata(const Network& net, const std::vector<Instance>& partitions,
                               const BoolQuery& query, const FactUniverse& u,
                               const RunSchedule& sched) {
    const Fact all_fact{"All", {}};
    for (const Instance& p : partitions)
        if (p.count(all_fact))
            throw input_error("All() is reserved for the coordinator");
    for (const Fact& f : u.facts)
        if (f.rel == "All")
            throw input_error("All() is reserved and may not appear in the universe");

    const std::vector<std::uint8_t> table = ft_table(u, query);
    auto strip = [&all_fact](const Instance& s) {
        Instance t = s;
        t.erase(all_fact);
        return t;
    };

    FloodEngine eng(net, partitions, sched);
    eng.floodable = [&all_fact](const Fact& f) { return f != all_fact; };
    std::vector<std::uint8_t> fired(net.nodes, 0);
    std::vector<nlohmann::json> outputs(net.nodes, nullptr);
    eng.on_change = [&](std::uint32_t v) {
        if (fired[v])
            return;
        // All() marks the state final by fiat; otherwise fall back to the FT
        // table over the data facts.
        const bool is_final =
            eng.state[v].count(all_fact) ? true : table[u.mask_of(eng.state[v])] != 0;
        if (is_final) {
            fired[v] = 1;
            outputs[v] = query(strip(eng.state[v]));
            eng.emit({0, "ready", v, std::nullopt, std::nullopt, std::nullopt});
        }
    };
    eng.initial_sweep();
    eng.random_phase();
    eng.drain();

    // Global data quiescence reached; the coordinator now announces it.
    for (std::uint32_t v = 0; v < net.nodes; ++v) {
        ++eng.step;
        ++eng.buf[v][all_fact];
        eng.emit({0, "inject-all", v, std::nullopt, all_fact, std::nullopt});
    }
    eng.drain();

    RunTrace trace;
    trace.seed = sched.seed;
    trace.events = std::move(eng.events);
    trace.quiescence_step = eng.last_change;
    trace.final_states = std::move(eng.state);
    trace.final_ready = std::move(fired);
    trace.outputs = std::move(outputs);
    return trace;
}

std::vector<std::uint32_t> PolicySpec::holders(const Fact& f, std::uint32_t nodes) const {
    const auto it = entries.find(f);
    if (it != entries.end())
        return it->second;
    if (default_nodes)
        return *default_nodes;
    std::vector<std::uint32_t> all(nodes);
    for (std::uint32_t v = 0; v < nodes; ++v)
        all[v] = v;
    return all;
}

namespace {

constexpr std::uint32_t pair_universe_cap = 10;

// Pair machine over the universe: each fact is absent (0), known present (1)
// or known absent (2); labels add a fact positively or negatively and are
// no-ops when the fact is already decided. FT per pair state, indexed by the
// base-3 code.
std::vector<std::uint8_t> pair_ft_table(const FactUniverse& u, const BoolQuery& query) {
    const std::uint32_t f = u.size();
    if (f > pair_universe_cap)
        throw cap_exceeded("pair-state machine capped at " + std::to_string(pair_universe_cap) +
                           " universe facts, got " + std::to_string(f));
    std::uint32_t n = 1;
    for (std::uint32_t i = 0; i < f; ++i)
        n *= 3;
    const std::uint32_t nl = 2 * f;

    std::vector<StateId> delta(static_cast<std::size_t>(n) * nl);
    std::vector<std::uint32_t> pow3(f + 1, 1);
    for (std::uint32_t i = 0; i < f; ++i)
        pow3[i + 1] = pow3[i] * 3;
    std::vector<bool> truth(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        Instance pos;
        for (std::uint32_t i = 0; i < f; ++i) {
            const std::uint32_t digit = (s / pow3[i]) % 3;
            if (digit == 1)
                pos.insert(u.facts[i]);
            for (std::uint32_t sign = 0; sign < 2; ++sign) {
                const std::uint32_t want = sign == 0 ? 1 : 2;
                delta[static_cast<std::size_t>(s) * nl + 2 * i + sign] =
                    digit == 0 ? s + want * pow3[i] : s;
            }
        }
        truth[s] = query(pos);
    }
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < f; ++i) {
        labels.push_back("+" + u.facts[i].to_string());
        labels.push_back("-" + u.facts[i].to_string());
    }
    Semiautomaton a(n, std::move(labels), std::move(delta), 0, {}, "pair-machine");
    const TransitionGraph g(a);
    const FtVerdict verdict = all_ft_states(g, Query::boolean(truth));
    return verdict.ft;
}

} // namespace

PolicyAwareTrace run_policy_aware(const Network& net, const Instance& input,
                                  const PolicySpec& policy, const BoolQuery& query,
                                  const FactUniverse& u, const RunSchedule& sched) {
    for (const Fact& f : input)
        u.index_of(f); // inputs outside the universe are rejected up front

    const std::vector<std::uint8_t> ft3 = pair_ft_table(u, query);
    std::vector<std::uint32_t> pow3(u.size() + 1, 1);
    for (std::uint32_t i = 0; i < u.size(); ++i)
        pow3[i + 1] = pow3[i] * 3;

    // The initial partitioning respects the policy: v holds t iff the policy
    // names v as a holder and t is in the input.
    std::vector<Instance> pos(net.nodes), neg(net.nodes);
    std::vector<Instance> initial(net.nodes);
    for (const Fact& f : input)
        for (std::uint32_t v : policy.holders(f, net.nodes)) {
            if (v >= net.nodes)
                throw input_error("policy names unknown node " + std::to_string(v));
            pos[v].insert(f);
            initial[v].insert(f);
        }

    std::mt19937_64 rng(sched.seed);
    std::vector<std::map<Fact, std::uint32_t>> bufp(net.nodes), bufn(net.nodes);
    std::map<std::tuple<Fact, std::uint32_t, std::uint32_t>, std::uint32_t> sentp, sentn;
    std::vector<TraceEvent> events;
    std::uint32_t step = 0, last_change = 0;
    std::vector<std::uint8_t> fired(net.nodes, 0);
    std::vector<nlohmann::json> outputs(net.nodes, nullptr);

    auto code_of = [&](std::uint32_t v) {
        std::uint32_t code = 0;
        for (const Fact& f : pos[v])
            code += pow3[u.index_of(f)];
        for (const Fact& f : neg[v])
            code += 2 * pow3[u.index_of(f)];
        return code;
    };
    auto emit = [&](TraceEvent e) {
        e.step = step;
        events.push_back(std::move(e));
    };
    auto check_ready = [&](std::uint32_t v) {
        if (!fired[v] && ft3[code_of(v)]) {
            fired[v] = 1;
            outputs[v] = query(pos[v]);
            emit({0, "ready", v, std::nullopt, std::nullopt, std::nullopt});
        }
    };

    // A node may flood "t is absent" for any potential tuple t it would have
    // held: the policy names it as a holder, yet t was not in its initial
    // share. Potential tuples are universe facts over the locally known
    // constants, so the derivable set grows as facts arrive.
    auto derivable = [&](std::uint32_t v) {
        std::vector<Fact> out;
        std::set<Value> known = adom(pos[v]);
        for (const Value& x : adom(neg[v]))
            known.insert(x);
        for (const Fact& f : u.facts) {
            if (initial[v].count(f))
                continue;
            bool in_adom = true;
            for (const Value& x : f.args)
                in_adom = in_adom && known.count(x) > 0;
            if (!in_adom)
                continue;
            const std::vector<std::uint32_t> h = policy.holders(f, net.nodes);
            if (std::find(h.begin(), h.end(), v) != h.end())
                out.push_back(f);
        }
        return out;
    };

    auto send = [&](bool positive, std::uint32_t v, const Fact& f, std::uint32_t w) {
        ++step;
        ++(positive ? sentp : sentn)[{f, v, w}];
        ++(positive ? bufp : bufn)[w][f];
        emit({0, positive ? "produce" : "produce-neg", v, w, f, std::nullopt});
    };
    auto consume = [&](bool positive, std::uint32_t v, const Fact& f) {
        ++step;
        auto& b = (positive ? bufp : bufn)[v];
        auto it = b.find(f);
        if (--it->second == 0)
            b.erase(it);
        emit({0, positive ? "consume" : "consume-neg", v, std::nullopt, f, std::nullopt});
        // Soundness keeps the two halves disjoint: positives only ever carry
        // input facts, negatives only non-input facts.
        assert(!(positive ? neg : pos)[v].count(f));
        if ((positive ? pos : neg)[v].insert(f).second) {
            last_change = step;
            check_ready(v);
        }
    };
    auto sent_count = [&](bool positive, const Fact& f, std::uint32_t v, std::uint32_t w) {
        const auto& m = positive ? sentp : sentn;
        const auto it = m.find({f, v, w});
        return it == m.end() ? 0u : it->second;
    };

    for (std::uint32_t v = 0; v < net.nodes; ++v)
        check_ready(v);

    struct Action {
        std::uint8_t kind; // 0 send+, 1 send-, 2 recv+, 3 recv-
        std::uint32_t node, peer;
        Fact fact;
    };
    std::vector<Action> acts;
    for (std::uint32_t n = 0; n < sched.max_steps; ++n) {
        acts.clear();
        for (std::uint32_t v = 0; v < net.nodes; ++v) {
            for (const Fact& f : pos[v])
                for (std::uint32_t w : net.adjacency[v])
                    if (sent_count(true, f, v, w) < sched.resend_cap)
                        acts.push_back({0, v, w, f});
            for (const Fact& f : derivable(v))
                for (std::uint32_t w : net.adjacency[v])
                    if (sent_count(false, f, v, w) < sched.resend_cap)
                        acts.push_back({1, v, w, f});
            for (const auto& [f, cnt] : bufp[v])
                acts.push_back({2, v, 0, f});
            for (const auto& [f, cnt] : bufn[v])
                acts.push_back({3, v, 0, f});
        }
        if (acts.empty())
            break;
        const Action& a = acts[rng() % acts.size()];
        switch (a.kind) {
        case 0: send(true, a.node, a.fact, a.peer); break;
        case 1: send(false, a.node, a.fact, a.peer); break;
        case 2: consume(true, a.node, a.fact); break;
        default: consume(false, a.node, a.fact); break;
        }
    }

    // Drain: flood every positive and every derivable negative at least once
    // per edge, deliver everything, repeat until nothing moves (deliveries
    // widen the local active domain, enabling more derivations).
    bool progress = true;
    while (progress) {
        progress = false;
        if (sched.complete)
            for (std::uint32_t v = 0; v < net.nodes; ++v) {
                for (const Fact& f : pos[v])
                    for (std::uint32_t w : net.adjacency[v])
                        if (sent_count(true, f, v, w) == 0) {
                            send(true, v, f, w);
                            progress = true;
                        }
                for (const Fact& f : derivable(v))
                    for (std::uint32_t w : net.adjacency[v])
                        if (sent_count(false, f, v, w) == 0) {
                            send(false, v, f, w);
                            progress = true;
                        }
            }
        if (sched.fair)
            for (std::uint32_t v = 0; v < net.nodes; ++v) {
                while (!bufp[v].empty()) {
                    consume(true, v, bufp[v].begin()->first);
                    progress = true;
                }
                while (!bufn[v].empty()) {
                    consume(false, v, bufn[v].begin()->first);
                    progress = true;
                }
            }
    }

    PolicyAwareTrace out;
    out.base.seed = sched.seed;
    out.base.events = std::move(events);
    out.base.quiescence_step = last_change;
    out.base.final_states = std::move(pos);
    out.base.final_ready = std::move(fired);
    out.base.outputs = std::move(outputs);
    out.final_neg = std::move(neg);
    return out;
}

bool check_domain_distinct_monotone(const BoolQuery& query, const FactUniverse& u) {
    const std::uint32_t f = u.size();
    if (f > 12)
        throw cap_exceeded("domain-distinct monotonicity enumeration capped at 12 universe facts");
    const std::uint32_t n = 1u << f;
    std::vector<std::uint8_t> q(n);
    for (std::uint32_t m = 0; m < n; ++m)
        q[m] = query(u.instance_of(m)) ? 1 : 0;

    std::vector<std::set<Value>> consts(f);
    for (std::uint32_t i = 0; i < f; ++i)
        consts[i] = std::set<Value>(u.facts[i].args.begin(), u.facts[i].args.end());

    for (std::uint32_t mi = 0; mi < n; ++mi) {
        if (!q[mi])
            continue;
        const std::set<Value> dom = adom(u.instance_of(mi));
        // Facts made only of fresh constants; subsets of these are exactly
        // the domain-distinct extensions.
        std::uint32_t fresh = 0;
        for (std::uint32_t i = 0; i < f; ++i) {
            bool all_outside = true;
            for (const Value& x : consts[i])
                all_outside = all_outside && dom.count(x) == 0;
            if (all_outside)
                fresh |= 1u << i;
        }
        for (std::uint32_t mj = fresh;; mj = (mj - 1) & fresh) {
            if (!q[mi | mj])
                return false;
            if (mj == 0)
                break;
        }
    }
    return true;
}

} // namespace freeterm
