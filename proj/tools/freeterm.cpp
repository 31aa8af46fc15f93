#include <cstdint>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"

#include "freeterm/io.hpp"
#include "freeterm/minimize.hpp"
#include "freeterm/query_expr.hpp"
#include "freeterm/report.hpp"

namespace ft = freeterm;

namespace {

// Split on top-level commas only, so fact-shaped atoms like R(a,b) survive.
std::vector<std::string> split_atoms(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(' || c == '{')
            ++depth;
        if (c == ')' || c == '}')
            --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c)) || depth > 0) {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> parse_edge_list(const std::string& text) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const std::string& part : split_atoms(text)) {
        const auto dash = part.find('-');
        if (dash == std::string::npos)
            throw ft::input_error("edge '" + part + "' is not of the form u-v");
        try {
            out.emplace_back(std::stoul(part.substr(0, dash)), std::stoul(part.substr(dash + 1)));
        } catch (const std::exception&) {
            throw ft::input_error("edge '" + part + "' is not of the form u-v");
        }
    }
    return out;
}

// Atom names double as facts when they look like R(...); bare names become
// nullary relations, so (and a () ...) style expressions see them as a().
ft::Fact atom_to_fact(const std::string& atom) {
    if (atom.find('(') != std::string::npos)
        return ft::parse_fact_literal(atom);
    return ft::Fact{atom, {}};
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        ft::write_file(out_path, text);
}

struct GenArgs {
    std::string kind;
    std::string variant = "a";
    std::string atoms = "a,b,c";
    std::string edges;
    std::uint32_t replicas = 2;
    std::uint32_t cap = 3;
    std::uint32_t source = 0;
    std::uint32_t target = 0;
    bool cycle_query = false;
    bool merge = false;
    bool no_merge = false;
    std::string contains;
    std::int64_t min_size = -1;
    std::int64_t sum_ge = std::numeric_limits<std::int64_t>::min();
    std::string expr;
    std::string out;
};

// The set models share their query flags: --contains, --min-size and --expr
// all map a subset mask to a Boolean.
std::function<nlohmann::json(std::uint32_t)> subset_query(const GenArgs& a,
                                                          const std::vector<std::string>& atoms) {
    const int given = (!a.contains.empty()) + (a.min_size >= 0) + (!a.expr.empty());
    if (given > 1)
        throw ft::input_error("--contains, --min-size and --expr are mutually exclusive");
    if (given == 0)
        return {};
    if (!a.contains.empty()) {
        const auto it = std::find(atoms.begin(), atoms.end(), a.contains);
        if (it == atoms.end())
            throw ft::input_error("--contains " + a.contains + " is not one of the atoms");
        const std::uint32_t bit = static_cast<std::uint32_t>(it - atoms.begin());
        return [bit](std::uint32_t mask) { return nlohmann::json(((mask >> bit) & 1u) != 0); };
    }
    if (a.min_size >= 0) {
        const std::uint32_t k = static_cast<std::uint32_t>(a.min_size);
        return [k](std::uint32_t mask) {
            return nlohmann::json(static_cast<std::uint32_t>(__builtin_popcount(mask)) >= k);
        };
    }
    const ft::QueryExpr q = ft::QueryExpr::parse(a.expr);
    std::vector<ft::Fact> facts;
    for (const std::string& atom : atoms)
        facts.push_back(atom_to_fact(atom));
    return [q, facts](std::uint32_t mask) {
        ft::Instance s;
        for (std::size_t i = 0; i < facts.size(); ++i)
            if (mask & (1u << i))
                s.insert(facts[i]);
        return nlohmann::json(q.eval(s));
    };
}

int cmd_gen(const GenArgs& a) {
    const std::vector<std::string> atoms = split_atoms(a.atoms);
    ft::Model m = [&]() -> ft::Model {
        if (a.kind == "fig1") {
            if (a.variant.size() != 1 || a.variant[0] < 'a' || a.variant[0] > 'd')
                throw ft::input_error("--variant must be one of a, b, c, d");
            return ft::gen_fig1(a.variant[0]);
        }
        if (a.kind == "powerset") {
            auto q = subset_query(a, atoms);
            if (!q)
                throw ft::input_error("powerset needs a query: --contains, --min-size or --expr");
            return ft::gen_powerset_union(atoms, q);
        }
        if (a.kind == "gos") {
            ft::Model m = ft::gen_grow_only_set(atoms, a.merge);
            if (auto q = subset_query(a, atoms)) {
                std::vector<bool> truth;
                for (std::uint32_t s = 0; s < m.automaton.num_states(); ++s)
                    truth.push_back(q(s).get<bool>());
                m.query = ft::Query::boolean(truth);
            }
            return m;
        }
        if (a.kind == "2pset")
            return ft::gen_two_phase_set(atoms);
        if (a.kind == "gcounter") {
            ft::Model m = ft::gen_g_counter(a.replicas, a.cap, !a.no_merge);
            if (a.sum_ge != std::numeric_limits<std::int64_t>::min()) {
                std::vector<bool> truth;
                for (std::uint32_t s = 0; s < m.automaton.num_states(); ++s)
                    truth.push_back(m.query.value(s).get<std::int64_t>() >= a.sum_ge);
                m.query = ft::Query::boolean(truth);
            }
            return m;
        }
        if (a.kind == "pncounter")
            return ft::gen_pn_counter(a.replicas, a.cap);
        if (a.kind == "tc") {
            if (a.edges.empty())
                throw ft::input_error("tc needs --edges, e.g. --edges 0-1,1-2");
            return ft::gen_tc_fixpoint(parse_edge_list(a.edges), a.source, a.target,
                                       a.cycle_query);
        }
        throw ft::input_error("unknown model kind '" + a.kind +
                              "'; known: fig1, powerset, gos, 2pset, gcounter, pncounter, tc");
    }();
    emit(ft::canonical_text(ft::model_to_json(m)), a.out);
    return 0;
}

ft::Model load_model(const std::string& path, bool print_warnings = true) {
    ft::LoadedModel lm = ft::model_from_json(ft::parse_json_file(path));
    if (print_warnings)
        for (const std::string& w : lm.warnings)
            std::cerr << "warning: " << path << ": " << w << "\n";
    return std::move(lm.model);
}

int cmd_analyze(const std::string& input, const std::string& format, const std::string& out,
                const std::string& dot, bool no_algebra, std::uint32_t bound) {
    const ft::Model m = load_model(input);
    ft::AnalyzeOptions opt;
    opt.with_algebra = !no_algebra;
    opt.commutativity_bound = bound;
    const ft::AnalyzeResult r = ft::analyze_model(m, opt);
    if (!dot.empty())
        ft::write_file(dot, ft::to_dot(m, &r.verdict.ft));
    if (format == "text")
        emit(ft::analyze_to_text(m, r), out);
    else
        emit(ft::analyze_to_json(m, r).dump(2) + "\n", out);
    return 0;
}

nlohmann::json map_to_json(const ft::CollapseMap& map) {
    nlohmann::json arr = nlohmann::json::array();
    for (ft::StateId s : map.old_to_new) {
        if (s == ft::invalid_state)
            arr.push_back(nullptr);
        else
            arr.push_back(s);
    }
    return nlohmann::json{{"old_to_new", arr}};
}

int cmd_minimize(const std::string& input, const std::string& out, bool collapse_only,
                 const std::string& dot) {
    const ft::Model m = load_model(input);
    ft::Model result{m.automaton, m.query};
    ft::CollapseMap map;
    std::vector<std::string> warnings;
    if (collapse_only) {
        ft::CollapseResult c = ft::collapse_fixpoint(m.automaton, m.query);
        result = ft::Model{std::move(c.automaton), std::move(c.query)};
        map = std::move(c.map);
    } else {
        ft::MinimizeResult mr = ft::minimize_moore(m.automaton, m.query);
        result = ft::Model{std::move(mr.automaton), std::move(mr.query)};
        map = std::move(mr.map);
        warnings = std::move(mr.warnings);
    }
    for (const std::string& w : warnings)
        std::cerr << "warning: " << w << "\n";
    if (m.automaton.start() && result.automaton.start()) {
        const ft::EquivalenceResult eq =
            ft::check_equivalence(m.automaton, m.query, result.automaton, result.query);
        if (!eq.equivalent)
            throw std::logic_error("minimized machine is not equivalent to its input");
    }
    if (out.empty() || out == "-")
        throw ft::input_error("minimize needs --out FILE (a sidecar map file is written next to it)");
    ft::write_file(out, ft::canonical_text(ft::model_to_json(result)));
    std::string map_path = out;
    const std::string suffix = ".json";
    if (map_path.size() > suffix.size() &&
        map_path.compare(map_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        map_path.resize(map_path.size() - suffix.size());
    map_path += ".map.json";
    ft::write_file(map_path, map_to_json(map).dump(2) + "\n");
    if (!dot.empty()) {
        const ft::AnalyzeResult r = ft::analyze_model(result, {false, 3});
        ft::write_file(dot, ft::to_dot(result, &r.verdict.ft));
    }
    std::cerr << input << ": " << m.automaton.num_states() << " -> "
              << result.automaton.num_states() << " states\n";
    return 0;
}

int cmd_check(const std::string& input, const std::string& prop, const std::string& format) {
    const ft::Model m = load_model(input);
    const ft::PropVerdict v = ft::run_check_prop(m, prop);
    if (format == "json") {
        nlohmann::json j;
        j["prop"] = prop;
        j["status"] = v.holds() ? "holds" : (v.fails() ? "fails" : "not_applicable");
        j["detail"] = v.detail;
        nlohmann::json states = nlohmann::json::array();
        for (ft::StateId s : v.states)
            states.push_back(m.automaton.display_name(s));
        j["states"] = std::move(states);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << prop << ": " << ft::verdict_to_text(v, m) << "\n";
    }
    return v.fails() ? 1 : 0;
}

struct SimArgs {
    std::string network;
    std::string instance;
    std::string query;
    std::string universe;
    std::string policy;
    std::string trace_out;
    std::uint64_t seed = 0;
    std::uint32_t seeds = 1;
    bool all_metadata = false;
    bool per_tuple = false;
    bool check_cf = false;
    bool parallel = false;
};

std::vector<ft::Instance> random_partition(const ft::Instance& input, std::uint32_t nodes,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<ft::Instance> parts(nodes);
    for (const ft::Fact& f : input)
        parts[rng() % nodes].insert(f);
    return parts;
}

int cmd_simulate(const SimArgs& a) {
    const ft::Network net = ft::network_from_json(ft::parse_json_file(a.network));
    const ft::Instance input = ft::instance_from_json(ft::parse_json_file(a.instance));
    const ft::FactUniverse universe =
        a.universe.empty()
            ? ft::make_universe(std::vector<ft::Fact>(input.begin(), input.end()))
            : ft::universe_from_json(ft::parse_json_file(a.universe));
    if ((a.all_metadata && (a.per_tuple || !a.policy.empty())) ||
        (a.per_tuple && !a.policy.empty()))
        throw ft::input_error("--all-metadata, --per-tuple and --policy are mutually exclusive");

    if (a.check_cf) {
        const ft::DistQuery q = ft::resolve_bool_query(a.query);
        const ft::CfCheckResult res =
            ft::check_cf_correct(net, q, input, universe, a.seeds, a.seed);
        nlohmann::json j;
        j["input_ft"] = res.input_ft;
        j["input_value"] = res.input_value;
        j["runs"] = res.runs;
        j["discrepancies"] = res.discrepancies;
        j["notes"] = res.notes;
        emit(j.dump(2) + "\n", a.trace_out);
        return res.pass() ? 0 : 1;
    }

    std::vector<nlohmann::json> traces(a.seeds);
    auto run_one = [&](std::uint32_t i) {
        ft::RunSchedule sched;
        sched.seed = a.seed + i;
        if (!a.policy.empty()) {
            const ft::PolicySpec policy =
                ft::policy_from_json(ft::parse_json_file(a.policy), net.nodes);
            const ft::DistQuery q = ft::resolve_bool_query(a.query);
            const ft::PolicyAwareTrace t =
                ft::run_policy_aware(net, input, policy, q.eval, universe, sched);
            nlohmann::json j = t.base.to_json();
            nlohmann::json neg = nlohmann::json::array();
            for (const ft::Instance& s : t.final_neg)
                neg.push_back(ft::instance_to_json(s));
            j["final"]["negatives"] = std::move(neg);
            traces[i] = std::move(j);
            return;
        }
        const auto parts = random_partition(input, net.nodes, sched.seed);
        if (a.per_tuple) {
            const ft::ResolvedSetQuery q = ft::resolve_set_query(a.query, universe);
            const ft::PerTupleTrace t =
                ft::per_tuple_ready_run(net, parts, q.eval, q.candidates, universe, sched);
            nlohmann::json j = t.base.to_json();
            nlohmann::json per_node = nlohmann::json::array();
            for (std::uint32_t v = 0; v < net.nodes; ++v) {
                nlohmann::json row = nlohmann::json::array();
                for (std::size_t c = 0; c < t.candidates.size(); ++c) {
                    nlohmann::json tup = nlohmann::json::array();
                    for (const ft::Value& x : t.candidates[c])
                        tup.push_back(ft::value_to_json(x));
                    row.push_back({{"tuple", tup},
                                   {"ready", t.tuple_ready[v][c] != 0},
                                   {"member", t.tuple_member[v][c] != 0}});
                }
                per_node.push_back(std::move(row));
            }
            j["final"]["tuples"] = std::move(per_node);
            traces[i] = std::move(j);
            return;
        }
        const ft::DistQuery q = ft::resolve_bool_query(a.query);
        if (a.all_metadata) {
            traces[i] = ft::run_with_all_metadata(net, parts, q.eval, universe, sched).to_json();
            return;
        }
        const ft::ReadyPolicy policy = ft::ft_ready_policy(universe, q.eval);
        traces[i] = ft::run(net, parts, q.eval, policy, sched).to_json();
    };

    if (a.parallel && a.seeds > 1) {
        const std::uint32_t workers =
            std::min<std::uint32_t>(a.seeds, std::max(1u, std::thread::hardware_concurrency()));
        std::vector<std::thread> pool;
        for (std::uint32_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint32_t i = w; i < a.seeds; i += workers)
                    run_one(i);
            });
        for (std::thread& t : pool)
            t.join();
    } else {
        for (std::uint32_t i = 0; i < a.seeds; ++i)
            run_one(i);
    }

    nlohmann::json out;
    out["query"] = a.query;
    out["traces"] = traces;
    emit(out.dump(2) + "\n", a.trace_out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-termination analysis of finite semiautomata with queries"};
    app.require_subcommand(1);

    GenArgs g;
    CLI::App* gen = app.add_subcommand("gen", "Generate a model file");
    gen->add_option("kind", g.kind, "fig1 | powerset | gos | 2pset | gcounter | pncounter | tc")
        ->required();
    gen->add_option("--variant", g.variant, "fig1 variant: a, b, c or d");
    gen->add_option("--atoms", g.atoms, "comma-separated universe, default a,b,c");
    gen->add_option("--edges", g.edges, "tc edge list, e.g. 0-1,1-2");
    gen->add_option("--replicas", g.replicas, "counter replicas (default 2)");
    gen->add_option("--cap", g.cap, "per-replica saturation cap (default 3)");
    gen->add_option("--source", g.source, "tc query source vertex");
    gen->add_option("--target", g.target, "tc query target vertex");
    gen->add_flag("--cycle-query", g.cycle_query, "tc: ask for any cycle instead of source-target");
    gen->add_flag("--merge", g.merge, "gos: add one merge label per subset");
    gen->add_flag("--no-merge", g.no_merge, "gcounter: drop the merge labels");
    gen->add_option("--contains", g.contains, "set query: atom membership");
    gen->add_option("--min-size", g.min_size, "set query: at least this many atoms");
    gen->add_option("--sum-ge", g.sum_ge, "gcounter: Boolean query sum >= N instead of raw sum");
    gen->add_option("--expr", g.expr, "set query expression, e.g. (and R(c) (not S(c)))");
    gen->add_option("--out", g.out, "output file (default stdout)");

    std::string an_input, an_format = "json", an_out, an_dot;
    bool an_no_algebra = false;
    std::uint32_t an_bound = 3;
    CLI::App* analyze = app.add_subcommand("analyze", "FT verdicts, category and algebra report");
    analyze->add_option("input", an_input, "model file")->required();
    analyze->add_option("--format", an_format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--out", an_out, "report file (default stdout)");
    analyze->add_option("--dot", an_dot, "write a Graphviz view with FT states shaded");
    analyze->add_flag("--no-algebra", an_no_algebra, "skip the algebraic property flags");
    analyze->add_option("--commutativity-bound", an_bound, "query commutativity sequence bound");

    std::string mi_input, mi_out, mi_dot;
    bool mi_collapse_only = false;
    CLI::App* minimize = app.add_subcommand("minimize", "Query-preserving state reduction");
    minimize->add_option("input", mi_input, "model file")->required();
    minimize->add_option("--out", mi_out, "minimized model file")->required();
    minimize->add_flag("--collapse-only", mi_collapse_only,
                       "only collapse FT closures, skip Moore minimization");
    minimize->add_option("--dot", mi_dot, "write a Graphviz view of the result");

    std::string ck_input, ck_prop, ck_format = "text";
    CLI::App* check = app.add_subcommand("check", "Assert one algebraic property");
    check->add_option("input", ck_input, "model file")->required();
    std::string prop_names;
    for (const std::string& n : ft::check_prop_names())
        prop_names += (prop_names.empty() ? "" : ", ") + n;
    check->add_option("--prop", ck_prop, "one of: " + prop_names)->required();
    check->add_option("--format", ck_format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));

    SimArgs s;
    CLI::App* simulate = app.add_subcommand("simulate", "Deterministic distributed runs");
    simulate->add_option("--network", s.network, "network file")->required();
    simulate->add_option("--instance", s.instance, "input instance file")->required();
    simulate->add_option("--query", s.query, "query name or expression")->required();
    simulate->add_option("--universe", s.universe,
                         "fact universe file (default: the instance's facts)");
    simulate->add_option("--policy", s.policy, "placement policy file (pair-state run)");
    simulate->add_option("--seed", s.seed, "base seed (default 0)");
    simulate->add_option("--seeds", s.seeds, "number of consecutive seeds to run");
    simulate->add_flag("--all-metadata", s.all_metadata, "inject All() after data quiescence");
    simulate->add_flag("--per-tuple", s.per_tuple, "per-output-tuple ready (set-valued query)");
    simulate->add_flag("--check-cf", s.check_cf,
                       "check runs against the FT prediction instead of dumping traces");
    simulate->add_flag("--parallel-seeds", s.parallel, "fan seeds across threads");
    simulate->add_option("--trace", s.trace_out, "trace file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen)
            return cmd_gen(g);
        if (*analyze)
            return cmd_analyze(an_input, an_format, an_out, an_dot, an_no_algebra, an_bound);
        if (*minimize)
            return cmd_minimize(mi_input, mi_out, mi_collapse_only, mi_dot);
        if (*check)
            return cmd_check(ck_input, ck_prop, ck_format);
        if (*simulate)
            return cmd_simulate(s);
    } catch (const ft::cap_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ft::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
