#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "freeterm/errors.hpp"

namespace freeterm {

/// Constants appearing in facts: integers or symbols.
using Value = std::variant<std::int64_t, std::string>;

nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);
std::string value_to_string(const Value& v);

struct Fact {
    std::string rel;
    std::vector<Value> args;

    auto operator<=>(const Fact&) const = default;
    std::string to_string() const; // "R(1,c)"
};

/// Relational instances are kept sorted so every traversal is deterministic.
using Instance = std::set<Fact>;
using Tuple = std::vector<Value>;

nlohmann::json fact_to_json(const Fact& f);
Fact fact_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& i);
Instance instance_from_json(const nlohmann::json& j);

/// Undirected, connected message topology.
struct Network {
    std::uint32_t nodes = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> adjacency; // sorted neighbor lists

    static Network make(std::uint32_t nodes,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);
};

using BoolQuery = std::function<bool(const Instance&)>;
using SetQuery = std::function<std::set<Tuple>(const Instance&)>;
using ReadyPolicy = std::function<bool(const Instance&)>;

struct DistQuery {
    std::string name;
    BoolQuery eval;
};

/// Explicit finite fact universe bounding what can ever circulate. All
/// instances fed to the FT machinery must stay inside it.
struct FactUniverse {
    std::vector<Fact> facts; // sorted, unique

    std::uint32_t size() const { return static_cast<std::uint32_t>(facts.size()); }
    std::uint32_t index_of(const Fact& f) const;     // rejects facts outside
    std::uint32_t mask_of(const Instance& i) const;  // rejects facts outside
    Instance instance_of(std::uint32_t mask) const;
};
FactUniverse make_universe(std::vector<Fact> facts);

/// FT verdict per subset of the universe, for the union-driven powerset
/// machine with the query evaluated on each subset. Index by mask.
std::vector<std::uint8_t> ft_table(const FactUniverse& u, const BoolQuery& query);

/// Fire ready exactly when the local state is FT in the bounded powerset
/// machine. Local states outside the universe are rejected.
ReadyPolicy ft_ready_policy(const FactUniverse& u, const BoolQuery& query);

struct RunSchedule {
    std::uint64_t seed = 0;
    std::uint32_t max_steps = 10000; // random-interleaving budget
    bool fair = true;                // drain: every buffered fact is delivered
    bool complete = true;            // drain: every held fact reaches every neighbor
    std::uint32_t resend_cap = 2;    // sends per (fact, directed edge)
};

struct TraceEvent {
    std::uint32_t step = 0;
    std::string kind; // produce | consume | ready | inject-all | produce-neg | consume-neg | ready-tuple
    std::uint32_t node = 0;
    std::optional<std::uint32_t> peer;
    std::optional<Fact> fact;
    std::optional<Tuple> tuple;
};

struct RunTrace {
    std::uint64_t seed = 0;
    std::vector<TraceEvent> events;
    std::uint32_t quiescence_step = 0; // last step that changed any node state
    std::vector<Instance> final_states;
    std::vector<std::uint8_t> final_ready;
    std::vector<nlohmann::json> outputs; // per node: query value when ready fired, else null

    nlohmann::json to_json() const;
};

/// One seeded run: nodes flood their facts to neighbors, consume buffered
/// facts, and fire ready per the policy (checked whenever a local state
/// changes). A random interleaving phase is followed, when fair/complete are
/// set, by a drain phase that forces every fact to be sent at least once per
/// edge and every buffer to empty. partitions[v] is what node v holds at the
/// start; their union is the global input.
RunTrace run(const Network& net, const std::vector<Instance>& partitions,
             const BoolQuery& query, const ReadyPolicy& ready, const RunSchedule& sched);

/// Coordination-free correctness check: over `trials` seeded random
/// partitionings, when the input is FT every run must end all-ready with the
/// input's query value at each firing; when it is not, no ready may ever fire.
struct CfCheckResult {
    bool input_ft = false;
    bool input_value = false;
    std::uint32_t runs = 0;
    std::uint32_t discrepancies = 0;
    std::vector<std::string> notes;
    bool pass() const { return discrepancies == 0; }
};
CfCheckResult check_cf_correct(const Network& net, const DistQuery& query, const Instance& input,
                               const FactUniverse& u, std::uint32_t trials,
                               std::uint64_t base_seed = 0);

/// Set-valued queries settle per output tuple: ready(v, t) fires when the
/// membership of t in the answer is FT at v's local state.
struct PerTupleTrace {
    RunTrace base;
    std::vector<Tuple> candidates;
    std::vector<std::vector<std::uint8_t>> tuple_ready;  // [node][candidate]
    std::vector<std::vector<std::uint8_t>> tuple_member; // membership when fired
};
PerTupleTrace per_tuple_ready_run(const Network& net, const std::vector<Instance>& partitions,
                                  const SetQuery& query, const std::vector<Tuple>& candidates,
                                  const FactUniverse& u, const RunSchedule& sched);

/// Same run, but once the data quiesces a coordinator injects the reserved
/// All() fact at every node; a state holding All() is final by fiat, so ready
/// fires everywhere and the query value read there is exact. The injection is
/// the coordination.
RunTrace run_with_all_metadata(const Network& net, const std::vector<Instance>& partitions,
                               const BoolQuery& query, const FactUniverse& u,
                               const RunSchedule& sched);

/// Placement policy: which nodes hold a fact when it is present in the input.
struct PolicySpec {
    std::map<Fact, std::vector<std::uint32_t>> entries;
    std::optional<std::vector<std::uint32_t>> default_nodes; // absent = all nodes

    std::vector<std::uint32_t> holders(const Fact& f, std::uint32_t nodes) const;
};

/// Run over pair states (present, absent-for-sure). Next to flooding its
/// positive facts, a node that the policy names as a holder of a potential
/// tuple it does not hold can flood that tuple as a negative fact. Ready
/// fires when the pair state is FT in the add-positive/add-negative pair
/// machine over the universe.
struct PolicyAwareTrace {
    RunTrace base;                     // final_states carries positive parts
    std::vector<Instance> final_neg;   // negative parts
};
PolicyAwareTrace run_policy_aware(const Network& net, const Instance& input,
                                  const PolicySpec& policy, const BoolQuery& query,
                                  const FactUniverse& u, const RunSchedule& sched);

/// Adding tuples whose constants are all fresh (outside adom(I)) never drops
/// a true answer: Q(I) implies Q(I + J) for every domain-distinct J. Checked
/// by enumeration over all subset pairs of the universe.
bool check_domain_distinct_monotone(const BoolQuery& query, const FactUniverse& u);

/// Constants appearing in an instance.
std::set<Value> adom(const Instance& i);

} // namespace freeterm
