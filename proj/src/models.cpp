#include "freeterm/models.hpp"

#include <algorithm>
#include <set>

#include "freeterm/errors.hpp"

namespace freeterm {

namespace {

constexpr std::size_t state_cap = 1000 * 1000;
constexpr std::size_t entry_cap = 8u * 1000 * 1000;

void check_size(std::size_t states, std::size_t labels, const std::string& what) {
    if (states > state_cap)
        throw cap_exceeded(what + " would need " + std::to_string(states) +
                           " states (cap " + std::to_string(state_cap) + ")");
    if (states * labels > entry_cap)
        throw cap_exceeded(what + " would need " + std::to_string(states * labels) +
                           " transitions (cap " + std::to_string(entry_cap) + ")");
}

Model fig1_model(std::uint32_t n, const std::vector<std::string>& names,
                 std::vector<StateId> delta, const std::vector<StateId>& accepting,
                 const std::string& provenance) {
    std::vector<bool> truth(n, false);
    for (StateId s : accepting)
        truth[s] = true;
    Semiautomaton a(n, {"a", "b", "c"}, std::move(delta), 0, names, provenance);
    return {std::move(a), Query::boolean(truth)};
}

} // namespace

Model gen_fig1(char variant) {
    switch (variant) {
    case 'a':
        // start --a--> accept, both absorb everything else.
        return fig1_model(2, {"start", "accept"},
                          {/*start*/ 1, 0, 0, /*accept*/ 1, 1, 1}, {1}, "fig1a");
    case 'b':
        // Left branch collects the two a's, right branch collects b's, the
        // two sinks are the verdicts.
        return fig1_model(
            6, {"start", "saw-a", "saw-b", "saw-ab", "accept", "reject"},
            {
                /*start : a,b,c*/ 1, 2, 0,
                /*saw-a */ 4, 3, 1,
                /*saw-b */ 3, 5, 2,
                /*saw-ab*/ 4, 5, 3,
                /*accept*/ 4, 4, 4,
                /*reject*/ 5, 5, 5,
            },
            {4}, "fig1b");
    case 'c':
        // b toggles parity forever; nothing ever settles.
        return fig1_model(2, {"start", "odd-b"},
                          {/*start*/ 0, 1, 0, /*odd-b*/ 1, 0, 1}, {1}, "fig1c");
    case 'd':
        // A b first commits to the parity loop on the left; anything else
        // commits to counting a's on the right, which can settle.
        return fig1_model(
            6, {"start", "odd-bs", "even-bs", "zero-as", "one-a", "two-as"},
            {
                /*start  */ 4, 1, 3,
                /*odd-bs */ 1, 2, 1,
                /*even-bs*/ 2, 1, 2,
                /*zero-as*/ 4, 3, 3,
                /*one-a  */ 5, 4, 4,
                /*two-as */ 5, 5, 5,
            },
            {1, 5}, "fig1d");
    default:
        throw input_error(std::string("unknown fig1 variant '") + variant + "', expected a-d");
    }
}

std::string set_name(std::uint32_t mask, const std::vector<std::string>& atoms) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (mask & (1u << i)) {
            if (!first)
                out += ",";
            out += atoms[i];
            first = false;
        }
    out += "}";
    return out;
}

namespace {

void check_atoms(const std::vector<std::string>& atoms, std::size_t cap, const std::string& what) {
    if (atoms.empty())
        throw input_error(what + " needs a non-empty universe");
    if (atoms.size() > cap)
        throw cap_exceeded(what + " universe capped at " + std::to_string(cap) + " atoms, got " +
                           std::to_string(atoms.size()));
    std::set<std::string> seen(atoms.begin(), atoms.end());
    if (seen.size() != atoms.size())
        throw input_error(what + " universe has duplicate atoms");
}

} // namespace

Model gen_powerset_union(const std::vector<std::string>& atoms,
                         const std::function<nlohmann::json(std::uint32_t mask)>& value_of) {
    check_atoms(atoms, 20, "powerset");
    const std::uint32_t k = static_cast<std::uint32_t>(atoms.size());
    const std::uint32_t n = 1u << k;
    check_size(n, k, "powerset");
    std::vector<StateId> delta(static_cast<std::size_t>(n) * k);
    std::vector<std::string> names(n);
    std::vector<nlohmann::json> values(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        names[s] = set_name(s, atoms);
        values[s] = value_of(s);
        for (std::uint32_t l = 0; l < k; ++l)
            delta[static_cast<std::size_t>(s) * k + l] = s | (1u << l);
    }
    Semiautomaton a(n, atoms, std::move(delta), 0, std::move(names),
                    "powerset:" + set_name(n - 1, atoms));
    // An all-Boolean value map is a predicate; give it the usual order so
    // monotonicity checks apply to it out of the box.
    bool all_bool = true;
    for (const auto& v : values)
        all_bool = all_bool && v.is_boolean();
    if (all_bool) {
        std::vector<bool> truth(n);
        for (std::uint32_t s = 0; s < n; ++s)
            truth[s] = values[s].get<bool>();
        return {std::move(a), Query::boolean(truth)};
    }
    return {std::move(a), Query::from_values(values)};
}

Model gen_grow_only_set(const std::vector<std::string>& atoms, bool with_merge) {
    check_atoms(atoms, 20, "grow-only set");
    const std::uint32_t k = static_cast<std::uint32_t>(atoms.size());
    const std::uint32_t n = 1u << k;
    const std::uint32_t nl = with_merge ? k + n : k;
    check_size(n, nl, "grow-only set");
    std::vector<std::string> labels;
    labels.reserve(nl);
    for (const std::string& atom : atoms)
        labels.push_back("add(" + atom + ")");
    if (with_merge)
        for (std::uint32_t m = 0; m < n; ++m)
            labels.push_back("merge" + set_name(m, atoms));
    std::vector<StateId> delta(static_cast<std::size_t>(n) * nl);
    std::vector<std::string> names(n);
    std::vector<nlohmann::json> values(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        names[s] = set_name(s, atoms);
        values[s] = names[s]; // identity query: the state is the value
        for (std::uint32_t l = 0; l < k; ++l)
            delta[static_cast<std::size_t>(s) * nl + l] = s | (1u << l);
        if (with_merge)
            for (std::uint32_t m = 0; m < n; ++m)
                delta[static_cast<std::size_t>(s) * nl + k + m] = s | m;
    }
    Semiautomaton a(n, std::move(labels), std::move(delta), 0, std::move(names),
                    "grow-only-set:" + set_name(n - 1, atoms));
    return {std::move(a), Query::from_values(values)};
}

Model gen_two_phase_set(const std::vector<std::string>& atoms) {
    check_atoms(atoms, 10, "two-phase set");
    const std::uint32_t k = static_cast<std::uint32_t>(atoms.size());
    const std::uint32_t n = 1u << (2 * k); // (inserted << k) | deleted
    const std::uint32_t nl = 2 * k;
    check_size(n, nl, "two-phase set");
    std::vector<std::string> labels;
    for (const std::string& atom : atoms)
        labels.push_back("ins(" + atom + ")");
    for (const std::string& atom : atoms)
        labels.push_back("del(" + atom + ")");
    std::vector<StateId> delta(static_cast<std::size_t>(n) * nl);
    std::vector<std::string> names(n);
    std::vector<nlohmann::json> values(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        const std::uint32_t ins = s >> k, del = s & ((1u << k) - 1);
        names[s] = "ins=" + set_name(ins, atoms) + " del=" + set_name(del, atoms);
        values[s] = set_name(ins & ~del, atoms); // visible elements
        for (std::uint32_t j = 0; j < k; ++j) {
            delta[static_cast<std::size_t>(s) * nl + j] = ((ins | (1u << j)) << k) | del;
            delta[static_cast<std::size_t>(s) * nl + k + j] = (ins << k) | del | (1u << j);
        }
    }
    Semiautomaton a(n, std::move(labels), std::move(delta), 0, std::move(names),
                    "two-phase-set:" + set_name((1u << k) - 1, atoms));
    return {std::move(a), Query::from_values(values)};
}

namespace {

std::string vector_name(const std::vector<std::uint32_t>& v, std::size_t begin, std::size_t end) {
    std::string out = "(";
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin)
            out += ",";
        out += std::to_string(v[i]);
    }
    out += ")";
    return out;
}

// Mixed-radix decode of a state id into `digits` coordinates, base cap+1.
std::vector<std::uint32_t> decode_vector(std::uint32_t id, std::uint32_t digits, std::uint32_t base) {
    std::vector<std::uint32_t> v(digits);
    for (std::uint32_t i = 0; i < digits; ++i) {
        v[i] = id % base;
        id /= base;
    }
    return v;
}

std::uint32_t encode_vector(const std::vector<std::uint32_t>& v, std::uint32_t base) {
    std::uint32_t id = 0;
    for (std::size_t i = v.size(); i-- > 0;)
        id = id * base + v[i];
    return id;
}

} // namespace

Model gen_g_counter(std::uint32_t replicas, std::uint32_t cap, bool with_merge) {
    if (replicas == 0)
        throw input_error("g-counter needs at least one replica");
    const std::uint32_t base = cap + 1;
    std::size_t n_check = 1;
    for (std::uint32_t i = 0; i < replicas; ++i) {
        n_check *= base;
        if (n_check > state_cap)
            throw cap_exceeded("g-counter state space exceeds " + std::to_string(state_cap));
    }
    const std::uint32_t n = static_cast<std::uint32_t>(n_check);
    const std::uint32_t nl = with_merge ? replicas + n : replicas;
    check_size(n, nl, "g-counter");

    std::vector<std::string> labels;
    for (std::uint32_t j = 0; j < replicas; ++j)
        labels.push_back("inc(" + std::to_string(j) + ")");
    if (with_merge)
        for (std::uint32_t m = 0; m < n; ++m)
            labels.push_back("merge" + vector_name(decode_vector(m, replicas, base), 0, replicas));

    std::vector<StateId> delta(static_cast<std::size_t>(n) * nl);
    std::vector<std::string> names(n);
    std::vector<nlohmann::json> values(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        const std::vector<std::uint32_t> v = decode_vector(s, replicas, base);
        names[s] = vector_name(v, 0, replicas);
        std::uint64_t sum = 0;
        for (std::uint32_t x : v)
            sum += x;
        values[s] = sum;
        for (std::uint32_t j = 0; j < replicas; ++j) {
            std::vector<std::uint32_t> w = v;
            w[j] = std::min(w[j] + 1, cap);
            delta[static_cast<std::size_t>(s) * nl + j] = encode_vector(w, base);
        }
        if (with_merge)
            for (std::uint32_t m = 0; m < n; ++m) {
                const std::vector<std::uint32_t> other = decode_vector(m, replicas, base);
                std::vector<std::uint32_t> w(replicas);
                for (std::uint32_t j = 0; j < replicas; ++j)
                    w[j] = std::max(v[j], other[j]);
                delta[static_cast<std::size_t>(s) * nl + replicas + m] = encode_vector(w, base);
            }
    }
    Semiautomaton a(n, std::move(labels), std::move(delta), 0, std::move(names),
                    "g-counter:r" + std::to_string(replicas) + ":cap" + std::to_string(cap));
    return {std::move(a), Query::from_values(values)};
}

Model gen_pn_counter(std::uint32_t replicas, std::uint32_t cap) {
    if (replicas == 0)
        throw input_error("pn-counter needs at least one replica");
    const std::uint32_t base = cap + 1;
    const std::uint32_t digits = 2 * replicas;
    std::size_t n_check = 1;
    for (std::uint32_t i = 0; i < digits; ++i) {
        n_check *= base;
        if (n_check > state_cap)
            throw cap_exceeded("pn-counter state space exceeds " + std::to_string(state_cap));
    }
    const std::uint32_t n = static_cast<std::uint32_t>(n_check);
    const std::uint32_t nl = digits;
    check_size(n, nl, "pn-counter");

    std::vector<std::string> labels;
    for (std::uint32_t j = 0; j < replicas; ++j)
        labels.push_back("inc(" + std::to_string(j) + ")");
    for (std::uint32_t j = 0; j < replicas; ++j)
        labels.push_back("dec(" + std::to_string(j) + ")");

    std::vector<StateId> delta(static_cast<std::size_t>(n) * nl);
    std::vector<std::string> names(n);
    std::vector<nlohmann::json> values(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        const std::vector<std::uint32_t> v = decode_vector(s, digits, base); // pos then neg
        names[s] = vector_name(v, 0, replicas) + "-" + vector_name(v, replicas, digits);
        std::int64_t sum = 0;
        for (std::uint32_t j = 0; j < replicas; ++j)
            sum += static_cast<std::int64_t>(v[j]) - v[replicas + j];
        values[s] = sum;
        for (std::uint32_t j = 0; j < digits; ++j) {
            std::vector<std::uint32_t> w = v;
            w[j] = std::min(w[j] + 1, cap);
            delta[static_cast<std::size_t>(s) * nl + j] = encode_vector(w, base);
        }
    }
    Semiautomaton a(n, std::move(labels), std::move(delta), 0, std::move(names),
                    "pn-counter:r" + std::to_string(replicas) + ":cap" + std::to_string(cap));
    return {std::move(a), Query::from_values(values)};
}

Model gen_tc_fixpoint(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                      std::uint32_t source, std::uint32_t target, bool cycle_query) {
    constexpr std::uint32_t vertex_cap = 8;
    std::uint32_t vmax = std::max(source, target);
    for (auto [u, v] : edges)
        vmax = std::max({vmax, u, v});
    if (vmax >= vertex_cap)
        throw cap_exceeded("transitive-closure chain capped at " + std::to_string(vertex_cap) +
                           " vertices");

    using PairSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;
    PairSet facts(edges.begin(), edges.end()); // round 0: the edge facts
    std::vector<PairSet> rounds{facts};
    for (;;) {
        PairSet next = rounds.back();
        for (auto [x, z] : rounds.back())
            for (auto [z2, y] : edges)
                if (z == z2)
                    next.emplace(x, y);
        if (next == rounds.back())
            break;
        rounds.push_back(std::move(next));
    }

    const std::uint32_t n = static_cast<std::uint32_t>(rounds.size());
    std::vector<StateId> delta(n);
    std::vector<std::string> names(n);
    std::vector<nlohmann::json> values(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        delta[i] = std::min(i + 1, n - 1); // the fixpoint round self-loops
        names[i] = "round" + std::to_string(i);
        bool hit = false;
        if (cycle_query) {
            for (auto [x, y] : rounds[i])
                if (x == y)
                    hit = true;
        } else {
            hit = rounds[i].count({source, target}) > 0;
        }
        values[i] = hit;
    }
    Semiautomaton a(n, {"step"}, std::move(delta), 0, std::move(names),
                    cycle_query ? "tc-fixpoint:cycle"
                                : "tc-fixpoint:" + std::to_string(source) + "->" +
                                      std::to_string(target));
    std::vector<bool> truth(n);
    for (std::uint32_t i = 0; i < n; ++i)
        truth[i] = values[i].get<bool>();
    return {std::move(a), Query::boolean(truth)};
}

} // namespace freeterm
