#include "freeterm/query_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "freeterm/errors.hpp"

namespace freeterm {

struct QueryExpr::Node {
    enum class Kind { fact, conj, disj, neg, exists, count_ge, above };
    Kind kind = Kind::fact;
    Fact fact;
    std::vector<Node> kids;
    std::string rel;           // exists / count-ge; empty means any relation
    std::uint64_t count = 0;   // count-ge
    std::vector<Instance> sets; // above
};

namespace {

using Node = QueryExpr::Node;

bool symbol_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

Value classify_value(const std::string& text) {
    if (!text.empty()) {
        char* end = nullptr;
        const long long n = std::strtoll(text.c_str(), &end, 10);
        if (end == text.c_str() + text.size())
            return Value(static_cast<std::int64_t>(n));
    }
    return Value(text);
}

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw input_error("query parse error at offset " + std::to_string(pos) + ": " + msg);
    }

    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool at(char c) const { return pos < s.size() && s[pos] == c; }
    void expect(char c) {
        if (!at(c))
            fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string symbol() {
        const std::size_t start = pos;
        while (pos < s.size() && symbol_char(s[pos]))
            ++pos;
        if (pos == start)
            fail("expected a name");
        return s.substr(start, pos - start);
    }

    Fact fact() {
        Fact f;
        f.rel = symbol();
        expect('(');
        ws();
        if (!at(')'))
            while (true) {
                const std::size_t start = pos;
                while (pos < s.size() && s[pos] != ',' && s[pos] != ')' &&
                       !std::isspace(static_cast<unsigned char>(s[pos])))
                    ++pos;
                if (pos == start)
                    fail("expected a value");
                f.args.push_back(classify_value(s.substr(start, pos - start)));
                ws();
                if (at(',')) {
                    ++pos;
                    ws();
                    continue;
                }
                break;
            }
        expect(')');
        return f;
    }

    Instance set_literal() {
        expect('{');
        Instance out;
        ws();
        if (!at('}'))
            while (true) {
                out.insert(fact());
                ws();
                if (at(',')) {
                    ++pos;
                    ws();
                    continue;
                }
                break;
            }
        expect('}');
        return out;
    }

    Node expr() {
        ws();
        if (at('{'))
            fail("set literals only appear inside (above ...)");
        if (!at('(')) {
            Node n;
            n.kind = Node::Kind::fact;
            n.fact = fact();
            return n;
        }
        ++pos;
        ws();
        const std::string head = symbol();
        Node n;
        if (head == "and" || head == "or") {
            n.kind = head == "and" ? Node::Kind::conj : Node::Kind::disj;
            ws();
            while (!at(')')) {
                n.kids.push_back(expr());
                ws();
            }
        } else if (head == "not") {
            n.kind = Node::Kind::neg;
            n.kids.push_back(expr());
        } else if (head == "exists") {
            n.kind = Node::Kind::exists;
            ws();
            n.rel = symbol();
        } else if (head == "count-ge") {
            n.kind = Node::Kind::count_ge;
            ws();
            const std::string num = symbol();
            char* end = nullptr;
            n.count = std::strtoull(num.c_str(), &end, 10);
            if (end != num.c_str() + num.size())
                fail("count-ge needs a number, got '" + num + "'");
            ws();
            if (!at(')'))
                n.rel = symbol();
        } else if (head == "above") {
            n.kind = Node::Kind::above;
            ws();
            while (at('{')) {
                n.sets.push_back(set_literal());
                ws();
            }
            if (n.sets.empty())
                fail("above needs at least one {fact,...} set");
        } else {
            fail("unknown form '" + head + "'");
        }
        ws();
        expect(')');
        return n;
    }
};

bool eval_node(const Node& n, const Instance& s) {
    switch (n.kind) {
    case Node::Kind::fact:
        return s.count(n.fact) > 0;
    case Node::Kind::conj:
        for (const Node& k : n.kids)
            if (!eval_node(k, s))
                return false;
        return true;
    case Node::Kind::disj:
        for (const Node& k : n.kids)
            if (eval_node(k, s))
                return true;
        return false;
    case Node::Kind::neg:
        return !eval_node(n.kids.front(), s);
    case Node::Kind::exists:
        for (const Fact& f : s)
            if (f.rel == n.rel)
                return true;
        return false;
    case Node::Kind::count_ge: {
        std::uint64_t c = 0;
        for (const Fact& f : s)
            if (n.rel.empty() || f.rel == n.rel)
                ++c;
        return c >= n.count;
    }
    case Node::Kind::above:
        for (const Instance& t : n.sets)
            if (std::includes(s.begin(), s.end(), t.begin(), t.end()))
                return true;
        return false;
    }
    return false;
}

} // namespace

QueryExpr QueryExpr::parse(const std::string& text) {
    Parser p{text};
    Node root = p.expr();
    p.ws();
    if (p.pos != text.size())
        p.fail("trailing input after expression");
    QueryExpr q;
    q.text_ = text;
    q.root_ = std::make_shared<const Node>(std::move(root));
    return q;
}

bool QueryExpr::eval(const Instance& s) const { return eval_node(*root_, s); }

BoolQuery QueryExpr::fn() const {
    return [root = root_](const Instance& s) { return eval_node(*root, s); };
}

Fact parse_fact_literal(const std::string& text) {
    Parser p{text};
    p.ws();
    Fact f = p.fact();
    p.ws();
    if (p.pos != text.size())
        p.fail("trailing input after fact");
    return f;
}

namespace {

std::set<Tuple> eval_r_gt_10_or_s_not_t(const Instance& s) {
    std::set<Tuple> out;
    for (const Fact& f : s) {
        if (f.args.size() != 1)
            continue;
        if (f.rel == "R" && std::holds_alternative<std::int64_t>(f.args[0]) &&
            std::get<std::int64_t>(f.args[0]) > 10)
            out.insert({f.args[0]});
        if (f.rel == "S" && s.count(Fact{"T", {f.args[0]}}) == 0)
            out.insert({f.args[0]});
    }
    return out;
}

} // namespace

const std::vector<NamedQuery>& named_queries() {
    static const std::vector<NamedQuery> registry = [] {
        std::vector<NamedQuery> r;
        r.push_back({"exists_R", "true once any R fact is present",
                     QueryExpr::parse("(exists R)").fn(), {}});
        r.push_back({"r-without-s", "true when R is nonempty and S is empty",
                     QueryExpr::parse("(and (exists R) (not (exists S)))").fn(), {}});
        r.push_back({"r-gt-10-or-s-not-t",
                     "unary output: x with R(x) and x>10, or S(x) without T(x)",
                     {},
                     eval_r_gt_10_or_s_not_t});
        return r;
    }();
    return registry;
}

DistQuery resolve_bool_query(const std::string& spec) {
    for (const NamedQuery& q : named_queries())
        if (q.name == spec) {
            if (!q.boolean)
                throw input_error("query '" + spec +
                                  "' is set-valued; run it with --per-tuple instead");
            return DistQuery{spec, q.boolean};
        }
    if (spec.find('(') == std::string::npos) {
        std::string names;
        for (const NamedQuery& q : named_queries())
            names += (names.empty() ? "" : ", ") + q.name;
        throw input_error("unknown query '" + spec + "'; known names: " + names +
                          ", or pass an expression like (exists R)");
    }
    QueryExpr q = QueryExpr::parse(spec);
    return DistQuery{spec, q.fn()};
}

ResolvedSetQuery resolve_set_query(const std::string& name, const FactUniverse& u) {
    for (const NamedQuery& q : named_queries())
        if (q.name == name) {
            if (!q.set_valued)
                throw input_error("query '" + name + "' is Boolean, not set-valued");
            ResolvedSetQuery out;
            out.name = name;
            out.eval = q.set_valued;
            // Candidate outputs: every unary R or S value in the universe
            // can appear in the output, nothing else can.
            std::set<Tuple> cand;
            for (const Fact& f : u.facts)
                if (f.args.size() == 1 && (f.rel == "R" || f.rel == "S"))
                    cand.insert({f.args[0]});
            out.candidates.assign(cand.begin(), cand.end());
            return out;
        }
    throw input_error("unknown set-valued query '" + name + "'");
}

} // namespace freeterm
