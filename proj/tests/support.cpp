#include "support.hpp"

#include "cforge/domain.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

namespace oracle {

using cforge::Expr;
using cforge::Op;
using cforge::Type;

bool permutation_hamiltonian(const Graph& g)
{
    int n = g.order();
    if (n < 3)
        return false;
    std::vector<int> rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 1);
    do {
        int prev = 0;
        bool ok = true;
        for (int v : rest) {
            if (!g.has_edge(prev, v)) {
                ok = false;
                break;
            }
            prev = v;
        }
        if (ok && g.has_edge(prev, 0))
            return true;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return false;
}

std::vector<std::vector<int>> longest_paths(const Graph& g)
{
    std::vector<std::vector<int>> best;
    std::size_t best_len = 0;
    std::vector<int> path;
    std::vector<bool> used(static_cast<std::size_t>(g.order()), false);
    std::function<void(int)> dfs = [&](int v) {
        path.push_back(v);
        used[v] = true;
        if (path.size() > best_len) {
            best_len = path.size();
            best.clear();
        }
        if (path.size() == best_len)
            best.push_back(path);
        for (int w = 0; w < g.order(); ++w)
            if (g.has_edge(v, w) && !used[w])
                dfs(w);
        used[v] = false;
        path.pop_back();
    };
    for (int s = 0; s < g.order(); ++s)
        dfs(s);
    return best;
}

namespace {

int best_subset(const Graph& g, bool want_edges)
{
    int n = g.order();
    int best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool ok = true;
        for (int u = 0; u < n && ok; ++u)
            for (int v = u + 1; v < n && ok; ++v)
                if ((mask >> u & 1) && (mask >> v & 1) && g.has_edge(u, v) != want_edges)
                    ok = false;
        if (ok)
            best = std::max(best, __builtin_popcountll(mask));
    }
    return best;
}

} // namespace

int subset_independence(const Graph& g) { return best_subset(g, false); }
int subset_clique(const Graph& g) { return best_subset(g, true); }

std::optional<int> floyd_diameter(const Graph& g)
{
    int n = g.order();
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u == v)
                d[u][v] = 0;
            else if (g.has_edge(u, v))
                d[u][v] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    int diam = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            diam = std::max(diam, d[i][j]);
    if (diam >= inf)
        return std::nullopt;
    return diam;
}

std::optional<int> edge_removal_girth(const Graph& g)
{
    int n = g.order();
    std::optional<int> best;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (!g.has_edge(u, v))
                continue;
            std::vector<int> dist(n, -1);
            std::queue<int> q;
            dist[u] = 0;
            q.push(u);
            while (!q.empty()) {
                int x = q.front();
                q.pop();
                for (int y = 0; y < n; ++y) {
                    if (!g.has_edge(x, y) || dist[y] >= 0 || (x == u && y == v))
                        continue;
                    dist[y] = dist[x] + 1;
                    q.push(y);
                }
            }
            if (dist[v] > 0 && (!best || dist[v] + 1 < *best))
                best = dist[v] + 1;
        }
    return best;
}

Graph graph_from_pair_mask(int n, std::uint64_t mask)
{
    Graph g(n);
    int bit = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
            if (mask >> bit & 1)
                g.add_edge(u, v);
    return g;
}

Graph random_graph(std::mt19937& rng, int n, double p)
{
    std::bernoulli_distribution edge(p);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (edge(rng))
                g.add_edge(u, v);
    return g;
}

Graph petersen()
{
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

std::vector<std::vector<Expr>> brute_force_trees(const cforge::Signature& sig, int max_complexity)
{
    std::vector<std::vector<Expr>> level(static_cast<std::size_t>(max_complexity) + 1);
    for (const auto& a : sig.atoms)
        level[1].push_back(Expr::atom(a.name, a.type));
    for (const auto& c : sig.constants)
        level[1].push_back(Expr::constant(c));
    for (int k = 2; k <= max_complexity; ++k) {
        for (Op op : sig.unary)
            for (const auto& x : level[k - 1])
                if (x.type() == cforge::operand_type(op))
                    level[k].push_back(Expr::unary(op, x));
        for (Op op : sig.binary)
            for (int i = 1; i <= k - 2; ++i)
                for (const auto& x : level[i])
                    for (const auto& y : level[k - 1 - i])
                        if (x.type() == cforge::operand_type(op) && y.type() == cforge::operand_type(op))
                            level[k].push_back(Expr::binary(op, x, y));
    }
    return level;
}

namespace {

bool constant_leaf(const Expr& e) { return e.op() == Op::Const || e.op() == Op::True || e.op() == Op::False; }

Expr fold(const Expr& e)
{
    cforge::Value v = cforge::evaluate(e, [](std::string_view) -> cforge::Value { return cforge::Value::undefined(); });
    if (v.is_number())
        return Expr::constant(v.as_number());
    if (v.is_boolean())
        return Expr::boolean(v.as_bool());
    return e;
}

} // namespace

Expr reference_canonical(const Expr& e)
{
    if (e.arity() == 0)
        return e;
    if (e.arity() == 1) {
        Expr c = reference_canonical(e.child(0));
        Expr out = Expr::unary(e.op(), c);
        if (constant_leaf(c))
            if (Expr f = fold(out); f.arity() == 0)
                return f;
        if ((e.op() == Op::Not || e.op() == Op::Negate) && c.op() == e.op())
            return c.child(0);
        return out;
    }
    Expr a = reference_canonical(e.child(0));
    Expr b = reference_canonical(e.child(1));
    if (constant_leaf(a) && constant_leaf(b))
        if (Expr f = fold(Expr::binary(e.op(), a, b)); f.arity() == 0)
            return f;
    if (cforge::is_commutative(e.op()) && b.to_string() < a.to_string())
        std::swap(a, b);
    if (cforge::is_idempotent(e.op()) && a.to_string() == b.to_string())
        return a;
    return Expr::binary(e.op(), a, b);
}

Completeness check_completeness(const cforge::Signature& sig, int max_complexity)
{
    Completeness out;
    std::set<std::string> reference;
    auto trees = brute_force_trees(sig, max_complexity);
    for (const auto& level : trees)
        for (const auto& t : level)
            reference.insert(reference_canonical(t).to_string());
    out.reference = reference.size();

    std::set<std::string> seen;
    cforge::ExprArena arena;
    cforge::enumerate(arena, sig, max_complexity, [&](cforge::NodeId id) {
        ++out.enumerated;
        std::string key = reference_canonical(arena.materialize(id)).to_string();
        if (!seen.insert(key).second) {
            ++out.duplicates;
            out.example = "duplicate " + arena.to_string(id);
        }
        return true;
    });
    for (const auto& r : reference)
        if (!seen.count(r)) {
            ++out.missing;
            out.example = "missing " + r;
        }
    for (const auto& e : seen)
        if (!reference.count(e)) {
            ++out.extra;
            out.example = "extra " + e;
        }
    return out;
}

} // namespace oracle

namespace fixture {

using namespace cforge;

KnowledgeBase catalog_subset(const std::vector<std::string>& labels)
{
    KnowledgeBase kb(graph_domain());
    for (const auto& label : labels) {
        auto g = catalog_lookup(label);
        if (!g)
            throw std::runtime_error("no catalog graph " + label);
        kb = kb.add_object(MathObject::from_payload(graph_domain(), *g, label, ObjectOrigin::SeedCatalog)).kb;
    }
    return kb;
}

KnowledgeBase kb_with(const std::vector<std::pair<std::string, Graph>>& graphs)
{
    KnowledgeBase kb(graph_domain());
    for (const auto& [label, g] : graphs)
        kb = kb.add_object(MathObject::from_payload(graph_domain(), g, label)).kb;
    return kb;
}

KnowledgeBase random_subcatalog(std::mt19937& rng, std::size_t min_size)
{
    std::vector<std::string> labels;
    for (const auto& e : catalog())
        labels.push_back(e.label);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::uniform_int_distribution<std::size_t> size(min_size, labels.size());
    labels.resize(size(rng));
    return catalog_subset(labels);
}

Signature random_signature(std::mt19937& rng, const KnowledgeBase& kb, ConjectureMode mode, const std::string& target)
{
    bool bound = is_bound_mode(mode);
    Signature sig;
    std::vector<SignatureAtom> pool;
    for (const auto& c : kb.concepts())
        if (c.name != target && (c.kind == ConceptKind::Invariant) == bound)
            pool.push_back({c.name, c.type()});
    std::shuffle(pool.begin(), pool.end(), rng);
    std::uniform_int_distribution<std::size_t> atoms(1, std::min<std::size_t>(pool.size(), 5));
    pool.resize(atoms(rng));
    sig.atoms = pool;
    std::bernoulli_distribution coin(0.5);
    if (bound) {
        std::vector<Op> ops{Op::Plus, Op::Minus, Op::Times, Op::Div, Op::Min, Op::Max};
        std::shuffle(ops.begin(), ops.end(), rng);
        ops.resize(std::uniform_int_distribution<std::size_t>(1, 3)(rng));
        sig.binary = ops;
        if (coin(rng))
            sig.unary.push_back(Op::Floor);
        if (coin(rng))
            sig.constants = Signature::default_constants();
    } else {
        sig.unary = {Op::Not};
        std::vector<Op> ops{Op::And, Op::Or, Op::Xor, Op::Implies};
        std::shuffle(ops.begin(), ops.end(), rng);
        ops.resize(std::uniform_int_distribution<std::size_t>(1, 2)(rng));
        sig.binary = ops;
    }
    return sig;
}

std::optional<MathObject> find_counterexample(std::mt19937& rng, const KnowledgeBase& kb, const Conjecture& c,
                                              int attempts, int max_order)
{
    std::uniform_int_distribution<int> order(1, max_order);
    std::uniform_real_distribution<double> density(0.1, 0.9);
    for (int i = 0; i < attempts; ++i) {
        auto obj = MathObject::from_payload(graph_domain(), oracle::random_graph(rng, order(rng), density(rng)), {},
                                            ObjectOrigin::Counterexample);
        if (claim_value(c, kb, obj).is_false())
            return obj;
    }
    return std::nullopt;
}

Expr random_expression(std::mt19937& rng, const Signature& sig, Type type, int budget)
{
    std::vector<Expr> leaves;
    for (const auto& a : sig.atoms)
        if (a.type == type)
            leaves.push_back(Expr::atom(a.name, a.type));
    if (type == Type::Number)
        for (const auto& c : sig.constants)
            leaves.push_back(Expr::constant(c));
    std::vector<Op> unary, binary;
    for (Op op : sig.unary)
        if (result_type(op) == type)
            unary.push_back(op);
    for (Op op : sig.binary)
        if (result_type(op) == type)
            binary.push_back(op);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int attempt = 0; attempt < 8; ++attempt) {
        int choice = budget <= 1 ? 0 : pick(rng);
        if (choice == 0 && !leaves.empty())
            return leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
        if (choice == 1 && !unary.empty()) {
            Op op = unary[std::uniform_int_distribution<std::size_t>(0, unary.size() - 1)(rng)];
            return Expr::unary(op, random_expression(rng, sig, operand_type(op), budget - 1));
        }
        if (choice == 2 && !binary.empty() && budget >= 3) {
            Op op = binary[std::uniform_int_distribution<std::size_t>(0, binary.size() - 1)(rng)];
            int left = std::uniform_int_distribution<int>(1, budget - 2)(rng);
            return Expr::binary(op, random_expression(rng, sig, operand_type(op), left),
                                random_expression(rng, sig, operand_type(op), budget - 1 - left));
        }
    }
    if (!leaves.empty())
        return leaves.front();
    throw std::runtime_error("signature cannot build the requested type");
}

} // namespace fixture
