#include "cforge/graph_concepts.hpp"

#include "cforge/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <vector>

namespace cforge {

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(int v) { return Mask{1} << v; }

void require_small(const Graph& g, std::string_view concept_name)
{
    if (g.order() > kExponentialConceptMaxOrder)
        throw Error(ErrorCode::SizeCapExceeded,
                    std::string(concept_name) + " is limited to graphs with at most " +
                        std::to_string(kExponentialConceptMaxOrder) + " vertices (got " +
                        std::to_string(g.order()) + ")");
}

// Vertices reachable from `start` inside `allowed`.
Mask reachable(const Graph& g, int start, Mask allowed)
{
    Mask seen = bit(start);
    Mask frontier = seen;
    while (frontier) {
        Mask next = 0;
        for (Mask f = frontier; f; f &= f - 1)
            next |= g.neighbors(std::countr_zero(f));
        next &= allowed & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen;
}

// Eccentricities by bitset BFS; nullopt if disconnected.
std::optional<std::vector<int>> eccentricities(const Graph& g)
{
    const Mask all = g.vertex_mask();
    std::vector<int> ecc(static_cast<std::size_t>(g.order()));
    for (int s = 0; s < g.order(); ++s) {
        Mask seen = bit(s);
        Mask frontier = seen;
        int depth = 0;
        while (true) {
            Mask next = 0;
            for (Mask f = frontier; f; f &= f - 1)
                next |= g.neighbors(std::countr_zero(f));
            next &= ~seen;
            if (!next)
                break;
            seen |= next;
            frontier = next;
            ++depth;
        }
        if (seen != all)
            return std::nullopt;
        ecc[static_cast<std::size_t>(s)] = depth;
    }
    return ecc;
}

// Held-Karp over vertex subsets of an order <= 16 graph.
// paths[mask] holds the end vertices of simple paths that visit exactly `mask`.
std::vector<std::uint16_t> path_table(const Graph& g, bool from_first_only)
{
    const int n = g.order();
    std::vector<std::uint16_t> paths(std::size_t{1} << n, 0);
    if (from_first_only)
        paths[1] = 1;
    else
        for (int v = 0; v < n; ++v)
            paths[std::size_t{1} << v] = static_cast<std::uint16_t>(1U << v);
    for (std::size_t mask = 1; mask < paths.size(); ++mask) {
        const Mask ends = paths[mask];
        if (!ends)
            continue;
        for (int u = 0; u < n; ++u) {
            if ((mask >> u) & 1U)
                continue;
            if (g.neighbors(u) & ends)
                paths[mask | (std::size_t{1} << u)] |= static_cast<std::uint16_t>(1U << u);
        }
    }
    return paths;
}

bool hamiltonian_small(const Graph& g)
{
    const int n = g.order();
    if (n < 3)
        return false;
    auto paths = path_table(g, true);
    return (paths.back() & g.neighbors(0) & ~Mask{1}) != 0;
}

int max_independent(const Graph& g, Mask candidates)
{
    if (!candidates)
        return 0;
    // Vertices of degree <= 1 inside the candidate set can always be taken.
    for (Mask c = candidates; c; c &= c - 1) {
        int v = std::countr_zero(c);
        if (std::popcount(g.neighbors(v) & candidates) <= 1)
            return 1 + max_independent(g, candidates & ~(g.neighbors(v) | bit(v)));
    }
    int v = std::countr_zero(candidates);
    int best = max_independent(g, candidates & ~bit(v));
    return std::max(best, 1 + max_independent(g, candidates & ~(g.neighbors(v) | bit(v))));
}

void max_clique(const Graph& g, Mask candidates, int size, int& best)
{
    if (!candidates) {
        best = std::max(best, size);
        return;
    }
    while (candidates) {
        if (size + std::popcount(candidates) <= best)
            return;
        int v = std::countr_zero(candidates);
        candidates &= ~bit(v);
        max_clique(g, candidates & g.neighbors(v), size + 1, best);
    }
    best = std::max(best, size);
}

} // namespace

int min_degree(const Graph& g)
{
    int d = g.order();
    for (int v = 0; v < g.order(); ++v)
        d = std::min(d, g.degree(v));
    return d;
}

int max_degree(const Graph& g)
{
    int d = 0;
    for (int v = 0; v < g.order(); ++v)
        d = std::max(d, g.degree(v));
    return d;
}

bool is_connected(const Graph& g) { return reachable(g, 0, g.vertex_mask()) == g.vertex_mask(); }

bool is_biconnected(const Graph& g)
{
    if (g.order() < 3 || !is_connected(g))
        return false;
    const Mask all = g.vertex_mask();
    for (int cut = 0; cut < g.order(); ++cut) {
        Mask rest = all & ~bit(cut);
        if (reachable(g, std::countr_zero(rest), rest) != rest)
            return false;
    }
    return true;
}

bool is_regular(const Graph& g) { return min_degree(g) == max_degree(g); }

bool is_bipartite(const Graph& g)
{
    const int n = g.order();
    std::vector<int> colour(static_cast<std::size_t>(n), -1);
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        if (colour[s] >= 0)
            continue;
        colour[s] = 0;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            for (Mask nb = g.neighbors(u); nb; nb &= nb - 1) {
                int v = std::countr_zero(nb);
                if (colour[v] < 0) {
                    colour[v] = 1 - colour[u];
                    queue.push_back(v);
                }
                else if (colour[v] == colour[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool is_hamiltonian(const Graph& g)
{
    require_small(g, "is_hamiltonian");
    return hamiltonian_small(g);
}

int independence_number(const Graph& g)
{
    require_small(g, "independence_number");
    return max_independent(g, g.vertex_mask());
}

int clique_number(const Graph& g)
{
    int best = 0;
    max_clique(g, g.vertex_mask(), 0, best);
    return best;
}

std::optional<int> diameter(const Graph& g)
{
    auto ecc = eccentricities(g);
    if (!ecc)
        return std::nullopt;
    return *std::max_element(ecc->begin(), ecc->end());
}

std::optional<int> radius(const Graph& g)
{
    auto ecc = eccentricities(g);
    if (!ecc)
        return std::nullopt;
    return *std::min_element(ecc->begin(), ecc->end());
}

std::optional<int> girth(const Graph& g)
{
    const int n = g.order();
    int best = n + 1;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        parent[s] = -1;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            for (Mask nb = g.neighbors(u); nb; nb &= nb - 1) {
                int v = std::countr_zero(nb);
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                }
                else if (parent[u] != v) {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    if (best > n)
        return std::nullopt;
    return best;
}

bool dirac_condition(const Graph& g) { return g.order() >= 3 && 2 * min_degree(g) >= g.order(); }

int longest_path_order(const Graph& g)
{
    require_small(g, "longest path concepts");
    auto paths = path_table(g, false);
    int best = 0;
    for (std::size_t mask = 1; mask < paths.size(); ++mask)
        if (paths[mask])
            best = std::max(best, std::popcount(mask));
    return best;
}

bool longest_path_induced_hamiltonian(const Graph& g)
{
    require_small(g, "longest_path_induced_hamiltonian");
    auto paths = path_table(g, false);
    int best = 0;
    for (std::size_t mask = 1; mask < paths.size(); ++mask)
        if (paths[mask])
            best = std::max(best, std::popcount(mask));
    for (std::size_t mask = 1; mask < paths.size(); ++mask) {
        if (!paths[mask] || std::popcount(mask) != best)
            continue;
        if (!hamiltonian_small(g.induced(mask)))
            return false;
    }
    return true;
}

bool longest_paths_span(const Graph& g)
{
    // All longest paths share one length, so they span exactly when that
    // length reaches the order.
    return longest_path_order(g) == g.order();
}

std::span<const ConceptInfo> graph_concepts()
{
    static const std::array<ConceptInfo, 17> concepts{{
        {"order", ConceptKind::Invariant, "the number of vertices of x"},
        {"size", ConceptKind::Invariant, "the number of edges of x"},
        {"min_degree", ConceptKind::Invariant, "the minimum degree of x"},
        {"max_degree", ConceptKind::Invariant, "the maximum degree of x"},
        {"independence_number", ConceptKind::Invariant, "the independence number of x"},
        {"clique_number", ConceptKind::Invariant, "the clique number of x"},
        {"diameter", ConceptKind::Invariant, "the diameter of x"},
        {"radius", ConceptKind::Invariant, "the radius of x"},
        {"girth", ConceptKind::Invariant, "the girth of x"},
        {"is_connected", ConceptKind::Property, "x is connected"},
        {"is_biconnected", ConceptKind::Property, "x is 2-connected"},
        {"is_regular", ConceptKind::Property, "x is regular"},
        {"is_bipartite", ConceptKind::Property, "x is bipartite"},
        {"is_hamiltonian", ConceptKind::Property, "x has a Hamiltonian cycle"},
        {"dirac_condition", ConceptKind::Property,
         "x has at least 3 vertices and each vertex of x is adjacent to at least half of the vertices of x"},
        {"longest_path_induced_hamiltonian", ConceptKind::Property,
         "for each longest path of x, the subgraph of x induced on the vertices of that path has a Hamiltonian "
         "cycle"},
        {"longest_paths_span", ConceptKind::Property, "each longest path of x passes through every vertex of x"},
    }};
    return concepts;
}

Value eval_graph_concept(std::string_view name, const Graph& g)
{
    using Eval = std::function<Value(const Graph&)>;
    auto number = [](int v) { return Value::number(Rational{v}); };
    auto maybe = [](std::optional<int> v) { return v ? Value::number(Rational{*v}) : Value::undefined(); };
    static const std::array<std::pair<std::string_view, Eval>, 17> table{{
        {"order", [=](const Graph& x) { return number(x.order()); }},
        {"size", [=](const Graph& x) { return number(x.size()); }},
        {"min_degree", [=](const Graph& x) { return number(min_degree(x)); }},
        {"max_degree", [=](const Graph& x) { return number(max_degree(x)); }},
        {"independence_number", [=](const Graph& x) { return number(independence_number(x)); }},
        {"clique_number", [=](const Graph& x) { return number(clique_number(x)); }},
        {"diameter", [=](const Graph& x) { return maybe(diameter(x)); }},
        {"radius", [=](const Graph& x) { return maybe(radius(x)); }},
        {"girth", [=](const Graph& x) { return maybe(girth(x)); }},
        {"is_connected", [](const Graph& x) { return Value::boolean(is_connected(x)); }},
        {"is_biconnected", [](const Graph& x) { return Value::boolean(is_biconnected(x)); }},
        {"is_regular", [](const Graph& x) { return Value::boolean(is_regular(x)); }},
        {"is_bipartite", [](const Graph& x) { return Value::boolean(is_bipartite(x)); }},
        {"is_hamiltonian", [](const Graph& x) { return Value::boolean(is_hamiltonian(x)); }},
        {"dirac_condition", [](const Graph& x) { return Value::boolean(dirac_condition(x)); }},
        {"longest_path_induced_hamiltonian",
         [](const Graph& x) { return Value::boolean(longest_path_induced_hamiltonian(x)); }},
        {"longest_paths_span", [](const Graph& x) { return Value::boolean(longest_paths_span(x)); }},
    }};
    for (const auto& [key, eval] : table)
        if (key == name)
            return eval(g);
    throw Error(ErrorCode::UnknownConcept, "unknown graph concept '" + std::string(name) + "'");
}

} // namespace cforge
