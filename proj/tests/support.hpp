#pragma once

#include "cforge/catalog.hpp"
#include "cforge/dalmatian.hpp"
#include "cforge/enumerate.hpp"
#include "cforge/expr.hpp"
#include "cforge/graph.hpp"
#include "cforge/kb.hpp"

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using cforge::Graph;

// Tries every cyclic vertex order; needs n >= 3.
bool permutation_hamiltonian(const Graph& g);

// Every maximum-vertex path, as vertex sequences, by plain DFS from each start.
std::vector<std::vector<int>> longest_paths(const Graph& g);

// Largest vertex subset with no internal edge, by subset enumeration.
int subset_independence(const Graph& g);
int subset_clique(const Graph& g);

// Floyd–Warshall eccentricities; nullopt when disconnected.
std::optional<int> floyd_diameter(const Graph& g);
// Shortest cycle via edge removal and BFS; nullopt when acyclic.
std::optional<int> edge_removal_girth(const Graph& g);

// Graph on n vertices whose edges follow the bits of `mask` over pairs (u<v).
Graph graph_from_pair_mask(int n, std::uint64_t mask);
Graph random_graph(std::mt19937& rng, int n, double p);

// Rebuilds the standard Petersen graph from its outer cycle, spokes and pentagram.
Graph petersen();

// Every type-correct tree with exactly k nodes, for k = 1..max (index 0 unused).
std::vector<std::vector<cforge::Expr>> brute_force_trees(const cforge::Signature& sig, int max_complexity);

// Rewrite closure: constant folding, double negation/negation, commutative
// ordering by printed text, idempotence. Independent of the library's order.
cforge::Expr reference_canonical(const cforge::Expr& e);

struct Completeness {
    std::size_t enumerated = 0;
    std::size_t reference = 0;
    // Enumerated expressions that share a reference class with an earlier one.
    std::size_t duplicates = 0;
    std::size_t missing = 0;
    std::size_t extra = 0;
    std::string example;

    bool ok() const { return duplicates == 0 && missing == 0 && extra == 0; }
};

// Compares the enumerator's output with the reference closure of all trees.
Completeness check_completeness(const cforge::Signature& sig, int max_complexity);

} // namespace oracle

namespace fixture {

// KB holding the named catalog graphs in the given order.
cforge::KnowledgeBase catalog_subset(const std::vector<std::string>& labels);
cforge::KnowledgeBase kb_with(const std::vector<std::pair<std::string, cforge::Graph>>& graphs);

// Random sub-catalog of at least `min_size` objects.
cforge::KnowledgeBase random_subcatalog(std::mt19937& rng, std::size_t min_size);

// Random signature for `mode` over concepts of the KB.
cforge::Signature random_signature(std::mt19937& rng, const cforge::KnowledgeBase& kb, cforge::ConjectureMode mode,
                                   const std::string& target);

// Random graph on 1..max_order vertices violating the conjecture's claim.
std::optional<cforge::MathObject> find_counterexample(std::mt19937& rng, const cforge::KnowledgeBase& kb,
                                                      const cforge::Conjecture& c, int attempts = 4000,
                                                      int max_order = 9);

cforge::Expr random_expression(std::mt19937& rng, const cforge::Signature& sig, cforge::Type type, int budget);

} // namespace fixture
