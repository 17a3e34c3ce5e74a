#pragma once

#include "cforge/concept.hpp"
#include "cforge/graph.hpp"
#include "cforge/value.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace cforge {

// Concepts whose cost grows exponentially refuse graphs above this order.
inline constexpr int kExponentialConceptMaxOrder = 16;

int min_degree(const Graph& g);
int max_degree(const Graph& g);
bool is_connected(const Graph& g);
bool is_biconnected(const Graph& g);
bool is_regular(const Graph& g);
bool is_bipartite(const Graph& g);
bool is_hamiltonian(const Graph& g);
int independence_number(const Graph& g);
int clique_number(const Graph& g);
std::optional<int> diameter(const Graph& g);
std::optional<int> radius(const Graph& g);
std::optional<int> girth(const Graph& g);

// n >= 3 and every vertex has degree at least n/2.
bool dirac_condition(const Graph& g);

// Number of vertices on a longest path.
int longest_path_order(const Graph& g);

// For every maximum-length path, the subgraph induced by its vertices has a
// Hamiltonian cycle.
bool longest_path_induced_hamiltonian(const Graph& g);

// Every maximum-length path visits all vertices.
bool longest_paths_span(const Graph& g);

std::span<const ConceptInfo> graph_concepts();

// Throws UnknownConcept or SizeCapExceeded.
Value eval_graph_concept(std::string_view name, const Graph& g);

} // namespace cforge
