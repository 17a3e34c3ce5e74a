#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cforge {

// Simple undirected graph on 1..64 vertices, adjacency stored as bitset rows.
class Graph {
public:
    static constexpr int kMaxOrder = 64;

    explicit Graph(int n);

    int order() const noexcept { return static_cast<int>(rows_.size()); }
    int size() const noexcept;

    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    bool has_edge(int u, int v) const noexcept { return (rows_[u] >> v) & 1U; }
    std::uint64_t neighbors(int v) const noexcept { return rows_[v]; }
    int degree(int v) const noexcept;

    // All-vertices mask for this order.
    std::uint64_t vertex_mask() const noexcept;

    Graph induced(std::uint64_t vertices) const;
    Graph relabeled(const std::vector<int>& position_of) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::uint64_t> rows_;
};

Graph parse_graph6(std::string_view text);
std::string to_graph6(const Graph& g);

// Dedup certificate: minimum graph6 encoding over all vertex orderings for
// n <= 10, exact encoding above that.
std::string canonical_certificate(const Graph& g);

inline constexpr int kCanonicalLabelingMaxOrder = 10;

} // namespace cforge
