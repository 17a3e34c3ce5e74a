#include "cforge/graph.hpp"

#include "cforge/error.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace cforge {

Graph::Graph(int n)
{
    if (n < 1 || n > kMaxOrder)
        throw Error(ErrorCode::MalformedPayload, "graph order must be in 1..64, got " + std::to_string(n));
    rows_.assign(static_cast<std::size_t>(n), 0);
}

int Graph::size() const noexcept
{
    int twice = 0;
    for (auto row : rows_)
        twice += std::popcount(row);
    return twice / 2;
}

void Graph::add_edge(int u, int v)
{
    if (u == v)
        throw Error(ErrorCode::MalformedPayload, "self-loop on vertex " + std::to_string(u));
    rows_[u] |= std::uint64_t{1} << v;
    rows_[v] |= std::uint64_t{1} << u;
}

void Graph::remove_edge(int u, int v)
{
    rows_[u] &= ~(std::uint64_t{1} << v);
    rows_[v] &= ~(std::uint64_t{1} << u);
}

int Graph::degree(int v) const noexcept { return std::popcount(rows_[v]); }

std::uint64_t Graph::vertex_mask() const noexcept
{
    return order() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << order()) - 1;
}

Graph Graph::induced(std::uint64_t vertices) const
{
    std::vector<int> keep;
    for (int v = 0; v < order(); ++v)
        if ((vertices >> v) & 1U)
            keep.push_back(v);
    Graph h(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = i + 1; j < keep.size(); ++j)
            if (has_edge(keep[i], keep[j]))
                h.add_edge(static_cast<int>(i), static_cast<int>(j));
    return h;
}

Graph Graph::relabeled(const std::vector<int>& position_of) const
{
    Graph h(order());
    for (int u = 0; u < order(); ++u)
        for (int v = u + 1; v < order(); ++v)
            if (has_edge(u, v))
                h.add_edge(position_of[u], position_of[v]);
    return h;
}

// graph6: N(n) header, then the upper triangle in column order
// (0,1),(0,2),(1,2),(0,3),... packed 6 bits per byte, each byte offset by 63.
Graph parse_graph6(std::string_view text)
{
    if (text.empty())
        throw Error(ErrorCode::BadHeader, "empty graph6 string", "offset 0");
    auto check_char = [&](std::size_t i) {
        auto c = static_cast<unsigned char>(text[i]);
        if (c < 63 || c > 126)
            throw Error(ErrorCode::CharOutOfRange,
                        "graph6 byte out of range '?'..'~' at offset " + std::to_string(i),
                        "offset " + std::to_string(i));
        return static_cast<int>(c) - 63;
    };

    std::size_t pos = 0;
    long n = 0;
    if (text[0] == '~') {
        if (text.size() >= 2 && text[1] == '~')
            throw Error(ErrorCode::BadHeader, "graph6 orders above 258047 are not supported", "offset 0");
        if (text.size() < 4)
            throw Error(ErrorCode::BadHeader, "truncated graph6 size header", "offset 0");
        for (std::size_t i = 1; i < 4; ++i)
            n = (n << 6) | check_char(i);
        pos = 4;
    }
    else {
        n = check_char(0);
        pos = 1;
    }
    if (n < 1 || n > Graph::kMaxOrder)
        throw Error(ErrorCode::BadHeader,
                    "graph6 order " + std::to_string(n) + " outside supported range 1..64", "offset 0");

    const std::size_t bits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    const std::size_t expected = pos + (bits + 5) / 6;
    if (text.size() != expected) {
        auto offset = std::min(text.size(), expected);
        throw Error(ErrorCode::BadLength,
                    "graph6 length " + std::to_string(text.size()) + ", expected " + std::to_string(expected),
                    "offset " + std::to_string(offset));
    }

    Graph g(static_cast<int>(n));
    std::size_t bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            std::size_t at = pos + bit / 6;
            int chunk = check_char(at);
            if ((chunk >> (5 - bit % 6)) & 1)
                g.add_edge(i, j);
        }
    }
    for (std::size_t at = pos + bit / 6; at < text.size(); ++at)
        check_char(at);
    return g;
}

std::string to_graph6(const Graph& g)
{
    const int n = g.order();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(63 + n));
    }
    else {
        out.push_back('~');
        out.push_back(static_cast<char>(63 + ((n >> 12) & 63)));
        out.push_back(static_cast<char>(63 + ((n >> 6) & 63)));
        out.push_back(static_cast<char>(63 + (n & 63)));
    }
    int chunk = 0;
    int filled = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            chunk = (chunk << 1) | (g.has_edge(i, j) ? 1 : 0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(63 + chunk));
                chunk = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0)
        out.push_back(static_cast<char>(63 + (chunk << (6 - filled))));
    return out;
}

namespace {

// Branch-and-bound search for the lexicographically smallest column-order
// bit string over all vertex orderings. Column j only depends on the
// vertices placed at positions 0..j, so a prefix that already exceeds the
// best is cut. Unplaced twins (same neighbourhood apart from each other)
// are swapped by an automorphism fixing the prefix, so only one is tried.
class MinimumLabeling {
public:
    explicit MinimumLabeling(const Graph& g) : g_(g), n_(g.order())
    {
        placed_.reserve(static_cast<std::size_t>(n_));
        current_.assign(static_cast<std::size_t>(n_), 0);
    }

    std::vector<int> run()
    {
        search(0, 0);
        return best_order_;
    }

private:
    // Column j packed MSB-first: bit for position 0 is the highest.
    std::uint64_t column_for(int v, int j) const
    {
        std::uint64_t col = 0;
        for (int i = 0; i < j; ++i)
            col = (col << 1) | (g_.has_edge(placed_[i], v) ? 1U : 0U);
        return col;
    }

    bool twins(int u, int v) const
    {
        std::uint64_t mu = g_.neighbors(u) & ~(std::uint64_t{1} << v);
        std::uint64_t mv = g_.neighbors(v) & ~(std::uint64_t{1} << u);
        return mu == mv;
    }

    // -1, 0, +1 comparing current_[0..j) with best_[0..j).
    int compare_prefix(int j) const
    {
        for (int i = 0; i < j; ++i)
            if (current_[i] != best_[i])
                return current_[i] < best_[i] ? -1 : 1;
        return 0;
    }

    void search(int j, std::uint64_t used)
    {
        if (j == n_) {
            if (best_order_.empty() || compare_prefix(n_) < 0) {
                best_ = current_;
                best_order_ = placed_;
            }
            return;
        }
        std::vector<int> tried;
        for (int v = 0; v < n_; ++v) {
            if ((used >> v) & 1U)
                continue;
            if (std::any_of(tried.begin(), tried.end(), [&](int t) { return twins(t, v); }))
                continue;
            tried.push_back(v);

            current_[j] = column_for(v, j);
            if (!best_order_.empty() && compare_prefix(j + 1) > 0)
                continue;
            placed_.push_back(v);
            search(j + 1, used | (std::uint64_t{1} << v));
            placed_.pop_back();
        }
    }

    const Graph& g_;
    int n_;
    std::vector<int> placed_;
    std::vector<std::uint64_t> current_;
    std::vector<std::uint64_t> best_;
    std::vector<int> best_order_;
};

} // namespace

std::string canonical_certificate(const Graph& g)
{
    if (g.order() > kCanonicalLabelingMaxOrder)
        return "raw:" + to_graph6(g);
    auto order = MinimumLabeling(g).run();
    std::vector<int> position_of(static_cast<std::size_t>(g.order()));
    for (int pos = 0; pos < g.order(); ++pos)
        position_of[order[pos]] = pos;
    return "min:" + to_graph6(g.relabeled(position_of));
}

} // namespace cforge
