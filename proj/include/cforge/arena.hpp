#pragma once

#include "cforge/expr.hpp"

#include <absl/container/flat_hash_map.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cforge {

using NodeId = std::uint32_t;

struct ArenaNode {
    Op op;
    Type type;
    std::uint16_t complexity;
    // Smallest raw tree size at which the enumerator first produced this
    // node. Equals complexity except for folded constants.
    std::uint16_t level;
    // Children for operators, atom or constant index for leaves.
    std::uint32_t a;
    std::uint32_t b;
};

// Hash-consed store of canonical expression nodes. Every id handed out is a
// canonical class representative, so structural equality is id equality.
class ExprArena {
public:
    struct Made {
        NodeId id;
        bool fresh;
    };

    ExprArena();

    const ArenaNode& node(NodeId id) const noexcept { return nodes_[id]; }
    std::size_t size() const noexcept { return nodes_.size(); }

    Made atom(std::string_view name, Type type, int level = 1);
    Made constant(const Rational& value, int level = 1);
    Made boolean(bool value, int level = 1);

    // Canonicalizing constructors. Operands must already be ids of this arena.
    Made unary(Op op, NodeId x, int level = 0);
    Made binary(Op op, NodeId x, NodeId y, int level = 0);

    // Interns a whole tree bottom-up; the result is its canonical form.
    NodeId import(const Expr& e);
    Expr materialize(NodeId id) const;
    std::string to_string(NodeId id) const;

    const std::string& atom_name(NodeId id) const { return atoms_[nodes_[id].a]; }
    const Rational& constant_value(NodeId id) const { return constants_[nodes_[id].a]; }
    const std::vector<std::string>& atom_names() const noexcept { return atoms_; }
    bool is_constant_leaf(NodeId id) const noexcept;

    // Same total order as compare(Expr, Expr).
    int compare(NodeId x, NodeId y) const;

    void reserve(std::size_t nodes);

private:
    Made intern(Op op, Type type, int complexity, int level, std::uint32_t a, std::uint32_t b);
    Value leaf_value(NodeId id) const;
    Made fold(const Value& v, int level);
    void write(NodeId id, std::string& out) const;

    std::vector<ArenaNode> nodes_;
    absl::flat_hash_map<std::uint64_t, NodeId> index_;
    std::vector<std::string> atoms_;
    absl::flat_hash_map<std::string, std::uint32_t> atom_index_;
    std::vector<Rational> constants_;
    absl::flat_hash_map<std::pair<std::int64_t, std::int64_t>, std::uint32_t> constant_index_;
};

// Evaluates arena nodes over a fixed list of objects, one value per object.
// Values of reused subexpressions are cached up to a memory budget.
class ArenaEvaluator {
public:
    using Column = std::vector<Value>;
    using AtomColumn = std::function<Column(std::string_view name)>;

    ArenaEvaluator(const ExprArena& arena, std::size_t objects, AtomColumn atom_column,
                   std::size_t budget_bytes = std::size_t{256} << 20);

    // Nodes at or above this level are computed on demand and not cached.
    void set_cache_level_limit(int level) noexcept { cache_level_limit_ = level; }

    // The reference stays valid until the next call.
    const Column& column(NodeId id);

    std::size_t objects() const noexcept { return objects_; }

private:
    const Column& compute(NodeId id, std::size_t depth, int slot);
    Column& scratch(std::size_t depth, int slot);

    const ExprArena& arena_;
    std::size_t objects_;
    AtomColumn atom_column_;
    std::size_t budget_;
    std::size_t used_ = 0;
    int cache_level_limit_ = 1 << 15;
    std::vector<std::unique_ptr<Column>> cache_;
    std::vector<std::array<Column, 2>> scratch_;
};

} // namespace cforge
