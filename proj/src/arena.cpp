#include "cforge/arena.hpp"

#include "cforge/error.hpp"

#include <algorithm>
#include <limits>

namespace cforge {

namespace {

constexpr std::uint64_t kFieldMask = (std::uint64_t{1} << 29) - 1;

std::uint64_t pack(Op op, std::uint32_t a, std::uint32_t b)
{
    return (static_cast<std::uint64_t>(op) << 58) | ((a & kFieldMask) << 29) | (b & kFieldMask);
}

int three_way(auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); }

} // namespace

ExprArena::ExprArena() { index_.reserve(1024); }

void ExprArena::reserve(std::size_t nodes)
{
    nodes_.reserve(nodes);
    index_.reserve(nodes);
}

ExprArena::Made ExprArena::intern(Op op, Type type, int complexity, int level, std::uint32_t a, std::uint32_t b)
{
    auto [it, inserted] = index_.try_emplace(pack(op, a, b), static_cast<NodeId>(nodes_.size()));
    if (!inserted)
        return {it->second, false};
    if (nodes_.size() > kFieldMask)
        throw Error(ErrorCode::InvalidArgument, "expression arena is full");
    nodes_.push_back(ArenaNode{op, type, static_cast<std::uint16_t>(std::min(complexity, 0xFFFF)),
                               static_cast<std::uint16_t>(std::clamp(level, 0, 0xFFFF)), a, b});
    return {it->second, true};
}

ExprArena::Made ExprArena::atom(std::string_view name, Type type, int level)
{
    auto [it, inserted] = atom_index_.try_emplace(std::string(name), static_cast<std::uint32_t>(atoms_.size()));
    if (inserted)
        atoms_.emplace_back(name);
    auto made = intern(Op::Atom, type, 1, level, it->second, 0);
    if (nodes_[made.id].type != type)
        throw Error(ErrorCode::TypeError, "atom '" + std::string(name) + "' used with two types");
    return made;
}

ExprArena::Made ExprArena::constant(const Rational& value, int level)
{
    auto [it, inserted] =
        constant_index_.try_emplace(std::pair{value.num(), value.den()}, static_cast<std::uint32_t>(constants_.size()));
    if (inserted)
        constants_.push_back(value);
    return intern(Op::Const, Type::Number, 1, level, it->second, 0);
}

ExprArena::Made ExprArena::boolean(bool value, int level)
{
    return intern(value ? Op::True : Op::False, Type::Boolean, 1, level, 0, 0);
}

bool ExprArena::is_constant_leaf(NodeId id) const noexcept
{
    auto op = nodes_[id].op;
    return op == Op::Const || op == Op::True || op == Op::False;
}

Value ExprArena::leaf_value(NodeId id) const
{
    switch (nodes_[id].op) {
    case Op::Const:
        return Value::number(constants_[nodes_[id].a]);
    case Op::True:
        return Value::boolean(true);
    case Op::False:
        return Value::boolean(false);
    default:
        return Value::undefined();
    }
}

ExprArena::Made ExprArena::fold(const Value& v, int level)
{
    if (v.is_boolean())
        return boolean(v.as_bool(), level);
    return constant(v.as_number(), level);
}

ExprArena::Made ExprArena::unary(Op op, NodeId x, int level)
{
    const ArenaNode& child = nodes_[x];
    if (!is_unary(op) || child.type != operand_type(op))
        throw Error(ErrorCode::TypeError, "ill-typed operand for " + std::string(op_name(op)));
    if (is_constant_leaf(x)) {
        Value v = apply_unary(op, leaf_value(x));
        if (!v.is_undefined())
            return fold(v, level);
    }
    if ((op == Op::Not || op == Op::Negate) && child.op == op)
        return {child.a, false};
    return intern(op, result_type(op), 1 + child.complexity, level, x, 0);
}

ExprArena::Made ExprArena::binary(Op op, NodeId x, NodeId y, int level)
{
    if (!is_binary(op) || nodes_[x].type != operand_type(op) || nodes_[y].type != operand_type(op))
        throw Error(ErrorCode::TypeError, "ill-typed operands for " + std::string(op_name(op)));
    if (is_constant_leaf(x) && is_constant_leaf(y)) {
        Value v = apply_binary(op, leaf_value(x), leaf_value(y));
        if (!v.is_undefined())
            return fold(v, level);
    }
    if (is_commutative(op) && compare(y, x) < 0)
        std::swap(x, y);
    if (x == y && is_idempotent(op))
        return {x, false};
    return intern(op, result_type(op), 1 + nodes_[x].complexity + nodes_[y].complexity, level, x, y);
}

int ExprArena::compare(NodeId x, NodeId y) const
{
    if (x == y)
        return 0;
    const ArenaNode& p = nodes_[x];
    const ArenaNode& q = nodes_[y];
    if (p.complexity != q.complexity)
        return three_way(p.complexity, q.complexity);
    if (p.op != q.op)
        return three_way(p.op, q.op);
    switch (p.op) {
    case Op::Const:
        return three_way(constants_[p.a], constants_[q.a]);
    case Op::Atom:
        return three_way(atoms_[p.a], atoms_[q.a]);
    case Op::True:
    case Op::False:
        return 0;
    default:
        break;
    }
    if (int c = compare(p.a, q.a); c != 0)
        return c;
    return is_binary(p.op) ? compare(p.b, q.b) : 0;
}

NodeId ExprArena::import(const Expr& e)
{
    switch (e.op()) {
    case Op::Const:
        return constant(e.constant_value(), 1).id;
    case Op::True:
        return boolean(true, 1).id;
    case Op::False:
        return boolean(false, 1).id;
    case Op::Atom:
        return atom(e.atom_name(), e.type(), 1).id;
    default:
        break;
    }
    if (e.arity() == 1) {
        NodeId x = import(e.child(0));
        return unary(e.op(), x, 1 + nodes_[x].level).id;
    }
    NodeId x = import(e.child(0));
    NodeId y = import(e.child(1));
    return binary(e.op(), x, y, 1 + nodes_[x].level + nodes_[y].level).id;
}

Expr ExprArena::materialize(NodeId id) const
{
    const ArenaNode& n = nodes_[id];
    switch (n.op) {
    case Op::Const:
        return Expr::constant(constants_[n.a]);
    case Op::True:
        return Expr::boolean(true);
    case Op::False:
        return Expr::boolean(false);
    case Op::Atom:
        return Expr::atom(atoms_[n.a], n.type);
    default:
        break;
    }
    if (is_unary(n.op))
        return Expr::unary(n.op, materialize(n.a));
    return Expr::binary(n.op, materialize(n.a), materialize(n.b));
}

void ExprArena::write(NodeId id, std::string& out) const
{
    const ArenaNode& n = nodes_[id];
    switch (n.op) {
    case Op::Const:
        out += constants_[n.a].to_string();
        return;
    case Op::Atom:
        out += atoms_[n.a];
        return;
    case Op::True:
    case Op::False:
        out += symbol(n.op);
        return;
    default:
        break;
    }
    out += '(';
    out += symbol(n.op);
    out += ' ';
    write(n.a, out);
    if (is_binary(n.op)) {
        out += ' ';
        write(n.b, out);
    }
    out += ')';
}

std::string ExprArena::to_string(NodeId id) const
{
    std::string out;
    write(id, out);
    return out;
}

Expr canonicalize(const Expr& e)
{
    ExprArena arena;
    return arena.materialize(arena.import(e));
}

ArenaEvaluator::ArenaEvaluator(const ExprArena& arena, std::size_t objects, AtomColumn atom_column,
                               std::size_t budget_bytes)
    : arena_(arena), objects_(objects), atom_column_(std::move(atom_column)), budget_(budget_bytes)
{
}

ArenaEvaluator::Column& ArenaEvaluator::scratch(std::size_t depth, int slot)
{
    Column& c = scratch_[depth][static_cast<std::size_t>(slot)];
    c.resize(objects_);
    return c;
}

const ArenaEvaluator::Column& ArenaEvaluator::column(NodeId id)
{
    if (scratch_.size() < arena_.node(id).complexity + 2U)
        scratch_.resize(arena_.node(id).complexity + 2U);
    return compute(id, 0, 0);
}

const ArenaEvaluator::Column& ArenaEvaluator::compute(NodeId id, std::size_t depth, int slot)
{
    if (id < cache_.size() && cache_[id])
        return *cache_[id];
    const ArenaNode& n = arena_.node(id);
    bool always_cache = false;
    Column* out = nullptr;
    switch (n.op) {
    case Op::Atom: {
        always_cache = true;
        out = &scratch(depth, slot);
        *out = atom_column_(arena_.atom_name(id));
        if (out->size() != objects_)
            throw Error(ErrorCode::InvalidArgument, "atom column has the wrong length");
        break;
    }
    case Op::Const:
    case Op::True:
    case Op::False: {
        always_cache = true;
        out = &scratch(depth, slot);
        Value v = n.op == Op::Const ? Value::number(arena_.constant_value(id)) : Value::boolean(n.op == Op::True);
        std::fill(out->begin(), out->end(), v);
        break;
    }
    default: {
        const Column& x = compute(n.a, depth + 1, 0);
        out = &scratch(depth, slot);
        if (is_unary(n.op)) {
            for (std::size_t i = 0; i < objects_; ++i)
                (*out)[i] = apply_unary(n.op, x[i]);
        } else {
            const Column& y = compute(n.b, depth + 1, 1);
            for (std::size_t i = 0; i < objects_; ++i)
                (*out)[i] = apply_binary(n.op, x[i], y[i]);
        }
        break;
    }
    }
    std::size_t bytes = objects_ * sizeof(Value) + sizeof(Column);
    if (always_cache || (n.level < cache_level_limit_ && used_ + bytes <= budget_)) {
        if (cache_.size() <= id)
            cache_.resize(std::max<std::size_t>(arena_.size(), id + 1));
        cache_[id] = std::make_unique<Column>(std::move(*out));
        used_ += bytes;
        return *cache_[id];
    }
    return *out;
}

} // namespace cforge
