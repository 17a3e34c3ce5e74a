#pragma once

#include "cforge/value.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace cforge {

enum class Type : std::uint8_t { Boolean, Number };

std::string_view to_string(Type type);

// Node kinds. The declaration order is part of the canonical total order on
// expressions (leaves first, then unary, then binary operators).
enum class Op : std::uint8_t {
    Const,
    False,
    True,
    Atom,
    // unary
    Not,
    Floor,
    Ceil,
    Negate,
    Square,
    // binary, boolean
    And,
    Or,
    Xor,
    Implies,
    // binary, numeric
    Plus,
    Minus,
    Times,
    Div,
    Min,
    Max,
    // comparators
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
};

inline constexpr int kOpCount = static_cast<int>(Op::Gt) + 1;

int arity(Op op);
bool is_leaf(Op op);
bool is_unary(Op op);
bool is_binary(Op op);
bool is_comparator(Op op);
bool is_commutative(Op op);
bool is_idempotent(Op op);
Type operand_type(Op op);
Type result_type(Op op);

// Prefix-notation symbol, e.g. "and", "<=", "*", "neg".
std::string_view symbol(Op op);
std::optional<Op> op_from_symbol(std::string_view text);
// Long name used in signatures and JSON, e.g. "negate", "le", "plus".
std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view text);

// Shared evaluation semantics. Any Undefined operand yields Undefined,
// division by zero and arithmetic overflow yield Undefined.
Value apply_unary(Op op, const Value& a);
Value apply_binary(Op op, const Value& a, const Value& b);

// Immutable, type-checked expression tree with value semantics.
class Expr {
public:
    static Expr atom(std::string name, Type type);
    static Expr constant(Rational value);
    static Expr boolean(bool value);
    static Expr unary(Op op, Expr child);
    static Expr binary(Op op, Expr lhs, Expr rhs);

    Op op() const noexcept { return node_->op; }
    Type type() const noexcept { return node_->type; }
    int complexity() const noexcept { return node_->complexity; }
    int arity() const noexcept { return cforge::arity(node_->op); }
    const std::string& atom_name() const noexcept { return node_->atom; }
    const Rational& constant_value() const noexcept { return node_->constant; }
    Expr child(int i) const { return Expr(node_->children[static_cast<std::size_t>(i)]); }

    std::string to_string() const;
    void collect_atoms(std::set<std::string>& out) const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend int compare(const Expr& a, const Expr& b);

private:
    struct Node {
        Op op = Op::Const;
        Type type = Type::Number;
        int complexity = 1;
        Rational constant{};
        std::string atom;
        std::array<std::shared_ptr<const Node>, 2> children{};
    };

    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

using AtomTypeLookup = std::function<std::optional<Type>(std::string_view)>;
using AtomValueLookup = std::function<Value(std::string_view)>;

// Parses prefix notation, e.g. "(>= min_degree (* 1/2 order))".
// Throws ParseError, UnknownConcept or TypeError.
Expr parse_expression(std::string_view text, const AtomTypeLookup& atom_type);

Value evaluate(const Expr& e, const AtomValueLookup& atom_value);

// Canonical class representative: commutative operands sorted, double
// negation and idempotence removed, constant-only subtrees folded.
Expr canonicalize(const Expr& e);

// Total order on trees used for commutative operand sorting.
int compare(const Expr& a, const Expr& b);

} // namespace cforge
