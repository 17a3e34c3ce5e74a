#include "cforge/expr.hpp"

#include "cforge/error.hpp"

#include <cctype>
#include <vector>

namespace cforge {

namespace {

struct OpInfo {
    std::string_view symbol;
    std::string_view name;
    int arity;
    Type operand;
    Type result;
    bool commutative;
    bool idempotent;
};

constexpr auto B = Type::Boolean;
constexpr auto N = Type::Number;

constexpr std::array<OpInfo, kOpCount> kOps{{
    {"", "const", 0, N, N, false, false},
    {"false", "false", 0, B, B, false, false},
    {"true", "true", 0, B, B, false, false},
    {"", "atom", 0, N, N, false, false},
    {"not", "not", 1, B, B, false, false},
    {"floor", "floor", 1, N, N, false, false},
    {"ceil", "ceil", 1, N, N, false, false},
    {"neg", "negate", 1, N, N, false, false},
    {"square", "square", 1, N, N, false, false},
    {"and", "and", 2, B, B, true, true},
    {"or", "or", 2, B, B, true, true},
    {"xor", "xor", 2, B, B, true, false},
    {"implies", "implies", 2, B, B, false, false},
    {"+", "plus", 2, N, N, true, false},
    {"-", "minus", 2, N, N, false, false},
    {"*", "times", 2, N, N, true, false},
    {"/", "div", 2, N, N, false, false},
    {"min", "min", 2, N, N, true, true},
    {"max", "max", 2, N, N, true, true},
    {"<=", "le", 2, N, B, false, false},
    {">=", "ge", 2, N, B, false, false},
    {"=", "eq", 2, N, B, true, false},
    {"<", "lt", 2, N, B, false, false},
    {">", "gt", 2, N, B, false, false},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

class Parser {
public:
    Parser(std::string_view text, const AtomTypeLookup& atom_type) : text_(text), atom_type_(atom_type) {}

    Expr parse_all()
    {
        Expr e = parse();
        skip_space();
        if (pos_ != text_.size())
            fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::ParseError,
                    "cannot parse expression '" + std::string(text_) + "': " + what + " at offset " +
                        std::to_string(pos_),
                    "offset " + std::to_string(pos_));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    std::string_view token()
    {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')')
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    Expr parse()
    {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        if (text_[pos_] == ')')
            fail("unexpected ')'");
        if (text_[pos_] != '(')
            return leaf(token());

        ++pos_;
        auto head = token();
        auto op = op_from_symbol(head);
        if (!op || is_leaf(*op))
            fail("unknown operator '" + std::string(head) + "'");
        std::vector<Expr> args;
        while (true) {
            skip_space();
            if (pos_ >= text_.size())
                fail("missing ')'");
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            args.push_back(parse());
        }
        if (static_cast<int>(args.size()) != arity(*op))
            fail("operator '" + std::string(head) + "' takes " + std::to_string(arity(*op)) + " operand(s)");
        if (args.size() == 1)
            return Expr::unary(*op, args[0]);
        return Expr::binary(*op, args[0], args[1]);
    }

    Expr leaf(std::string_view tok)
    {
        if (tok.empty())
            fail("empty token");
        if (tok == "true")
            return Expr::boolean(true);
        if (tok == "false")
            return Expr::boolean(false);
        bool numeric = std::isdigit(static_cast<unsigned char>(tok[0])) ||
                       (tok[0] == '-' && tok.size() > 1 && std::isdigit(static_cast<unsigned char>(tok[1])));
        if (numeric) {
            auto r = Rational::parse(tok);
            if (!r)
                fail("bad constant '" + std::string(tok) + "'");
            return Expr::constant(*r);
        }
        for (char c : tok)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
                fail("bad identifier '" + std::string(tok) + "'");
        auto type = atom_type_(tok);
        if (!type)
            throw Error(ErrorCode::UnknownConcept, "unknown concept '" + std::string(tok) + "' in expression");
        return Expr::atom(std::string(tok), *type);
    }

    std::string_view text_;
    const AtomTypeLookup& atom_type_;
    std::size_t pos_ = 0;
};

void write(const Expr& e, std::string& out)
{
    switch (e.op()) {
    case Op::Const:
        out += e.constant_value().to_string();
        return;
    case Op::Atom:
        out += e.atom_name();
        return;
    case Op::True:
    case Op::False:
        out += symbol(e.op());
        return;
    default:
        break;
    }
    out += '(';
    out += symbol(e.op());
    for (int i = 0; i < e.arity(); ++i) {
        out += ' ';
        write(e.child(i), out);
    }
    out += ')';
}

} // namespace

std::string_view to_string(Type type) { return type == Type::Boolean ? "boolean" : "number"; }

int arity(Op op) { return info(op).arity; }
bool is_leaf(Op op) { return info(op).arity == 0; }
bool is_unary(Op op) { return info(op).arity == 1; }
bool is_binary(Op op) { return info(op).arity == 2; }
bool is_comparator(Op op) { return op >= Op::Le && op <= Op::Gt; }
bool is_commutative(Op op) { return info(op).commutative; }
bool is_idempotent(Op op) { return info(op).idempotent; }
Type operand_type(Op op) { return info(op).operand; }
Type result_type(Op op) { return info(op).result; }
std::string_view symbol(Op op) { return info(op).symbol; }
std::string_view op_name(Op op) { return info(op).name; }

std::optional<Op> op_from_symbol(std::string_view text)
{
    for (int i = 0; i < kOpCount; ++i)
        if (!kOps[i].symbol.empty() && kOps[i].symbol == text)
            return static_cast<Op>(i);
    return std::nullopt;
}

std::optional<Op> op_from_name(std::string_view text)
{
    for (int i = 0; i < kOpCount; ++i) {
        auto op = static_cast<Op>(i);
        if (!is_leaf(op) && (kOps[i].name == text || kOps[i].symbol == text))
            return op;
    }
    return std::nullopt;
}

Value apply_unary(Op op, const Value& a)
{
    if (a.is_undefined())
        return Value::undefined();
    switch (op) {
    case Op::Not:
        return Value::boolean(!a.as_bool());
    case Op::Floor:
        return Value::number(floor(a.as_number()));
    case Op::Ceil:
        return Value::number(ceil(a.as_number()));
    case Op::Negate:
        return Value::number(negate(a.as_number()));
    case Op::Square:
        return Value::number(mul(a.as_number(), a.as_number()));
    default:
        return Value::undefined();
    }
}

Value apply_binary(Op op, const Value& a, const Value& b)
{
    if (a.is_undefined() || b.is_undefined())
        return Value::undefined();
    const auto& x = a.as_number();
    const auto& y = b.as_number();
    switch (op) {
    case Op::And:
        return Value::boolean(a.as_bool() && b.as_bool());
    case Op::Or:
        return Value::boolean(a.as_bool() || b.as_bool());
    case Op::Xor:
        return Value::boolean(a.as_bool() != b.as_bool());
    case Op::Implies:
        return Value::boolean(!a.as_bool() || b.as_bool());
    case Op::Plus:
        return Value::number(add(x, y));
    case Op::Minus:
        return Value::number(sub(x, y));
    case Op::Times:
        return Value::number(mul(x, y));
    case Op::Div:
        return Value::number(div(x, y));
    case Op::Min:
        return Value::number(x < y ? x : y);
    case Op::Max:
        return Value::number(x < y ? y : x);
    case Op::Le:
        return Value::boolean(x <= y);
    case Op::Ge:
        return Value::boolean(x >= y);
    case Op::Eq:
        return Value::boolean(x == y);
    case Op::Lt:
        return Value::boolean(x < y);
    case Op::Gt:
        return Value::boolean(x > y);
    default:
        return Value::undefined();
    }
}

Expr Expr::atom(std::string name, Type type)
{
    auto node = std::make_shared<Node>();
    node->op = Op::Atom;
    node->type = type;
    node->atom = std::move(name);
    return Expr(std::move(node));
}

Expr Expr::constant(Rational value)
{
    auto node = std::make_shared<Node>();
    node->op = Op::Const;
    node->type = Type::Number;
    node->constant = value;
    return Expr(std::move(node));
}

Expr Expr::boolean(bool value)
{
    auto node = std::make_shared<Node>();
    node->op = value ? Op::True : Op::False;
    node->type = Type::Boolean;
    return Expr(std::move(node));
}

Expr Expr::unary(Op op, Expr child)
{
    if (!is_unary(op))
        throw Error(ErrorCode::TypeError, std::string(op_name(op)) + " is not a unary operator");
    if (child.type() != operand_type(op))
        throw Error(ErrorCode::TypeError, std::string(op_name(op)) + " expects a " +
                                              std::string(cforge::to_string(operand_type(op))) + " operand");
    auto node = std::make_shared<Node>();
    node->op = op;
    node->type = result_type(op);
    node->complexity = 1 + child.complexity();
    node->children[0] = std::move(child.node_);
    return Expr(std::move(node));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs)
{
    if (!is_binary(op))
        throw Error(ErrorCode::TypeError, std::string(op_name(op)) + " is not a binary operator");
    if (lhs.type() != operand_type(op) || rhs.type() != operand_type(op))
        throw Error(ErrorCode::TypeError, std::string(op_name(op)) + " expects " +
                                              std::string(cforge::to_string(operand_type(op))) + " operands");
    auto node = std::make_shared<Node>();
    node->op = op;
    node->type = result_type(op);
    node->complexity = 1 + lhs.complexity() + rhs.complexity();
    node->children[0] = std::move(lhs.node_);
    node->children[1] = std::move(rhs.node_);
    return Expr(std::move(node));
}

std::string Expr::to_string() const
{
    std::string out;
    write(*this, out);
    return out;
}

void Expr::collect_atoms(std::set<std::string>& out) const
{
    if (op() == Op::Atom) {
        out.insert(atom_name());
        return;
    }
    for (int i = 0; i < arity(); ++i)
        child(i).collect_atoms(out);
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

int compare(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return 0;
    if (a.complexity() != b.complexity())
        return a.complexity() < b.complexity() ? -1 : 1;
    if (a.op() != b.op())
        return a.op() < b.op() ? -1 : 1;
    switch (a.op()) {
    case Op::Const:
        if (a.constant_value() == b.constant_value())
            return 0;
        return a.constant_value() < b.constant_value() ? -1 : 1;
    case Op::Atom: {
        int c = a.atom_name().compare(b.atom_name());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Op::True:
    case Op::False:
        return 0;
    default:
        break;
    }
    for (int i = 0; i < a.arity(); ++i)
        if (int c = compare(a.child(i), b.child(i)); c != 0)
            return c;
    return 0;
}

Expr parse_expression(std::string_view text, const AtomTypeLookup& atom_type)
{
    return Parser(text, atom_type).parse_all();
}

Value evaluate(const Expr& e, const AtomValueLookup& atom_value)
{
    switch (e.op()) {
    case Op::Const:
        return Value::number(e.constant_value());
    case Op::True:
        return Value::boolean(true);
    case Op::False:
        return Value::boolean(false);
    case Op::Atom:
        return atom_value(e.atom_name());
    default:
        break;
    }
    if (e.arity() == 1)
        return apply_unary(e.op(), evaluate(e.child(0), atom_value));
    return apply_binary(e.op(), evaluate(e.child(0), atom_value), evaluate(e.child(1), atom_value));
}

} // namespace cforge
