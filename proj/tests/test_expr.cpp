#include "doctest.h"
#include "support.hpp"

#include "cforge/catalog.hpp"
#include "cforge/error.hpp"
#include "cforge/expr.hpp"
#include "cforge/graph_concepts.hpp"

#include <limits>
#include <numeric>
#include <random>

using namespace cforge;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return *Rational::make(n, d); }

std::optional<Type> graph_atom_type(std::string_view name)
{
    for (const auto& c : graph_concepts())
        if (c.name == name)
            return c.kind == ConceptKind::Property ? Type::Boolean : Type::Number;
    return std::nullopt;
}

Expr parse(std::string_view text) { return parse_expression(text, graph_atom_type); }

Value eval_on(const Expr& e, const Graph& g)
{
    return evaluate(e, [&](std::string_view name) { return eval_graph_concept(name, g); });
}

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

// Exact reference: reduce a wide fraction and check it fits in 64 bits.
std::optional<std::pair<__int128, __int128>> reduce(__int128 n, __int128 d)
{
    if (d == 0)
        return std::nullopt;
    if (d < 0)
        n = -n, d = -d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1)
        n /= a, d /= a;
    const __int128 lo = std::numeric_limits<std::int64_t>::min() + 1, hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi)
        return std::nullopt;
    return std::make_pair(n, d);
}

} // namespace

TEST_SUITE("rational")
{
    TEST_CASE("arithmetic matches 128-bit fractions")
    {
        std::mt19937 rng(11);
        std::uniform_int_distribution<std::int64_t> small(-50, 50), wide(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
        for (int i = 0; i < 5000; ++i) {
            auto draw = [&] { return i % 2 ? small(rng) : wide(rng); };
            std::int64_t an = draw(), ad = draw(), bn = draw(), bd = draw();
            if (ad == 0 || bd == 0)
                continue;
            auto a = Rational::make(an, ad), b = Rational::make(bn, bd);
            REQUIRE(a);
            REQUIRE(b);
            __int128 xn = a->num(), xd = a->den(), yn = b->num(), yd = b->den();
            auto same = [](const std::optional<Rational>& got, std::optional<std::pair<__int128, __int128>> want) {
                if (!want)
                    return !got.has_value();
                return got && got->num() == want->first && got->den() == want->second;
            };
            CHECK(same(add(*a, *b), reduce(xn * yd + yn * xd, xd * yd)));
            CHECK(same(sub(*a, *b), reduce(xn * yd - yn * xd, xd * yd)));
            CHECK(same(mul(*a, *b), reduce(xn * yn, xd * yd)));
            CHECK(same(div(*a, *b), yn == 0 ? std::nullopt : reduce(xn * yd, xd * yn)));
            CHECK((*a < *b) == (xn * yd < yn * xd));
        }
    }

    TEST_CASE("parse and print")
    {
        CHECK(Rational::parse("1/2")->to_string() == "1/2");
        CHECK(Rational::parse("-3")->to_string() == "-3");
        CHECK(Rational::parse("4/2")->to_string() == "2");
        CHECK_FALSE(Rational::parse("1/0"));
        CHECK(floor(q(-1, 2)) == q(-1));
        CHECK(ceil(q(-1, 2)) == q(0));
    }

    TEST_CASE("overflow becomes Undefined in evaluation")
    {
        Expr big = Expr::constant(q(std::numeric_limits<std::int64_t>::max()));
        Expr e = Expr::binary(Op::Times, big, big);
        CHECK(evaluate(e, [](std::string_view) { return Value::undefined(); }).is_undefined());
    }
}

TEST_SUITE("expressions")
{
    TEST_CASE("prefix text round-trips")
    {
        for (const char* text : {"(>= min_degree (* 1/2 order))", "(and is_connected (not is_bipartite))",
                                 "(<= diameter (- order 1))", "(min size (floor (/ order 2)))", "is_regular", "-3/4"}) {
            Expr e = parse(text);
            CHECK(e.to_string() == text);
            CHECK(parse(e.to_string()) == e);
        }
    }

    TEST_CASE("complexity counts nodes")
    {
        CHECK(parse("order").complexity() == 1);
        CHECK(parse("(not is_regular)").complexity() == 2);
        CHECK(parse("(>= min_degree (* 1/2 order))").complexity() == 5);
    }

    TEST_CASE("parse errors")
    {
        CHECK(code_of([] { parse("(and is_connected"); }) == ErrorCode::ParseError);
        CHECK(code_of([] { parse("(frob order)"); }) == ErrorCode::ParseError);
        CHECK(code_of([] { parse("fooness"); }) == ErrorCode::UnknownConcept);
        CHECK(code_of([] { parse("(and order size)"); }) == ErrorCode::TypeError);
        CHECK(code_of([] { parse("(+ is_regular 1)"); }) == ErrorCode::TypeError);
    }

    TEST_CASE("evaluation examples")
    {
        Expr dirac = parse("(>= min_degree (* 1/2 order))");
        CHECK(eval_on(dirac, *catalog_lookup("K4")).is_true());
        CHECK(eval_on(dirac, *catalog_lookup("Petersen")).is_false());
        Expr diam = parse("(<= diameter 2)");
        CHECK(eval_on(diam, *catalog_lookup("K3+K1")).is_undefined());
        CHECK(eval_on(parse("(/ order 0)"), *catalog_lookup("K4")).is_undefined());
        CHECK(eval_on(parse("(and is_connected (<= diameter 2))"), *catalog_lookup("K3+K1")).is_undefined());
        CHECK(eval_on(parse("(not (<= girth 3))"), *catalog_lookup("P4")).is_undefined());
    }

    TEST_CASE("canonical examples")
    {
        CHECK(canonicalize(parse("(and is_connected is_regular)")) == canonicalize(parse("(and is_regular is_connected)")));
        CHECK(canonicalize(parse("(not (not is_regular))")) == parse("is_regular"));
        CHECK(canonicalize(parse("(min 1 2)")) == parse("1"));
        CHECK(canonicalize(parse("(or is_regular is_regular)")) == parse("is_regular"));
        CHECK(canonicalize(parse("(neg (neg order))")) == parse("order"));
        CHECK(canonicalize(parse("(/ 1 0)")) == parse("(/ 1 0)"));
        CHECK(canonicalize(parse("(<= 1 2)")).to_string() == "true");
    }

    TEST_CASE("canonicalization is idempotent and semantics-preserving on 1000 random expressions")
    {
        Signature sig;
        for (const auto& c : graph_concepts())
            sig.atoms.push_back({c.name, c.kind == ConceptKind::Property ? Type::Boolean : Type::Number});
        sig.unary = {Op::Not, Op::Floor, Op::Ceil, Op::Negate, Op::Square};
        sig.binary = {Op::And, Op::Or, Op::Xor, Op::Implies, Op::Plus, Op::Minus, Op::Times, Op::Div,
                      Op::Min, Op::Max, Op::Le, Op::Ge, Op::Eq, Op::Lt, Op::Gt};
        sig.constants = Signature::default_constants();
        std::mt19937 rng(1234);
        std::size_t mismatches = 0;
        for (int i = 0; i < 1000; ++i) {
            Type t = i % 2 ? Type::Boolean : Type::Number;
            Expr e = fixture::random_expression(rng, sig, t, std::uniform_int_distribution<int>(1, 9)(rng));
            Expr c = canonicalize(e);
            CHECK(canonicalize(c) == c);
            CHECK(c.complexity() <= e.complexity());
            for (const auto& entry : catalog())
                mismatches += !(eval_on(e, entry.graph) == eval_on(c, entry.graph));
        }
        CHECK(mismatches == 0);
    }

    TEST_CASE("canonical forms agree with the reference rewrite closure up to commutative order")
    {
        Signature sig;
        sig.atoms = {{"is_regular", Type::Boolean}, {"is_connected", Type::Boolean}, {"order", Type::Number},
                     {"size", Type::Number}};
        sig.unary = {Op::Not, Op::Negate};
        sig.binary = {Op::And, Op::Or, Op::Plus, Op::Min, Op::Le, Op::Minus};
        sig.constants = Signature::default_constants();
        std::mt19937 rng(77);
        for (int i = 0; i < 2000; ++i) {
            Expr a = fixture::random_expression(rng, sig, Type::Boolean, 7);
            Expr b = fixture::random_expression(rng, sig, Type::Boolean, 7);
            bool lib_same = canonicalize(a) == canonicalize(b);
            bool ref_same = oracle::reference_canonical(a) == oracle::reference_canonical(b);
            CHECK(lib_same == ref_same);
            CHECK(oracle::reference_canonical(canonicalize(a)) == oracle::reference_canonical(a));
        }
    }
}
