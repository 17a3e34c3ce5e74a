#include "doctest.h"
#include "support.hpp"

#include "cforge/catalog.hpp"
#include "cforge/domain.hpp"
#include "cforge/error.hpp"
#include "cforge/graph.hpp"
#include "cforge/graph_concepts.hpp"
#include "cforge/integer_domain.hpp"

#include <algorithm>
#include <random>

using namespace cforge;

namespace {

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

std::string detail_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.detail();
    }
    FAIL("expected an error");
    return {};
}

std::vector<int> degrees(const Graph& g)
{
    std::vector<int> d;
    for (int v = 0; v < g.order(); ++v)
        d.push_back(g.degree(v));
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace

TEST_SUITE("graph6")
{
    TEST_CASE("single vertex and single edge")
    {
        Graph k1 = parse_graph6("@");
        CHECK(k1.order() == 1);
        CHECK(k1.size() == 0);
        Graph k2 = parse_graph6("A_");
        CHECK(k2.order() == 2);
        CHECK(k2.has_edge(0, 1));
        CHECK(to_graph6(k2) == "A_");
    }

    TEST_CASE("errors name the byte offset")
    {
        CHECK(code_of([] { parse_graph6("A!"); }) == ErrorCode::CharOutOfRange);
        CHECK(detail_of([] { parse_graph6("A!"); }) == "offset 1");
        CHECK(code_of([] { parse_graph6(""); }) == ErrorCode::BadHeader);
        CHECK(code_of([] { parse_graph6("C~~"); }) == ErrorCode::BadLength);
        CHECK(code_of([] { parse_graph6("D"); }) == ErrorCode::BadLength);
    }

    TEST_CASE("round trip over the catalog and random graphs")
    {
        for (const auto& e : catalog())
            CHECK(parse_graph6(to_graph6(e.graph)) == e.graph);
        std::mt19937 rng(17);
        for (int i = 0; i < 300; ++i) {
            int n = std::uniform_int_distribution<int>(1, 64)(rng);
            Graph g = oracle::random_graph(rng, n, 0.3);
            CHECK(parse_graph6(to_graph6(g)) == g);
        }
    }

    TEST_CASE("hand-encoded bits follow the column-major upper triangle")
    {
        // Path 0-1-2: pairs (0,1),(0,2),(1,2) -> bits 1,0,1 -> 101000b = 40, +63 = 'g'.
        Graph p3(3);
        p3.add_edge(0, 1);
        p3.add_edge(1, 2);
        CHECK(to_graph6(p3) == "Bg");
    }

    TEST_CASE("degree sum is twice the size")
    {
        std::mt19937 rng(5);
        for (int i = 0; i < 200; ++i) {
            Graph g = oracle::random_graph(rng, std::uniform_int_distribution<int>(1, 30)(rng), 0.4);
            Graph h = parse_graph6(to_graph6(g));
            int sum = 0;
            for (int v = 0; v < h.order(); ++v)
                sum += h.degree(v);
            CHECK(sum == 2 * h.size());
        }
    }
}

TEST_SUITE("catalog")
{
    TEST_CASE("required members are present with unique labels")
    {
        std::vector<std::string> required{"Petersen", "K4-e"};
        for (int n = 2; n <= 8; ++n)
            required.push_back("K" + std::to_string(n));
        for (int n = 3; n <= 10; ++n)
            required.push_back("C" + std::to_string(n));
        for (int n = 2; n <= 10; ++n)
            required.push_back("P" + std::to_string(n));
        for (int m = 1; m <= 4; ++m)
            for (int n = m; n <= 4; ++n)
                required.push_back("K" + std::to_string(m) + "," + std::to_string(n));
        for (const auto& label : required)
            CHECK_MESSAGE(catalog_lookup(label).has_value(), label);
        std::set<std::string> labels;
        for (const auto& e : catalog())
            CHECK(labels.insert(e.label).second);
    }

    TEST_CASE("lookups")
    {
        Graph p = *catalog_lookup("Petersen");
        CHECK(p.order() == 10);
        CHECK(p.size() == 15);
        CHECK(is_regular(p));
        CHECK(min_degree(p) == 3);
        CHECK(canonical_certificate(p) == canonical_certificate(oracle::petersen()));
        Graph c5 = *catalog_lookup("C5");
        CHECK(c5.order() == 5);
        CHECK(c5.size() == 5);
        CHECK(degrees(*catalog_lookup("K4-e")) == std::vector<int>{2, 2, 3, 3});
    }

    TEST_CASE("malformed catalog lines are reported by line")
    {
        CHECK(code_of([] { parse_catalog("A A_\nB A!\n"); }) == ErrorCode::MalformedKB);
        CHECK(detail_of([] { parse_catalog("A A_\nB A!\n"); }) == "line 2");
    }
}

TEST_SUITE("graph concepts")
{
    TEST_CASE("worked examples")
    {
        Graph k4 = *catalog_lookup("K4");
        Graph pet = *catalog_lookup("Petersen");
        CHECK(dirac_condition(k4));
        CHECK_FALSE(dirac_condition(pet));
        CHECK_FALSE(is_hamiltonian(pet));
        CHECK(longest_paths_span(*catalog_lookup("C5")));
        CHECK(eval_graph_concept("order", k4).as_number() == Rational(4));
        CHECK(eval_graph_concept("is_connected", parse_graph6("@")).is_true());
        Graph two_edges = oracle::graph_from_pair_mask(4, 0b100001);
        CHECK(two_edges.size() == 2);
        CHECK(eval_graph_concept("diameter", two_edges).is_undefined());
        CHECK(eval_graph_concept("girth", *catalog_lookup("P5")).is_undefined());
        CHECK(eval_graph_concept("girth", pet).as_number() == Rational(5));
    }

    TEST_CASE("unknown names and size caps")
    {
        CHECK(code_of([] { eval_graph_concept("fooness", Graph(3)); }) == ErrorCode::UnknownConcept);
        Graph big(17);
        CHECK(code_of([&] { eval_graph_concept("is_hamiltonian", big); }) == ErrorCode::SizeCapExceeded);
        CHECK(code_of([&] { eval_graph_concept("independence_number", big); }) == ErrorCode::SizeCapExceeded);
        CHECK(code_of([&] { eval_graph_concept("longest_paths_span", big); }) == ErrorCode::SizeCapExceeded);
        CHECK(eval_graph_concept("min_degree", big).as_number() == Rational(0));
    }

    TEST_CASE("hamiltonicity matches the permutation oracle on all graphs up to 5 vertices")
    {
        std::size_t mismatches = 0;
        for (int n = 1; n <= 5; ++n) {
            int pairs = n * (n - 1) / 2;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
                Graph g = oracle::graph_from_pair_mask(n, mask);
                mismatches += is_hamiltonian(g) != oracle::permutation_hamiltonian(g);
            }
        }
        CHECK(mismatches == 0);
    }

    TEST_CASE("hamiltonicity on random graphs of 6 to 8 vertices")
    {
        std::mt19937 rng(2024);
        for (int i = 0; i < 200; ++i) {
            int n = std::uniform_int_distribution<int>(6, 8)(rng);
            Graph g = oracle::random_graph(rng, n, std::uniform_real_distribution<double>(0.2, 0.8)(rng));
            CHECK(is_hamiltonian(g) == oracle::permutation_hamiltonian(g));
        }
    }

    TEST_CASE("longest-path predicates match a DFS path enumerator on the catalog")
    {
        for (const auto& e : catalog()) {
            if (e.graph.order() > 10)
                continue;
            auto paths = oracle::longest_paths(e.graph);
            bool span = std::all_of(paths.begin(), paths.end(),
                                    [&](const auto& p) { return static_cast<int>(p.size()) == e.graph.order(); });
            bool induced = std::all_of(paths.begin(), paths.end(), [&](const auto& p) {
                std::uint64_t mask = 0;
                for (int v : p)
                    mask |= std::uint64_t{1} << v;
                return oracle::permutation_hamiltonian(e.graph.induced(mask));
            });
            CHECK_MESSAGE(longest_paths_span(e.graph) == span, e.label);
            CHECK_MESSAGE(longest_path_induced_hamiltonian(e.graph) == induced, e.label);
            CHECK_MESSAGE(longest_path_order(e.graph) == static_cast<int>(paths.front().size()), e.label);
        }
    }

    TEST_CASE("longest-path predicates on random small graphs")
    {
        std::mt19937 rng(99);
        for (int i = 0; i < 150; ++i) {
            Graph g = oracle::random_graph(rng, std::uniform_int_distribution<int>(1, 7)(rng), 0.45);
            auto paths = oracle::longest_paths(g);
            bool induced = std::all_of(paths.begin(), paths.end(), [&](const auto& p) {
                std::uint64_t mask = 0;
                for (int v : p)
                    mask |= std::uint64_t{1} << v;
                return oracle::permutation_hamiltonian(g.induced(mask));
            });
            CHECK(longest_path_induced_hamiltonian(g) == induced);
        }
    }

    TEST_CASE("subset oracles for independence, clique, diameter and girth")
    {
        std::mt19937 rng(7);
        for (int i = 0; i < 200; ++i) {
            Graph g = oracle::random_graph(rng, std::uniform_int_distribution<int>(1, 10)(rng), 0.35);
            CHECK(independence_number(g) == oracle::subset_independence(g));
            CHECK(clique_number(g) == oracle::subset_clique(g));
            CHECK(diameter(g) == oracle::floyd_diameter(g));
            CHECK(girth(g) == oracle::edge_removal_girth(g));
        }
    }

    TEST_CASE("Dirac condition implies hamiltonicity on the catalog")
    {
        for (const auto& e : catalog())
            if (dirac_condition(e.graph))
                CHECK_MESSAGE(is_hamiltonian(e.graph), e.label);
    }

    TEST_CASE("certificates identify isomorphic graphs")
    {
        std::mt19937 rng(3);
        for (int i = 0; i < 100; ++i) {
            int n = std::uniform_int_distribution<int>(1, 8)(rng);
            Graph g = oracle::random_graph(rng, n, 0.5);
            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(canonical_certificate(g) == canonical_certificate(g.relabeled(perm)));
        }
        CHECK(canonical_certificate(*catalog_lookup("C4")) != canonical_certificate(*catalog_lookup("K1,3")));
    }
}

TEST_SUITE("integer domain")
{
    TEST_CASE("concept examples")
    {
        auto k = [](std::int64_t v) { return IntegerObject{v}; };
        CHECK(eval_integer_concept("is_prime", k(7)).is_true());
        CHECK(eval_integer_concept("is_prime", k(1)).is_false());
        CHECK(eval_integer_concept("num_divisors", k(12)).as_number() == Rational(6));
        CHECK(eval_integer_concept("is_perfect_square", k(1)).is_true());
        CHECK(eval_integer_concept("is_perfect_square", k(999950884)).is_true());
        CHECK(eval_integer_concept("is_even", k(10)).is_true());
        CHECK(eval_integer_concept("num_prime_factors", k(12)).as_number() == Rational(3));
        CHECK(eval_integer_concept("value", k(42)).as_number() == Rational(42));
    }

    TEST_CASE("divisor counts match trial division")
    {
        for (std::int64_t v = 1; v <= 500; ++v) {
            std::int64_t count = 0;
            for (std::int64_t d = 1; d <= v; ++d)
                count += v % d == 0;
            CHECK(eval_integer_concept("num_divisors", IntegerObject{v}).as_number() == Rational(count));
            CHECK(eval_integer_concept("is_prime", IntegerObject{v}).is_true() == (count == 2));
        }
    }

    TEST_CASE("parsing bounds")
    {
        CHECK(parse_integer_object("1000000000").value == 1000000000);
        CHECK(code_of([] { parse_integer_object("0"); }) == ErrorCode::MalformedPayload);
        CHECK(code_of([] { parse_integer_object("1000000001"); }) == ErrorCode::MalformedPayload);
        CHECK(code_of([] { parse_integer_object("12a"); }) == ErrorCode::MalformedPayload);
    }

    TEST_CASE("domain lookup")
    {
        CHECK(domain_for("integer").tag() == "integer");
        CHECK(code_of([] { domain_for("matroid"); }) == ErrorCode::DomainMismatch);
    }
}
