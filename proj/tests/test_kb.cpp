#include "doctest.h"
#include "support.hpp"

#include "cforge/catalog.hpp"
#include "cforge/error.hpp"
#include "cforge/json_io.hpp"
#include "cforge/kb.hpp"

#include <random>
#include <set>

using namespace cforge;

namespace {

MathObject graph_object(const std::string& label)
{
    return MathObject::from_payload(graph_domain(), *catalog_lookup(label), label);
}

std::pair<ErrorCode, std::string> error_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return {e.code(), e.detail()};
    }
    FAIL("expected an error");
    return {ErrorCode::InvalidArgument, {}};
}

TheoremRecord thm(std::vector<std::string> h, std::string c) { return TheoremRecord{std::move(h), std::move(c), TheoremSource::UserProved}; }

// Fresh value of a cached entry, computed without the cache.
Value fresh(const KnowledgeBase& kb, const ConceptEntry& c, const MathObject& obj)
{
    if (!c.definition)
        return kb.domain().evaluate(c.name, *obj.payload);
    return evaluate(*c.definition, [&](std::string_view name) {
        return fresh(kb, kb.concept_entry(name), obj);
    });
}

} // namespace

TEST_SUITE("knowledge base")
{
    TEST_CASE("adding objects")
    {
        KnowledgeBase empty(graph_domain());
        auto a = empty.add_object(graph_object("K4"));
        CHECK(a.kb.objects().size() == 1);
        CHECK(empty.objects().empty());

        auto c5 = KnowledgeBase(graph_domain()).add_object(graph_object("C5"));
        auto again = c5.kb.add_object(graph_object("C5"));
        CHECK(again.duplicate);
        CHECK(again.kb.objects().size() == 1);

        // A relabelled copy is still a duplicate.
        Graph g = *catalog_lookup("C5");
        auto perm = again.kb.add_object(MathObject::from_payload(graph_domain(), g.relabeled({2, 0, 4, 1, 3})));
        CHECK(perm.duplicate);
        CHECK(perm.index == 0);

        auto pet = KnowledgeBase(graph_domain()).add_object(graph_object("Petersen"));
        CHECK(pet.kb.evaluate("min_degree", *pet.kb.objects()[0]).as_number() == Rational(3));

        auto wrong = error_of([] { KnowledgeBase(graph_domain()).add_object(MathObject::parse(integer_domain(), "7")); });
        CHECK(wrong.first == ErrorCode::DomainMismatch);
        CHECK(error_of([] { MathObject::parse(graph_domain(), "A!"); }).first == ErrorCode::CharOutOfRange);
    }

    TEST_CASE("adding theorems")
    {
        auto kb = fixture::catalog_subset({"C4", "K4", "P3"});
        auto ok = kb.add_theorem(thm({"is_hamiltonian"}, "is_connected"));
        CHECK(ok.theorems().size() == 1);
        CHECK(kb.theorems().empty());
        auto refuted = error_of([&] { kb.add_theorem(thm({"is_connected"}, "is_hamiltonian")); });
        CHECK(refuted.first == ErrorCode::RefutedByStoredObject);
        CHECK(refuted.second == "P3");
        CHECK(error_of([&] { kb.add_theorem(thm({"fooness"}, "is_connected")); }).first == ErrorCode::UnknownConcept);
        CHECK(error_of([&] { kb.add_theorem(thm({"order"}, "is_connected")); }).first == ErrorCode::TypeError);
        CHECK(ok.add_theorem(thm({"is_hamiltonian"}, "is_connected")).theorems().size() == 1);
    }

    TEST_CASE("evaluation examples and partial concepts")
    {
        auto kb = fixture::kb_with({{"K4", *catalog_lookup("K4")}, {"K1", Graph(1)}, {"2K2", oracle::graph_from_pair_mask(4, 0b100001)}});
        CHECK(kb.evaluate("order", *kb.objects()[0]).as_number() == Rational(4));
        CHECK(kb.evaluate("is_connected", *kb.objects()[1]).is_true());
        CHECK(kb.evaluate("diameter", *kb.objects()[2]).is_undefined());
        CHECK(error_of([&] { kb.evaluate("fooness", *kb.objects()[0]); }).first == ErrorCode::UnknownConcept);
        auto n17 = MathObject::from_payload(graph_domain(), Graph(17));
        auto big = kb.add_object(n17).kb;
        CHECK(error_of([&] { big.evaluate("is_hamiltonian", *big.objects().back()); }).first == ErrorCode::SizeCapExceeded);
        CHECK(big.column("is_hamiltonian").back().is_undefined());
        auto ad_hoc = MathObject::parse(graph_domain(), "Bw");
        CHECK(kb.evaluate("is_hamiltonian", ad_hoc).is_true());
        CHECK(error_of([&] { kb.evaluate("order", MathObject::parse(integer_domain(), "4")); }).first ==
              ErrorCode::DomainMismatch);
    }

    TEST_CASE("user concepts")
    {
        auto kb = fixture::catalog_subset({"K4", "C5", "P4"});
        auto with = kb.add_concept("dense", kb.parse_expression("(>= (* 2 size) (* order (- order 1)))"),
                                   ConceptProvenance::User, "x is complete");
        CHECK(with.column("dense") == std::vector<Value>{Value::boolean(true), Value::boolean(false), Value::boolean(false)});
        CHECK(with.concept_entry("dense").kind == ConceptKind::Property);
        CHECK(error_of([&] { with.add_concept("dense", with.parse_expression("is_regular"), ConceptProvenance::User); })
                  .first == ErrorCode::InvalidArgument);
        CHECK(error_of([&] { kb.parse_expression("(and dense is_regular)"); }).first == ErrorCode::UnknownConcept);
        CHECK_FALSE(kb.find_concept("dense"));
    }

    TEST_CASE("cache coherence, dedup and monotone growth under random operations")
    {
        std::mt19937 rng(31);
        KnowledgeBase kb(graph_domain());
        std::vector<KnowledgeBase> history;
        for (int step = 0; step < 120; ++step) {
            history.push_back(kb);
            int n = std::uniform_int_distribution<int>(1, 7)(rng);
            kb = kb.add_object(MathObject::from_payload(graph_domain(), oracle::random_graph(rng, n, 0.5))).kb;
            const auto& objs = kb.objects();
            auto pick = std::uniform_int_distribution<std::size_t>(0, objs.size() - 1);
            for (int j = 0; j < 5; ++j) {
                const auto& c = kb.concepts()[std::uniform_int_distribution<std::size_t>(0, kb.concepts().size() - 1)(rng)];
                kb.evaluate(c.name, *objs[pick(rng)]);
            }
        }
        std::set<std::string> certs;
        for (const auto& o : kb.objects())
            CHECK(certs.insert(o->certificate).second);
        for (std::size_t i = 0; i < history.size(); ++i) {
            const auto& old = history[i].objects();
            REQUIRE(old.size() <= kb.objects().size());
            for (std::size_t j = 0; j < old.size(); ++j)
                CHECK(old[j] == kb.objects()[j]);
        }
        std::size_t checked = 0;
        for (const auto& [key, value] : kb.cache().entries()) {
            const ConceptEntry* concept_entry = nullptr;
            for (const auto& c : kb.concepts())
                if (c.serial == key.first)
                    concept_entry = &c;
            REQUIRE(concept_entry);
            auto idx = kb.find_object(key.second);
            REQUIRE(idx);
            CHECK(fresh(kb, *concept_entry, *kb.objects()[*idx]) == value);
            ++checked;
        }
        CHECK(checked > 100);
    }

    TEST_CASE("theorem soundness by full scan")
    {
        auto kb = catalog_kb();
        kb = kb.add_theorem(thm({"is_hamiltonian"}, "is_biconnected"));
        kb = kb.add_theorem(thm({"dirac_condition"}, "is_hamiltonian"));
        kb = kb.add_theorem(thm({"is_connected", "is_regular", "is_bipartite"}, "is_connected"));
        for (const auto& t : kb.theorems())
            for (const auto& o : kb.objects()) {
                bool h = true;
                for (const auto& name : t.hypothesis)
                    h = h && kb.domain().evaluate(name, *o->payload).is_true();
                if (h)
                    CHECK(kb.domain().evaluate(t.conclusion, *o->payload).is_true());
            }
    }
}

TEST_SUITE("kb json")
{
    TEST_CASE("round trip preserves objects, theorems and definitions")
    {
        auto kb = catalog_kb();
        kb = kb.add_theorem(thm({"is_hamiltonian"}, "is_connected"));
        kb = kb.add_concept("sparse", kb.parse_expression("(<= size order)"), ConceptProvenance::User);
        kb = kb.add_object(MathObject::parse(graph_domain(), "Dhc", "bull", ObjectOrigin::Counterexample)).kb;
        Json doc = kb_to_json(kb);
        auto back = kb_from_text(doc.dump(2));
        REQUIRE(back.objects().size() == kb.objects().size());
        for (std::size_t i = 0; i < kb.objects().size(); ++i) {
            CHECK(back.objects()[i]->certificate == kb.objects()[i]->certificate);
            CHECK(back.objects()[i]->label == kb.objects()[i]->label);
            CHECK(back.objects()[i]->origin == kb.objects()[i]->origin);
        }
        CHECK(back.theorems() == kb.theorems());
        CHECK(back.find_concept("sparse"));
        CHECK(kb_to_json(back) == doc);
    }

    TEST_CASE("integer KB")
    {
        auto kb = kb_from_text(R"({"domain": "integer", "objects": [{"encoding": "6"}, {"encoding": "7"}]})");
        CHECK(kb.domain().tag() == "integer");
        CHECK(kb.objects().size() == 2);
        CHECK(kb.evaluate("is_prime", *kb.objects()[1]).is_true());
        Json empty = kb_to_json(KnowledgeBase(integer_domain()));
        CHECK(empty["objects"].empty());
        CHECK(empty["domain"] == "integer");
    }

    TEST_CASE("malformed documents cite the line")
    {
        std::string text = "{\n  \"domain\": \"graph\",\n  \"objects\": [\n    {\"label\": \"a\", \"encoding\": \"A_\"},\n"
                           "    {\"label\": \"b\", \"encoding\": \"A!\"}\n  ]\n}\n";
        auto e = error_of([&] { kb_from_text(text); });
        CHECK(e.first == ErrorCode::MalformedKB);
        CHECK(e.second.find("line 5") == 0);
        CHECK(error_of([] { kb_from_text("{\"domain\": \"graph\",\n \"objects\": [}"); }).first == ErrorCode::MalformedKB);
        CHECK(error_of([] { kb_from_text(R"({"domain": "matroid"})"); }).first == ErrorCode::MalformedKB);
        CHECK(error_of([] { kb_from_text(R"({"domain": "graph", "concepts": ["fooness"]})"); }).first ==
              ErrorCode::MalformedKB);
        CHECK(error_of([] {
                  kb_from_text(R"({"domain": "graph", "objects": [{"encoding": "Bg"}],
                                   "theorems": [{"hypothesis": ["is_connected"], "conclusion": "is_hamiltonian"}]})");
              }).first == ErrorCode::MalformedKB);
    }

    TEST_CASE("catalog-style text")
    {
        auto kb = kb_from_text("# two graphs\ntri Bw\npath Bg\n");
        CHECK(kb.objects().size() == 2);
        CHECK(kb.objects()[0]->label == "tri");
    }
}
