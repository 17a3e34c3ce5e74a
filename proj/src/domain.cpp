#include "cforge/domain.hpp"

#include "cforge/error.hpp"
#include "cforge/graph_concepts.hpp"

namespace cforge {

namespace {

class GraphDomain final : public Domain {
public:
    std::string_view tag() const override { return "graph"; }
    std::string_view noun() const override { return "graphs"; }

    Payload parse(std::string_view encoding) const override { return parse_graph6(encoding); }

    std::string encode(const Payload& p) const override { return to_graph6(get(p)); }

    std::string certificate(const Payload& p) const override { return canonical_certificate(get(p)); }

    std::span<const ConceptInfo> builtin_concepts() const override { return graph_concepts(); }

    Value evaluate(std::string_view concept_name, const Payload& p) const override
    {
        return eval_graph_concept(concept_name, get(p));
    }

private:
    static const Graph& get(const Payload& p)
    {
        if (const auto* g = std::get_if<Graph>(&p))
            return *g;
        throw Error(ErrorCode::DomainMismatch, "expected a graph object");
    }
};

class IntegerDomain final : public Domain {
public:
    std::string_view tag() const override { return "integer"; }
    std::string_view noun() const override { return "integers"; }

    Payload parse(std::string_view encoding) const override { return parse_integer_object(encoding); }

    std::string encode(const Payload& p) const override { return to_string(get(p)); }

    std::string certificate(const Payload& p) const override { return to_string(get(p)); }

    std::span<const ConceptInfo> builtin_concepts() const override { return integer_concepts(); }

    Value evaluate(std::string_view concept_name, const Payload& p) const override
    {
        return eval_integer_concept(concept_name, get(p));
    }

private:
    static const IntegerObject& get(const Payload& p)
    {
        if (const auto* k = std::get_if<IntegerObject>(&p))
            return *k;
        throw Error(ErrorCode::DomainMismatch, "expected an integer object");
    }
};

} // namespace

bool Domain::owns(const Payload& p) const
{
    return (tag() == "graph" && std::holds_alternative<Graph>(p)) ||
           (tag() == "integer" && std::holds_alternative<IntegerObject>(p));
}

const Domain& graph_domain()
{
    static const GraphDomain d;
    return d;
}

const Domain& integer_domain()
{
    static const IntegerDomain d;
    return d;
}

const Domain& domain_for(std::string_view tag)
{
    if (tag == "graph")
        return graph_domain();
    if (tag == "integer")
        return integer_domain();
    throw Error(ErrorCode::DomainMismatch, "unknown domain '" + std::string(tag) + "'");
}

} // namespace cforge
