#pragma once

#include "cforge/concept.hpp"
#include "cforge/graph.hpp"
#include "cforge/integer_domain.hpp"
#include "cforge/value.hpp"

#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace cforge {

using Payload = std::variant<Graph, IntegerObject>;

// Everything the knowledge base needs to know about one kind of object.
class Domain {
public:
    virtual ~Domain() = default;

    virtual std::string_view tag() const = 0;
    // Plural noun used in rendered claims ("graphs", "integers").
    virtual std::string_view noun() const = 0;

    // Throws the domain's parse error (BadHeader, MalformedPayload, ...).
    virtual Payload parse(std::string_view encoding) const = 0;
    virtual std::string encode(const Payload& p) const = 0;
    virtual std::string certificate(const Payload& p) const = 0;

    virtual std::span<const ConceptInfo> builtin_concepts() const = 0;
    virtual Value evaluate(std::string_view concept_name, const Payload& p) const = 0;

    bool owns(const Payload& p) const;
};

const Domain& graph_domain();
const Domain& integer_domain();

// Throws DomainMismatch for unknown tags.
const Domain& domain_for(std::string_view tag);

} // namespace cforge
