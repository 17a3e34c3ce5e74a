#include "cforge/error.hpp"

#include "cforge/concept.hpp"

#include <array>

namespace cforge {

std::string_view to_string(ErrorCode code)
{
    static constexpr std::array<std::string_view, 21> kNames{
        "DomainMismatch",      "MalformedPayload",  "UnknownConcept", "RefutedByStoredObject",
        "BadHeader",           "BadLength",         "CharOutOfRange", "SizeCapExceeded",
        "ComplexityOutOfRange", "TypeError",        "ParseError",     "NoEligibleObjects",
        "EmptySignature",      "VacuousHypothesis", "RefutedTarget",  "MalformedKB",
        "JobActive",           "UnknownSubject",    "UnknownSession", "BogusCounterexample",
        "InvalidArgument",
    };
    return kNames[static_cast<std::size_t>(code)];
}

std::string_view to_string(ConceptKind kind) { return kind == ConceptKind::Invariant ? "invariant" : "property"; }

ConceptKind concept_kind_from_string(std::string_view text)
{
    if (text == "invariant")
        return ConceptKind::Invariant;
    if (text == "property")
        return ConceptKind::Property;
    throw Error(ErrorCode::InvalidArgument, "unknown concept kind '" + std::string(text) + "'");
}

} // namespace cforge
