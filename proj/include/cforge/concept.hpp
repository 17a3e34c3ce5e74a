#pragma once

#include <string>
#include <string_view>

namespace cforge {

enum class ConceptKind { Invariant, Property };

std::string_view to_string(ConceptKind kind);
ConceptKind concept_kind_from_string(std::string_view text);

// Static description of a builtin concept exposed by a domain.
struct ConceptInfo {
    std::string name;
    ConceptKind kind;
    // Clause used when rendering sketches, phrased about the object "x".
    std::string description;
};

} // namespace cforge
