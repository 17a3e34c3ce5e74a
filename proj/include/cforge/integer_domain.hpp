#pragma once

#include "cforge/concept.hpp"
#include "cforge/value.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace cforge {

// Positive integer object, 1 <= value <= 10^9.
struct IntegerObject {
    static constexpr std::int64_t kMaxValue = 1'000'000'000;

    std::int64_t value = 1;

    friend bool operator==(const IntegerObject&, const IntegerObject&) = default;
};

IntegerObject parse_integer_object(std::string_view text);
std::string to_string(const IntegerObject& k);

std::span<const ConceptInfo> integer_concepts();
Value eval_integer_concept(std::string_view name, const IntegerObject& k);

} // namespace cforge
