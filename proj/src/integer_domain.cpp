#include "cforge/integer_domain.hpp"

#include "cforge/error.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace cforge {

namespace {

int count_divisors(std::int64_t n)
{
    int count = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0)
            count += (d * d == n) ? 1 : 2;
    }
    return count;
}

// Prime factors counted with multiplicity.
int count_prime_factors(std::int64_t n)
{
    int count = 0;
    for (std::int64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            n /= p;
            ++count;
        }
    if (n > 1)
        ++count;
    return count;
}

bool perfect_square(std::int64_t n)
{
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r * r == n;
}

} // namespace

IntegerObject parse_integer_object(std::string_view text)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorCode::MalformedPayload, "not a decimal integer: '" + std::string(text) + "'");
    if (v < 1 || v > IntegerObject::kMaxValue)
        throw Error(ErrorCode::MalformedPayload, "integer objects must lie in 1..10^9, got " + std::string(text));
    return IntegerObject{v};
}

std::string to_string(const IntegerObject& k) { return std::to_string(k.value); }

std::span<const ConceptInfo> integer_concepts()
{
    static const std::array<ConceptInfo, 6> concepts{{
        {"value", ConceptKind::Invariant, "the value of x"},
        {"num_divisors", ConceptKind::Invariant, "the number of divisors of x"},
        {"num_prime_factors", ConceptKind::Invariant, "the number of prime factors of x, with multiplicity"},
        {"is_prime", ConceptKind::Property, "x is prime"},
        {"is_even", ConceptKind::Property, "x is even"},
        {"is_perfect_square", ConceptKind::Property, "x is a perfect square"},
    }};
    return concepts;
}

Value eval_integer_concept(std::string_view name, const IntegerObject& k)
{
    const std::int64_t n = k.value;
    if (name == "value")
        return Value::number(Rational{n});
    if (name == "num_divisors")
        return Value::number(Rational{count_divisors(n)});
    if (name == "num_prime_factors")
        return Value::number(Rational{count_prime_factors(n)});
    if (name == "is_prime")
        return Value::boolean(n >= 2 && count_prime_factors(n) == 1);
    if (name == "is_even")
        return Value::boolean(n % 2 == 0);
    if (name == "is_perfect_square")
        return Value::boolean(perfect_square(n));
    throw Error(ErrorCode::UnknownConcept, "unknown integer concept '" + std::string(name) + "'");
}

} // namespace cforge
