#include "cforge/value.hpp"

#include <charconv>
#include <limits>
#include <numeric>

namespace cforge {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b)
{
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Floor division for positive denominators.
std::int64_t floor_div(std::int64_t num, std::int64_t den)
{
    std::int64_t q = num / den;
    if ((num % den != 0) && (num < 0))
        --q;
    return q;
}

} // namespace

std::optional<Rational> Rational::from_wide(__int128 num, __int128 den)
{
    if (den == 0)
        return std::nullopt;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (abs128(num) > kMax || den > kMax)
        return std::nullopt;
    return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::optional<Rational> Rational::make(std::int64_t num, std::int64_t den)
{
    return from_wide(num, den);
}

std::optional<Rational> Rational::parse(std::string_view text)
{
    auto parse_int = [](std::string_view s, std::int64_t& out) {
        if (s.empty())
            return false;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size();
    };
    std::int64_t num = 0;
    std::int64_t den = 1;
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!parse_int(text, num))
            return std::nullopt;
    }
    else {
        if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den))
            return std::nullopt;
        if (den <= 0)
            return std::nullopt;
    }
    if (num == std::numeric_limits<std::int64_t>::min())
        return std::nullopt;
    return make(num, den);
}

std::string Rational::to_string() const
{
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

std::optional<Rational> add(const Rational& a, const Rational& b)
{
    if (a.den_ == 1 && b.den_ == 1)
        return Rational::from_wide(static_cast<__int128>(a.num_) + b.num_, 1);
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                               static_cast<__int128>(a.den_) * b.den_);
}

std::optional<Rational> sub(const Rational& a, const Rational& b) { return add(a, negate(b)); }

std::optional<Rational> mul(const Rational& a, const Rational& b)
{
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

std::optional<Rational> div(const Rational& a, const Rational& b)
{
    if (b.num_ == 0)
        return std::nullopt;
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

Rational floor(const Rational& a) { return Rational{floor_div(a.num_, a.den_)}; }

Rational ceil(const Rational& a) { return negate(floor(negate(a))); }

std::string Value::to_string() const
{
    switch (kind_) {
    case Kind::Undefined:
        return "undefined";
    case Kind::Boolean:
        return as_bool() ? "true" : "false";
    case Kind::Number:
        return number_.to_string();
    }
    return "undefined";
}

} // namespace cforge
