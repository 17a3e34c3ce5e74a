#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cforge {

// Exact rational with int64 numerator/denominator. Arithmetic is checked:
// any result that does not fit returns std::nullopt, which callers map to
// Undefined. The numerator never equals INT64_MIN, so negation is total.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {} // NOLINT(google-explicit-constructor)

    static std::optional<Rational> make(std::int64_t num, std::int64_t den);
    static std::optional<Rational> parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_integer() const noexcept { return den_ == 1; }

    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    friend std::optional<Rational> add(const Rational& a, const Rational& b);
    friend std::optional<Rational> sub(const Rational& a, const Rational& b);
    friend std::optional<Rational> mul(const Rational& a, const Rational& b);
    friend std::optional<Rational> div(const Rational& a, const Rational& b);
    friend Rational negate(const Rational& a) { return Rational{-a.num_, a.den_}; }
    friend Rational floor(const Rational& a);
    friend Rational ceil(const Rational& a);

private:
    constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {}
    static std::optional<Rational> from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// A concept or expression value: boolean, exact rational, or Undefined.
class Value {
public:
    enum class Kind : std::uint8_t { Undefined, Boolean, Number };

    constexpr Value() = default;
    static constexpr Value undefined() { return Value{}; }
    static constexpr Value boolean(bool b)
    {
        Value v;
        v.kind_ = Kind::Boolean;
        v.number_ = Rational{b ? 1 : 0};
        return v;
    }
    static constexpr Value number(Rational r)
    {
        Value v;
        v.kind_ = Kind::Number;
        v.number_ = r;
        return v;
    }
    static Value number(std::optional<Rational> r) { return r ? number(*r) : undefined(); }

    Kind kind() const noexcept { return kind_; }
    bool is_undefined() const noexcept { return kind_ == Kind::Undefined; }
    bool is_boolean() const noexcept { return kind_ == Kind::Boolean; }
    bool is_number() const noexcept { return kind_ == Kind::Number; }

    // Only a Boolean true counts; Undefined is never true.
    bool is_true() const noexcept { return kind_ == Kind::Boolean && number_.num() != 0; }
    bool is_false() const noexcept { return kind_ == Kind::Boolean && number_.num() == 0; }
    bool as_bool() const noexcept { return number_.num() != 0; }
    const Rational& as_number() const noexcept { return number_; }

    std::string to_string() const;

    friend bool operator==(const Value&, const Value&) = default;

private:
    Kind kind_ = Kind::Undefined;
    Rational number_{};
};

} // namespace cforge
