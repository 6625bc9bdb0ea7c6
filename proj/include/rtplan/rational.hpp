#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rtplan {

// Exact rational number on int64 numerator/denominator. Risk scores and
// selection cutoffs are computed exactly so that orderings never depend on
// floating-point rounding. Denominator is always positive, fractions are
// kept reduced; arithmetic throws std::overflow_error if a reduced result
// no longer fits in int64 (domain values here are tiny, so that is a bug,
// not an expected path).
class Rational {
  public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value) {}
    Rational(std::int64_t numerator, std::int64_t denominator);

    // Parses "12", "-0.25", "1.5e-2". Throws ParseError on anything else.
    static Rational from_decimal(std::string_view text);

    // Converts via the shortest round-trip decimal form, so doubles that
    // came from decimal text (JSON numbers) convert to the value the file
    // author wrote: 0.1 -> 1/10, not 3602879701896397/2^55.
    static Rational from_double(double value);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Decimal rendering, rounded half away from zero to at most
    // `max_fraction_digits`, trailing zeros trimmed ("16", "1.5", "0.333333").
    std::string to_decimal(int max_fraction_digits = 6) const;

    // Exact decimal rendering; throws ValidationError when the reduced
    // denominator has prime factors other than 2 and 5.
    std::string to_decimal_exact() const;

    // Smallest integer >= value.
    std::int64_t ceil() const;

    // ceil(f * n) without leaving exact arithmetic; f must be >= 0.
    static std::int64_t ceil_mul(const Rational& f, std::int64_t n);

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& lhs, const Rational& rhs) = default;
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

  private:
    static Rational reduced(__int128 numerator, __int128 denominator);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace rtplan
