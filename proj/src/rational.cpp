#include "rtplan/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rtplan/errors.hpp"

namespace rtplan {

namespace {

using i128 = __int128;

constexpr i128 kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr i128 kInt64Min = std::numeric_limits<std::int64_t>::min();

i128 abs128(i128 v) { return v < 0 ? -v : v; }

std::int64_t narrow(i128 v) {
    if (v > kInt64Max || v < kInt64Min) throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 pow10_128(int exponent) {
    i128 result = 1;
    for (int i = 0; i < exponent; ++i) {
        result *= 10;
        if (result > kInt64Max * static_cast<i128>(10)) throw std::overflow_error("decimal exponent too large");
    }
    return result;
}

}  // namespace

Rational Rational::reduced(i128 numerator, i128 denominator) {
    if (denominator == 0) throw std::invalid_argument("zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const i128 g = gcd128(numerator, denominator);
    if (g > 1) {
        numerator /= g;
        denominator /= g;
    }
    Rational r;
    r.num_ = narrow(numerator);
    r.den_ = narrow(denominator);
    return r;
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    *this = reduced(numerator, denominator);
}

Rational Rational::from_decimal(std::string_view text) {
    const auto fail = [&] { throw ParseError("not a decimal number: \"" + std::string(text) + "\""); };

    std::string_view rest = text;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }

    i128 digits = 0;
    int integer_digits = 0;
    int fraction_digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    std::size_t pos = 0;
    for (; pos < rest.size(); ++pos) {
        const char c = rest[pos];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            if (digits > kInt64Max) fail();
            seen_digit = true;
            (seen_dot ? fraction_digits : integer_digits)++;
        } else if (c == '.') {
            if (seen_dot) fail();
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            fail();
        }
    }
    if (!seen_digit) fail();
    (void)integer_digits;

    int exponent = 0;
    if (pos < rest.size()) {
        const std::string_view exp_text = rest.substr(pos + 1);
        if (exp_text.empty()) fail();
        const auto [end, ec] =
            std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc{} || end != exp_text.data() + exp_text.size()) fail();
        if (exponent > 18 || exponent < -18) fail();
    }

    i128 numerator = negative ? -digits : digits;
    const int scale = exponent - fraction_digits;
    if (scale >= 0) {
        numerator *= pow10_128(scale);
        return reduced(numerator, 1);
    }
    return reduced(numerator, pow10_128(-scale));
}

Rational Rational::from_double(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) throw ParseError("unrepresentable floating-point value");
    return from_decimal(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

std::string Rational::to_decimal(int max_fraction_digits) const {
    const bool negative = num_ < 0;
    i128 n = abs128(num_);
    i128 whole = n / den_;
    i128 remainder = n % den_;

    std::string fraction;
    if (remainder != 0 && max_fraction_digits > 0) {
        const i128 scale = pow10_128(max_fraction_digits);
        // round half away from zero
        i128 scaled = (remainder * scale * 2 + den_) / (static_cast<i128>(den_) * 2);
        if (scaled >= scale) {  // rounding carried into the integer part
            whole += 1;
            scaled -= scale;
        }
        if (scaled > 0) {
            fraction.resize(static_cast<std::size_t>(max_fraction_digits));
            for (int i = max_fraction_digits - 1; i >= 0; --i) {
                fraction[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(scaled % 10));
                scaled /= 10;
            }
            while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
        }
    }

    std::string digits;
    if (whole == 0) {
        digits = "0";
    } else {
        while (whole > 0) {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
            whole /= 10;
        }
    }

    std::string out;
    if (negative && (digits != "0" || !fraction.empty())) out += '-';
    out += digits;
    if (!fraction.empty()) {
        out += '.';
        out += fraction;
    }
    return out;
}

std::string Rational::to_decimal_exact() const {
    std::int64_t d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1)
        throw ValidationError("value " + std::to_string(num_) + "/" + std::to_string(den_) +
                              " has no exact decimal form");
    const int digits = twos > fives ? twos : fives;
    return to_decimal(digits);
}

std::int64_t Rational::ceil() const {
    if (num_ >= 0) return narrow((static_cast<i128>(num_) + den_ - 1) / den_);
    return num_ / den_;
}

std::int64_t Rational::ceil_mul(const Rational& f, std::int64_t n) {
    if (f.is_negative()) throw std::invalid_argument("ceil_mul requires a non-negative fraction");
    const i128 product = static_cast<i128>(f.num_) * n;
    return narrow((product + f.den_ - 1) / f.den_);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    *this = reduced(static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_,
                    static_cast<i128>(den_) * rhs.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    *this = reduced(static_cast<i128>(num_) * rhs.den_ - static_cast<i128>(rhs.num_) * den_,
                    static_cast<i128>(den_) * rhs.den_);
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    *this = reduced(static_cast<i128>(num_) * rhs.num_, static_cast<i128>(den_) * rhs.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw std::invalid_argument("division by zero");
    *this = reduced(static_cast<i128>(num_) * rhs.den_, static_cast<i128>(den_) * rhs.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const i128 left = static_cast<i128>(lhs.num_) * rhs.den_;
    const i128 right = static_cast<i128>(rhs.num_) * lhs.den_;
    if (left < right) return std::strong_ordering::less;
    if (left > right) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace rtplan
