#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace lcdk {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// x^e for integer exponents; e < 0 requires x != 0.
inline Rational rational_pow(const Rational& x, std::int64_t e) {
    if (e == 0) return 1;
    if (e < 0 && x == 0) throw std::domain_error("rational_pow: zero base with negative exponent");
    auto n = static_cast<unsigned>(e < 0 ? -e : e);
    BigInt num = boost::multiprecision::pow(boost::multiprecision::numerator(x), n);
    BigInt den = boost::multiprecision::pow(boost::multiprecision::denominator(x), n);
    return e < 0 ? Rational(den, num) : Rational(num, den);
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline constexpr double to_double(double x) { return x; }

// Every finite double is a dyadic rational; conversion is exact.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("rational_from_double: non-finite input");
    return Rational(x);
}

namespace detail {

// cpp_int's string constructor treats a leading 0 as an octal prefix; decimal
// literals need it stripped.
inline BigInt bigint_decimal(std::string s) {
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    while (i + 1 < s.size() && s[i] == '0') ++i;
    if (i >= s.size()) throw std::invalid_argument("bigint_decimal: empty literal");
    for (size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("bigint_decimal: bad digit");
    BigInt n(s.substr(i));
    return neg ? BigInt(-n) : n;
}

}  // namespace detail

// Accepts "num/den", plain integers, and decimal literals ("-3/4", "12", "0.25", "1e-3").
// Decimal strings parse exactly (no binary float round trip).
inline Rational parse_rational(std::string_view s) {
    auto fail = [&] { throw std::invalid_argument("parse_rational: bad literal '" + std::string(s) + "'"); };
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string_view::npos) fail();
    s = s.substr(b, e - b + 1);

    if (size_t slash = s.find('/'); slash != std::string_view::npos) {
        std::string num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (num.empty() || den.empty()) fail();
        BigInt n = detail::bigint_decimal(num), d = detail::bigint_decimal(den);
        if (d == 0) fail();
        return Rational(n, d);
    }

    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    std::int64_t scale10 = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++scale10;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            std::int64_t ex = 0;
            bool exneg = false;
            ++i;
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) exneg = (s[i++] == '-');
            if (i >= s.size()) fail();
            for (; i < s.size(); ++i) {
                if (s[i] < '0' || s[i] > '9') fail();
                ex = ex * 10 + (s[i] - '0');
                if (ex > 100000) fail();
            }
            scale10 += exneg ? ex : -ex;
            break;
        } else {
            fail();
        }
    }
    if (!seen_digit) fail();
    BigInt n = detail::bigint_decimal(digits.empty() ? "0" : digits);
    if (neg) n = -n;
    Rational r(n);
    if (scale10 > 0) r /= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale10));
    if (scale10 < 0) r *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-scale10));
    return r;
}

inline std::string format_rational(const Rational& x) {
    std::string num = boost::multiprecision::numerator(x).str();
    BigInt den = boost::multiprecision::denominator(x);
    if (den == 1) return num;
    return num + "/" + den.str();
}

// Scalar backend policy: exact comparisons for Rational, relative slack for double.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static bool ge(const Rational& a, const Rational& b) { return a >= b; }
    static bool eq(const Rational& a, const Rational& b) { return a == b; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr double rel_tol = 1e-9;
    static double scale(double a, double b) { return std::max(std::fabs(a), std::fabs(b)); }
    static bool ge(double a, double b) { return a >= b - rel_tol * scale(a, b); }
    static bool eq(double a, double b) { return std::fabs(a - b) <= rel_tol * scale(a, b); }
};

}  // namespace lcdk
