#pragma once

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "convseq/errors.hpp"

namespace convseq {

// Exact integer used for sequence values, sums, and counters that may not fit
// in 64 bits (e.g. sqrt sequences quantized at 10^30).
using Scalar = boost::multiprecision::cpp_int;

// Exact rational used for exponent bookkeeping in the partition recursion.
using Rational = boost::multiprecision::cpp_rational;

inline Scalar pow10(unsigned digits) {
    Scalar r(1);
    for (unsigned i = 0; i < digits; ++i) r *= 10;
    return r;
}

inline Scalar ipow(const Scalar& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

inline Scalar ipow(std::uint64_t base, unsigned exp) {
    return boost::multiprecision::pow(Scalar(base), exp);
}

// round(sqrt(x)) with exact tie handling: s+1 wins iff x > s^2 + s.
inline Scalar sqrt_rounded(const Scalar& x) {
    if (x < 0) throw domain_error("sqrt_rounded: negative argument");
    Scalar s = boost::multiprecision::sqrt(x);
    if (x - s * s > s) ++s;
    return s;
}

inline Scalar from_u128(unsigned __int128 v) {
    Scalar hi(static_cast<std::uint64_t>(v >> 64));
    return (hi << 64) | static_cast<std::uint64_t>(v);
}

inline double to_double(const Scalar& x) { return x.convert_to<double>(); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline std::optional<std::int64_t> to_int64(const Scalar& x) {
    if (x < std::numeric_limits<std::int64_t>::min() ||
        x > std::numeric_limits<std::int64_t>::max())
        return std::nullopt;
    return x.convert_to<std::int64_t>();
}

inline std::optional<std::uint64_t> to_uint64(const Scalar& x) {
    if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return x.convert_to<std::uint64_t>();
}

inline std::string to_string(const Scalar& x) { return x.str(); }

inline std::string to_string(const Rational& x) { return x.str(); }

// Strict signed-integer literal: optional sign followed by digits only.
inline Scalar parse_integer(const std::string& text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size()) throw domain_error("parse_integer: empty literal '" + text + "'");
    Scalar value(0);
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw domain_error("parse_integer: bad character in '" + text + "'");
        value = value * 10 + (text[i] - '0');
    }
    return negative ? -value : value;
}

// Accepts "p/q" and decimal literals like "-0.125"; result is exact.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Scalar num = parse_integer(text.substr(0, slash));
        Scalar den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw domain_error("parse_rational: zero denominator in '" + text + "'");
        return Rational(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    unsigned frac = static_cast<unsigned>(text.size() - dot - 1);
    if (frac == 0) throw domain_error("parse_rational: trailing dot in '" + text + "'");
    return Rational(parse_integer(digits), pow10(frac));
}

}  // namespace convseq

namespace std {

template <>
struct hash<convseq::Scalar> {
    std::size_t operator()(const convseq::Scalar& x) const noexcept {
        return boost::hash<convseq::Scalar>()(x);
    }
};

}  // namespace std
