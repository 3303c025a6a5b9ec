// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_RATIONAL_HPP
#define CACHENDT_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

// Boost 1.74's mixed rational/int equality recurses forever under C++20 reversed
// candidates; exact non-template overloads take precedence.
namespace boost
{
    constexpr bool operator==(const rational<std::int64_t> &a, std::int64_t b)
    {
        return a.denominator() == 1 && a.numerator() == b;
    }
    constexpr bool operator==(std::int64_t b, const rational<std::int64_t> &a) { return a == b; }
    constexpr bool operator==(const rational<std::int64_t> &a, int b) { return a == std::int64_t(b); }
    constexpr bool operator==(int b, const rational<std::int64_t> &a) { return a == std::int64_t(b); }
}

namespace cachendt
{
    // Exact rational in lowest terms with a positive denominator.
    using Rational = boost::rational<std::int64_t>;

    // Accepts "p/q", "p", and plain decimals such as "0.8" or "-1.25" (converted exactly).
    Rational parse_rational(std::string_view text);

    // "p/q", or "p" when the denominator is 1.
    std::string to_string(const Rational &value);

    double to_double(const Rational &value);

    // 15 significant digits, as used for the decimal companion columns.
    std::string to_decimal_string(double value);
    inline std::string to_decimal_string(const Rational &value) { return to_decimal_string(to_double(value)); }

    inline Rational max(const Rational &a, const Rational &b) { return a < b ? b : a; }
    inline Rational min(const Rational &a, const Rational &b) { return b < a ? b : a; }
}

#endif
