#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "mirage/errors.hpp"

namespace mirage {

// Exact rational arithmetic. cpp_rational keeps values canonical (lowest
// terms, positive denominator), which the comparisons below rely on.
using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline bigint numer(const rational& q) { return boost::multiprecision::numerator(q); }
inline bigint denom(const rational& q) { return boost::multiprecision::denominator(q); }

// 2^e for any integer e, as an exact rational.
inline rational pow2(std::int64_t e) {
    if (e >= 0)
        return rational(bigint(1) << e);
    return rational(bigint(1), bigint(1) << (-e));
}

// True when q = n / 2^k (integers included).
inline bool is_dyadic(const rational& q) {
    bigint d = denom(q);
    return (d & (d - 1)) == 0;
}

// True when |q| is exactly a power of two.
inline bool is_pow2_magnitude(const rational& q) {
    if (q == 0)
        return false;
    bigint n = boost::multiprecision::abs(numer(q));
    bigint d = denom(q);
    return ((n & (n - 1)) == 0) && ((d & (d - 1)) == 0) && (n == 1 || d == 1);
}

inline rational rat_abs(const rational& q) { return q < 0 ? rational(-q) : q; }

// floor(q) for any sign.
inline bigint rat_floor(const rational& q) {
    bigint n = numer(q), d = denom(q);
    bigint t = n / d;
    if (n < 0 && t * d != n)
        --t;
    return t;
}

// Canonical "num/den" rendering used by every serializer.
inline std::string ratio_string(const rational& q) {
    return numer(q).str() + "/" + denom(q).str();
}

inline rational parse_ratio(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return rational(bigint(s));
    return rational(bigint(s.substr(0, slash)), bigint(s.substr(slash + 1)));
}

} // namespace mirage
