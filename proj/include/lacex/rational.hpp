#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace lacex {

// Exact rational scalar used throughout the enumeration layer.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_pow(const Rat& base, unsigned e) {
    Rat out(1);
    Rat b = base;
    while (e) {
        if (e & 1u) out *= b;
        b *= b;
        e >>= 1u;
    }
    return out;
}

inline double to_double(const Rat& q) { return q.get_d(); }

inline std::string num_string(const Rat& q) { return q.get_num().get_str(); }
inline std::string den_string(const Rat& q) { return q.get_den().get_str(); }

inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

// Decimal expansion with up to `digits` fractional digits, exact when it
// terminates; used for CSV artifacts.
inline std::string decimal_string(const Rat& q, int digits = 40) {
    mpz_class num = q.get_num(), den = q.get_den();
    std::string sign = (num < 0) ? "-" : "";
    if (num < 0) num = -num;
    mpz_class ip = num / den, rem = num % den;
    std::string out = sign + ip.get_str();
    if (rem == 0) return out;
    out += '.';
    for (int i = 0; i < digits && rem != 0; ++i) {
        rem *= 10;
        mpz_class digit = rem / den;
        rem %= den;
        out += static_cast<char>('0' + digit.get_si());
    }
    return out;
}

}  // namespace lacex
