#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "twistscan/errors.hpp"

namespace twistscan {

using Int = mpz_class;
using Rat = mpq_class;

// mpq_class does not canonicalize on construction; always build through here.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw Error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Naive multiplicative height max(|num|, den) on lowest terms; H(0) = 1.
inline Int naive_height(const Rat& q) {
    Int n = abs(q.get_num());
    const Int& d = q.get_den();
    return n > d ? n : d;
}

inline std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat parse_rat(std::string_view s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            Int n(std::string(s), 10);
            return Rat(n);
        }
        Int n(std::string(s.substr(0, slash)), 10);
        Int d(std::string(s.substr(slash + 1)), 10);
        return make_rat(n, d);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational '" + std::string(s) + "'");
    }
}

// Visits every rational of naive height <= H exactly once, in canonical scan
// order: denominator b ascending, numerator a ascending within b.
template <class F>
void for_each_rational(std::uint64_t H, F&& visit) {
    auto bound = static_cast<long>(H);
    mpz_class g;
    for (long b = 1; b <= bound; ++b) {
        for (long a = -bound; a <= bound; ++a) {
            if (b > 1) {
                if (a == 0) continue;
                g = gcd(mpz_class(a), mpz_class(b));
                if (g != 1) continue;
            }
            visit(make_rat(Int(a), Int(b)));
        }
    }
}

}  // namespace twistscan
