#pragma once

#include <vector>

#include <gmpxx.h>

#include "twistscan/rational.hpp"

namespace twistscan {

// Dense polynomial over Q, coefficients low-to-high.  Just enough machinery
// for extended gcds of small fixed-degree polynomials.
struct PolyQ {
    std::vector<Rat> c;

    PolyQ() = default;
    explicit PolyQ(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Rat& lead() const { return c.back(); }

    Rat operator()(const Rat& x) const {
        Rat acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
};

inline PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return PolyQ(std::move(r));
}

inline PolyQ operator-(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return PolyQ(std::move(r));
}

inline PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.zero() || b.zero()) return PolyQ();
    std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return PolyQ(std::move(r));
}

inline PolyQ operator*(const Rat& s, const PolyQ& a) {
    PolyQ r = a;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
}

// Euclidean division a = q*b + r.
inline void divmod(const PolyQ& a, const PolyQ& b, PolyQ& q, PolyQ& r) {
    q = PolyQ();
    r = a;
    if (b.zero()) throw Error("polynomial division by zero");
    while (!r.zero() && r.degree() >= b.degree()) {
        int shift = r.degree() - b.degree();
        Rat coef = r.lead() / b.lead();
        std::vector<Rat> mono(shift + 1, Rat(0));
        mono.back() = coef;
        PolyQ term{std::move(mono)};
        q = q + term;
        r = r - term * b;
    }
}

// Monic gcd.
inline PolyQ poly_gcd(PolyQ a, PolyQ b) {
    while (!b.zero()) {
        PolyQ q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (!a.zero()) a = (Rat(1) / a.lead()) * a;
    return a;
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic (or zero).
struct PolyExtGcd {
    PolyQ g, u, v;
};

inline PolyExtGcd poly_ext_gcd(const PolyQ& a, const PolyQ& b) {
    PolyQ r0 = a, r1 = b;
    PolyQ u0{{Rat(1)}}, u1;
    PolyQ v0, v1{{Rat(1)}};
    while (!r1.zero()) {
        PolyQ q, r;
        divmod(r0, r1, q, r);
        PolyQ u2 = u0 - q * u1;
        PolyQ v2 = v0 - q * v1;
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
    }
    if (!r0.zero()) {
        Rat s = Rat(1) / r0.lead();
        r0 = s * r0;
        u0 = s * u0;
        v0 = s * v0;
    }
    return {r0, u0, v0};
}

}  // namespace twistscan
