#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "brwre/errors.hpp"

namespace brwre {

// Exact rational displacement. Laws are restricted to rational support so
// that equal displacements compare exactly and populations live on a lattice.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
    explicit Rational(std::int64_t n) : num(n), den(1) {}

    void normalize() {
        if (den == 0) throw NumericError("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

// Parses a plain decimal ("-1", "0.5", "2.25") or a fraction ("1/3") exactly.
Rational parse_rational(const std::string& text);

std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace brwre
