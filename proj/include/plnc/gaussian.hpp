#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace plnc {

// Exact arithmetic over the Gaussian integers Z[j].
// Safe for |re|,|im| up to 2^31 (norms are computed in 128-bit).
struct GaussianInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    constexpr GaussianInt() = default;
    constexpr GaussianInt(std::int64_t r, std::int64_t i) : re(r), im(i) {}

    constexpr bool is_zero() const { return re == 0 && im == 0; }
    bool is_unit() const { return norm() == 1; }

    std::uint64_t norm() const;  // re^2 + im^2

    constexpr GaussianInt conj() const { return {re, -im}; }
    constexpr GaussianInt times_j() const { return {-im, re}; }

    friend constexpr GaussianInt operator+(GaussianInt a, GaussianInt b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend constexpr GaussianInt operator-(GaussianInt a, GaussianInt b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend constexpr GaussianInt operator-(GaussianInt a) { return {-a.re, -a.im}; }
    friend GaussianInt operator*(GaussianInt a, GaussianInt b);
    friend constexpr bool operator==(GaussianInt a, GaussianInt b) {
        return a.re == b.re && a.im == b.im;
    }

    std::complex<double> value() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

// The unit multiple of g lying in the half-open first quadrant
// (re > 0, im >= 0); zero maps to zero. Exactly one of the four
// associates g, jg, -g, -jg satisfies this, so the result is unique.
GaussianInt canonical_associate(GaussianInt g);

// Euclidean gcd with rounded-quotient division; result in canonical
// associate form. Both arguments zero is an error.
GaussianInt gauss_gcd(GaussianInt a, GaussianInt b);

bool is_coprime(GaussianInt a, GaussianInt b);

// Quotient a/d when d divides a exactly; returns false otherwise.
bool exact_divide(GaussianInt a, GaussianInt d, GaussianInt& quotient);

// Euler totient of n >= 1.
std::uint64_t euler_phi(std::uint64_t n);

// Ratio of Gaussian integers kept in canonical form: gcd(num, den) is a
// unit and den lies in the half-open first quadrant. Structural equality
// of canonical forms coincides with equality as complex numbers.
class GaussianRational {
public:
    GaussianRational() : num_(0, 0), den_(1, 0) {}
    GaussianRational(GaussianInt num, GaussianInt den);  // throws on den == 0
    GaussianRational(std::int64_t re, std::int64_t im)
        : GaussianRational(GaussianInt{re, im}, GaussianInt{1, 0}) {}

    const GaussianInt& num() const { return num_; }
    const GaussianInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    std::complex<double> value() const;

    GaussianRational reciprocal() const;  // throws on zero
    GaussianRational times_j() const;
    GaussianRational conj() const;
    GaussianRational negate() const;

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    // Deterministic total order: (|num|^2, |den|^2, num lex, den lex).
    friend bool operator<(const GaussianRational& a, const GaussianRational& b);

    std::string str() const;  // "a+bi/c+di"
    static GaussianRational parse(const std::string& text);

private:
    GaussianInt num_;
    GaussianInt den_;
};

}  // namespace plnc
