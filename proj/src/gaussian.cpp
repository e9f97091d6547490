#include "plnc/gaussian.hpp"

#include <stdexcept>
#include <tuple>

namespace plnc {

using i128 = __int128;

std::uint64_t GaussianInt::norm() const {
    i128 n = i128(re) * re + i128(im) * im;
    return static_cast<std::uint64_t>(n);
}

GaussianInt operator*(GaussianInt a, GaussianInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussianInt canonical_associate(GaussianInt g) {
    if (g.is_zero()) return g;
    for (int k = 0; k < 4; ++k) {
        if (g.re > 0 && g.im >= 0) return g;
        g = g.times_j();
    }
    throw std::logic_error("canonical_associate: unreachable");
}

namespace {

// Nearest integer to p/q, half-away-from-zero. q > 0.
std::int64_t div_round(i128 p, i128 q) {
    i128 r = (p >= 0) ? (2 * p + q) / (2 * q) : -((-2 * p + q) / (2 * q));
    return static_cast<std::int64_t>(r);
}

// Rounded Gaussian quotient a/b; the remainder a - q*b has norm < norm(b).
GaussianInt rounded_quotient(GaussianInt a, GaussianInt b) {
    i128 n = i128(b.re) * b.re + i128(b.im) * b.im;
    i128 pre = i128(a.re) * b.re + i128(a.im) * b.im;
    i128 pim = i128(a.im) * b.re - i128(a.re) * b.im;
    return {div_round(pre, n), div_round(pim, n)};
}

}  // namespace

GaussianInt gauss_gcd(GaussianInt a, GaussianInt b) {
    if (a.is_zero() && b.is_zero())
        throw std::invalid_argument("gauss_gcd: both arguments zero");
    while (!b.is_zero()) {
        GaussianInt q = rounded_quotient(a, b);
        GaussianInt r = a - q * b;
        a = b;
        b = r;
    }
    return canonical_associate(a);
}

bool is_coprime(GaussianInt a, GaussianInt b) { return gauss_gcd(a, b).is_unit(); }

bool exact_divide(GaussianInt a, GaussianInt d, GaussianInt& quotient) {
    if (d.is_zero()) return false;
    GaussianInt q = rounded_quotient(a, d);
    if (a - q * d == GaussianInt{0, 0}) {
        quotient = q;
        return true;
    }
    return false;
}

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("euler_phi: n must be >= 1");
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

GaussianRational::GaussianRational(GaussianInt num, GaussianInt den) {
    if (den.is_zero()) throw std::invalid_argument("GaussianRational: zero denominator");
    if (num.is_zero()) {
        num_ = {0, 0};
        den_ = {1, 0};
        return;
    }
    GaussianInt g = gauss_gcd(num, den);
    GaussianInt qn, qd;
    exact_divide(num, g, qn);
    exact_divide(den, g, qd);
    // Rotate both by the unit that puts the denominator into the canonical quadrant.
    GaussianInt unit{1, 0};
    GaussianInt d = qd;
    while (!(d.re > 0 && d.im >= 0)) {
        d = d.times_j();
        unit = unit.times_j();
    }
    num_ = qn * unit;
    den_ = d;
}

std::complex<double> GaussianRational::value() const {
    return num_.value() / den_.value();
}

GaussianRational GaussianRational::reciprocal() const {
    if (is_zero()) throw std::invalid_argument("reciprocal of zero");
    return {den_, num_};
}

GaussianRational GaussianRational::times_j() const { return {num_.times_j(), den_}; }

GaussianRational GaussianRational::conj() const { return {num_.conj(), den_.conj()}; }

GaussianRational GaussianRational::negate() const { return {-num_, den_}; }

bool operator<(const GaussianRational& a, const GaussianRational& b) {
    auto key = [](const GaussianRational& q) {
        return std::make_tuple(q.num_.norm(), q.den_.norm(), q.num_.re, q.num_.im,
                               q.den_.re, q.den_.im);
    };
    return key(a) < key(b);
}

namespace {

std::string gi_str(GaussianInt g) {
    std::string s = std::to_string(g.re);
    s += (g.im >= 0 ? "+" : "-");
    s += std::to_string(g.im >= 0 ? g.im : -g.im);
    s += "i";
    return s;
}

// Parses "a+bi" with optional sign on both parts.
GaussianInt gi_parse(const std::string& s) {
    std::size_t pos = 0;
    auto read_int = [&]() {
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
            throw std::invalid_argument("bad gaussian integer: " + s);
        return std::stoll(s.substr(start, pos - start));
    };
    std::int64_t re = read_int();
    std::int64_t im = read_int();
    if (pos >= s.size() || (s[pos] != 'i' && s[pos] != 'j'))
        throw std::invalid_argument("bad gaussian integer: " + s);
    ++pos;
    if (pos != s.size()) throw std::invalid_argument("bad gaussian integer: " + s);
    return {re, im};
}

}  // namespace

std::string GaussianRational::str() const { return gi_str(num_) + "/" + gi_str(den_); }

GaussianRational GaussianRational::parse(const std::string& text) {
    std::size_t slash = text.find('/');
    if (slash == std::string::npos)
        return {gi_parse(text), GaussianInt{1, 0}};
    return {gi_parse(text.substr(0, slash)), gi_parse(text.substr(slash + 1))};
}

}  // namespace plnc
