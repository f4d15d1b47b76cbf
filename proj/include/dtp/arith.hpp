#pragma once

// Exact integer/rational substrate shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace dtp {

using BigInt = boost::multiprecision::cpp_int;
/// Always reduced, denominator positive.
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<BigInt>;
using RatVector = std::vector<Rational>;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0)
        return 0;
    return boost::multiprecision::abs(a / gcd(a, b) * b);
}

inline BigInt floor_div(const Rational& q) {
    BigInt n = numerator_of(q), d = denominator_of(q);
    BigInt r = n / d;
    if (n % d != 0 && n < 0)
        --r;
    return r;
}

inline BigInt ceil_div(const Rational& q) {
    BigInt f = floor_div(q);
    return is_integer(q) ? f : f + 1;
}

inline std::int64_t to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
    return static_cast<std::int64_t>(v);
}

inline IntVector make_vector(std::initializer_list<long long> xs) {
    IntVector v;
    v.reserve(xs.size());
    for (long long x : xs)
        v.emplace_back(x);
    return v;
}

inline IntVector zero_vector(std::size_t dim) { return IntVector(dim, BigInt(0)); }

inline bool is_zero(const IntVector& v) {
    for (const auto& x : v)
        if (x != 0)
            return false;
    return true;
}

inline void check_same_dim(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
}

inline BigInt dot(const IntVector& a, const IntVector& b) {
    check_same_dim(a, b);
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline Rational dot(const RatVector& a, const IntVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline IntVector operator+(const IntVector& a, const IntVector& b) {
    check_same_dim(a, b);
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

inline IntVector operator-(const IntVector& a, const IntVector& b) {
    check_same_dim(a, b);
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline IntVector operator-(const IntVector& a) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = -a[i];
    return r;
}

inline IntVector operator*(const BigInt& k, const IntVector& a) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = k * a[i];
    return r;
}

/// gcd of the absolute values of the components; 0 for the zero vector.
inline BigInt content(const IntVector& v) {
    BigInt g = 0;
    for (const auto& x : v)
        g = gcd(g, x);
    return g;
}

inline std::string to_string(const IntVector& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator_of(q);
    if (denominator_of(q) != 1)
        os << '/' << denominator_of(q);
    return os.str();
}

/// Conversion to a floating type (builtin or boost multiprecision).
template <class Real>
Real to_real(const BigInt& v) {
    if constexpr (std::is_arithmetic_v<Real>)
        return v.template convert_to<Real>();
    else
        return Real(v);
}

template <class Real>
Real to_real(const Rational& q) {
    return to_real<Real>(numerator_of(q)) / to_real<Real>(denominator_of(q));
}

} // namespace dtp
