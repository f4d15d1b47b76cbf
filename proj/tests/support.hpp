#pragma once

// Oracles and fixtures shared by the unit tests and the acceptance binary.
// Nothing here calls the counting engines.

#include "dtp/dtp.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dtp::testing {

inline std::vector<IntVector> vecs(std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<IntVector> out;
    for (auto r : rows)
        out.push_back(make_vector(r));
    return out;
}

inline const std::vector<IntVector>& example1() {
    static const auto X = vecs({{1}, {1}, {2}});
    return X;
}

inline const std::vector<IntVector>& example2() {
    static const auto X = vecs({{1, 0}, {0, 1}, {-1, 2}});
    return X;
}

// Plain nested-loop enumeration of beta with beta_i <= <xi,alpha>/<xi,a_i>, machine integers,
// no pruning. Only for tiny systems.
inline std::int64_t enumerate_count(const std::vector<IntVector>& X, const IntVector& alpha) {
    const auto cert = pointedness_certificate(X);
    if (!cert)
        throw std::invalid_argument("enumerate_count: not pointed");
    BigInt den = 1;
    for (const auto& c : cert->xi)
        den = lcm(den, denominator_of(c));
    std::vector<std::int64_t> xi;
    for (const auto& c : cert->xi)
        xi.push_back(to_int64(numerator_of(c * den)));
    const std::size_t s = alpha.size(), n = X.size();
    auto pair = [&](const IntVector& v) {
        std::int64_t t = 0;
        for (std::size_t i = 0; i < s; ++i)
            t += xi[i] * to_int64(v[i]);
        return t;
    };
    const std::int64_t total = pair(alpha);
    if (total < 0)
        return 0;
    std::vector<std::int64_t> bound(n);
    for (std::size_t k = 0; k < n; ++k)
        bound[k] = total / pair(X[k]);
    std::vector<std::int64_t> beta(n, 0);
    std::int64_t count = 0;
    while (true) {
        bool hit = true;
        for (std::size_t i = 0; i < s && hit; ++i) {
            std::int64_t sum = 0;
            for (std::size_t k = 0; k < n; ++k)
                sum += beta[k] * to_int64(X[k][i]);
            hit = sum == to_int64(alpha[i]);
        }
        count += hit;
        std::size_t k = 0;
        while (k < n && beta[k] == bound[k])
            beta[k++] = 0;
        if (k == n)
            return count;
        ++beta[k];
    }
}

// Hand-transcribed three-piece formula for X = {(1,0),(0,1),(-1,2)}:
//   (2x+y+2)/2 t_A1(x,y) + (2x+y+1)/2 t_A1(x,y-1) - x t_A2(x,y)
// with A1 = {(1,0),(-1,2)}, A2 the standard basis.
inline Rational example2_formula(long long x, long long y) {
    // (x,y) = l1 (1,0) + l2 (-1,2): l2 = y/2, l1 = x + y/2
    auto in_a1 = [](long long u, long long v) { return v >= 0 && v % 2 == 0 && u + v / 2 >= 0; };
    auto in_a2 = [](long long u, long long v) { return u >= 0 && v >= 0; };
    Rational r = 0;
    if (in_a1(x, y))
        r += Rational(2 * x + y + 2, 2);
    if (in_a1(x, y - 1))
        r += Rational(2 * x + y + 1, 2);
    if (in_a2(x, y))
        r -= x;
    return r;
}

// Coefficient of z^n in 1/((1-z)^2 (1-z^2)) by series multiplication.
inline std::vector<std::int64_t> example1_series(std::size_t terms) {
    std::vector<std::int64_t> c(terms, 0);
    c[0] = 1;
    for (int a : {1, 1, 2})
        for (std::size_t n = a; n < terms; ++n)
            c[n] += c[n - a];
    return c;
}

// Violated reduction invariant, if any.
inline std::optional<std::string> reduced_invariant_violation(const ReducedForm& rf) {
    const std::size_t s = rf.source.front().size();
    std::optional<std::string> bad;
    rf.sum.for_each([&](const IntVector& shift, const Denominator& d, const Rational&) {
        if (bad)
            return;
        std::vector<IntVector> vs;
        unsigned power = 0;
        for (const auto& f : d) {
            vs.push_back(f.vector);
            power += f.power;
        }
        if (power != rf.source.size())
            bad = "total power " + std::to_string(power) + " != #X at shift " + to_string(shift);
        else if (vs.size() != s || rank(vs) != s)
            bad = "denominator not " + std::to_string(s) + " independent vectors";
        for (const auto& v : vs) {
            bool multiple = false;
            for (const auto& a : rf.source) {
                auto rel = integer_relation(std::vector<IntVector>{a}, v);
                multiple = multiple || (rel && rel->multiplier == 1 && rel->coefficients[0] >= 1);
            }
            if (!multiple && !bad)
                bad = "denominator vector " + to_string(v) + " is not a positive multiple of a source vector";
        }
    });
    return bad;
}

struct RandomSystem {
    std::vector<IntVector> X;
    ReducedForm reduced;
};

struct RandomSuite {
    std::vector<RandomSystem> systems;
    std::size_t rejected_rank = 0;
    std::size_t rejected_not_pointed = 0;
    std::size_t rejected_budget = 0;
};

inline constexpr std::uint64_t suite_seed = 1;
inline constexpr std::size_t suite_size = 50;
// Term budget for the random suite. The reduced form grows with the product of relation
// multipliers, so a few dense systems run into the millions of terms and are skipped.
inline constexpr std::size_t suite_term_budget = 100000;

// Draws s in {1,2,3}, #X in [s,6], entries in [-3,3] (zero vectors redrawn), keeping systems
// of full rank with a pointed cone whose reduction stays within the budget.
inline RandomSuite random_suite(std::uint64_t seed = suite_seed, std::size_t count = suite_size,
                                std::size_t budget = suite_term_budget) {
    std::mt19937_64 rng(seed);
    RandomSuite suite;
    while (suite.systems.size() < count) {
        const std::size_t s = 1 + rng() % 3;
        const std::size_t n = s + rng() % (7 - s);
        std::vector<IntVector> X;
        while (X.size() < n) {
            IntVector v(s);
            for (auto& c : v)
                c = static_cast<long long>(rng() % 7) - 3;
            if (!is_zero(v))
                X.push_back(std::move(v));
        }
        if (rank(X) != s) {
            ++suite.rejected_rank;
            continue;
        }
        if (!pointedness_certificate(X)) {
            ++suite.rejected_not_pointed;
            continue;
        }
        ReduceOptions opts;
        opts.self_check = false;
        opts.max_terms = budget;
        try {
            ReducedForm rf = toric_reduce(X, opts);
            suite.systems.push_back({std::move(X), std::move(rf)});
        } catch (const reduction_too_large&) {
            ++suite.rejected_budget;
        }
    }
    return suite;
}

} // namespace dtp::testing
