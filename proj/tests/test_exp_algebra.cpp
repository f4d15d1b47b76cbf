#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dtp;
using dtp::testing::vecs;

namespace {

ExpRatSum mono(long long coeff, std::initializer_list<long long> shift, Denominator d = {}) {
    return ExpRatSum(ExpRatTerm(coeff, make_vector(shift), std::move(d)));
}

double eval_at(const ExpRatSum& s, std::vector<double> x) { return eval_numeric<double>(s, x); }
double eval_at(const ExpRatTerm& t, std::vector<double> x) { return eval_numeric<double>(t, x); }

ExpRatSum random_sum(std::mt19937_64& rng, const std::vector<IntVector>& pool, std::size_t dim) {
    ExpRatSum s(dim);
    const int terms = 1 + rng() % 4;
    for (int k = 0; k < terms; ++k) {
        IntVector shift(dim);
        for (auto& c : shift)
            c = static_cast<long long>(rng() % 5) - 2;
        Denominator d;
        for (const auto& a : pool)
            if (rng() % 2)
                d.push_back({a, static_cast<unsigned>(1 + rng() % 2)});
        s.add(ExpRatTerm(Rational(static_cast<long long>(rng() % 9) - 4, 1 + rng() % 3), shift, d));
    }
    return s;
}

} // namespace

TEST(LaplaceGenerating, ExampleOneMergesRepeatedVector) {
    ExpRatTerm t = laplace_generating(dtp::testing::example1());
    EXPECT_EQ(t.num.coeff, 1);
    EXPECT_EQ(t.num.shift, make_vector({0}));
    EXPECT_EQ(t.denom, (Denominator{{make_vector({1}), 2}, {make_vector({2}), 1}}));
}

TEST(LaplaceGenerating, SingleVector) {
    ExpRatTerm t = laplace_generating(vecs({{1, 0}}));
    EXPECT_EQ(t.denom, (Denominator{{make_vector({1, 0}), 1}}));
    EXPECT_EQ(t.num.shift, make_vector({0, 0}));
}

TEST(LaplaceGenerating, ExampleTwoThreeFactors) {
    ExpRatTerm t = laplace_generating(dtp::testing::example2());
    ASSERT_EQ(t.denom.size(), 3u);
    for (const auto& f : t.denom)
        EXPECT_EQ(f.power, 1u);
    // canonical order is lexicographic on vectors
    EXPECT_EQ(t.denom[0].vector, make_vector({-1, 2}));
    EXPECT_EQ(t.denom[1].vector, make_vector({0, 1}));
    EXPECT_EQ(t.denom[2].vector, make_vector({1, 0}));
}

TEST(LaplaceGenerating, RejectsZeroVector) {
    EXPECT_THROW(laplace_generating(vecs({{1, 0}, {0, 0}})), std::invalid_argument);
}

TEST(ExpAlgebra, ShiftsAddUnderMultiplication) {
    EXPECT_EQ(mono(1, {-1}) * mono(1, {-1}), mono(1, {-2}));
}

TEST(ExpAlgebra, PowersMergeUnderMultiplication) {
    auto a = mono(1, {0}, {{make_vector({1}), 1}});
    EXPECT_EQ(a * a, mono(1, {0}, {{make_vector({1}), 2}}));
}

TEST(ExpAlgebra, OppositeTermsCancel) {
    auto sum = mono(2, {-1}) + mono(-2, {-1});
    EXPECT_TRUE(sum.empty());
    EXPECT_EQ(sum.size(), 0u);
    EXPECT_TRUE(sum.groups().empty());
}

TEST(ExpAlgebra, NormalizeMergesAndIsIdempotent) {
    std::vector<ExpRatTerm> raw{ExpRatTerm(1, make_vector({1}), {{make_vector({2}), 1}, {make_vector({2}), 1}}),
                                ExpRatTerm(3, make_vector({1}), {{make_vector({2}), 2}}),
                                ExpRatTerm(5, make_vector({0})), ExpRatTerm(-5, make_vector({0}))};
    ExpRatSum n = normalize(raw, 1);
    ASSERT_EQ(n.size(), 1u);
    EXPECT_EQ(n.terms().front().num.coeff, 4);
    EXPECT_EQ(normalize(n), n);
}

TEST(ExpAlgebra, RingLawsHoldNumerically) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = 1 + trial % 3;
        std::vector<IntVector> pool;
        while (pool.size() < 3) {
            IntVector v(dim);
            for (auto& c : v)
                c = static_cast<long long>(rng() % 4); // nonnegative entries: the positive orthant is generic
            if (!is_zero(v))
                pool.push_back(v);
        }
        auto a = random_sum(rng, pool, dim), b = random_sum(rng, pool, dim), c = random_sum(rng, pool, dim);
        auto lhs = a * (b + c), rhs = a * b + a * c;
        EXPECT_EQ(lhs, rhs);
        EXPECT_EQ(a * b, b * a);
        for (int p = 0; p < 5; ++p) {
            auto x = random_generic_point(pool, 100 * trial + p);
            const double l = eval_at(lhs, x), r = eval_at(rhs, x);
            EXPECT_LE(std::abs(l - r), 1e-9 * (1 + std::abs(l)));
            EXPECT_LE(std::abs(eval_at(a * b, x) - eval_at(a, x) * eval_at(b, x)), 1e-9 * (1 + std::abs(eval_at(a * b, x))));
        }
    }
}

TEST(GeometricFactor, TwoTerms) {
    EXPECT_EQ(geometric_factor(make_vector({1}), 2), mono(1, {0}) + mono(1, {-1}));
}

TEST(GeometricFactor, MultiplierOneIsUnit) {
    EXPECT_EQ(geometric_factor(make_vector({3, -1}), 1), ExpRatSum::one(2));
}

TEST(GeometricFactor, ThreeTerms) {
    EXPECT_EQ(geometric_factor(make_vector({1}), 3), mono(1, {0}) + mono(1, {-1}) + mono(1, {-2}));
}

TEST(GeometricFactor, TelescopesNumerically) {
    for (auto a : vecs({{1}, {2, 1}, {-1, 3}, {1, 1, 1}})) {
        std::vector<IntVector> pool{a};
        for (long long m = 1; m <= 6; ++m) {
            auto beta = geometric_factor(a, m);
            for (int p = 0; p < 5; ++p) {
                auto x = random_generic_point(pool, 7 * m + p);
                double t = 0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    t += a[i].convert_to<double>() * x[i];
                const double lhs = 1 - std::exp(-m * t), rhs = eval_at(beta, x) * (1 - std::exp(-t));
                EXPECT_LE(std::abs(lhs - rhs), 1e-9);
            }
        }
    }
}

TEST(GeometricFactor, RejectsBadArguments) {
    EXPECT_THROW(geometric_factor(make_vector({0, 0}), 2), std::invalid_argument);
    EXPECT_THROW(geometric_factor(make_vector({1}), 0), std::invalid_argument);
}

TEST(EvalNumeric, SingleFactorAtLogTwo) {
    ExpRatTerm t(1, make_vector({0}), {{make_vector({1}), 1}});
    EXPECT_NEAR(eval_at(t, {std::log(2.0)}), 2.0, 1e-12);
}

TEST(EvalNumeric, ExponentialAtZero) {
    EXPECT_NEAR(eval_at(mono(1, {-1}), {0.0}), 1.0, 1e-15);
}

TEST(EvalNumeric, ExampleOneAtLogTwo) {
    EXPECT_NEAR(eval_at(laplace_generating(dtp::testing::example1()), {std::log(2.0)}), 16.0 / 3.0, 1e-12);
}

TEST(EvalNumeric, SingularPointIsRetryable) {
    ExpRatTerm t(1, make_vector({0, 0}), {{make_vector({1, -1}), 1}});
    EXPECT_THROW(eval_at(t, {0.5, 0.5}), singular_point);
    EXPECT_NO_THROW(eval_at(t, {0.7, 0.5}));
}

TEST(RandomGenericPoint, ScalarLandsInRange) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = random_generic_point(vecs({{1}}), seed);
        ASSERT_EQ(x.size(), 1u);
        EXPECT_GE(x[0], 0.1);
        EXPECT_LE(x[0], 5.0);
    }
}

TEST(RandomGenericPoint, ExampleTwoConstraints) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = random_generic_point(dtp::testing::example2(), seed);
        EXPECT_GE(x[0], 0.1);
        EXPECT_GE(x[1], 0.1);
        EXPECT_GE(-x[0] + 2 * x[1], 0.1);
    }
}

TEST(RandomGenericPoint, DeterministicPerSeed) {
    EXPECT_EQ(random_generic_point(dtp::testing::example2(), 5), random_generic_point(dtp::testing::example2(), 5));
    EXPECT_NE(random_generic_point(dtp::testing::example2(), 5), random_generic_point(dtp::testing::example2(), 6));
}

TEST(RandomGenericPoint, NoCertificateIsAnError) {
    EXPECT_THROW(random_generic_point(vecs({{1}, {-1}}), 0), std::invalid_argument);
}

TEST(RandomGenericPoint, PairingsStayInRangeOnRandomCones) {
    auto suite = dtp::testing::random_suite(3, 10, 2000);
    for (const auto& sys : suite.systems) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto x = random_generic_point(sys.X, seed);
            for (const auto& a : sys.X) {
                double t = 0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    t += a[i].convert_to<double>() * x[i];
                EXPECT_GE(t, 0.1);
                EXPECT_LE(t, 5.0);
            }
        }
    }
}
