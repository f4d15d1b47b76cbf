#include "support.hpp"

#include <gtest/gtest.h>

using namespace dtp;
using dtp::testing::vecs;

namespace {

// sum of c * x^e * y^f ... given as {coeff_num, coeff_den, exponents}
struct Mono {
    long long num, den;
    std::vector<unsigned> e;
};

MultiPoly poly(std::size_t nvars, std::initializer_list<Mono> ms) {
    MultiPoly p(nvars);
    for (const auto& m : ms)
        p.add_monomial(m.e, Rational(m.num, m.den));
    return p;
}

// Pointwise sum over unmerged pieces, one per reduced term, using exact membership.
Rational eval_unmerged(const ReducedForm& rf, const IntVector& alpha) {
    Rational total = 0;
    for (const auto& t : rf.sum.terms()) {
        auto piece = inverse_laplace_term(t);
        if (support_membership(piece.basis, piece.offset, alpha))
            total += piece.poly.evaluate(alpha);
    }
    return total;
}

} // namespace

TEST(MultiPoly, ProductMatchesHandExpansion) {
    std::vector<LinearForm> forms{{make_vector({1}), 2}, {make_vector({1}), 4}};
    EXPECT_EQ(MultiPoly::product(1, Rational(1, 8), forms), poly(1, {{1, 8, {2}}, {3, 4, {1}}, {1, 1, {0}}}));
    EXPECT_EQ(MultiPoly::linear(make_vector({2, 1}), 2) * MultiPoly::constant(2, Rational(1, 2)),
              poly(2, {{1, 1, {1, 0}}, {1, 2, {0, 1}}, {1, 1, {0, 0}}}));
}

TEST(MultiPoly, ZeroCoefficientsAreDropped) {
    MultiPoly p = poly(1, {{1, 1, {1}}});
    p += poly(1, {{-1, 1, {1}}});
    EXPECT_TRUE(p.is_zero());
    EXPECT_EQ(p.degree(), 0u);
}

TEST(InverseLaplaceTerm, CubeOverEvenLattice) {
    auto piece = inverse_laplace_term(ExpRatTerm(1, make_vector({0}), {{make_vector({2}), 3}}));
    EXPECT_EQ(piece.offset, make_vector({-4}));
    EXPECT_EQ(piece.basis, vecs({{2}}));
    EXPECT_EQ(piece.poly, poly(1, {{1, 8, {2}}, {3, 4, {1}}, {1, 1, {0}}})); // (x+2)(x+4)/8
}

TEST(InverseLaplaceTerm, SimpleFactorsGiveIndicator) {
    auto B = vecs({{3, 1}, {-1, 2}});
    auto piece = inverse_laplace_term(ExpRatTerm(1, make_vector({0, 0}), {{B[0], 1}, {B[1], 1}}));
    EXPECT_EQ(piece.poly, MultiPoly::constant(2, 1));
    EXPECT_EQ(piece.offset, make_vector({0, 0}));
}

TEST(InverseLaplaceTerm, ExampleTwoFirstPiece) {
    auto piece = inverse_laplace_term(
        ExpRatTerm(1, make_vector({0, 0}), {{make_vector({1, 0}), 2}, {make_vector({-1, 2}), 1}}));
    EXPECT_EQ(piece.poly, poly(2, {{1, 1, {1, 0}}, {1, 2, {0, 1}}, {1, 1, {0, 0}}})); // (2x+y+2)/2
    EXPECT_EQ(piece.offset, make_vector({-1, 0}));
}

TEST(InverseLaplaceTerm, DependentDenominatorIsRejected) {
    ExpRatTerm bad(1, make_vector({0, 0}), {{make_vector({1, 1}), 1}, {make_vector({2, 2}), 1}});
    EXPECT_THROW(inverse_laplace_term(bad), std::invalid_argument);
}

TEST(InverseLaplaceTerm, SinglePieceCountsItsOwnSeries) {
    // 1/((1-e^{-2x})^2 (1-e^{-y})^3): coefficient of e^{-<alpha,x>} by direct convolution
    ExpRatTerm t(1, make_vector({1, -2}), {{make_vector({2, 0}), 2}, {make_vector({0, 1}), 3}});
    auto piece = inverse_laplace_term(t);
    for (long long x = -6; x <= 12; ++x) {
        for (long long y = -6; y <= 12; ++y) {
            // alpha = -c + 2j e1 + k e2 with multiplicities (j+1) and (k+1)(k+2)/2
            long long u = x + 1, v = y - 2;
            Rational want = 0;
            if (u >= 0 && u % 2 == 0 && v >= 0)
                want = Rational((u / 2 + 1) * (v + 1) * (v + 2), 2);
            IntVector a = make_vector({x, y});
            Rational got = support_membership(piece.basis, piece.offset, a) ? piece.poly.evaluate(a) : Rational(0);
            EXPECT_EQ(got, want) << x << "," << y;
        }
    }
}

TEST(SupportMembership, EvenLatticeShifted) {
    EXPECT_TRUE(support_membership(vecs({{2}}), make_vector({-4}), make_vector({0})));
    EXPECT_FALSE(support_membership(vecs({{2}}), make_vector({-4}), make_vector({-3})));
    EXPECT_FALSE(support_membership(vecs({{2}}), make_vector({-4}), make_vector({-6})));
}

TEST(SupportMembership, HalfIntegerCoordinateIsOutside) {
    EXPECT_FALSE(support_membership(vecs({{1, 0}, {-1, 2}}), make_vector({0, 0}), make_vector({0, 1})));
}

TEST(SupportMembership, LatticePointInside) {
    EXPECT_TRUE(support_membership(vecs({{1, 0}, {-1, 2}}), make_vector({0, 0}), make_vector({0, 2})));
}

TEST(ClosedForm, ExampleOnePieces) {
    auto cf = closed_form(dtp::testing::example1());
    ASSERT_EQ(cf.pieces.size(), 3u);
    std::map<long long, MultiPoly> by_offset;
    for (const auto& p : cf.pieces) {
        EXPECT_EQ(p.basis, vecs({{2}}));
        by_offset.emplace(to_int64(p.offset[0]), p.poly);
    }
    EXPECT_EQ(by_offset.at(-4), poly(1, {{1, 8, {2}}, {3, 4, {1}}, {1, 1, {0}}}));  // (x+2)(x+4)/8
    EXPECT_EQ(by_offset.at(-3), poly(1, {{1, 4, {2}}, {1, 1, {1}}, {3, 4, {0}}}));  // 2(x+1)(x+3)/8
    EXPECT_EQ(by_offset.at(-2), poly(1, {{1, 8, {2}}, {1, 4, {1}}}));               // x(x+2)/8
}

TEST(ClosedForm, StandardBasisIsOneIndicator) {
    auto cf = closed_form(vecs({{1, 0}, {0, 1}}));
    ASSERT_EQ(cf.pieces.size(), 1u);
    EXPECT_EQ(cf.pieces[0].poly, MultiPoly::constant(2, 1));
    EXPECT_EQ(cf.pieces[0].offset, make_vector({0, 0}));
}

TEST(ClosedForm, ExampleTwoMatchesHandFormulaOnBox) {
    ClosedFormEvaluator eval(closed_form(dtp::testing::example2()));
    for (long long x = -6; x <= 12; ++x)
        for (long long y = -6; y <= 12; ++y)
            EXPECT_EQ(eval.value(make_vector({x, y})), dtp::testing::example2_formula(x, y)) << x << "," << y;
}

TEST(EvalClosed, ExampleOneValues) {
    auto cf = closed_form(dtp::testing::example1());
    EXPECT_EQ(eval_closed(cf, make_vector({2})), 4);
    EXPECT_EQ(eval_closed(cf, make_vector({1})), 2);
    EXPECT_EQ(eval_closed(cf, make_vector({0})), 1);
    EXPECT_EQ(eval_closed(cf, make_vector({-1})), 0);
}

TEST(EvalClosed, ExampleTwoValues) {
    auto cf = closed_form(dtp::testing::example2());
    EXPECT_EQ(eval_closed(cf, make_vector({1, 1})), 1);
    EXPECT_EQ(eval_closed(cf, make_vector({0, 2})), 2);
    EXPECT_EQ(eval_closed(cf, make_vector({0, 4})), 3);
}

TEST(EvalClosed, FarOutsideIsZero) {
    for (const auto& X : {dtp::testing::example1(), dtp::testing::example2(), vecs({{2, 1}, {1, 3}, {1, 1}})}) {
        IntVector minus = zero_vector(X[0].size());
        for (const auto& a : X)
            minus = minus - a;
        EXPECT_EQ(eval_closed(closed_form(X), minus), 0);
    }
}

TEST(EvalClosed, EvaluatorAgreesWithExactMembership) {
    auto rf = toric_reduce(vecs({{1, 2}, {2, 1}, {1, 1}, {0, 1}}));
    auto cf = closed_form(rf);
    ClosedFormEvaluator eval(cf);
    for (long long x = -3; x <= 8; ++x) {
        for (long long y = -3; y <= 8; ++y) {
            IntVector a = make_vector({x, y});
            Rational slow = 0;
            for (const auto& p : cf.pieces)
                if (support_membership(p.basis, p.offset, a))
                    slow += p.poly.evaluate(a);
            EXPECT_EQ(eval.value(a), slow);
        }
    }
}

TEST(EvalClosed, NonIntegerSumIsAnInternalError) {
    ClosedForm cf{vecs({{1}}), {}};
    cf.pieces.push_back({vecs({{1}}), make_vector({0}), MultiPoly::constant(1, Rational(1, 2)), std::nullopt});
    EXPECT_THROW(eval_closed(cf, make_vector({3})), std::logic_error);
}

TEST(ClosedForm, MatchesEnumerationOnRandomSystems) {
    auto suite = dtp::testing::random_suite(41, 20, 5000);
    for (const auto& sys : suite.systems) {
        const std::size_t s = sys.X[0].size();
        const long long hi = s == 3 ? 4 : 8;
        ClosedFormEvaluator eval(closed_form(sys.reduced));
        IntVector lo = uniform_box_corner(s, -3), up = uniform_box_corner(s, hi);
        for_each_point(lo, up, [&](const IntVector& a) {
            EXPECT_EQ(eval.count(a), dtp::testing::enumerate_count(sys.X, a)) << to_string(a);
        });
    }
}

TEST(ClosedForm, DegreeLawOnRandomSystems) {
    auto suite = dtp::testing::random_suite(42, 20, 20000);
    for (const auto& sys : suite.systems) {
        auto cf = closed_form(sys.reduced);
        const unsigned bound = static_cast<unsigned>(sys.X.size() - sys.X[0].size());
        unsigned top = 0;
        for (const auto& p : cf.pieces) {
            EXPECT_LE(p.poly.degree(), bound);
            top = std::max(top, p.poly.degree());
        }
        EXPECT_EQ(top, bound);
    }
}

TEST(ClosedForm, MergingKeepsValues) {
    auto suite = dtp::testing::random_suite(43, 8, 5000);
    std::mt19937_64 rng(44);
    for (const auto& sys : suite.systems) {
        const std::size_t s = sys.X[0].size();
        ClosedFormEvaluator merged(closed_form(sys.reduced));
        for (int k = 0; k < 20; ++k) {
            IntVector a(s);
            for (auto& c : a)
                c = static_cast<long long>(rng() % 19) - 6;
            EXPECT_EQ(merged.value(a), eval_unmerged(sys.reduced, a));
        }
    }
}

TEST(ClosedForm, MergedPiecesHaveDistinctSupports) {
    auto cf = closed_form(vecs({{1, 0}, {0, 1}, {1, 1}, {1, 2}}));
    std::set<std::pair<std::vector<IntVector>, IntVector>> keys;
    for (const auto& p : cf.pieces) {
        EXPECT_FALSE(p.poly.is_zero());
        auto sorted = p.basis;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_TRUE(keys.emplace(sorted, p.offset).second);
    }
}
