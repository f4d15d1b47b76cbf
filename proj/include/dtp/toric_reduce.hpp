#pragma once

// Rewrites prod_{a in X} 1/(1 - e^{-<a,x>}) as a sum of terms whose denominator vectors
// are s linearly independent positive multiples of vectors of X.

#include "dtp/exp_algebra.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace dtp {

/// Precision used by the numeric self-checks; wide enough that cancellation between
/// thousands of terms does not mask a wrong identity.
using CheckReal = boost::multiprecision::cpp_bin_float_50;

struct ReducedForm {
    std::vector<IntVector> source;
    ExpRatSum sum;
};

struct GammaCoefficient {
    ExpRatSum gamma; ///< finite sum of exponential monomials
    std::size_t index; ///< position of the matching basis vector
};

struct ReduceOptions {
#ifdef NDEBUG
    bool self_check = false;
#else
    bool self_check = true;
#endif
    std::uint64_t seed = 0x5eed;
    int check_points = 5;
    /// Abort once the running sum holds more terms than this (0 = unlimited).
    std::size_t max_terms = 0;
};

/// The reduction outgrew ReduceOptions::max_terms.
class reduction_too_large : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A rewrite step produced an identity that fails numerically.
class identity_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

inline ExpRatSum monomial(const Rational& coeff, const IntVector& shift) {
    ExpRatSum r(shift.size());
    r.add(shift, {}, coeff);
    return r;
}

inline ExpRatSum one_minus_exp(const IntVector& a) {
    ExpRatSum r = ExpRatSum::one(a.size());
    r.add(-a, {}, -1);
    return r;
}

inline std::vector<CheckReal> widen(const std::vector<double>& x) {
    return std::vector<CheckReal>(x.begin(), x.end());
}

inline bool close(const CheckReal& lhs, const CheckReal& rhs, double rel) {
    using boost::multiprecision::abs;
    return abs(lhs - rhs) <= CheckReal(rel) * (1 + abs(rhs));
}

} // namespace detail

/// Telescoping split of y0 = 1 - e^{-<sum_i m_i b_i, x>} into sum_i gamma_i * y_i with
/// y_i = 1 - e^{-<b_i,x>}. Coefficient indices follow `basis`; all must be nonzero.
///
/// With u_i = e^{-m_i <b_i,x>} and the positive coefficients ordered first,
///   1 - u_1...u_r = sum_t (u_1...u_{t-1}) (1 - u_t),
/// and each 1 - u_t is a geometric factor times y_t (times -e^{n<b_t,x>} when m_t = -n < 0).
inline std::vector<GammaCoefficient> expand_dependent(const IntegerRelation& relation,
                                                      std::span<const IntVector> basis) {
    if (relation.coefficients.size() != basis.size())
        throw std::invalid_argument("expand_dependent: relation and basis sizes differ");
    if (basis.empty())
        throw std::invalid_argument("expand_dependent: empty basis");
    const std::size_t s = basis.front().size();
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (relation.coefficients[i] == 0)
            throw std::invalid_argument("expand_dependent: zero relation coefficient");
        if (relation.coefficients[i] > 0)
            order.push_back(i);
    }
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (relation.coefficients[i] < 0)
            order.push_back(i);

    std::vector<GammaCoefficient> out;
    IntVector prefix = zero_vector(s); // shift of u_1...u_{t-1}
    for (std::size_t i : order) {
        const BigInt& m = relation.coefficients[i];
        ExpRatSum factor = m > 0 ? geometric_factor(basis[i], m)
                                 : detail::monomial(-1, BigInt(-m) * basis[i]) *
                                       geometric_factor(basis[i], BigInt(-m));
        out.push_back({detail::monomial(1, prefix) * factor, i});
        prefix = prefix - m * basis[i];
    }
    return out;
}

/// Numeric check of y0 = sum gamma_i y_i at seeded generic points.
inline bool check_expansion(const IntegerRelation& relation, std::span<const IntVector> basis,
                            std::span<const GammaCoefficient> gammas, std::uint64_t seed, int points = 5) {
    const std::size_t s = basis.front().size();
    IntVector combo = zero_vector(s);
    for (std::size_t i = 0; i < basis.size(); ++i)
        combo = combo + relation.coefficients[i] * basis[i];
    ExpRatSum rhs(s);
    for (const auto& g : gammas)
        rhs += g.gamma * detail::one_minus_exp(basis[g.index]);
    const ExpRatSum lhs = detail::one_minus_exp(combo);
    // Any point works for an identity between exponential polynomials.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    for (int p = 0; p < points; ++p) {
        std::vector<CheckReal> x(s);
        for (auto& v : x)
            v = unit(rng);
        if (!detail::close(eval_numeric<CheckReal>(lhs, x), eval_numeric<CheckReal>(rhs, x), 1e-30))
            return false;
    }
    return true;
}

namespace detail {

struct SplitTerm {
    Denominator denom;
    ExpRatSum numerator; ///< exponential polynomial, empty denominators
};

inline std::vector<SplitTerm> partial_fraction_groups(const DenomFactor& y0, std::span<const GammaCoefficient> gammas,
                                                      const ExpRatTerm& term) {
    const std::size_t s = term.dimension();
    const std::size_t r = gammas.size();
    if (r == 0)
        throw std::invalid_argument("partial_fraction: no gamma coefficients");
    std::vector<unsigned> start(r);
    std::vector<bool> in_support(term.denom.size(), false);
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t idx = gammas[k].index;
        if (idx >= term.denom.size() || in_support[idx])
            throw std::invalid_argument("partial_fraction: bad gamma index");
        in_support[idx] = true;
        start[k] = term.denom[idx].power;
    }

    // Every path from `start` to a terminal state multiplies by prod gamma_k^{start_k - end_k},
    // so only the number of paths per terminal state is tracked.
    using State = std::vector<unsigned>;
    std::map<State, BigInt> frontier{{start, BigInt(1)}}, terminal;
    while (!frontier.empty()) {
        std::map<State, BigInt> next;
        for (const auto& [state, paths] : frontier) {
            for (std::size_t k = 0; k < r; ++k) {
                State st = state;
                --st[k];
                (st[k] == 0 ? terminal : next)[st] += paths;
            }
        }
        frontier = std::move(next);
    }

    std::vector<std::vector<ExpRatSum>> powers(r); // powers[k][d] = gamma_k^d
    auto gamma_power = [&](std::size_t k, unsigned d) -> const ExpRatSum& {
        auto& cache = powers[k];
        if (cache.empty())
            cache.push_back(ExpRatSum::one(s));
        while (cache.size() <= d)
            cache.push_back(cache.back() * gammas[k].gamma);
        return cache[d];
    };

    Denominator passive;
    for (std::size_t i = 0; i < term.denom.size(); ++i)
        if (!in_support[i])
            passive.push_back(term.denom[i]);

    std::vector<SplitTerm> out;
    for (const auto& [state, paths] : terminal) {
        ExpRatSum numerator = monomial(term.num.coeff * paths, term.num.shift);
        unsigned consumed = 0;
        Denominator d = passive;
        for (std::size_t k = 0; k < r; ++k) {
            const unsigned used = start[k] - state[k];
            consumed += used;
            if (used)
                numerator = numerator * gamma_power(k, used);
            if (state[k])
                d.push_back({term.denom[gammas[k].index].vector, state[k]});
        }
        d.push_back({y0.vector, y0.power + consumed});
        out.push_back({canonical_denominator(std::move(d)), std::move(numerator)});
    }
    return out;
}

// Adds (sum_{(c,q) in numerator} q e^{<c,x>}) / (denom * (1 - e^{-<a,x>})) to `out`. The
// rewrite depends only on the denominator, so it is computed once per group.
inline void absorb_group(ExpRatSum& out, const Denominator& denom, const ExpRatSum::Numerator& numerator,
                         const IntVector& a, const ReduceOptions& opts) {
    if (is_zero(a))
        throw std::invalid_argument("absorb_vector: zero vector");
    const std::size_t s = a.size();
    const IntVector origin = zero_vector(s);

    for (std::size_t i = 0; i < denom.size(); ++i) {
        check_same_dim(denom[i].vector, a);
        if (denom[i].vector == a) {
            Denominator d = denom;
            ++d[i].power;
            out.add_scaled(d, numerator, 1, origin);
            return;
        }
    }

    const ExpRatTerm unit(1, origin, denom);
    const auto basis = unit.denominator_vectors();
    auto relation = integer_relation(basis, a);
    if (!relation) {
        Denominator d = denom;
        d.push_back({a, 1});
        out.add_scaled(canonical_denominator(std::move(d)), numerator, 1, origin);
        return;
    }

    // Restrict to the basis vectors the relation actually uses.
    IntegerRelation restricted{relation->multiplier, {}};
    std::vector<IntVector> sub_basis;
    std::vector<std::size_t> sub_index;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (relation->coefficients[i] != 0) {
            restricted.coefficients.push_back(relation->coefficients[i]);
            sub_basis.push_back(basis[i]);
            sub_index.push_back(i);
        }
    }
    auto gammas = expand_dependent(restricted, sub_basis);
    if (opts.self_check && !check_expansion(restricted, sub_basis, gammas, opts.seed))
        throw identity_violation("telescoping expansion failed its numeric check");
    for (auto& g : gammas)
        g.index = sub_index[g.index];

    if (opts.max_terms) {
        // Crude upper bound on the expanded factor: |beta| * prod_k |gamma_k|^{h_k}.
        double bound = relation->multiplier.convert_to<double>();
        for (const auto& g : gammas)
            bound *= std::pow(double(g.gamma.size()), double(unit.denom[g.index].power));
        if (bound > double(opts.max_terms))
            throw reduction_too_large("absorb_vector: expansion would exceed " + std::to_string(opts.max_terms) +
                                      " terms");
    }

    const DenomFactor y0{relation->multiplier * a, 1};
    const ExpRatSum beta = geometric_factor(a, relation->multiplier);
    for (const auto& split : partial_fraction_groups(y0, gammas, unit)) {
        const ExpRatSum factor = split.numerator * beta;
        if (factor.empty())
            continue;
        const auto& fnum = factor.groups().begin()->second;
        for (const auto& [c, q] : numerator) {
            out.add_scaled(split.denom, fnum, q, c);
            if (opts.max_terms && out.size() > opts.max_terms)
                throw reduction_too_large("absorb_vector: more than " + std::to_string(opts.max_terms) + " terms");
        }
    }
}

inline void absorb_into(ExpRatSum& out, const ExpRatTerm& term, const IntVector& a, const ReduceOptions& opts) {
    check_same_dim(term.num.shift, a);
    absorb_group(out, term.denom, ExpRatSum::Numerator{{term.num.shift, term.num.coeff}}, a, opts);
}

// `input` holds a single denominator group.
inline void check_absorb(const ExpRatSum& input, const IntVector& a, const ExpRatSum& result,
                         const ReduceOptions& opts) {
    const ExpRatSum before = mul(input, ExpRatSum(ExpRatTerm(1, zero_vector(a.size()), {{a, 1}})));
    std::vector<IntVector> all;
    for (const auto& f : input.groups().begin()->first)
        all.push_back(f.vector);
    all.push_back(a);
    for (int p = 0; p < opts.check_points; ++p) {
        auto x = widen(random_generic_point(all, opts.seed + p));
        if (!close(eval_numeric<CheckReal>(result, x), eval_numeric<CheckReal>(before, x), 1e-25))
            throw identity_violation("absorb_vector changed the value of the term");
    }
}

} // namespace detail

/// One partial-fraction pass for 1/(y0^p prod_i y_i^{h_i}) with y0 = sum_{i in gammas} gamma_i y_i.
/// Repeatedly substitutes y0/y0 until one of the gamma-indexed factors is gone. Factors of
/// `term` not named by `gammas` ride along unchanged. Numerators are expanded to monomials.
inline std::vector<ExpRatTerm> partial_fraction(const DenomFactor& y0, std::span<const GammaCoefficient> gammas,
                                                const ExpRatTerm& term) {
    std::vector<ExpRatTerm> out;
    for (const auto& split : detail::partial_fraction_groups(y0, gammas, term)) {
        split.numerator.for_each([&](const IntVector& c, const Denominator&, const Rational& q) {
            ExpRatTerm t;
            t.num = {q, c};
            t.denom = split.denom;
            out.push_back(std::move(t));
        });
    }
    return out;
}

/// term / (1 - e^{-<a,x>}) rewritten so the denominator vectors stay linearly independent:
/// a new independent vector is appended, a repeated one raises its power, and a dependent
/// one goes through the integer relation, telescoping expansion and partial fractions.
inline std::vector<ExpRatTerm> absorb_vector(const ExpRatTerm& term, const IntVector& a,
                                             const ReduceOptions& opts = {}) {
    ExpRatSum out(a.size());
    detail::absorb_into(out, term, a, opts);
    if (opts.self_check)
        detail::check_absorb(ExpRatSum(term), a, out, opts);
    return out.terms();
}

/// Folds absorb_vector over X in input order. Requires rank(X) = dimension and a pointed cone.
inline ReducedForm toric_reduce(std::span<const IntVector> X, const ReduceOptions& opts = {}) {
    const std::size_t s = detail::ambient_dim(X);
    if (rank(X) != s)
        throw std::invalid_argument("toric_reduce: vectors do not span the ambient space");
    if (!pointedness_certificate(X))
        throw std::invalid_argument("toric_reduce: cone is not pointed");

    ExpRatSum sum = ExpRatSum::one(s);
    for (std::size_t n = 0; n < X.size(); ++n) {
        ExpRatSum next(s);
        for (const auto& [denom, numerator] : sum.groups()) {
            if (opts.self_check) {
                ExpRatSum part(s);
                detail::absorb_group(part, denom, numerator, X[n], opts);
                ExpRatSum group(s);
                group.add_scaled(denom, numerator, 1, zero_vector(s));
                detail::check_absorb(group, X[n], part, opts);
                next += part;
            } else {
                detail::absorb_group(next, denom, numerator, X[n], opts);
            }
            if (opts.max_terms && next.size() > opts.max_terms)
                throw reduction_too_large("toric_reduce: more than " + std::to_string(opts.max_terms) +
                                          " terms after absorbing vector " + std::to_string(n + 1));
        }
        sum = std::move(next);

        if (opts.self_check) {
            auto prefix = X.first(n + 1);
            const ExpRatTerm original = laplace_generating(prefix);
            for (int p = 0; p < opts.check_points; ++p) {
                auto x = detail::widen(random_generic_point(prefix, opts.seed + 101 * n + p));
                if (!detail::close(eval_numeric<CheckReal>(sum, x), eval_numeric<CheckReal>(original, x), 1e-25))
                    throw identity_violation("toric_reduce drifted from the generating function");
            }
        }
    }
    return {std::vector<IntVector>(X.begin(), X.end()), std::move(sum)};
}

/// Relative error between the reduced sum and the original product at seeded generic points.
inline double identity_error(const ReducedForm& rf, std::uint64_t seed, int points = 5) {
    const ExpRatTerm original = laplace_generating(rf.source);
    CheckReal worst = 0;
    for (int p = 0; p < points; ++p) {
        auto x = detail::widen(random_generic_point(rf.source, seed + p));
        CheckReal want = eval_numeric<CheckReal>(original, x);
        CheckReal got = eval_numeric<CheckReal>(rf.sum, x);
        using boost::multiprecision::abs;
        worst = std::max(worst, CheckReal(abs(got - want) / abs(want)));
    }
    return worst.convert_to<double>();
}

} // namespace dtp
