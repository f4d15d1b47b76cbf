#pragma once

// Formal sums of terms  q * e^{<c,x>} / prod_a (1 - e^{-<a,x>})^{h_a}.

#include "dtp/linalg.hpp"

#include <cmath>
#include <map>
#include <random>
#include <tuple>

namespace dtp {

struct ExpMonomial {
    Rational coeff;
    IntVector shift; ///< c in e^{<c,x>}
};

struct DenomFactor {
    IntVector vector; ///< a in (1 - e^{-<a,x>})
    unsigned power = 1;

    friend bool operator==(const DenomFactor&, const DenomFactor&) = default;
    friend bool operator<(const DenomFactor& l, const DenomFactor& r) {
        return std::tie(l.vector, l.power) < std::tie(r.vector, r.power);
    }
};

using Denominator = std::vector<DenomFactor>;

/// Sorts by vector and merges equal vectors by adding powers.
inline Denominator canonical_denominator(Denominator d) {
    for (const auto& f : d) {
        if (is_zero(f.vector))
            throw std::invalid_argument("zero vector in denominator");
        if (f.power == 0)
            throw std::invalid_argument("denominator power must be positive");
    }
    std::sort(d.begin(), d.end());
    Denominator out;
    for (auto& f : d) {
        if (!out.empty() && out.back().vector == f.vector)
            out.back().power += f.power;
        else
            out.push_back(std::move(f));
    }
    return out;
}

inline Denominator merge_denominators(const Denominator& a, const Denominator& b) {
    Denominator d = a;
    d.insert(d.end(), b.begin(), b.end());
    return canonical_denominator(std::move(d));
}

inline unsigned total_power(const Denominator& d) {
    unsigned t = 0;
    for (const auto& f : d)
        t += f.power;
    return t;
}

struct ExpRatTerm {
    ExpMonomial num;
    Denominator denom;

    ExpRatTerm() = default;
    ExpRatTerm(Rational coeff, IntVector shift, Denominator d = {})
        : num{std::move(coeff), std::move(shift)}, denom(canonical_denominator(std::move(d))) {
        for (const auto& f : denom)
            check_same_dim(f.vector, num.shift);
    }

    std::size_t dimension() const { return num.shift.size(); }

    std::vector<IntVector> denominator_vectors() const {
        std::vector<IntVector> vs;
        vs.reserve(denom.size());
        for (const auto& f : denom)
            vs.push_back(f.vector);
        return vs;
    }
};

inline ExpRatTerm operator*(const ExpRatTerm& a, const ExpRatTerm& b) {
    ExpRatTerm t;
    t.num = {a.num.coeff * b.num.coeff, a.num.shift + b.num.shift};
    t.denom = merge_denominators(a.denom, b.denom);
    return t;
}

/// Finite sum of ExpRatTerms keyed by (denominator, shift); no zero coefficients.
/// Terms are grouped by denominator since reductions produce few distinct denominators
/// and many numerator shifts.
class ExpRatSum {
public:
    using Numerator = std::map<IntVector, Rational>; ///< shift -> coefficient

    explicit ExpRatSum(std::size_t dim) : dim_(dim) {}
    ExpRatSum(const ExpRatTerm& t) : dim_(t.dimension()) { add(t); }

    static ExpRatSum one(std::size_t dim) { return ExpRatSum(ExpRatTerm(1, zero_vector(dim))); }

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    const std::map<Denominator, Numerator>& groups() const { return groups_; }

    void add(const ExpRatTerm& t) { add(t.num.shift, t.denom, t.num.coeff); }

    void add(const IntVector& shift, const Denominator& d, const Rational& coeff) {
        if (coeff.is_zero())
            return;
        auto g = groups_.find(d);
        if (g == groups_.end())
            g = groups_.emplace(d, Numerator{}).first;
        add_to(g, shift, coeff);
    }

    /// Adds factor * sum_{(c,q) in num} q e^{<c + shift, x>} over denominator d.
    void add_scaled(const Denominator& d, const Numerator& num, const Rational& factor, const IntVector& shift) {
        if (factor.is_zero() || num.empty())
            return;
        auto g = groups_.find(d);
        if (g == groups_.end())
            g = groups_.emplace(d, Numerator{}).first;
        for (const auto& [c, q] : num)
            add_to(g, c + shift, q * factor);
    }

    template <class F>
    void for_each(F&& f) const {
        for (const auto& [d, num] : groups_)
            for (const auto& [c, q] : num)
                f(c, d, q);
    }

    std::vector<ExpRatTerm> terms() const {
        std::vector<ExpRatTerm> out;
        out.reserve(size_);
        for_each([&](const IntVector& c, const Denominator& d, const Rational& q) {
            ExpRatTerm t;
            t.num = {q, c};
            t.denom = d;
            out.push_back(std::move(t));
        });
        return out;
    }

    ExpRatSum& operator+=(const ExpRatSum& o) {
        if (o.dim_ != dim_)
            throw std::invalid_argument("ExpRatSum: dimension mismatch");
        o.for_each([&](const IntVector& c, const Denominator& d, const Rational& q) { add(c, d, q); });
        return *this;
    }

    friend bool operator==(const ExpRatSum&, const ExpRatSum&) = default;

private:
    void add_to(std::map<Denominator, Numerator>::iterator g, const IntVector& shift, const Rational& coeff) {
        if (shift.size() != dim_)
            throw std::invalid_argument("ExpRatSum: dimension mismatch");
        auto [it, inserted] = g->second.try_emplace(shift, coeff);
        if (inserted) {
            ++size_;
        } else {
            it->second += coeff;
            if (it->second.is_zero()) {
                g->second.erase(it);
                --size_;
                if (g->second.empty())
                    groups_.erase(g);
            }
        }
    }

    std::size_t dim_;
    std::size_t size_ = 0;
    std::map<Denominator, Numerator> groups_;
};

inline ExpRatSum add(const ExpRatSum& a, const ExpRatSum& b) {
    ExpRatSum r = a;
    r += b;
    return r;
}

inline ExpRatSum mul(const ExpRatSum& a, const ExpRatSum& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("ExpRatSum: dimension mismatch");
    ExpRatSum r(a.dimension());
    for (const auto& [da, na] : a.groups()) {
        for (const auto& [db, nb] : b.groups()) {
            const Denominator d = db.empty() ? da : da.empty() ? db : merge_denominators(da, db);
            for (const auto& [c, q] : na)
                r.add_scaled(d, nb, q, c);
        }
    }
    return r;
}

inline ExpRatSum operator+(const ExpRatSum& a, const ExpRatSum& b) { return add(a, b); }
inline ExpRatSum operator*(const ExpRatSum& a, const ExpRatSum& b) { return mul(a, b); }

/// Rebuilds a sum from an arbitrary term list, merging keys and dropping zeros.
inline ExpRatSum normalize(std::span<const ExpRatTerm> terms, std::size_t dim) {
    ExpRatSum r(dim);
    for (const auto& t : terms)
        r.add(ExpRatTerm(t.num.coeff, t.num.shift, t.denom));
    return r;
}

inline ExpRatSum normalize(const ExpRatSum& s) { return normalize(s.terms(), s.dimension()); }

/// 1 / prod_{a in X} (1 - e^{-<a,x>}), repeated vectors merged into powers.
inline ExpRatTerm laplace_generating(std::span<const IntVector> X) {
    const std::size_t s = detail::ambient_dim(X);
    Denominator d;
    for (const auto& a : X) {
        if (is_zero(a))
            throw std::invalid_argument("laplace_generating: zero vector");
        d.push_back({a, 1});
    }
    return ExpRatTerm(1, zero_vector(s), std::move(d));
}

/// sum_{j=0}^{m-1} e^{-<j a, x>}, so that 1 - e^{-<m a,x>} = (this) * (1 - e^{-<a,x>}).
inline ExpRatSum geometric_factor(const IntVector& a, const BigInt& m) {
    if (is_zero(a))
        throw std::invalid_argument("geometric_factor: zero vector");
    if (m < 1)
        throw std::invalid_argument("geometric_factor: multiplier must be positive");
    ExpRatSum r(a.size());
    IntVector shift = zero_vector(a.size());
    for (BigInt j = 0; j < m; ++j) {
        r.add(shift, {}, 1);
        shift = shift - a;
    }
    return r;
}

/// Evaluation hit a zero of some denominator; retry at another point.
class singular_point : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

template <class Real>
Real pairing(const IntVector& a, std::span<const Real> x) {
    if (a.size() != x.size())
        throw std::invalid_argument("evaluation point dimension mismatch");
    Real s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += to_real<Real>(a[i]) * x[i];
    return s;
}

template <class Real>
Real eval_denominator(const Denominator& d, std::span<const Real> x) {
    using std::abs;
    using std::exp;
    using std::pow;
    Real den = 1;
    for (const auto& f : d) {
        Real t = pairing<Real>(f.vector, x);
        if (abs(t) < Real(1e-12))
            throw singular_point("denominator vanishes at evaluation point");
        Real base = 1 - exp(-t);
        for (unsigned p = 0; p < f.power; ++p)
            den *= base;
    }
    return den;
}

} // namespace detail

template <class Real = double>
Real eval_numeric(const ExpRatTerm& t, std::span<const Real> x) {
    using std::exp;
    return to_real<Real>(t.num.coeff) * exp(detail::pairing<Real>(t.num.shift, x)) /
           detail::eval_denominator<Real>(t.denom, x);
}

template <class Real = double>
Real eval_numeric(const ExpRatSum& s, std::span<const Real> x) {
    using std::exp;
    using std::pow;
    if (x.size() != s.dimension())
        throw std::invalid_argument("evaluation point dimension mismatch");
    std::vector<Real> base(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        base[i] = exp(x[i]);
    // Terms sharing a denominator are summed before dividing.
    Real total = 0;
    for (const auto& [d, num] : s.groups()) {
        Real value = 0;
        for (const auto& [c, q] : num) {
            Real m = to_real<Real>(q);
            for (std::size_t i = 0; i < c.size(); ++i)
                if (c[i] != 0)
                    m *= pow(base[i], static_cast<int>(to_int64(c[i])));
            value += m;
        }
        total += value / detail::eval_denominator<Real>(d, x);
    }
    return total;
}

template <class Real>
Real eval_numeric(const ExpRatSum& s, const std::vector<Real>& x) {
    return eval_numeric<Real>(s, std::span<const Real>(x));
}

template <class Real>
Real eval_numeric(const ExpRatTerm& t, const std::vector<Real>& x) {
    return eval_numeric<Real>(t, std::span<const Real>(x));
}

/// Point x with <a,x> >= 0.1 for every listed a, built from a pointedness certificate
/// plus a seeded perturbation. Deterministic for a fixed seed.
inline std::vector<double> random_generic_point(std::span<const IntVector> vectors, std::uint64_t seed) {
    auto cert = pointedness_certificate(vectors);
    if (!cert)
        throw std::invalid_argument("random_generic_point: vectors do not span a pointed cone");
    const std::size_t s = vectors.front().size();
    std::vector<double> xi(s);
    for (std::size_t i = 0; i < s; ++i)
        xi[i] = to_real<double>(cert->xi[i]);

    double lo = std::numeric_limits<double>::infinity(), hi = 0, norm1 = 0;
    for (const auto& a : vectors) {
        double v = detail::pairing<double>(a, std::span<const double>(xi));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        double n = 0;
        for (const auto& c : a)
            n += std::abs(to_real<double>(c));
        norm1 = std::max(norm1, n);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Pairings land in [0.9 t lo, 1.1 t hi]; both ends fit in [0.1, 5] while hi/lo <= 37.5.
    // Past that the lower end wins.
    const double t_min = 0.12 / lo, t_max = 4.5 / hi;
    const double t = t_max > t_min ? t_min + (t_max - t_min) * unit(rng) : t_min;
    const double radius = 0.1 * t * lo / norm1;
    std::vector<double> x(s);
    for (std::size_t i = 0; i < s; ++i)
        x[i] = t * xi[i] + radius * (2 * unit(rng) - 1);
    return x;
}

} // namespace dtp
