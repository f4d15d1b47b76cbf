#pragma once

// Exact linear algebra over Z and Q for small dense systems.

#include "dtp/arith.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

namespace dtp {

/// multiplier * target = sum_i coefficients[i] * basis[i], with multiplier >= 1 and
/// gcd(multiplier, coefficients...) = 1. The sign pattern of the coefficients is the
/// split into "added" and "subtracted" basis vectors.
struct IntegerRelation {
    BigInt multiplier;
    std::vector<BigInt> coefficients;
};

/// <xi, a> >= 1 for every vector a of the certified system, so the cone is pointed.
struct PointedCertificate {
    RatVector xi;
};

namespace detail {

inline std::size_t ambient_dim(std::span<const IntVector> vs) {
    if (vs.empty())
        throw std::invalid_argument("empty vector system");
    std::size_t s = vs.front().size();
    for (const auto& v : vs)
        if (v.size() != s)
            throw std::invalid_argument("vectors of mixed dimension");
    return s;
}

// Row-reduces `m` (rows x cols) in place to reduced row echelon form over Q and returns
// the pivot columns. Only the first `pivot_cols` columns are eligible as pivots.
inline std::vector<std::size_t> rref(std::vector<RatVector>& m, std::size_t pivot_cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < pivot_cols && row < m.size(); ++col) {
        std::size_t p = row;
        while (p < m.size() && m[p][col] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[row]);
        Rational inv = 1 / m[row][col];
        for (auto& x : m[row])
            x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0)
                continue;
            Rational f = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c)
                m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Matrix whose columns are `cols`, augmented with `rhs` when given.
inline std::vector<RatVector> column_matrix(std::span<const IntVector> cols, const IntVector* rhs) {
    std::size_t s = cols.empty() ? (rhs ? rhs->size() : 0) : cols.front().size();
    std::vector<RatVector> m(s, RatVector(cols.size() + (rhs ? 1 : 0)));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != s)
            throw std::invalid_argument("vectors of mixed dimension");
        for (std::size_t r = 0; r < s; ++r)
            m[r][c] = cols[c][r];
    }
    if (rhs) {
        if (rhs->size() != s)
            throw std::invalid_argument("right-hand side dimension mismatch");
        for (std::size_t r = 0; r < s; ++r)
            m[r][cols.size()] = (*rhs)[r];
    }
    return m;
}

// Bareiss fraction-free determinant.
inline BigInt determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace detail

/// Determinant of the square matrix whose columns are `basis`.
inline BigInt determinant(std::span<const IntVector> basis) {
    const std::size_t s = detail::ambient_dim(basis);
    if (basis.size() != s)
        throw std::invalid_argument("determinant needs a square system");
    std::vector<std::vector<BigInt>> m(s, std::vector<BigInt>(s));
    for (std::size_t c = 0; c < s; ++c)
        for (std::size_t r = 0; r < s; ++r)
            m[r][c] = basis[c][r];
    return detail::determinant(std::move(m));
}

/// Rows w_i of the adjugate: <w_i, basis[j]> = det * delta_ij.
inline std::vector<IntVector> adjugate_rows(std::span<const IntVector> basis) {
    const std::size_t s = detail::ambient_dim(basis);
    if (basis.size() != s)
        throw std::invalid_argument("adjugate needs a square system");
    std::vector<IntVector> rows(s, IntVector(s));
    if (s == 1) {
        rows[0][0] = 1;
        return rows;
    }
    for (std::size_t i = 0; i < s; ++i) {     // drop column i
        for (std::size_t r = 0; r < s; ++r) { // drop row r
            std::vector<std::vector<BigInt>> minor;
            minor.reserve(s - 1);
            for (std::size_t rr = 0; rr < s; ++rr) {
                if (rr == r)
                    continue;
                std::vector<BigInt> line;
                line.reserve(s - 1);
                for (std::size_t c = 0; c < s; ++c)
                    if (c != i)
                        line.push_back(basis[c][rr]);
                minor.push_back(std::move(line));
            }
            BigInt d = detail::determinant(std::move(minor));
            rows[i][r] = ((i + r) % 2 == 0) ? d : BigInt(-d);
        }
    }
    return rows;
}

/// Solves sum_i lambda_i * basis[i] = rhs for a square basis. Absent when singular.
inline std::optional<RatVector> solve_square(std::span<const IntVector> basis, const IntVector& rhs) {
    const std::size_t s = rhs.size();
    if (basis.size() != s)
        throw std::invalid_argument("solve_square: expected " + std::to_string(s) + " basis vectors, got " +
                                    std::to_string(basis.size()));
    for (const auto& b : basis)
        if (b.size() != s)
            throw std::invalid_argument("solve_square: basis vector dimension mismatch");
    auto m = detail::column_matrix(basis, &rhs);
    auto pivots = detail::rref(m, s);
    if (pivots.size() != s)
        return std::nullopt;
    RatVector lambda(s);
    for (std::size_t i = 0; i < s; ++i)
        lambda[i] = m[i][s];
    return lambda;
}

inline std::size_t rank(std::span<const IntVector> vectors) {
    if (vectors.empty())
        return 0;
    auto m = detail::column_matrix(vectors, nullptr);
    return detail::rref(m, vectors.size()).size();
}

inline bool linearly_independent(std::span<const IntVector> vectors) {
    return rank(vectors) == vectors.size();
}

/// Coefficients of `target` in the span of the linearly independent `basis`; absent when
/// `target` lies outside the span.
inline std::optional<RatVector> solve_in_span(std::span<const IntVector> basis, const IntVector& target) {
    if (basis.empty())
        return is_zero(target) ? std::optional<RatVector>(RatVector{}) : std::nullopt;
    for (const auto& b : basis)
        check_same_dim(b, target);
    auto m = detail::column_matrix(basis, &target);
    auto pivots = detail::rref(m, basis.size());
    if (pivots.size() != basis.size())
        throw std::invalid_argument("basis is not linearly independent");
    for (std::size_t r = basis.size(); r < m.size(); ++r)
        if (m[r].back() != 0)
            return std::nullopt;
    RatVector lambda(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        lambda[i] = m[i].back();
    return lambda;
}

/// The primitive relation multiplier * target = sum coefficients[i] * basis[i].
inline std::optional<IntegerRelation> integer_relation(std::span<const IntVector> basis,
                                                       const IntVector& target) {
    auto lambda = solve_in_span(basis, target);
    if (!lambda)
        return std::nullopt;
    BigInt m = 1;
    for (const auto& q : *lambda)
        m = lcm(m, denominator_of(q));
    IntegerRelation rel{m, {}};
    rel.coefficients.reserve(lambda->size());
    for (const auto& q : *lambda)
        rel.coefficients.push_back(numerator_of(q * m));
    return rel;
}

/// Primitive w with <w, basis[j]> = 0 for j != i and <w, basis[i]> > 0.
inline IntVector orth_complement(std::span<const IntVector> basis, std::size_t i) {
    if (i >= basis.size())
        throw std::out_of_range("orth_complement: index out of range");
    BigInt det = determinant(basis);
    if (det == 0)
        throw std::invalid_argument("orth_complement: singular basis");
    auto rows = adjugate_rows(basis);
    IntVector w = std::move(rows[i]);
    if (det < 0)
        w = -w;
    BigInt g = content(w);
    for (auto& x : w)
        x /= g;
    return w;
}

namespace detail {

// sum_j coeffs[j] * xi_j >= rhs
struct Halfspace {
    RatVector coeffs;
    Rational rhs;

    bool operator<(const Halfspace& o) const {
        if (coeffs != o.coeffs)
            return coeffs < o.coeffs;
        return rhs < o.rhs;
    }
};

// Scales so the leading nonzero coefficient has absolute value 1. Returns false for a
// constraint without variables.
inline bool normalize(Halfspace& h) {
    for (const auto& c : h.coeffs) {
        if (c != 0) {
            Rational scale = 1 / (c < 0 ? Rational(-c) : c);
            for (auto& x : h.coeffs)
                x *= scale;
            h.rhs *= scale;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Fourier-Motzkin feasibility of { <xi, a> >= 1 : a in X }. Absent iff the cone spanned
/// by X contains a line or X contains the zero vector.
inline std::optional<PointedCertificate> pointedness_certificate(std::span<const IntVector> X) {
    using detail::Halfspace;
    const std::size_t s = detail::ambient_dim(X);

    // levels[k] holds constraints on xi_0..xi_{k-1} only.
    std::vector<std::set<Halfspace>> levels(s + 1);
    for (const auto& a : X) {
        Halfspace h{RatVector(a.begin(), a.end()), 1};
        if (!detail::normalize(h))
            return std::nullopt; // 0 >= 1
        levels[s].insert(std::move(h));
    }
    for (std::size_t k = s; k-- > 0;) {
        std::vector<const Halfspace*> lower, upper;
        for (const auto& h : levels[k + 1]) {
            if (h.coeffs[k] > 0)
                lower.push_back(&h);
            else if (h.coeffs[k] < 0)
                upper.push_back(&h);
            else
                levels[k].insert(h);
        }
        for (const auto* lo : lower) {
            for (const auto* up : upper) {
                Rational fl = -up->coeffs[k], fu = lo->coeffs[k];
                Halfspace h{RatVector(s), fl * lo->rhs + fu * up->rhs};
                for (std::size_t j = 0; j < s; ++j)
                    h.coeffs[j] = fl * lo->coeffs[j] + fu * up->coeffs[j];
                h.coeffs[k] = 0;
                if (detail::normalize(h))
                    levels[k].insert(std::move(h));
                else if (h.rhs > 0)
                    return std::nullopt;
            }
        }
    }

    // Back substitution, preferring integers close to zero.
    RatVector xi(s);
    for (std::size_t k = 0; k < s; ++k) {
        std::optional<Rational> lo, hi;
        for (const auto& h : levels[k + 1]) {
            if (h.coeffs[k] == 0)
                continue;
            Rational rest = h.rhs;
            for (std::size_t j = 0; j < k; ++j)
                rest -= h.coeffs[j] * xi[j];
            Rational bound = rest / h.coeffs[k];
            if (h.coeffs[k] > 0) {
                if (!lo || bound > *lo)
                    lo = bound;
            } else if (!hi || bound < *hi) {
                hi = bound;
            }
        }
        if (lo) {
            Rational v = ceil_div(*lo);
            xi[k] = (hi && v > *hi) ? *lo : v;
        } else if (hi) {
            Rational v = floor_div(*hi);
            xi[k] = v < 0 ? v : Rational(0);
        } else {
            xi[k] = 0;
        }
    }
    return PointedCertificate{std::move(xi)};
}

inline bool certifies(const PointedCertificate& cert, std::span<const IntVector> X) {
    for (const auto& a : X)
        if (dot(cert.xi, a) < 1)
            return false;
    return true;
}

} // namespace dtp
