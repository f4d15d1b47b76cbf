#pragma once

// Independent counting engines and cross-engine verification.

#include "dtp/quasipoly.hpp"

#include <chrono>
#include <functional>
#include <unordered_map>

namespace dtp {

struct CountMismatch {
    IntVector point;
    BigInt brute;
    BigInt recursion;
    Rational closed;
};

struct CountReport {
    IntVector lower, upper; ///< inclusive box corners
    std::vector<CountMismatch> mismatches;
    std::size_t brute_points = 0;
    std::size_t recursion_points = 0;
    std::size_t closed_points = 0;
    double brute_seconds = 0;
    double recursion_seconds = 0;
    double closed_build_seconds = 0;
    double closed_seconds = 0;
    double identity_error = 0; ///< max relative error of the reduced generating function

    std::size_t points() const { return brute_points; }
    bool ok() const { return mismatches.empty(); }
};

namespace detail {

using Vec64 = std::vector<std::int64_t>;

inline Vec64 narrow(const IntVector& v) {
    Vec64 r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = to_int64(v[i]);
    return r;
}

struct Vec64Hash {
    std::size_t operator()(const Vec64& v) const noexcept {
        std::size_t h = v.size();
        for (auto x : v)
            h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Integer weights w with <w, a> >= 1 for all a: the certificate scaled by its denominators.
inline Vec64 integral_certificate(const PointedCertificate& cert) {
    BigInt d = 1;
    for (const auto& q : cert.xi)
        d = lcm(d, denominator_of(q));
    Vec64 w(cert.xi.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = to_int64(numerator_of(cert.xi[i] * d));
    return w;
}

inline std::int64_t dot64(const Vec64& a, const Vec64& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Decides alpha in Lambda_A^+ for linearly independent A (|A| <= s) using an invertible
// r x r row selection and a final full-row check.
class IndependentSystem {
public:
    IndependentSystem() = default;
    explicit IndependentSystem(std::span<const IntVector> A) {
        if (A.empty())
            return;
        const std::size_t s = A.front().size(), r = A.size();
        for (const auto& a : A)
            cols_.push_back(narrow(a));
        // Greedy row selection for a nonsingular r x r minor.
        std::vector<std::size_t> rows;
        for (std::size_t row = 0; row < s && rows.size() < r; ++row) {
            rows.push_back(row);
            std::vector<IntVector> restricted(r);
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t rr : rows)
                    restricted[c].push_back(A[c][rr]);
            if (rank(restricted) < rows.size())
                rows.pop_back();
        }
        if (rows.size() != r)
            throw std::invalid_argument("vectors are not linearly independent");
        rows_ = rows;
        std::vector<IntVector> square(r, IntVector(r));
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t k = 0; k < r; ++k)
                square[c][k] = A[c][rows[k]];
        BigInt det = determinant(square);
        auto adj = adjugate_rows(square);
        if (det < 0) {
            det = -det;
            for (auto& row : adj)
                row = -row;
        }
        det_ = to_int64(det);
        for (const auto& row : adj)
            adj_.push_back(narrow(row));
    }

    bool contains(const Vec64& alpha) const {
        if (cols_.empty()) {
            for (auto x : alpha)
                if (x != 0)
                    return false;
            return true;
        }
        const std::size_t r = cols_.size();
        Vec64 lambda(r);
        for (std::size_t i = 0; i < r; ++i) {
            std::int64_t v = 0;
            for (std::size_t k = 0; k < r; ++k)
                v += adj_[i][k] * alpha[rows_[k]];
            if (v < 0 || v % det_ != 0)
                return false;
            lambda[i] = v / det_;
        }
        for (std::size_t row = 0; row < alpha.size(); ++row) {
            std::int64_t v = 0;
            for (std::size_t i = 0; i < r; ++i)
                v += lambda[i] * cols_[i][row];
            if (v != alpha[row])
                return false;
        }
        return true;
    }

private:
    std::vector<Vec64> cols_;
    std::vector<std::size_t> rows_;
    std::vector<Vec64> adj_;
    std::int64_t det_ = 1;
};

inline void check_system(std::span<const IntVector> X, const IntVector& alpha) {
    for (const auto& a : X) {
        check_same_dim(a, alpha);
        if (is_zero(a))
            throw std::invalid_argument("zero vector in system");
    }
}

} // namespace detail

/// 1 iff alpha is a nonnegative integer combination of the linearly independent A.
inline int independent_count(std::span<const IntVector> A, const IntVector& alpha) {
    return detail::IndependentSystem(A).contains(detail::narrow(alpha)) ? 1 : 0;
}

/// Exhaustive enumeration of beta in N^n with sum beta_i a_i = alpha.
///
/// Coordinates are bounded by <xi,alpha>/<xi,a_i> and pruned on the remaining xi-budget.
/// The last rank(X) vectors are chosen linearly independent, so once the others are fixed
/// the remaining coordinates are determined and checked exactly.
class BruteForceCounter {
public:
    BruteForceCounter(std::span<const IntVector> X, const PointedCertificate& cert) {
        if (X.empty())
            throw std::invalid_argument("brute force: empty system");
        if (!certifies(cert, X))
            throw std::invalid_argument("brute force: certificate does not cover the system");
        xi_ = detail::integral_certificate(cert);
        // Greedily pick an independent tail.
        std::vector<IntVector> tail;
        std::vector<bool> in_tail(X.size(), false);
        for (std::size_t i = X.size(); i-- > 0;) {
            tail.push_back(X[i]);
            if (!linearly_independent(tail))
                tail.pop_back();
            else
                in_tail[i] = true;
        }
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (!in_tail[i]) {
                head_.push_back(detail::narrow(X[i]));
                weights_.push_back(detail::dot64(xi_, head_.back()));
            }
        }
        tail_ = detail::IndependentSystem(tail);
    }

    std::uint64_t count(const IntVector& alpha) const {
        detail::Vec64 rest = detail::narrow(alpha);
        if (rest.size() != xi_.size())
            throw std::invalid_argument("brute force: point dimension mismatch");
        const std::int64_t budget = detail::dot64(xi_, rest);
        if (budget < 0)
            return 0;
        return descend(0, rest, budget);
    }

private:
    std::uint64_t descend(std::size_t k, detail::Vec64& rest, std::int64_t budget) const {
        if (k == head_.size())
            return tail_.contains(rest) ? 1 : 0;
        std::uint64_t total = 0;
        const auto& a = head_[k];
        std::int64_t used = 0;
        for (std::int64_t j = 0; j * weights_[k] <= budget; ++j) {
            total += descend(k + 1, rest, budget - j * weights_[k]);
            for (std::size_t i = 0; i < rest.size(); ++i)
                rest[i] -= a[i];
            ++used;
        }
        for (std::size_t i = 0; i < rest.size(); ++i)
            rest[i] += used * a[i];
        return total;
    }

    detail::Vec64 xi_;
    std::vector<detail::Vec64> head_;
    std::vector<std::int64_t> weights_;
    detail::IndependentSystem tail_;
};

inline BigInt brute_force_count(std::span<const IntVector> X, const IntVector& alpha,
                                const PointedCertificate& cert) {
    detail::check_system(X, alpha);
    return BigInt(BruteForceCounter(X, cert).count(alpha));
}

/// t_X(alpha) = sum_j t_{X minus last}(alpha - j a_last), bottoming out in independent_count
/// once the remaining prefix is linearly independent. Memoized on (prefix length, alpha);
/// one instance is one evaluation context.
class RecursionCounter {
public:
    explicit RecursionCounter(std::span<const IntVector> X) {
        if (X.empty())
            throw std::invalid_argument("recursion: empty system");
        auto cert = pointedness_certificate(X);
        if (!cert)
            throw std::invalid_argument("recursion: cone is not pointed");
        xi_ = detail::integral_certificate(*cert);
        for (const auto& a : X) {
            vectors_.push_back(detail::narrow(a));
            weights_.push_back(detail::dot64(xi_, vectors_.back()));
        }
        base_ = 0;
        while (base_ < X.size() && linearly_independent(X.first(base_ + 1)))
            ++base_;
        base_system_ = detail::IndependentSystem(X.first(base_));
        memo_.resize(X.size() + 1);
    }

    std::uint64_t count(const IntVector& alpha) {
        auto v = detail::narrow(alpha);
        if (v.size() != xi_.size())
            throw std::invalid_argument("recursion: point dimension mismatch");
        return count(vectors_.size(), v);
    }

private:
    std::uint64_t count(std::size_t prefix, const detail::Vec64& alpha) {
        if (prefix <= base_)
            return base_contains(prefix, alpha) ? 1 : 0;
        const std::int64_t budget = detail::dot64(xi_, alpha);
        if (budget < 0)
            return 0;
        auto& memo = memo_[prefix];
        if (auto it = memo.find(alpha); it != memo.end())
            return it->second;
        const auto& a = vectors_[prefix - 1];
        const std::int64_t w = weights_[prefix - 1];
        std::uint64_t total = 0;
        detail::Vec64 rest = alpha;
        for (std::int64_t j = 0; j * w <= budget; ++j) {
            total += count(prefix - 1, rest);
            for (std::size_t i = 0; i < rest.size(); ++i)
                rest[i] -= a[i];
        }
        memo.emplace(alpha, total);
        return total;
    }

    bool base_contains(std::size_t prefix, const detail::Vec64& alpha) const {
        if (prefix == base_)
            return base_system_.contains(alpha);
        std::vector<IntVector> A;
        for (std::size_t i = 0; i < prefix; ++i)
            A.emplace_back(vectors_[i].begin(), vectors_[i].end());
        return detail::IndependentSystem(A).contains(alpha);
    }

    detail::Vec64 xi_;
    std::vector<detail::Vec64> vectors_;
    std::vector<std::int64_t> weights_;
    std::size_t base_ = 0;
    detail::IndependentSystem base_system_;
    std::vector<std::unordered_map<detail::Vec64, std::uint64_t, detail::Vec64Hash>> memo_;
};

inline BigInt dm_count(std::span<const IntVector> X, const IntVector& alpha) {
    detail::check_system(X, alpha);
    return BigInt(RecursionCounter(X).count(alpha));
}

/// Calls f on every lattice point of the inclusive box [lower, upper].
inline void for_each_point(const IntVector& lower, const IntVector& upper,
                           const std::function<void(const IntVector&)>& f) {
    check_same_dim(lower, upper);
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (lower[i] > upper[i])
            return;
    IntVector p = lower;
    while (true) {
        f(p);
        std::size_t i = 0;
        for (; i < p.size(); ++i) {
            if (p[i] < upper[i]) {
                ++p[i];
                break;
            }
            p[i] = lower[i];
        }
        if (i == p.size())
            return;
    }
}

inline IntVector uniform_box_corner(std::size_t dim, long long v) { return IntVector(dim, BigInt(v)); }

/// Runs brute force, recursion and closed form on every point of the box.
inline CountReport cross_check(std::span<const IntVector> X, const IntVector& lower, const IntVector& upper,
                               std::uint64_t seed, ReduceOptions opts = {}) {
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };
    const std::size_t s = detail::ambient_dim(X);
    check_same_dim(lower, X.front());
    check_same_dim(upper, X.front());
    auto cert = pointedness_certificate(X);
    if (!cert)
        throw std::invalid_argument("cross_check: cone is not pointed");
    if (rank(X) != s)
        throw std::invalid_argument("cross_check: vectors do not span the ambient space");

    CountReport report;
    report.lower = lower;
    report.upper = upper;

    std::vector<IntVector> points;
    for_each_point(lower, upper, [&](const IntVector& p) { points.push_back(p); });

    auto t0 = clock::now();
    BruteForceCounter brute(X, *cert);
    std::vector<BigInt> b(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        b[i] = brute.count(points[i]);
    report.brute_points = points.size();
    auto t1 = clock::now();
    report.brute_seconds = seconds(t0, t1);

    RecursionCounter recursion(X);
    std::vector<BigInt> r(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        r[i] = recursion.count(points[i]);
    report.recursion_points = points.size();
    auto t2 = clock::now();
    report.recursion_seconds = seconds(t1, t2);

    opts.seed = seed;
    const ReducedForm reduced = toric_reduce(X, opts);
    const ClosedForm cf = closed_form(reduced);
    auto t3 = clock::now();
    report.closed_build_seconds = seconds(t2, t3);

    ClosedFormEvaluator eval(cf);
    for (std::size_t i = 0; i < points.size(); ++i) {
        Rational c = eval.value(points[i]);
        if (c != Rational(b[i]) || b[i] != r[i])
            report.mismatches.push_back({points[i], b[i], r[i], c});
    }
    report.closed_points = points.size();
    report.closed_seconds = seconds(t3, clock::now());

    report.identity_error = identity_error(reduced, seed);
    return report;
}

} // namespace dtp
