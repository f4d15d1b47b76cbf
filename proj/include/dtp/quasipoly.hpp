#pragma once

// Inverse transform of a reduced form: one polynomial per shifted lattice cone.

#include "dtp/toric_reduce.hpp"

namespace dtp {

/// Polynomial in s variables with rational coefficients; exponent vector -> coefficient.
class MultiPoly {
public:
    using Exponents = std::vector<unsigned>;

    explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(std::size_t nvars, const Rational& c) {
        MultiPoly p(nvars);
        p.add_monomial(Exponents(nvars, 0), c);
        return p;
    }

    /// <coeffs, x> + constant
    static MultiPoly linear(const IntVector& coeffs, const BigInt& constant_term) {
        MultiPoly p(coeffs.size());
        p.add_monomial(Exponents(coeffs.size(), 0), constant_term);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            Exponents e(coeffs.size(), 0);
            e[i] = 1;
            p.add_monomial(e, coeffs[i]);
        }
        return p;
    }

    /// scale * prod_k (<forms_k.coeffs, x> + forms_k.constant), expanded over the integers first.
    template <class Forms>
    static MultiPoly product(std::size_t nvars, const Rational& scale, const Forms& forms) {
        std::map<Exponents, BigInt> acc{{Exponents(nvars, 0), BigInt(1)}};
        for (const auto& f : forms) {
            std::map<Exponents, BigInt> next;
            for (const auto& [e, c] : acc) {
                if (!f.constant.is_zero())
                    next[e] += c * f.constant;
                for (std::size_t i = 0; i < nvars; ++i) {
                    if (f.coeffs[i].is_zero())
                        continue;
                    Exponents e2 = e;
                    ++e2[i];
                    next[e2] += c * f.coeffs[i];
                }
            }
            acc = std::move(next);
        }
        MultiPoly p(nvars);
        for (const auto& [e, c] : acc)
            if (!c.is_zero())
                p.monomials_.emplace(e, scale * c);
        if (scale.is_zero())
            p.monomials_.clear();
        return p;
    }

    std::size_t variables() const { return nvars_; }
    bool is_zero() const { return monomials_.empty(); }
    const std::map<Exponents, Rational>& monomials() const { return monomials_; }

    void add_monomial(const Exponents& e, const Rational& c) {
        if (e.size() != nvars_)
            throw std::invalid_argument("MultiPoly: exponent length mismatch");
        if (c.is_zero())
            return;
        auto [it, inserted] = monomials_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                monomials_.erase(it);
        }
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : monomials_) {
            unsigned t = 0;
            for (unsigned k : e)
                t += k;
            d = std::max(d, t);
        }
        return d;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [e, c] : o.monomials_)
            add_monomial(e, c);
        return *this;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r(a.nvars_);
        for (const auto& [ea, ca] : a.monomials_) {
            for (const auto& [eb, cb] : b.monomials_) {
                Exponents e(a.nvars_);
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] = ea[i] + eb[i];
                r.add_monomial(e, ca * cb);
            }
        }
        return r;
    }

    Rational evaluate(const IntVector& x) const {
        if (x.size() != nvars_)
            throw std::invalid_argument("MultiPoly: evaluation point dimension mismatch");
        Rational sum = 0;
        for (const auto& [e, c] : monomials_) {
            BigInt m = 1;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k)
                    m *= x[i];
            sum += c * m;
        }
        return sum;
    }

    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

private:
    std::size_t nvars_;
    std::map<Exponents, Rational> monomials_;
};

/// <coeffs, x> + constant
struct LinearForm {
    IntVector coeffs;
    BigInt constant;
};

/// scale * prod factors; kept for display when a piece comes from a single reduced term.
struct FactoredPoly {
    Rational scale;
    std::vector<LinearForm> factors;
};

/// poly(alpha) on the cone offset + sum lambda_i basis_i (lambda in N^s), zero elsewhere.
struct ConePiece {
    std::vector<IntVector> basis;
    IntVector offset;
    MultiPoly poly;
    std::optional<FactoredPoly> factored;
};

struct ClosedForm {
    std::vector<IntVector> source;
    std::vector<ConePiece> pieces;
};

namespace detail {

// Data of the inverse transform that depends only on the denominator.
class TermInverter {
public:
    explicit TermInverter(const Denominator& denom) : denom_(denom) {
        const std::size_t s = denom.empty() ? 0 : denom.front().vector.size();
        if (denom.size() != s || s == 0)
            throw std::invalid_argument("inverse_laplace_term: need one denominator vector per dimension");
        for (const auto& f : denom)
            basis_.push_back(f.vector);
        if (determinant(basis_) == 0)
            throw std::invalid_argument("inverse_laplace_term: dependent denominator vectors");
        base_offset_ = zero_vector(s);
        divisor_ = 1;
        for (std::size_t i = 0; i < s; ++i) {
            const auto& [b, h] = denom[i];
            if (h == 1)
                continue;
            Axis axis{i, orth_complement(basis_, i), 0};
            axis.pairing = dot(axis.normal, b);
            for (unsigned j = 1; j < h; ++j)
                divisor_ *= BigInt(j) * axis.pairing; // (h-1)! * pairing^(h-1)
            base_offset_ = base_offset_ - BigInt(h - 1) * b;
            axes_.push_back(std::move(axis));
        }
    }

    ConePiece invert(const Rational& coeff, const IntVector& shift) const {
        FactoredPoly fp{coeff / divisor_, {}};
        for (const auto& axis : axes_) {
            const BigInt base = dot(axis.normal, shift);
            for (unsigned j = 1; j < denom_[axis.index].power; ++j)
                fp.factors.push_back({axis.normal, base + BigInt(j) * axis.pairing});
        }
        MultiPoly poly = MultiPoly::product(shift.size(), fp.scale, fp.factors);
        return {basis_, base_offset_ - shift, std::move(poly), std::move(fp)};
    }

private:
    struct Axis {
        std::size_t index;
        IntVector normal; // B_i^perp
        BigInt pairing;   // <B_i^perp, b_i>
    };
    Denominator denom_;
    std::vector<IntVector> basis_;
    std::vector<Axis> axes_;
    IntVector base_offset_;
    BigInt divisor_;
};

} // namespace detail

/// Inverse transform of q e^{<c,x>} / prod_i (1 - e^{-<b_i,x>})^{h_i} with independent b_i:
///   prod_i prod_{j=1}^{h_i-1} <B_i^perp, alpha + c + j b_i> / ((h_i-1)! <B_i^perp, b_i>^{h_i-1})
/// supported on -c - sum_k (h_k-1) b_k + Lambda_B^+. The polynomial vanishes on the layers the
/// extra offset adds, so this support is exact.
inline ConePiece inverse_laplace_term(const ExpRatTerm& term) {
    return detail::TermInverter(term.denom).invert(term.num.coeff, term.num.shift);
}

/// True iff alpha - offset is a nonnegative integer combination of the (square) basis.
inline bool support_membership(std::span<const IntVector> basis, const IntVector& offset, const IntVector& alpha) {
    auto lambda = solve_square(basis, alpha - offset);
    if (!lambda)
        throw std::invalid_argument("support_membership: singular basis");
    for (const auto& l : *lambda)
        if (!is_integer(l) || l < 0)
            return false;
    return true;
}

namespace detail {

// Sorted basis + offset identifies a support cone.
using PieceKey = std::pair<std::vector<IntVector>, IntVector>;

inline std::vector<ConePiece> merge_pieces(std::vector<ConePiece> pieces) {
    std::map<PieceKey, ConePiece> merged;
    for (auto& p : pieces) {
        std::vector<IntVector> sorted = p.basis;
        std::sort(sorted.begin(), sorted.end());
        PieceKey key{std::move(sorted), p.offset};
        auto it = merged.find(key);
        if (it == merged.end()) {
            p.basis = key.first;
            merged.emplace(std::move(key), std::move(p));
        } else {
            it->second.poly += p.poly;
            it->second.factored.reset();
        }
    }
    std::vector<ConePiece> out;
    out.reserve(merged.size());
    for (auto& [key, p] : merged)
        if (!p.poly.is_zero())
            out.push_back(std::move(p));
    return out;
}

} // namespace detail

inline ClosedForm closed_form(const ReducedForm& rf) {
    std::vector<ConePiece> pieces;
    pieces.reserve(rf.sum.size());
    for (const auto& [denom, numerator] : rf.sum.groups()) {
        const detail::TermInverter inverter(denom);
        for (const auto& [shift, coeff] : numerator)
            pieces.push_back(inverter.invert(coeff, shift));
    }
    return {rf.source, detail::merge_pieces(std::move(pieces))};
}

inline ClosedForm closed_form(std::span<const IntVector> X, const ReduceOptions& opts = {}) {
    return closed_form(toric_reduce(X, opts));
}

/// Evaluation of a closed form with per-piece inverses precomputed in machine integers.
class ClosedFormEvaluator {
public:
    explicit ClosedFormEvaluator(const ClosedForm& cf) {
        std::map<std::vector<IntVector>, std::size_t> seen;
        for (const auto& p : cf.pieces) {
            auto [it, inserted] = seen.try_emplace(p.basis, lattices_.size());
            if (inserted) {
                BigInt det = determinant(p.basis);
                auto adj = adjugate_rows(p.basis);
                if (det < 0) {
                    det = -det;
                    for (auto& row : adj)
                        row = -row;
                }
                Lattice lat{to_int64(det), {}};
                for (const auto& row : adj)
                    lat.adj.push_back(narrow(row));
                lattices_.push_back(std::move(lat));
            }
            Piece piece{it->second, narrow(p.offset), {}, 1};
            for (const auto& [e, c] : p.poly.monomials())
                piece.denominator = lcm(piece.denominator, denominator_of(c));
            for (const auto& [e, c] : p.poly.monomials())
                piece.terms.emplace_back(e, numerator_of(c * piece.denominator));
            pieces_.push_back(std::move(piece));
        }
    }

    /// Raw value; integrality is not asserted here.
    Rational value(const IntVector& alpha) const {
        const auto a = narrow(alpha);
        std::vector<std::int64_t> rel(a.size());
        std::map<BigInt, BigInt> by_denominator;
        for (const auto& piece : pieces_) {
            for (std::size_t i = 0; i < a.size(); ++i)
                rel[i] = a[i] - piece.offset[i];
            if (!in_lattice_cone(lattices_[piece.lattice], rel))
                continue;
            BigInt v = 0;
            for (const auto& [e, c] : piece.terms) {
                BigInt m = c;
                for (std::size_t i = 0; i < e.size(); ++i)
                    for (unsigned k = 0; k < e[i]; ++k)
                        m *= a[i];
                v += m;
            }
            by_denominator[piece.denominator] += v;
        }
        Rational total = 0;
        for (const auto& [d, n] : by_denominator)
            total += Rational(n, d);
        return total;
    }

    /// t_X(alpha); throws std::logic_error if the sum is not a nonnegative integer.
    BigInt count(const IntVector& alpha) const {
        Rational v = value(alpha);
        if (!is_integer(v) || v < 0)
            throw std::logic_error("closed form produced " + to_string(v) + " at " + to_string(alpha));
        return numerator_of(v);
    }

private:
    struct Lattice {
        std::int64_t det;
        std::vector<std::vector<std::int64_t>> adj;
    };
    struct Piece {
        std::size_t lattice;
        std::vector<std::int64_t> offset;
        std::vector<std::pair<MultiPoly::Exponents, BigInt>> terms; // numerators over `denominator`
        BigInt denominator;
    };

    static std::vector<std::int64_t> narrow(const IntVector& v) {
        std::vector<std::int64_t> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            r[i] = to_int64(v[i]);
        return r;
    }

    static bool in_lattice_cone(const Lattice& lat, const std::vector<std::int64_t>& rel) {
        for (const auto& row : lat.adj) {
            std::int64_t v = 0;
            for (std::size_t i = 0; i < rel.size(); ++i)
                v += row[i] * rel[i];
            if (v < 0 || v % lat.det != 0)
                return false;
        }
        return true;
    }

    std::vector<Lattice> lattices_;
    std::vector<Piece> pieces_;
};

inline Rational eval_closed(const ClosedForm& cf, const IntVector& alpha) {
    return Rational(ClosedFormEvaluator(cf).count(alpha));
}

} // namespace dtp
