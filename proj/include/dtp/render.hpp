#pragma once

// Text, JSON and LaTeX output for reduced forms, closed forms and count reports.

#include "dtp/engines.hpp"

#include "json.hpp"
#include <sstream>

namespace dtp {

using json = nlohmann::json;

enum class Format { text, json, latex };

namespace detail {

inline std::string variable(std::size_t i, std::size_t nvars) {
    static const char* names[] = {"x", "y", "z"};
    return nvars <= 3 ? names[i] : "x_" + std::to_string(i + 1);
}

// Appends c*term to out with sign handling; empty term means the constant.
inline void append_signed(std::string& out, const BigInt& c, const std::string& term) {
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (out.empty())
        out += c < 0 ? "-" : "";
    else
        out += c < 0 ? "-" : "+";
    if (term.empty())
        out += mag.str();
    else {
        if (mag != 1)
            out += mag.str();
        out += term;
    }
}

inline std::string linear_form(const LinearForm& f) {
    std::string out;
    const std::size_t n = f.coeffs.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!f.coeffs[i].is_zero())
            append_signed(out, f.coeffs[i], variable(i, n));
    if (!f.constant.is_zero() || out.empty())
        append_signed(out, f.constant, "");
    return out;
}

inline std::string monomial_text(const MultiPoly::Exponents& e, bool latex) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        out += variable(i, e.size());
        if (e[i] > 1)
            out += latex ? "^{" + std::to_string(e[i]) + "}" : "^" + std::to_string(e[i]);
    }
    return out;
}

// Expanded polynomial over a common denominator, highest degree first: "(x^2+6x+8)/8".
inline std::string expanded(const MultiPoly& p, bool latex) {
    if (p.is_zero())
        return "0";
    BigInt den = 1;
    for (const auto& [e, c] : p.monomials())
        den = lcm(den, denominator_of(c));
    std::vector<std::pair<MultiPoly::Exponents, BigInt>> terms;
    for (const auto& [e, c] : p.monomials())
        terms.emplace_back(e, numerator_of(c * den));
    std::stable_sort(terms.begin(), terms.end(), [](const auto& l, const auto& r) {
        unsigned dl = 0, dr = 0;
        for (unsigned k : l.first)
            dl += k;
        for (unsigned k : r.first)
            dr += k;
        return dl != dr ? dl > dr : l.first > r.first;
    });
    std::string num;
    for (const auto& [e, c] : terms)
        append_signed(num, c, monomial_text(e, latex));
    if (den == 1)
        return num;
    return (terms.size() > 1 ? "(" + num + ")" : num) + "/" + den.str();
}

inline std::string factored(const FactoredPoly& fp) {
    const BigInt p = numerator_of(fp.scale);
    const BigInt q = denominator_of(fp.scale);
    if (fp.factors.empty())
        return to_string(fp.scale);
    // a lone factor with unit scale prints bare: "x", "-x", "x-1"
    if (fp.factors.size() == 1 && q == 1 && p == 1)
        return linear_form(fp.factors.front());
    if (fp.factors.size() == 1 && q == 1 && p == -1)
        return linear_form({-fp.factors.front().coeffs, -fp.factors.front().constant});
    std::string body;
    for (const auto& f : fp.factors) {
        std::string t = linear_form(f);
        body += t.find_first_of("+-") == std::string::npos ? t : "(" + t + ")";
    }
    if (p == -1)
        body = "-" + body;
    else if (p != 1)
        body = p.str() + body;
    return q == 1 ? body : body + "/" + q.str();
}

inline std::string piece_poly(const ConePiece& p, bool latex) {
    return p.factored ? factored(*p.factored) : expanded(p.poly, latex);
}

// Argument of t_B in cone notation: the point minus the offset, "(x+4)" or "(x+1,y)".
inline std::string cone_argument(const IntVector& offset) {
    const std::size_t n = offset.size();
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < n; ++i) {
        LinearForm f{IntVector(n, 0), -offset[i]};
        f.coeffs[i] = 1;
        parts.push_back(linear_form(f));
    }
    std::string out = "(";
    for (std::size_t i = 0; i < n; ++i)
        out += (i ? "," : "") + parts[i];
    return out + ")";
}

inline std::string vector_set(const std::vector<IntVector>& basis, bool latex) {
    std::string out = latex ? "\\{" : "{";
    for (std::size_t i = 0; i < basis.size(); ++i)
        out += (i ? "," : "") + to_string(basis[i]);
    return out + (latex ? "\\}" : "}");
}

inline json int_array(const IntVector& v) {
    json a = json::array();
    for (const auto& c : v)
        a.push_back(to_int64(c));
    return a;
}

inline json int_matrix(std::span<const IntVector> vs) {
    json a = json::array();
    for (const auto& v : vs)
        a.push_back(int_array(v));
    return a;
}

inline IntVector read_int_array(const json& j, std::size_t dim) {
    if (!j.is_array() || j.size() != dim)
        throw std::invalid_argument("closed form JSON: expected an integer array of length " + std::to_string(dim));
    IntVector v;
    for (const auto& c : j) {
        if (!c.is_number_integer())
            throw std::invalid_argument("closed form JSON: non-integer entry");
        v.emplace_back(c.get<std::int64_t>());
    }
    return v;
}

inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    auto whole = [](const std::string& t) {
        std::size_t start = !t.empty() && (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (start == t.size() || t.find_first_not_of("0123456789", start) != std::string::npos)
            throw std::invalid_argument("closed form JSON: bad rational '" + t + "'");
        return BigInt(t[0] == '+' ? t.substr(1) : t);
    };
    if (slash == std::string::npos)
        return Rational(whole(s));
    BigInt den = whole(s.substr(slash + 1));
    if (den <= 0)
        throw std::invalid_argument("closed form JSON: denominator must be positive");
    return Rational(whole(s.substr(0, slash)), den);
}

} // namespace detail

// ---- closed forms ----

inline json to_json(const ClosedForm& cf) {
    const std::size_t s = cf.source.empty() ? 0 : cf.source.front().size();
    json pieces = json::array();
    for (const auto& p : cf.pieces) {
        json poly = json::array();
        for (const auto& [e, c] : p.poly.monomials())
            poly.push_back({{"exponents", e}, {"coeff", to_string(c)}});
        pieces.push_back({{"basis", detail::int_matrix(p.basis)}, {"offset", detail::int_array(p.offset)}, {"poly", poly}});
    }
    return {{"dimension", s}, {"vectors", detail::int_matrix(cf.source)}, {"pieces", pieces}};
}

inline ClosedForm closed_form_from_json(const json& j) {
    const auto s = j.at("dimension").get<std::size_t>();
    ClosedForm cf;
    for (const auto& v : j.at("vectors"))
        cf.source.push_back(detail::read_int_array(v, s));
    for (const auto& jp : j.at("pieces")) {
        ConePiece p;
        for (const auto& b : jp.at("basis"))
            p.basis.push_back(detail::read_int_array(b, s));
        if (p.basis.size() != s)
            throw std::invalid_argument("closed form JSON: basis needs " + std::to_string(s) + " vectors");
        p.offset = detail::read_int_array(jp.at("offset"), s);
        p.poly = MultiPoly(s);
        for (const auto& m : jp.at("poly")) {
            auto e = m.at("exponents").get<MultiPoly::Exponents>();
            p.poly.add_monomial(e, detail::parse_rational(m.at("coeff").get<std::string>()));
        }
        cf.pieces.push_back(std::move(p));
    }
    return cf;
}

inline ClosedForm closed_form_from_text(std::string_view text) {
    return closed_form_from_json(json::parse(text));
}

inline std::string to_text(const ClosedForm& cf) {
    std::ostringstream os;
    os << "t_X for X = " << detail::vector_set(cf.source, false) << ", " << cf.pieces.size() << " piece"
       << (cf.pieces.size() == 1 ? "" : "s") << '\n';
    for (const auto& p : cf.pieces)
        os << "  " << detail::piece_poly(p, false) << "  on  " << to_string(p.offset) << " + N"
           << detail::vector_set(p.basis, false) << '\n';
    return os.str();
}

inline std::string to_latex(const ClosedForm& cf) {
    std::ostringstream os;
    os << "t_X" << detail::cone_argument(zero_vector(cf.source.empty() ? 1 : cf.source.front().size())) << " = ";
    if (cf.pieces.empty())
        os << "0";
    for (std::size_t i = 0; i < cf.pieces.size(); ++i) {
        const auto& p = cf.pieces[i];
        std::string poly = detail::piece_poly(p, true);
        if (i > 0)
            os << (poly.front() == '-' ? "\n  - " : "\n  + ");
        if (i > 0 && poly.front() == '-')
            poly.erase(0, 1);
        os << poly << "\\, t_{" << detail::vector_set(p.basis, true) << "}" << detail::cone_argument(p.offset);
    }
    os << '\n';
    return os.str();
}

inline std::string render(const ClosedForm& cf, Format f) {
    switch (f) {
    case Format::json:
        return to_json(cf).dump(2) + "\n";
    case Format::latex:
        return to_latex(cf);
    default:
        return to_text(cf);
    }
}

// ---- reduced forms ----

inline json to_json(const ReducedForm& rf) {
    const std::size_t s = rf.source.empty() ? 0 : rf.source.front().size();
    json terms = json::array();
    rf.sum.for_each([&](const IntVector& shift, const Denominator& d, const Rational& c) {
        json denom = json::array();
        for (const auto& f : d)
            denom.push_back({{"vector", detail::int_array(f.vector)}, {"power", f.power}});
        terms.push_back({{"coeff", to_string(c)}, {"shift", detail::int_array(shift)}, {"denominator", denom}});
    });
    return {{"dimension", s}, {"vectors", detail::int_matrix(rf.source)}, {"terms", terms}};
}

namespace detail {

inline std::string exponent(const IntVector& shift, bool negate) {
    LinearForm f{negate ? -shift : shift, 0};
    return linear_form(f);
}

inline std::string reduced_term(const Rational& c, const Denominator& d, const IntVector& shift, bool latex) {
    std::string num = is_zero(shift) ? "1" : (latex ? "e^{" + exponent(shift, false) + "}"
                                                    : "e^(" + exponent(shift, false) + ")");
    std::string den;
    for (const auto& f : d) {
        std::string factor = latex ? "(1-e^{" + exponent(f.vector, true) + "})" : "(1-e^(" + exponent(f.vector, true) + "))";
        if (f.power > 1)
            factor += latex ? "^{" + std::to_string(f.power) + "}" : "^" + std::to_string(f.power);
        den += factor;
    }
    std::string coeff = to_string(c);
    if (latex) {
        std::string sign = c < 0 ? "-" : "";
        Rational mag = c < 0 ? Rational(-c) : c;
        std::string top = numerator_of(mag) == 1 ? num : numerator_of(mag).str() + (num == "1" ? "" : num);
        std::string bottom = denominator_of(mag) == 1 ? den : denominator_of(mag).str() + den;
        return sign + "\\frac{" + top + "}{" + bottom + "}";
    }
    return coeff + " * " + num + " / " + den;
}

} // namespace detail

inline std::string render(const ReducedForm& rf, Format f) {
    if (f == Format::json)
        return to_json(rf).dump(2) + "\n";
    std::ostringstream os;
    if (f == Format::text)
        os << "reduced form of X = " << detail::vector_set(rf.source, false) << ", " << rf.sum.size() << " term"
           << (rf.sum.size() == 1 ? "" : "s") << '\n';
    bool first = true;
    rf.sum.for_each([&](const IntVector& shift, const Denominator& d, const Rational& c) {
        if (f == Format::text)
            os << "  " << detail::reduced_term(c, d, shift, false) << '\n';
        else {
            std::string t = detail::reduced_term(c, d, shift, true);
            if (!first)
                os << (t.front() == '-' ? "\n  " : "\n  + ");
            os << t;
            first = false;
        }
    });
    if (f == Format::latex)
        os << (first ? "0" : "") << '\n';
    return os.str();
}

// ---- count reports ----

inline std::string summary_line(const CountReport& r) {
    return std::string(r.ok() ? "OK" : "FAIL") + ": " + std::to_string(r.points()) + " points, " +
           std::to_string(r.mismatches.size()) + " mismatches";
}

inline json to_json(const CountReport& r) {
    json mism = json::array();
    for (const auto& m : r.mismatches)
        mism.push_back({{"point", detail::int_array(m.point)},
                        {"brute", m.brute.str()},
                        {"recursion", m.recursion.str()},
                        {"closed", to_string(m.closed)}});
    return {{"lower", detail::int_array(r.lower)},
            {"upper", detail::int_array(r.upper)},
            {"points", r.points()},
            {"mismatches", mism},
            {"seconds",
             {{"brute", r.brute_seconds},
              {"recursion", r.recursion_seconds},
              {"closed_build", r.closed_build_seconds},
              {"closed", r.closed_seconds}}},
            {"identity_error", r.identity_error}};
}

inline std::string render(const CountReport& r, Format f) {
    if (f == Format::json)
        return to_json(r).dump(2) + "\n";
    std::ostringstream os;
    os << summary_line(r) << '\n';
    for (const auto& m : r.mismatches)
        os << "  at " << to_string(m.point) << ": brute " << m.brute << ", recursion " << m.recursion
           << ", closed " << to_string(m.closed) << '\n';
    return os.str();
}

/// Per-engine timing table.
inline std::string bench_table(const CountReport& r) {
    char line[128];
    std::ostringstream os;
    std::snprintf(line, sizeof line, "%-14s %10s %12s\n", "engine", "points", "seconds");
    os << line;
    auto row = [&](const char* name, std::size_t pts, double secs) {
        std::snprintf(line, sizeof line, "%-14s %10zu %12.6f\n", name, pts, secs);
        os << line;
    };
    row("brute", r.brute_points, r.brute_seconds);
    row("recursion", r.recursion_points, r.recursion_seconds);
    row("closed-build", std::size_t{0}, r.closed_build_seconds);
    row("closed-eval", r.closed_points, r.closed_seconds);
    os << summary_line(r) << '\n';
    return os.str();
}

} // namespace dtp
