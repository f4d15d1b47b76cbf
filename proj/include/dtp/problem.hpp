#pragma once

// Vector-system input: one vector per line, whitespace-separated integers, '#' comments.

#include "dtp/linalg.hpp"

#include <istream>
#include <string_view>

namespace dtp {

struct ProblemSpec {
    std::size_t dimension = 0;
    std::vector<IntVector> vectors; ///< ordered multiset
    std::optional<std::string> label;
};

/// Rejected input. Every kind maps to exit code 2 in the CLI.
class input_error : public std::runtime_error {
public:
    enum class Kind { empty, syntax, ragged, zero_vector, rank_deficient, not_pointed };

    input_error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace detail

/// Checks the invariants a ProblemSpec must satisfy before any engine runs.
inline void validate(const ProblemSpec& spec) {
    using K = input_error::Kind;
    if (spec.vectors.empty())
        throw input_error(K::empty, "no vectors given");
    for (std::size_t i = 0; i < spec.vectors.size(); ++i) {
        if (spec.vectors[i].size() != spec.dimension)
            throw input_error(K::ragged, "vector " + std::to_string(i + 1) + " has " +
                                             std::to_string(spec.vectors[i].size()) + " components, expected " +
                                             std::to_string(spec.dimension));
        if (is_zero(spec.vectors[i]))
            throw input_error(K::zero_vector, "vector " + std::to_string(i + 1) + " is zero");
    }
    if (const auto r = rank(spec.vectors); r != spec.dimension)
        throw input_error(K::rank_deficient, "vectors span a " + std::to_string(r) +
                                                 "-dimensional subspace, expected " +
                                                 std::to_string(spec.dimension));
    if (!pointedness_certificate(spec.vectors))
        throw input_error(K::not_pointed,
                          "cone is not pointed: some nonzero nonnegative combination of the vectors vanishes");
}

inline ProblemSpec parse_vectors(std::string_view text) {
    using K = input_error::Kind;
    ProblemSpec spec;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = detail::trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty())
            continue;
        if (line.front() == '#') {
            auto rest = detail::trim(line.substr(1));
            if (!spec.label && rest.starts_with("label:"))
                spec.label = std::string(detail::trim(rest.substr(6)));
            continue;
        }
        IntVector v;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t'))
                ++pos;
            if (pos == line.size())
                break;
            std::size_t end = pos;
            while (end < line.size() && line[end] != ' ' && line[end] != '\t')
                ++end;
            std::string token(line.substr(pos, end - pos));
            std::size_t digits = (token[0] == '-' || token[0] == '+') ? 1 : 0;
            if (digits == token.size() ||
                token.find_first_not_of("0123456789", digits) != std::string::npos)
                throw input_error(K::syntax,
                                  "line " + std::to_string(line_no) + ": '" + token + "' is not an integer");
            v.emplace_back(token[0] == '+' ? token.substr(1) : token);
            pos = end;
        }
        if (spec.vectors.empty())
            spec.dimension = v.size();
        else if (v.size() != spec.dimension)
            throw input_error(K::ragged, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(spec.dimension) + " integers, got " +
                                             std::to_string(v.size()));
        spec.vectors.push_back(std::move(v));
    }
    validate(spec);
    return spec;
}

inline ProblemSpec parse_vectors(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_vectors(std::string_view(text));
}

} // namespace dtp
