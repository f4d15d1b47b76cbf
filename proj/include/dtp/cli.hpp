#pragma once

// Command-line front end. Exit codes: 0 success, 1 internal failure, 2 invalid input or usage, 3 verify mismatch.

#include "dtp/problem.hpp"
#include "dtp/render.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>

namespace dtp {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int invalid_input = 2;
inline constexpr int mismatch = 3;
} // namespace exit_code

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exit status of verify and bench for a finished report.
inline int exit_status(const CountReport& report) { return report.ok() ? exit_code::ok : exit_code::mismatch; }

namespace detail {

inline long long parse_integer(std::string_view tok, const std::string& what) {
    tok = trim(tok);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
        throw usage_error(what + ": '" + std::string(tok) + "' is not an integer");
    return v;
}

// "c1,c2,..."
inline IntVector parse_point(const std::string& text) {
    IntVector v;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        v.emplace_back(parse_integer(rest.substr(0, comma), "--point"));
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    return v;
}

// "lo:hi", applied to every coordinate
inline std::pair<long long, long long> parse_box(const std::string& text) {
    const auto colon = text.find(':', 1);
    if (colon == std::string::npos)
        throw usage_error("--box: expected lo:hi, got '" + text + "'");
    auto lo = parse_integer(std::string_view(text).substr(0, colon), "--box");
    auto hi = parse_integer(std::string_view(text).substr(colon + 1), "--box");
    if (lo > hi)
        throw usage_error("--box: empty range " + text);
    return {lo, hi};
}

inline ProblemSpec load(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-")
        return parse_vectors(in);
    std::ifstream f(path);
    if (!f)
        throw input_error(input_error::Kind::empty, "cannot open " + path);
    return parse_vectors(f);
}

} // namespace detail

/// Runs one command. args excludes the program name.
inline int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete truncated power t_X(alpha): brute force, recursion and toric closed form", "dtp"};
    app.require_subcommand(1);

    std::string input, point, box = "-6:12", engine = "closed", format = "text";
    std::uint64_t seed = ReduceOptions{}.seed;
    std::size_t max_terms = 0;

    const std::map<std::string, Format> formats{
        {"text", Format::text}, {"json", Format::json}, {"latex", Format::latex}};

    auto* count = app.add_subcommand("count", "Evaluate t_X at one point");
    auto* reduce = app.add_subcommand("reduce", "Print the reduced generating function");
    auto* closed = app.add_subcommand("closed-form", "Print the closed form as cone pieces");
    auto* verify = app.add_subcommand("verify", "Cross-check all engines on a box");
    auto* bench = app.add_subcommand("bench", "Time each engine on a box");

    for (auto* sub : {count, reduce, closed, verify, bench}) {
        sub->add_option("input", input, "Vector file, one vector per line (default: stdin)");
        sub->add_option("--max-terms", max_terms, "Abort the reduction past this many terms (0: no limit)");
    }
    count->add_option("--point", point, "Point c1,c2,...")->required();
    count->add_option("--engine", engine, "Counting engine")->check(CLI::IsMember({"brute", "recursion", "closed"}));
    for (auto* sub : {reduce, closed})
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "latex"}));
    for (auto* sub : {verify, bench}) {
        sub->add_option("--box", box, "Per-coordinate range lo:hi");
        sub->add_option("--seed", seed, "Seed for the generic-point identity check");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    }

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code::invalid_input;
    }

    try {
        const ProblemSpec spec = detail::load(input, in);
        const auto& X = spec.vectors;
        ReduceOptions opts;
        opts.max_terms = max_terms;
        opts.seed = seed;

        if (*count) {
            IntVector alpha = detail::parse_point(point);
            if (alpha.size() != spec.dimension)
                throw usage_error("--point has " + std::to_string(alpha.size()) + " coordinates, vectors have " +
                                  std::to_string(spec.dimension));
            if (engine == "brute")
                out << brute_force_count(X, alpha, *pointedness_certificate(X)) << '\n';
            else if (engine == "recursion")
                out << dm_count(X, alpha) << '\n';
            else
                out << to_string(eval_closed(closed_form(X, opts), alpha)) << '\n';
            return exit_code::ok;
        }
        if (*reduce) {
            out << render(toric_reduce(X, opts), formats.at(format));
            return exit_code::ok;
        }
        if (*closed) {
            out << render(closed_form(X, opts), formats.at(format));
            return exit_code::ok;
        }
        const auto [lo, hi] = detail::parse_box(box);
        const CountReport report = cross_check(X, uniform_box_corner(spec.dimension, lo),
                                               uniform_box_corner(spec.dimension, hi), seed, opts);
        if (*bench)
            out << (format == "json" ? render(report, Format::json) : bench_table(report));
        else
            out << render(report, formats.at(format));
        return exit_status(report);
    } catch (const input_error& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_code::invalid_input;
    } catch (const usage_error& e) {
        err << "usage: " << e.what() << '\n';
        return exit_code::invalid_input;
    } catch (const reduction_too_large& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_code::failure;
    }
}

inline int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv + 1, argv + argc), in, out, err);
}

} // namespace dtp
