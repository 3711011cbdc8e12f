#ifndef HEUNRAD_RUN_CONFIG_HPP
#define HEUNRAD_RUN_CONFIG_HPP

// Run configuration for sampling a closed-form solution, `key = value`
// parsing, and the parallel sampler.

#include "curve.hpp"
#include "dirac.hpp"
#include "error.hpp"
#include "kg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace heunrad {

enum class Problem { DiracOrigin, DiracHorizon, KG };
enum class BranchChoice { Regular, Second };

struct RunConfig {
    Problem problem = Problem::DiracHorizon;
    BranchChoice branch = BranchChoice::Regular;
    // Dirac
    double M = 5.0;
    double p = 10.0;
    double a = 0.1;
    double k = 0.2;
    double lambda = 0.7;
    // KG
    double omega = 0.3;
    std::optional<int> l;
    int n = 0;

    double lo = 0.1;
    double hi = 50.0;
    int samples = 800;
    double tol = 1e-10;
    unsigned threads = 0; ///< 0 = hardware concurrency
    std::string out;
    std::optional<OutputFormat> format;

    /// Separation constant of the KG problem: l(l+1) when l is set.
    [[nodiscard]] double kg_lambda() const
    {
        return l ? static_cast<double>(*l) * (*l + 1) : lambda;
    }

    void validate() const;
    [[nodiscard]] std::string describe() const;
};

/// fig1: the regular origin solution inside the horizon.
[[nodiscard]] inline RunConfig fig1_preset()
{
    RunConfig cfg;
    cfg.problem = Problem::DiracOrigin;
    cfg.lo = 0.1;
    cfg.hi = 9.9;
    cfg.out = "fig1";
    return cfg;
}

/// fig2: the regular horizon solution outside r = 2M.
[[nodiscard]] inline RunConfig fig2_preset()
{
    RunConfig cfg;
    cfg.problem = Problem::DiracHorizon;
    cfg.lo = 0.1;
    cfg.hi = 50.0;
    cfg.out = "fig2";
    return cfg;
}

inline const char* to_string(Problem p) noexcept
{
    switch (p) {
    case Problem::DiracOrigin: return "dirac-origin";
    case Problem::DiracHorizon: return "dirac-horizon";
    case Problem::KG: return "kg";
    }
    return "?";
}

inline const char* to_string(BranchChoice b) noexcept
{
    return b == BranchChoice::Regular ? "regular" : "second";
}

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty()) {
        throw Error(ErrorCode::ConfigError, key + ": expected a number, got '" + value + "'");
    }
    return v;
}

inline int parse_int(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty()) {
        throw Error(ErrorCode::ConfigError, key + ": expected an integer, got '" + value + "'");
    }
    return v;
}

} // namespace detail

/// Applies one setting. Keys are the CLI flag names without dashes.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw)
{
    const std::string value = detail::trim(raw);
    if (key == "M") {
        cfg.M = detail::parse_double(key, value);
    } else if (key == "p") {
        cfg.p = detail::parse_double(key, value);
    } else if (key == "a") {
        cfg.a = detail::parse_double(key, value);
    } else if (key == "k") {
        cfg.k = detail::parse_double(key, value);
    } else if (key == "lambda") {
        cfg.lambda = detail::parse_double(key, value);
    } else if (key == "omega") {
        cfg.omega = detail::parse_double(key, value);
    } else if (key == "l") {
        cfg.l = detail::parse_int(key, value);
    } else if (key == "n") {
        cfg.n = detail::parse_int(key, value);
    } else if (key == "range") {
        const auto colon = value.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::ConfigError, "range: expected LO:HI, got '" + value + "'");
        }
        cfg.lo = detail::parse_double(key, detail::trim(value.substr(0, colon)));
        cfg.hi = detail::parse_double(key, detail::trim(value.substr(colon + 1)));
    } else if (key == "samples") {
        cfg.samples = detail::parse_int(key, value);
    } else if (key == "tol") {
        cfg.tol = detail::parse_double(key, value);
    } else if (key == "threads") {
        const int t = detail::parse_int(key, value);
        if (t < 0) {
            throw Error(ErrorCode::ConfigError, "threads must be >= 0");
        }
        cfg.threads = static_cast<unsigned>(t);
    } else if (key == "branch") {
        if (value == "regular") {
            cfg.branch = BranchChoice::Regular;
        } else if (value == "second") {
            cfg.branch = BranchChoice::Second;
        } else {
            throw Error(ErrorCode::ConfigError, "branch must be regular or second");
        }
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "format") {
        if (value == "csv") {
            cfg.format = OutputFormat::CSV;
        } else if (value == "svg") {
            cfg.format = OutputFormat::SVG;
        } else {
            throw Error(ErrorCode::ConfigError, "format must be csv or svg");
        }
    } else if (key == "expansion") {
        if (cfg.problem == Problem::KG) {
            throw Error(ErrorCode::ConfigError, "expansion applies to the Dirac problem only");
        }
        if (value == "origin") {
            cfg.problem = Problem::DiracOrigin;
        } else if (value == "horizon") {
            cfg.problem = Problem::DiracHorizon;
        } else {
            throw Error(ErrorCode::ConfigError, "expansion must be origin or horizon");
        }
    } else if (key == "problem") {
        if (value == "dirac-origin") {
            cfg.problem = Problem::DiracOrigin;
        } else if (value == "dirac-horizon") {
            cfg.problem = Problem::DiracHorizon;
        } else if (value == "kg") {
            cfg.problem = Problem::KG;
        } else {
            throw Error(ErrorCode::ConfigError, "problem must be dirac-origin, dirac-horizon or kg");
        }
    } else {
        throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
    }
}

struct ConfigEntry {
    int line = 0;
    std::string key;
    std::string value;
};

/// `key = value` lines; blank lines and `#` comments are ignored.
[[nodiscard]] inline std::vector<ConfigEntry> parse_config_text(const std::string& text)
{
    std::vector<ConfigEntry> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError, fmt::format("line {}: expected key = value", lineno));
        }
        out.push_back({lineno, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1))});
    }
    return out;
}

[[nodiscard]] inline std::string read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void apply_config_entry(RunConfig& cfg, const ConfigEntry& e)
{
    try {
        apply_setting(cfg, e.key, e.value);
    } catch (const Error& err) {
        throw Error(ErrorCode::ConfigError, fmt::format("line {}: {}", e.line, err.what()));
    }
}

inline void apply_config_text(RunConfig& cfg, const std::string& text)
{
    for (const auto& e : parse_config_text(text)) {
        apply_config_entry(cfg, e);
    }
}

inline void RunConfig::validate() const
{
    const auto fail = [](const std::string& what) {
        throw Error(ErrorCode::InvalidParameter, what);
    };
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        fail("range requires LO < HI");
    }
    if (samples < 2) {
        fail("samples must be at least 2");
    }
    if (!(tol > 0.0)) {
        fail("tol must be positive");
    }
    if (problem == Problem::KG) {
        const KGBackground bg(M, a);
        if (l) {
            (void)KGMode::legendre(omega, *l, n);
        }
        if (!(lo > 0.0)) {
            throw Error(ErrorCode::OutOfDomain, "KG range must lie in u > 0");
        }
        return;
    }
    const DiracBackground bg(M, p, a);
    if (!std::isfinite(k) || !std::isfinite(lambda)) {
        fail("k and lambda must be finite");
    }
    if (problem == Problem::DiracOrigin) {
        if (!(lo > 0.0 && hi < 2.0 * M)) {
            throw Error(ErrorCode::OutOfDomain, "origin range must lie inside (0, 2M)");
        }
    } else if (!(lo > 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "horizon range must lie in u > 0");
    }
}

inline std::string RunConfig::describe() const
{
    std::string s = fmt::format("problem={} branch={} M={}", to_string(problem), to_string(branch), M);
    if (problem == Problem::KG) {
        s += fmt::format(" a={} omega={} n={} lambda={}", a, omega, n, kg_lambda());
        if (l) {
            s += fmt::format(" l={}", *l);
        }
    } else {
        s += fmt::format(" p={} a={} k={} lambda={}", p, a, k, lambda);
    }
    s += fmt::format(" range={}:{} samples={} tol={}", lo, hi, samples, tol);
    return s;
}

/// Evaluation point j of `samples` uniformly spaced points; the last one is
/// exactly `hi`.
[[nodiscard]] inline double sample_point(const RunConfig& cfg, int j) noexcept
{
    if (j == cfg.samples - 1) {
        return cfg.hi;
    }
    return cfg.lo + (cfg.hi - cfg.lo) * static_cast<double>(j) / (cfg.samples - 1);
}

/// The configured closed-form solution as a function of the sampling
/// coordinate (r for the origin problem, u otherwise).
[[nodiscard]] inline dirac::SolutionFn make_solution(const RunConfig& cfg)
{
    const double tol = cfg.tol;
    if (cfg.problem == Problem::KG) {
        const KGBackground bg(cfg.M, cfg.a);
        const KGMode mode{cfg.omega, cfg.n, cfg.kg_lambda()};
        const kg::KGClosedSpec spec = kg::kg_closed_spec(
            bg, mode, cfg.branch == BranchChoice::Regular ? kg::Branch::Regular : kg::Branch::Second);
        return [bg, mode, spec, tol](double u) { return kg::kg_closed_solution(bg, mode, spec, u, tol); };
    }
    const DiracBackground bg(cfg.M, cfg.p, cfg.a);
    const DiracMode mode{cfg.k, cfg.lambda};
    const auto at = cfg.problem == Problem::DiracOrigin ? dirac::ExpansionPoint::Origin
                                                        : dirac::ExpansionPoint::Horizon;
    const auto branch =
        cfg.branch == BranchChoice::Regular ? dirac::Branch::Regular : dirac::Branch::Second;
    const dirac::ClosedSolutionSpec spec = dirac::closed_solution_spec(bg, mode, at, branch);
    return [bg, mode, spec, tol](double x) { return dirac::closed_solution(bg, mode, spec, x, tol); };
}

/// Samples the configured solution. Points are split into contiguous blocks
/// across threads; each point is a pure evaluation, so the output does not
/// depend on the thread count. The first failing point (lowest index) aborts.
[[nodiscard]] inline SampledCurve sample_curve(const RunConfig& cfg)
{
    cfg.validate();
    const dirac::SolutionFn solution = make_solution(cfg);
    const auto n = static_cast<std::size_t>(cfg.samples);

    std::vector<CurveRow> rows(n);
    std::vector<double> errs(n, 0.0);
    std::vector<std::exception_ptr> failures(n);

    unsigned workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::clamp(workers, 1u, static_cast<unsigned>(n));
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const double x = sample_point(cfg, static_cast<int>(j));
            try {
                const heun::EvalResult r = solution(x);
                rows[j] = {x, r.value.real(), r.value.imag(), std::abs(r.value)};
                errs[j] = r.err_estimate;
            } catch (...) {
                failures[j] = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        if (!failures[j]) {
            continue;
        }
        const double x = sample_point(cfg, static_cast<int>(j));
        try {
            std::rethrow_exception(failures[j]);
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("sample {} at {:.17g}: {}", j, x, e.what()));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::DidNotConverge, fmt::format("sample {} at {:.17g}: {}", j, x, e.what()));
        }
    }

    SampledCurve curve;
    curve.coordinate_name = cfg.problem == Problem::DiracOrigin ? "r" : "u";
    curve.title = cfg.describe();
    curve.rows = std::move(rows);
    curve.max_err_estimate = *std::max_element(errs.begin(), errs.end());
    return curve;
}

} // namespace heunrad

#endif
