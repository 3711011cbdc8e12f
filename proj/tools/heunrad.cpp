// heunrad: sample the closed-form radial solutions, write CSV/SVG, and run
// the verification suites.

#include "heunrad/curve.hpp"
#include "heunrad/error.hpp"
#include "heunrad/run_config.hpp"
#include "heunrad/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace heunrad;

enum class Command { Fig1, Fig2, Dirac, KG };

struct Flags {
    std::optional<std::string> config;
    // Applied in this order after the config file, so flags win.
    std::deque<std::pair<std::string, std::optional<std::string>>> settings;

    std::optional<std::string>& slot(const std::string& key)
    {
        settings.emplace_back(key, std::nullopt);
        return settings.back().second;
    }
};

void add_sampling_flags(CLI::App* cmd, Flags& flags, Command which)
{
    cmd->add_option("--config", flags.config, "key = value file; flags override its values");
    const bool dirac = which != Command::KG;
    if (dirac) {
        cmd->add_option("--M", flags.slot("M"), "mass parameter M");
        cmd->add_option("--p", flags.slot("p"), "background parameter p");
        cmd->add_option("--a", flags.slot("a"), "background parameter a in [0, 1]");
        cmd->add_option("--k", flags.slot("k"), "mode parameter k");
        cmd->add_option("--lambda", flags.slot("lambda"), "separation constant");
    } else {
        cmd->add_option("--M", flags.slot("M"), "mass parameter M");
        cmd->add_option("--a", flags.slot("a"), "external field parameter a in (0, 1]");
        cmd->add_option("--omega", flags.slot("omega"), "frequency");
        cmd->add_option("--l", flags.slot("l"), "Legendre degree; sets lambda = l(l+1)");
        cmd->add_option("--n", flags.slot("n"), "azimuthal number, |n| <= l");
        cmd->add_option("--lambda", flags.slot("lambda"), "separation constant when --l is absent");
    }
    if (which == Command::Dirac) {
        cmd->add_option("--expansion", flags.slot("expansion"), "origin (0 < r < 2M) or horizon (u = r - 2M > 0)");
    }
    cmd->add_option("--range", flags.slot("range"), "sampling range LO:HI");
    cmd->add_option("--samples", flags.slot("samples"), "number of sample points (default 800)");
    cmd->add_option("--tol", flags.slot("tol"), "evaluation tolerance (default 1e-10)");
    cmd->add_option("--branch", flags.slot("branch"), "regular or second");
    cmd->add_option("--threads", flags.slot("threads"), "worker threads, 0 = all cores");
    cmd->add_option("--out", flags.slot("out"), "output path (figure presets: base name)");
    cmd->add_option("--format", flags.slot("format"), "csv or svg");
}

RunConfig resolve(Command which, const Flags& flags)
{
    RunConfig cfg;
    switch (which) {
    case Command::Fig1: cfg = fig1_preset(); break;
    case Command::Fig2: cfg = fig2_preset(); break;
    case Command::Dirac: cfg.problem = Problem::DiracHorizon; break;
    case Command::KG: cfg.problem = Problem::KG; break;
    }
    bool range_given = false;
    if (flags.config) {
        for (const auto& e : parse_config_text(read_config_file(*flags.config))) {
            apply_config_entry(cfg, e);
            range_given = range_given || e.key == "range";
        }
    }
    for (const auto& [key, value] : flags.settings) {
        if (value) {
            apply_setting(cfg, key, *value);
            range_given = range_given || key == "range";
        }
    }
    if (!range_given && which == Command::Dirac && cfg.problem == Problem::DiracOrigin) {
        cfg.lo = 0.1;
        cfg.hi = 2.0 * cfg.M - 0.1;
    }
    cfg.validate();
    return cfg;
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void report(const RunConfig& cfg, const SampledCurve& curve)
{
    fmt::print(stderr, "# {}\n", cfg.describe());
    fmt::print(stderr, "# max err_estimate = {:.3e}\n", curve.max_err_estimate);
}

int run_sampling(Command which, const Flags& flags)
{
    const RunConfig cfg = resolve(which, flags);
    const SampledCurve curve = sample_curve(cfg);
    report(cfg, curve);

    const bool preset = which == Command::Fig1 || which == Command::Fig2;
    if (preset && !cfg.format) {
        std::string base = cfg.out;
        for (const char* ext : {".csv", ".svg"}) {
            if (ends_with(base, ext)) {
                base.resize(base.size() - 4);
            }
        }
        emit(curve, OutputFormat::CSV, base + ".csv");
        emit(curve, OutputFormat::SVG, base + ".svg");
        fmt::print(stderr, "# wrote {}.csv and {}.svg\n", base, base);
        return 0;
    }
    OutputFormat format = OutputFormat::CSV;
    if (cfg.format) {
        format = *cfg.format;
    } else if (ends_with(cfg.out, ".svg")) {
        format = OutputFormat::SVG;
    }
    if (cfg.out.empty()) {
        const std::string body = format == OutputFormat::CSV ? to_csv(curve) : to_svg(curve);
        std::fwrite(body.data(), 1, body.size(), stdout);
        return 0;
    }
    emit(curve, format, cfg.out);
    fmt::print(stderr, "# wrote {}\n", cfg.out);
    return 0;
}

int run_verify(const std::vector<int>& only)
{
    using Suite = verify::CheckResult (*)();
    const std::map<int, Suite> suites = {
        {1, verify::heun_residual_suite}, {2, verify::dirac_closed_form_suite},
        {3, verify::oracle_equivalence},  {4, verify::identity_suite},
        {5, verify::asymptotics_suite},   {6, verify::kg_suite},
        {7, verify::angular_suite},       {8, verify::figures_suite},
    };
    bool all = true;
    for (const auto& [id, suite] : suites) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        const verify::CheckResult r = suite();
        all = all && r.passed;
        fmt::print("{}", verify::format_result(r));
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}

int fail(std::string_view code, const std::string& message)
{
    std::string one_line = message;
    std::replace(one_line.begin(), one_line.end(), '\n', ' ');
    fmt::print(stderr, "ERROR {}: {}\n", code, one_line);
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Closed-form confluent Heun radial solutions: sampling, plots, verification"};
    app.require_subcommand(1);

    Flags fig1_flags;
    Flags fig2_flags;
    Flags dirac_flags;
    Flags kg_flags;
    CLI::App* fig1 = app.add_subcommand("fig1", "Dirac origin solution with the figure parameters, 0 < r < 2M");
    CLI::App* fig2 = app.add_subcommand("fig2", "Dirac horizon solution with the figure parameters, u > 0");
    CLI::App* dirac = app.add_subcommand("dirac", "any Dirac closed-form solution");
    CLI::App* kg = app.add_subcommand("kg", "any Klein-Gordon closed-form solution");
    add_sampling_flags(fig1, fig1_flags, Command::Fig1);
    add_sampling_flags(fig2, fig2_flags, Command::Fig2);
    add_sampling_flags(dirac, dirac_flags, Command::Dirac);
    add_sampling_flags(kg, kg_flags, Command::KG);

    std::vector<int> only;
    CLI::App* ver = app.add_subcommand("verify", "run the property suites and print pass/fail per criterion");
    ver->add_option("--only", only, "criterion numbers to run (default: all)")->check(CLI::Range(1, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(to_string(ErrorCode::ConfigError), e.what());
    }

    try {
        if (fig1->parsed()) {
            return run_sampling(Command::Fig1, fig1_flags);
        }
        if (fig2->parsed()) {
            return run_sampling(Command::Fig2, fig2_flags);
        }
        if (dirac->parsed()) {
            return run_sampling(Command::Dirac, dirac_flags);
        }
        if (kg->parsed()) {
            return run_sampling(Command::KG, kg_flags);
        }
        return run_verify(only);
    } catch (const Error& e) {
        return fail(to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail("InternalError", e.what());
    }
}
