#include "heunrad/run_config.hpp"
#include "heunrad/verify.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <string>
#include <vector>

using namespace heunrad;

namespace {

template <class F>
Error error_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error thrown";
    return Error(ErrorCode::IoError, "none");
}

} // namespace

TEST(Config, ParsesKeysCommentsAndBlankLines)
{
    RunConfig cfg = fig2_preset();
    apply_config_text(cfg, "# comment\n\nM = 4.5\nrange = 1:20  # trailing\nbranch = second\nformat=svg\nsamples=64\n");
    EXPECT_DOUBLE_EQ(cfg.M, 4.5);
    EXPECT_DOUBLE_EQ(cfg.lo, 1.0);
    EXPECT_DOUBLE_EQ(cfg.hi, 20.0);
    EXPECT_EQ(cfg.branch, BranchChoice::Second);
    EXPECT_EQ(cfg.format, OutputFormat::SVG);
    EXPECT_EQ(cfg.samples, 64);
}

TEST(Config, ErrorsCarryLineNumbers)
{
    RunConfig cfg;
    auto e = error_of([&] { apply_config_text(cfg, "M = 5\nbogus = 1\n"); });
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);

    e = error_of([&] { apply_config_text(cfg, "M = 5\n\nM five\n"); });
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);

    e = error_of([&] { apply_config_text(cfg, "samples = 1.5\n"); });
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    e = error_of([&] { apply_config_text(cfg, "range = 3\n"); });
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);

    RunConfig kg;
    kg.problem = Problem::KG;
    EXPECT_EQ(error_of([&] { apply_setting(kg, "expansion", "origin"); }).code(), ErrorCode::ConfigError);
}

TEST(Config, LaterSettingsOverrideEarlierOnes)
{
    // preset, then file, then flags
    RunConfig cfg = fig1_preset();
    apply_config_text(cfg, "samples = 100\ntol = 1e-8\n");
    apply_setting(cfg, "samples", "200");
    EXPECT_EQ(cfg.samples, 200);
    EXPECT_DOUBLE_EQ(cfg.tol, 1e-8);
    EXPECT_EQ(cfg.problem, Problem::DiracOrigin);
}

TEST(Config, Validation)
{
    RunConfig cfg = fig2_preset();
    cfg.lo = 5.0;
    cfg.hi = 1.0;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::InvalidParameter);

    cfg = fig2_preset();
    cfg.samples = 1;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::InvalidParameter);

    cfg = fig2_preset();
    cfg.tol = 0.0;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::InvalidParameter);

    cfg = fig1_preset();
    cfg.hi = 12.0;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::OutOfDomain);

    cfg = fig2_preset();
    cfg.lo = 0.0;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::OutOfDomain);

    cfg = fig2_preset();
    cfg.M = -1.0;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::InvalidParameter);

    cfg = fig2_preset();
    cfg.problem = Problem::KG;
    cfg.l = 2;
    cfg.n = 3;
    EXPECT_EQ(error_of([&] { cfg.validate(); }).code(), ErrorCode::InvalidParameter);
    cfg.n = 1;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_DOUBLE_EQ(cfg.kg_lambda(), 6.0);
}

TEST(Sampling, PresetsAndEndpoints)
{
    const RunConfig f1 = fig1_preset();
    EXPECT_EQ(f1.problem, Problem::DiracOrigin);
    EXPECT_NO_THROW(f1.validate());
    EXPECT_EQ(sample_point(f1, 0), f1.lo);
    EXPECT_EQ(sample_point(f1, f1.samples - 1), f1.hi);
    EXPECT_EQ(fig2_preset().problem, Problem::DiracHorizon);
}

TEST(Sampling, IndependentOfThreadCount)
{
    RunConfig cfg = fig2_preset();
    cfg.samples = 97;
    cfg.threads = 1;
    const std::string one = to_csv(sample_curve(cfg));
    cfg.threads = 5;
    EXPECT_EQ(to_csv(sample_curve(cfg)), one);
}

TEST(Sampling, ReportsLowestFailingIndex)
{
    RunConfig cfg = fig2_preset();
    cfg.samples = 40;
    cfg.tol = 1e-15;
    cfg.threads = 4;
    // serial oracle for the first failing point
    const auto fn = make_solution(cfg);
    int first = -1;
    for (int j = 0; j < cfg.samples && first < 0; ++j) {
        try {
            (void)fn(sample_point(cfg, j));
        } catch (const Error&) {
            first = j;
        }
    }
    ASSERT_GE(first, 0);
    const Error e = error_of([&] { (void)sample_curve(cfg); });
    EXPECT_TRUE(std::regex_search(std::string(e.what()), std::regex("^sample " + std::to_string(first) + " at ")))
        << e.what();
}

TEST(Sampling, FarFieldShapes)
{
    RunConfig cfg = fig2_preset();
    cfg.lo = 20.0;
    cfg.hi = 50.0;
    cfg.samples = 121;
    const auto reg = sample_curve(cfg);
    std::vector<double> mods;
    for (const auto& r : reg.rows) {
        mods.push_back(r.abs);
    }
    EXPECT_LT(verify::coefficient_of_variation(mods), 1e-3);

    cfg.branch = BranchChoice::Second;
    const auto sec = sample_curve(cfg);
    for (std::size_t i = 1; i < sec.rows.size(); ++i) {
        EXPECT_LT(sec.rows[i].abs, sec.rows[i - 1].abs) << sec.rows[i].coordinate;
    }
}

TEST(Sampling, KGProblem)
{
    RunConfig cfg;
    cfg.problem = Problem::KG;
    cfg.l = 1;
    cfg.lo = 0.5;
    cfg.hi = 10.0;
    cfg.samples = 20;
    const auto c = sample_curve(cfg);
    EXPECT_EQ(c.coordinate_name, "u");
    EXPECT_EQ(c.rows.size(), 20u);
    EXPECT_LE(c.max_err_estimate, 1e-8);
}
