#include "heunrad/dop853.hpp"
#include "heunrad/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using heunrad::ode::ComplexState;
using heunrad::ode::Dop853Options;
using cplx = std::complex<double>;

TEST(Dop853, ComplexExponential)
{
    const auto rhs = [](double, const ComplexState<1>& y) { return ComplexState<1>{cplx{0.0, 1.0} * y[0]}; };
    Dop853Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-16;
    const auto y = heunrad::ode::integrate<1>(rhs, 0.0, {cplx{1.0, 0.0}}, 20.0, opt);
    EXPECT_NEAR(std::abs(y[0] - std::polar(1.0, 20.0)), 0.0, 1e-10);
}

TEST(Dop853, BackwardIntegration)
{
    const auto rhs = [](double x, const ComplexState<1>& y) { return ComplexState<1>{-2.0 * x * y[0]}; };
    Dop853Options opt;
    opt.rtol = 1e-12;
    const auto y = heunrad::ode::integrate<1>(rhs, 1.0, {cplx{std::exp(-1.0), 0.0}}, -1.5, opt);
    EXPECT_NEAR(y[0].real(), std::exp(-2.25), 1e-12);
}

TEST(Dop853, HarmonicOscillatorAdvancesInStages)
{
    const auto rhs = [](double, const ComplexState<2>& y) { return ComplexState<2>{y[1], -y[0]}; };
    Dop853Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-15;
    heunrad::ode::Dop853<2, decltype(rhs)> stepper(rhs, 0.0, {cplx{1.0, 0.0}, cplx{}}, opt);
    for (double x = 1.0; x <= 10.0; x += 1.0) {
        const auto& y = stepper.advance_to(x);
        EXPECT_NEAR(y[0].real(), std::cos(x), 1e-10);
        EXPECT_NEAR(y[1].real(), -std::sin(x), 1e-10);
    }
}

TEST(Dop853, EighthOrderConvergence)
{
    const auto rhs = [](double, const ComplexState<1>& y) { return ComplexState<1>{cplx{0.0, 3.0} * y[0]}; };
    heunrad::ode::Dop853Stats loose;
    heunrad::ode::Dop853Stats tight;
    Dop853Options a;
    a.rtol = 1e-6;
    Dop853Options b;
    b.rtol = 1e-10;
    (void)heunrad::ode::integrate<1>(rhs, 0.0, {cplx{1.0, 0.0}}, 10.0, a, &loose);
    (void)heunrad::ode::integrate<1>(rhs, 0.0, {cplx{1.0, 0.0}}, 10.0, b, &tight);
    // 1e4 in tolerance costs about 1e4^(1/8) ~ 3.2x the steps
    const double ratio = static_cast<double>(tight.accepted) / static_cast<double>(loose.accepted);
    EXPECT_GT(ratio, 2.0);
    EXPECT_LT(ratio, 5.0);
}

TEST(Dop853, StepBudgetExhaustion)
{
    const auto rhs = [](double, const ComplexState<1>& y) { return ComplexState<1>{cplx{0.0, 100.0} * y[0]}; };
    Dop853Options opt;
    opt.max_steps = 10;
    try {
        (void)heunrad::ode::integrate<1>(rhs, 0.0, {cplx{1.0, 0.0}}, 100.0, opt);
        FAIL() << "expected DidNotConverge";
    } catch (const heunrad::Error& e) {
        EXPECT_EQ(e.code(), heunrad::ErrorCode::DidNotConverge);
    }
}
