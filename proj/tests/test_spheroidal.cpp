#include "heunrad/heun.hpp"
#include "heunrad/spheroidal.hpp"
#include "heunrad/verify.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

using namespace heunrad;
using heun::cplx;
using heun::Params;

namespace {

/// Classical RK4 on the spheroidal form for (U, U'), fixed step.
std::array<cplx, 2> integrate_spheroidal(const heun::SpheroidalForm& s, double z0, std::array<cplx, 2> y,
                                         double z1, int steps)
{
    const auto f = [&s](double z, const std::array<cplx, 2>& v) {
        const cplx pot = s.B3 - 2.0 * s.etaS * s.omegaS * (z - 1.0) + s.omegaS * s.omegaS * z * (z - 1.0);
        const cplx d2 = -((s.B1 + s.B2 * z) * v[1] + pot * v[0]) / (z * (z - 1.0));
        return std::array<cplx, 2>{v[1], d2};
    };
    const double h = (z1 - z0) / steps;
    double z = z0;
    for (int i = 0; i < steps; ++i) {
        const auto k1 = f(z, y);
        const auto k2 = f(z + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
        const auto k3 = f(z + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
        const auto k4 = f(z + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
        y[0] += h / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        z += h;
    }
    return y;
}

} // namespace

TEST(Spheroidal, DualFormIntegrationMatchesHeun)
{
    const cplx i{0.0, 1.0};
    for (const auto& p : verify::random_heun_params(20, 5.0, 0.1, 21)) {
        const auto s = heun::to_spheroidal(p);
        for (const double z : {-0.8, -0.3, 0.45, 0.7}) {
            // start on the same side of the regular singular point z = 0
            const double z0 = z < 0.0 ? -0.1 : 0.1;
            const auto h0 = heun::eval(p, z0, 1e-13);
            const cplx e0 = std::exp(-i * s.omegaS * z0);
            const std::array<cplx, 2> u0{e0 * h0.value, e0 * (h0.derivative - i * s.omegaS * h0.value)};
            const int steps = static_cast<int>(std::abs(z - z0) / 2e-4);
            const auto u = integrate_spheroidal(s, z0, u0, z, steps);
            const cplx h = std::exp(i * s.omegaS * z) * u[0];
            const cplx ref = heun::eval(p, z, 1e-12).value;
            EXPECT_LT(std::abs(h - ref), 1e-8 * std::abs(ref)) << "z=" << z;
        }
    }
}

TEST(Spheroidal, RoundTrip)
{
    for (const auto& p : verify::random_heun_params(50, 5.0, 0.1, 22)) {
        const Params back = heun::from_spheroidal(heun::to_spheroidal(p));
        EXPECT_LT(std::abs(back.alpha - p.alpha), 1e-13 * std::max(1.0, std::abs(p.alpha)));
        EXPECT_LT(std::abs(back.beta - p.beta), 1e-13 * std::max(1.0, std::abs(p.beta)));
        EXPECT_LT(std::abs(back.gamma - p.gamma), 1e-13 * std::max(1.0, std::abs(p.gamma)));
        EXPECT_LT(std::abs(back.delta - p.delta), 1e-13 * std::max(1.0, std::abs(p.delta)));
        EXPECT_LT(std::abs(back.eta - p.eta), 1e-13 * std::max(1.0, std::abs(p.eta)));
    }
}

TEST(Spheroidal, OmegaNonzeroAndNotIrregular)
{
    for (const auto& p : verify::random_heun_params(20, 5.0, 0.1, 23)) {
        EXPECT_NE(heun::to_spheroidal(p).omegaS, cplx{});
    }
    Params p{};
    p.beta = 0.3;
    try {
        (void)heun::to_spheroidal(p);
        FAIL() << "expected NotIrregular";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotIrregular);
    }
}

TEST(Thome, BranchSymmetry)
{
    for (const auto& p : verify::random_heun_params(20, 5.0, 0.1, 24)) {
        const auto s = heun::to_spheroidal(p);
        const auto plus = heun::thome_leading(s, heun::ThomeBranch::Plus);
        const auto minus = heun::thome_leading(s, heun::ThomeBranch::Minus);
        EXPECT_LT(std::abs(plus.exp_rate + minus.exp_rate), 1e-15 * std::abs(plus.exp_rate) + 1e-300);
        EXPECT_LT(std::abs(plus.power + minus.power + s.B2), 1e-13 * (std::abs(s.B2) + 1.0));
    }
}

TEST(Thome, DominantBranchLeadingTerm)
{
    // For real alpha > 0 and z -> -infinity the Plus branch, H ~ exp(-alpha z),
    // dominates every solution exponentially.
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> ua(1.0, 2.0);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    const cplx i{0.0, 1.0};
    for (int n = 0; n < 5; ++n) {
        Params p{ua(rng), {uc(rng), uc(rng)}, {uc(rng), uc(rng)}, {uc(rng), uc(rng)}, {uc(rng), uc(rng)}};
        const auto s = heun::to_spheroidal(p);
        const auto lead = heun::thome_leading(s, heun::ThomeBranch::Plus);
        const auto ratio = [&](double z) {
            // a 100-unit continuation accumulates more than the per-step
            // tolerance, so bound the reported estimate directly
            const auto r = heun::eval_by_continuation(p, z, 1e-10, heun::continuation_start(p, -1.0));
            EXPECT_LT(r.err_estimate, 1e-6 * std::abs(r.value));
            const cplx h = r.value;
            const cplx u = std::exp(-i * s.omegaS * z) * h;
            return u / (std::exp(lead.exp_rate * z) * std::pow(cplx{-z, 0.0}, lead.power));
        };
        const cplx ref = ratio(-100.0);
        for (double z = -100.0; z <= -50.0; z += 5.0) {
            EXPECT_LT(std::abs(ratio(z) - ref), 0.05 * std::abs(ref)) << "set " << n << " z=" << z;
        }
    }
}
