#include "heunrad/angular.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace heunrad;
using angular::AngularMode;

namespace {

template <class F>
ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoError;
}

} // namespace

TEST(Legendre, Examples)
{
    EXPECT_NEAR(angular::assoc_legendre(1, 0, 0.3), 0.3, 1e-15);
    EXPECT_NEAR(angular::assoc_legendre(2, 0, 0.5), -0.125, 1e-15);
    // Condon-Shortley phase
    EXPECT_NEAR(angular::assoc_legendre(1, 1, 0.0), -1.0, 1e-15);
    EXPECT_NEAR(angular::assoc_legendre(2, 1, 0.5), -3.0 * 0.5 * std::sqrt(0.75), 1e-14);
    EXPECT_NEAR(angular::assoc_legendre(3, 3, 0.2), -15.0 * std::pow(0.96, 1.5), 1e-12);
}

TEST(Legendre, DerivativeMatchesDifference)
{
    for (int l = 0; l <= 8; ++l) {
        for (int n = -l; n <= l; ++n) {
            for (const double x : {-0.7, 0.1, 0.55}) {
                const double h = 1e-5;
                const double fd = (angular::assoc_legendre(l, n, x + h) - angular::assoc_legendre(l, n, x - h)) / (2 * h);
                const double d = angular::assoc_legendre_with_derivative(l, n, x).derivative;
                EXPECT_NEAR(d, fd, 1e-6 * std::max(1.0, std::abs(d))) << l << " " << n << " " << x;
            }
        }
    }
}

TEST(Angular, Residuals)
{
    EXPECT_LT(angular::angular_residual(AngularMode{1, 0}, std::numbers::pi / 3.0, 1e-4), 1e-10);
    for (const double theta : {0.5, 1.0, 2.0}) {
        EXPECT_LT(angular::angular_residual(AngularMode{5, 3}, theta, 1e-4), 1e-8);
        const double lam = AngularMode{5, 3}.lambda();
        EXPECT_GT(angular::angular_residual(5, 3, lam + 0.1, theta, 1e-4), 1e-3) << theta;
    }
    for (int l = 0; l <= 10; ++l) {
        for (int n = -l; n <= l; ++n) {
            for (const double theta : {0.3, 1.1, 2.6}) {
                EXPECT_LT(angular::angular_residual(AngularMode{l, n}, theta, 1e-4), 1e-8) << l << " " << n;
            }
        }
    }
}

TEST(Angular, Parity)
{
    for (int l = 0; l <= 7; ++l) {
        for (int n = -l; n <= l; ++n) {
            const double sign = ((l + n) % 2 == 0) ? 1.0 : -1.0;
            for (const double x : {0.2, 0.6, 0.9}) {
                EXPECT_NEAR(angular::assoc_legendre(l, n, -x), sign * angular::assoc_legendre(l, n, x),
                            1e-12 * std::max(1.0, std::abs(angular::assoc_legendre(l, n, x))));
            }
        }
    }
}

TEST(Angular, Orthogonality)
{
    // Simpson on [-1, 1] with 2001 points
    const int pts = 2001;
    const double h = 2.0 / (pts - 1);
    const auto inner = [&](int l1, int l2, int n) {
        double s = 0.0;
        for (int j = 0; j < pts; ++j) {
            const double x = -1.0 + j * h;
            const double w = (j == 0 || j == pts - 1) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            s += w * angular::assoc_legendre(l1, n, x) * angular::assoc_legendre(l2, n, x);
        }
        return s * h / 3.0;
    };
    for (int n = 0; n <= 2; ++n) {
        for (int l1 = n; l1 <= 5; ++l1) {
            for (int l2 = l1 + 1; l2 <= 5; ++l2) {
                EXPECT_NEAR(inner(l1, l2, n), 0.0, 1e-8) << l1 << " " << l2 << " " << n;
            }
        }
    }
    EXPECT_NEAR(inner(2, 2, 0), 2.0 / 5.0, 1e-8);
}

TEST(Angular, Errors)
{
    EXPECT_EQ(code_of([] { (void)angular::assoc_legendre(2, 3, 0.1); }), ErrorCode::OrderExceedsDegree);
    EXPECT_EQ(code_of([] { (void)angular::angular_residual(AngularMode{2, 3}, 1.0, 1e-4); }),
              ErrorCode::OrderExceedsDegree);
    EXPECT_EQ(code_of([] { (void)angular::angular_residual(AngularMode{2, 1}, 5e-4, 1e-4); }),
              ErrorCode::TooCloseToPole);
    EXPECT_EQ(code_of([] { (void)angular::angular_residual(AngularMode{2, 1}, std::numbers::pi - 1e-4, 1e-4); }),
              ErrorCode::TooCloseToPole);
}
