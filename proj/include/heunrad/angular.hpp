#ifndef HEUNRAD_ANGULAR_HPP
#define HEUNRAD_ANGULAR_HPP

// Associated Legendre functions P_l^n(x), Condon-Shortley phase, and the
// angular equation S'' + cot(theta) S' + (lambda - n^2/sin^2 theta) S = 0
// they solve with lambda = l(l+1).

#include "error.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace heunrad::angular {

struct AngularMode {
    int l = 0;
    int n = 0;

    [[nodiscard]] double lambda() const noexcept { return static_cast<double>(l) * (l + 1); }
};

struct LegendreValue {
    double value = 0.0;
    double derivative = 0.0; ///< d/dx
};

namespace detail {

inline void check_order(int l, int n)
{
    if (l < 0) {
        throw Error(ErrorCode::InvalidParameter, "degree must be nonnegative");
    }
    if (std::abs(n) > l) {
        throw Error(ErrorCode::OrderExceedsDegree, "|n| must not exceed l");
    }
}

// P_l^m and P_{l-1}^m for m >= 0, by upward recurrence in l from P_m^m.
inline void legendre_pair(int l, int m, double x, double& p_l, double& p_lm1)
{
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt((1.0 - x) * (1.0 + x));
        double odd = 1.0;
        for (int j = 1; j <= m; ++j) {
            pmm *= -odd * s;
            odd += 2.0;
        }
    }
    if (l == m) {
        p_l = pmm;
        p_lm1 = 0.0;
        return;
    }
    double prev = pmm;
    double cur = x * (2.0 * m + 1.0) * pmm;
    for (int ll = m + 2; ll <= l; ++ll) {
        const double next = ((2.0 * ll - 1.0) * x * cur - (ll + m - 1.0) * prev) / (ll - m);
        prev = cur;
        cur = next;
    }
    p_l = cur;
    p_lm1 = prev;
}

// (l-m)!/(l+m)! (-1)^m, the factor relating P_l^{-m} to P_l^m.
inline double negative_order_factor(int l, int m)
{
    double f = 1.0;
    for (int j = l - m + 1; j <= l + m; ++j) {
        f /= j;
    }
    return (m % 2 == 0) ? f : -f;
}

} // namespace detail

/// P_l^n(x) and dP/dx; the derivative is finite for |x| < 1.
[[nodiscard]] inline LegendreValue assoc_legendre_with_derivative(int l, int n, double x)
{
    detail::check_order(l, n);
    if (!(std::abs(x) <= 1.0)) {
        throw Error(ErrorCode::OutOfDomain, "x must lie in [-1, 1]");
    }
    const int m = std::abs(n);
    double pl = 0.0;
    double plm1 = 0.0;
    detail::legendre_pair(l, m, x, pl, plm1);
    LegendreValue out{pl, 0.0};
    const double one_minus_x2 = (1.0 - x) * (1.0 + x);
    if (one_minus_x2 > 0.0) {
        out.derivative = (l * x * pl - (l + m) * plm1) / (-one_minus_x2);
    }
    if (n < 0) {
        const double f = detail::negative_order_factor(l, m);
        out.value *= f;
        out.derivative *= f;
    }
    return out;
}

[[nodiscard]] inline double assoc_legendre(int l, int n, double x)
{
    return assoc_legendre_with_derivative(l, n, x).value;
}

/// Normalized residual of the angular equation for S(theta) = P_l^n(cos theta)
/// with an explicit lambda (so eigenvalue sensitivity can be probed). S' is
/// analytic, S'' is a fourth-order central difference of S'.
[[nodiscard]] inline double angular_residual(int l, int n, double lambda, double theta, double h)
{
    detail::check_order(l, n);
    if (!(h > 0.0) || theta < 10.0 * h || std::numbers::pi - theta < 10.0 * h) {
        throw Error(ErrorCode::TooCloseToPole, "theta must stay 10h away from the poles");
    }
    const auto s_prime = [&](double t) {
        return -std::sin(t) * assoc_legendre_with_derivative(l, n, std::cos(t)).derivative;
    };
    const double S = assoc_legendre(l, n, std::cos(theta));
    const double dS = s_prime(theta);
    const double d2S = (-s_prime(theta + 2.0 * h) + 8.0 * s_prime(theta + h) -
                        8.0 * s_prime(theta - h) + s_prime(theta - 2.0 * h)) /
                       (12.0 * h);
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    const double t_fric = dS * cs / sn;
    const double t_cent = static_cast<double>(n) * n * S / (sn * sn);
    const double num = d2S + lambda * S + t_fric - t_cent;
    const double den = std::abs(d2S) + std::abs(lambda * S) + std::abs(t_fric) + std::abs(t_cent);
    return den == 0.0 ? 0.0 : std::abs(num) / den;
}

[[nodiscard]] inline double angular_residual(const AngularMode& mode, double theta, double h)
{
    return angular_residual(mode.l, mode.n, mode.lambda(), theta, h);
}

} // namespace heunrad::angular

#endif
