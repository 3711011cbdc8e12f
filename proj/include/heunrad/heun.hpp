#ifndef HEUNRAD_HEUN_HPP
#define HEUNRAD_HEUN_HPP

// Confluent Heun function H_C(alpha, beta, gamma, delta, eta, z), the solution
// of
//
//   H'' + (alpha + (gamma+1)/(z-1) + (beta+1)/z) H' + (mu/z + nu/(z-1)) H = 0
//
// that is regular at z = 0 with H(0) = 1. The pair (mu, nu) is tied to
// (delta, eta) by
//
//   delta = mu + nu - alpha (beta+gamma+2)/2
//   eta   = alpha (beta+1)/2 - mu - (beta+gamma+beta*gamma)/2
//
// which is the argument convention used by Maple's HeunC.

#include "dop853.hpp"
#include "error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

namespace heunrad::heun {

using cplx = std::complex<double>;

struct Params {
    cplx alpha{};
    cplx beta{};
    cplx gamma{};
    cplx delta{};
    cplx eta{};

    [[nodiscard]] bool finite() const noexcept
    {
        const auto ok = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
        return ok(alpha) && ok(beta) && ok(gamma) && ok(delta) && ok(eta);
    }
};

struct AccessoryPair {
    cplx mu{};
    cplx nu{};
};

/// Value and first derivative at a point; `err_estimate` bounds the absolute
/// error of `value`.
struct EvalResult {
    cplx value{};
    cplx derivative{};
    double err_estimate = 0.0;
};

[[nodiscard]] inline AccessoryPair accessory_from_params(const Params& p) noexcept
{
    const cplx mu = p.alpha * (p.beta + 1.0) / 2.0 - p.eta -
                    (p.beta + p.gamma + p.beta * p.gamma) / 2.0;
    const cplx nu = p.delta + p.alpha * (p.beta + p.gamma + 2.0) / 2.0 - mu;
    return {mu, nu};
}

[[nodiscard]] inline Params params_from_accessory(cplx alpha, cplx beta, cplx gamma,
                                                  const AccessoryPair& acc) noexcept
{
    Params p{alpha, beta, gamma, {}, {}};
    p.delta = acc.mu + acc.nu - alpha * (beta + gamma + 2.0) / 2.0;
    p.eta = alpha * (beta + 1.0) / 2.0 - acc.mu - (beta + gamma + beta * gamma) / 2.0;
    return p;
}

/// True when beta is a negative integer, for which the exponent-0 Frobenius
/// recurrence hits a zero denominator.
[[nodiscard]] inline bool regular_branch_undefined(cplx beta) noexcept
{
    const double re = beta.real();
    const double scale = std::max(1.0, std::abs(beta));
    if (std::abs(beta.imag()) > 1e-13 * scale || re > -0.5) {
        return false;
    }
    return std::abs(re - std::round(re)) <= 1e-13 * scale;
}

inline constexpr double kSeriesRadius = 0.5;
inline constexpr double kContinuationStart = 0.25;
inline constexpr std::size_t kMaxSeriesTerms = 2000;
// Largest tolerated ratio between the biggest series term and the sum before
// the series is considered too ill-conditioned to use.
inline constexpr double kSeriesConditionLimit = 1e4;

struct SeriesResult {
    cplx value{};
    cplx derivative{};
    double err_estimate = 0.0;
    double condition = 1.0; ///< max |term| / |sum|
    std::size_t terms = 0;
    bool converged = false;
};

namespace detail {

inline void require_valid(const Params& p)
{
    if (!p.finite()) {
        throw Error(ErrorCode::InvalidParameter, "confluent Heun parameters must be finite");
    }
    if (regular_branch_undefined(p.beta)) {
        throw Error(ErrorCode::BranchUnavailable,
                    "beta is a negative integer; the regular branch at z=0 is undefined");
    }
}

} // namespace detail

/// Frobenius series about z = 0 (exponent 0, c0 = 1). Coefficients follow
/// from the equation multiplied through by z(z-1):
///
///   (n+1)(n+1+beta) c[n+1] = (n(n-1) + n(beta+gamma+2-alpha) - mu) c[n]
///                          + (alpha(n-1) + mu + nu) c[n-1]
[[nodiscard]] inline SeriesResult series(const Params& p, double z, double tol)
{
    detail::require_valid(p);
    const auto [mu, nu] = accessory_from_params(p);
    const cplx c1 = -mu / (p.beta + 1.0);

    SeriesResult out;
    if (z == 0.0) {
        out.value = 1.0;
        out.derivative = c1;
        out.converged = true;
        out.terms = 1;
        return out;
    }

    const cplx s = p.beta + p.gamma + 2.0 - p.alpha;
    const cplx mn = mu + nu;
    cplx c_prev = 1.0;
    cplx c_cur = c1;
    cplx value = 1.0 + c1 * z;
    cplx deriv = c1;
    double zpow = z; // z^n for the current n
    double max_term = std::max(1.0, std::abs(c1 * z));
    double last_term = std::abs(c1 * z);
    int small_run = 0;

    std::size_t n = 1;
    for (; n < kMaxSeriesTerms; ++n) {
        const double dn = static_cast<double>(n);
        const cplx c_next = ((dn * (dn - 1.0) + dn * s - mu) * c_cur +
                             (p.alpha * (dn - 1.0) + mn) * c_prev) /
                            ((dn + 1.0) * (dn + 1.0 + p.beta));
        const double zpow_prev = zpow;
        zpow *= z;
        const cplx term = c_next * zpow;
        const cplx dterm = (dn + 1.0) * c_next * zpow_prev;
        value += term;
        deriv += dterm;
        c_prev = c_cur;
        c_cur = c_next;

        const double at = std::abs(term);
        const double adt = std::abs(dterm) * std::abs(z);
        max_term = std::max(max_term, at);
        last_term = std::max(at, adt);
        if (!std::isfinite(at)) {
            break;
        }
        if (at <= tol * std::abs(value) && adt <= tol * std::abs(deriv * z)) {
            if (++small_run == 3) {
                out.converged = true;
                ++n;
                break;
            }
        } else {
            small_run = 0;
        }
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    out.value = value;
    out.derivative = deriv;
    out.terms = n + 1;
    out.condition = max_term / std::max(std::abs(value), 1e-300);
    out.err_estimate = last_term + 4.0 * eps * max_term * std::sqrt(static_cast<double>(n));
    if (!std::isfinite(std::abs(value)) || !std::isfinite(std::abs(deriv))) {
        out.converged = false;
    }
    return out;
}

namespace detail {

inline EvalResult continue_from(const Params& p, double z0, const SeriesResult& start, double z,
                                double rtol)
{
    const auto [mu, nu] = accessory_from_params(p);
    const auto rhs = [&p, mu = mu, nu = nu](double x, const ode::ComplexState<2>& y) {
        const cplx friction = p.alpha + (p.gamma + 1.0) / (x - 1.0) + (p.beta + 1.0) / x;
        const cplx potential = mu / x + nu / (x - 1.0);
        return ode::ComplexState<2>{y[1], -friction * y[1] - potential * y[0]};
    };
    ode::Dop853Options opt;
    opt.rtol = rtol;
    opt.atol = rtol * 1e-6 * std::max(1.0, std::abs(start.value));
    const auto y = ode::integrate<2>(rhs, z0, {start.value, start.derivative}, z, opt);
    return {y[0], y[1], 0.0};
}

} // namespace detail

/// Evaluates by integrating the equation from a series start point z0 inside
/// the disk. Exposed separately so the two routes can be compared.
[[nodiscard]] inline EvalResult eval_by_continuation(const Params& p, double z, double tol,
                                                     double z0)
{
    detail::require_valid(p);
    if (z == 1.0 || z0 == 0.0) {
        throw Error(ErrorCode::SingularPoint, "continuation endpoint at a singular point");
    }
    if (z > 1.0 || (z0 < 1.0) != (z < 1.0) || (z0 > 0.0) != (z > 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "continuation path would cross a singular point");
    }
    const SeriesResult start = series(p, z0, std::min(tol * 1e-3, 1e-15));
    if (!start.converged) {
        throw Error(ErrorCode::DidNotConverge, "series did not converge at the start point");
    }
    const double coarse_tol = std::max(tol / 10.0, 1e-14);
    const double fine_tol = std::max(tol / 1000.0, 1e-15);
    const EvalResult coarse = detail::continue_from(p, z0, start, z, coarse_tol);
    EvalResult fine = detail::continue_from(p, z0, start, z, fine_tol);
    const double start_rel = start.err_estimate / std::max(std::abs(start.value), 1e-300);
    fine.err_estimate = std::abs(fine.value - coarse.value) + start_rel * std::abs(fine.value);
    return fine;
}

/// Start point for continuation: +-0.25, pulled towards the origin while the
/// series there suffers from cancellation (large |alpha|, |eta|, ...).
[[nodiscard]] inline double continuation_start(const Params& p, double direction)
{
    double z0 = direction * kContinuationStart;
    while (std::abs(z0) > 1e-4) {
        const SeriesResult s = series(p, z0, 1e-16);
        if (s.converged && s.condition <= 1e2) {
            break;
        }
        z0 /= 2.0;
    }
    return z0;
}

/// H_C and dH_C/dz on the real axis, z < 1.
[[nodiscard]] inline EvalResult eval(const Params& p, double z, double tol = 1e-10)
{
    detail::require_valid(p);
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");
    }
    if (!std::isfinite(z)) {
        throw Error(ErrorCode::InvalidParameter, "evaluation point must be finite");
    }
    if (z == 1.0) {
        throw Error(ErrorCode::SingularPoint, "z = 1 is a singular point of the equation");
    }
    if (z > 1.0) {
        throw Error(ErrorCode::OutOfDomain, "continuation across z = 1 is not supported");
    }

    if (std::abs(z) <= kSeriesRadius) {
        const SeriesResult s = series(p, z, tol);
        if (s.converged && s.condition <= kSeriesConditionLimit &&
            s.err_estimate <= tol * std::max(1.0, std::abs(s.value))) {
            return {s.value, s.derivative, s.err_estimate};
        }
    }

    const double z0 = continuation_start(p, z > 0.0 ? 1.0 : -1.0);
    if (std::abs(z) <= std::abs(z0)) {
        const SeriesResult s = series(p, z, std::min(tol, 1e-15));
        return {s.value, s.derivative, s.err_estimate};
    }
    EvalResult r = eval_by_continuation(p, z, tol, z0);
    if (!(r.err_estimate <= tol * std::max(1.0, std::abs(r.value))) ||
        !std::isfinite(std::abs(r.value))) {
        throw Error(ErrorCode::DidNotConverge,
                    fmt::format("continuation error estimate {:.3e} exceeds the requested tolerance {:.3e}",
                                r.err_estimate, tol * std::max(1.0, std::abs(r.value))));
    }
    return r;
}

/// Left-hand side of the equation for supplied (value, d1, d2).
[[nodiscard]] inline cplx ode_residual(const Params& p, double z, cplx value, cplx d1, cplx d2)
{
    if (z == 0.0 || z == 1.0) {
        throw Error(ErrorCode::SingularPoint, "residual undefined at z = 0 or z = 1");
    }
    const auto [mu, nu] = accessory_from_params(p);
    return d2 + (p.alpha + (p.gamma + 1.0) / (z - 1.0) + (p.beta + 1.0) / z) * d1 +
           (mu / z + nu / (z - 1.0)) * value;
}

enum class SingularPoint { Zero, One };

struct IndicialPair {
    cplx first{};
    cplx second{};
    bool double_root = false;
    bool integer_difference = false; ///< exponents differ by an integer (possible log terms)
};

[[nodiscard]] inline IndicialPair indicial_exponents(const Params& p, SingularPoint at) noexcept
{
    const cplx other = at == SingularPoint::Zero ? -p.beta : -p.gamma;
    IndicialPair out{0.0, other};
    out.double_root = std::abs(other) == 0.0;
    out.integer_difference =
        other.imag() == 0.0 && other.real() == std::round(other.real());
    return out;
}

/// Necessary condition mu + nu = -N alpha for a degree-N polynomial solution.
/// The accompanying determinant condition is not evaluated.
[[nodiscard]] inline bool polynomial_condition(const Params& p, unsigned N) noexcept
{
    const auto [mu, nu] = accessory_from_params(p);
    const double n = static_cast<double>(N);
    const double scale = std::abs(mu) + std::abs(nu) + n * std::abs(p.alpha) + 1.0;
    return std::abs(mu + nu + n * p.alpha) <= 1e-12 * scale;
}

} // namespace heunrad::heun

#endif
