#ifndef HEUNRAD_PREFACTORED_HPP
#define HEUNRAD_PREFACTORED_HPP

#include "error.hpp"
#include "heun.hpp"

#include <cmath>
#include <complex>

namespace heunrad {

/// Closed-form local solution of the shape
///
///   T(x) = exp(exp_rate x) x^near_power (far_slope x + far_offset)^far_power
///          * H_C(params; z_scale x)
///
/// with both power bases required to be positive, so the principal branch is
/// unambiguous.
struct PrefactoredHeun {
    heun::cplx exp_rate{};
    heun::cplx near_power{};
    heun::cplx far_power{};
    double far_slope = 1.0;
    double far_offset = 0.0;
    double z_scale = 1.0;
    heun::Params params{};

    [[nodiscard]] heun::EvalResult eval(double x, double tol) const
    {
        const double far_base = far_slope * x + far_offset;
        if (!(x > 0.0) || !(far_base > 0.0)) {
            throw Error(ErrorCode::OutOfDomain, "prefactor bases must be positive");
        }
        const heun::cplx log_pref =
            exp_rate * x + near_power * std::log(x) + far_power * std::log(far_base);
        const heun::cplx pref = std::exp(log_pref);
        const heun::cplx dlog = exp_rate + near_power / x + far_power * far_slope / far_base;
        const heun::EvalResult h = heun::eval(params, z_scale * x, tol);
        return {pref * h.value, pref * (dlog * h.value + z_scale * h.derivative),
                std::abs(pref) * h.err_estimate};
    }
};

} // namespace heunrad

#endif
