#ifndef HEUNRAD_KG_HPP
#define HEUNRAD_KG_HPP

// Massless Klein-Gordon radial equation on the second background,
//
//   F'' + (Delta'/Delta) F' + (r^4 omega^2 - lambda Delta)/Delta^2 F = 0,
//
// and its two closed-form confluent Heun solutions in u = r - r1.

#include "error.hpp"
#include "heun.hpp"
#include "dirac.hpp"
#include "prefactored.hpp"
#include "spacetimes.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <string>

namespace heunrad::kg {

using heun::cplx;
using heun::EvalResult;

struct KGRadialCoeffs {
    double friction = 0.0;  ///< Delta'/Delta
    double potential = 0.0; ///< (r^4 omega^2 - lambda Delta)/Delta^2
};

[[nodiscard]] inline KGRadialCoeffs kg_radial_coeffs(const KGBackground& bg, const KGMode& mode,
                                                     double r)
{
    const double delta = kg_delta(bg, r);
    if (delta == 0.0) {
        throw Error(ErrorCode::OnHorizon, "Delta vanishes at r = " + std::to_string(r));
    }
    const double w2 = mode.omega * mode.omega;
    return {(2.0 * r - 2.0 * bg.M()) / delta,
            (r * r * r * r * w2 - mode.lambda * delta) / (delta * delta)};
}

enum class Branch { Regular, Second };

/// `form` evaluates F as a function of u = r - r1 > 0; the Heun argument is
/// z = -u/(r1 - r2). The branches differ only in the sign of the u exponent.
struct KGClosedSpec {
    Branch branch = Branch::Regular;
    PrefactoredHeun form;
};

[[nodiscard]] inline KGClosedSpec kg_closed_spec(const KGBackground& bg, const KGMode& mode,
                                                 Branch branch)
{
    const auto [r1, r2] = kg_horizons(bg);
    const double d = r1 - r2;
    const double w = mode.omega;
    const double lam = mode.lambda;
    const cplx i{0.0, 1.0};
    const double sign = branch == Branch::Regular ? 1.0 : -1.0;

    KGClosedSpec s;
    s.branch = branch;
    PrefactoredHeun& f = s.form;
    f.exp_rate = -i * w;
    f.near_power = sign * i * r1 * r1 * w / d;
    f.far_power = i * r2 * r2 * w / d;
    f.far_slope = 1.0;
    f.far_offset = d;
    f.z_scale = -1.0 / d;
    f.params.alpha = 2.0 * i * w * d;
    f.params.beta = sign * 2.0 * i * r1 * r1 * w / d;
    f.params.gamma = 2.0 * i * r2 * r2 * w / d;
    f.params.delta = (-2.0 * r1 * r1 + 2.0 * r2 * r2) * w * w;
    f.params.eta = (2.0 * r1 * r1 * r1 * r1 * w * w - 4.0 * r1 * r1 * r1 * w * w * r2 -
                    lam * r1 * r1 + 2.0 * r1 * r2 * lam - lam * r2 * r2) /
                   (d * d);
    return s;
}

[[nodiscard]] inline EvalResult kg_closed_solution(const KGBackground&, const KGMode&,
                                                   const KGClosedSpec& spec, double u, double tol)
{
    if (!(u > 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "closed-form KG solution requires u > 0");
    }
    return spec.form.eval(u, tol);
}

using SolutionFn = dirac::SolutionFn;

/// Normalized residual at u > 0 with F'' from central differences of F'.
[[nodiscard]] inline double kg_residual(const KGBackground& bg, const KGMode& mode,
                                        const SolutionFn& solution, double u, double h)
{
    if (!(u > 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "residual requires u > 0");
    }
    if (!(h > 0.0) || h > u / 10.0) {
        throw Error(ErrorCode::StepTooLarge, "finite-difference step must satisfy 0 < h <= u/10");
    }
    const double r = u + kg_horizons(bg).r1;
    const KGRadialCoeffs c = kg_radial_coeffs(bg, mode, r);
    const EvalResult mid = solution(u);
    const cplx d2 = dirac::central_second_derivative(solution, u, h);
    const cplx t1 = c.friction * mid.derivative;
    const cplx t0 = c.potential * mid.value;
    return std::abs(d2 + t1 + t0) / (std::abs(d2) + std::abs(t1) + std::abs(t0));
}

} // namespace heunrad::kg

#endif
