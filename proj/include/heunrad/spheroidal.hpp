#ifndef HEUNRAD_SPHEROIDAL_HPP
#define HEUNRAD_SPHEROIDAL_HPP

// Generalized spheroidal wave form of the confluent Heun equation,
//
//   z(z-1) U'' + (B1 + B2 z) U' + [B3 - 2 eta omega (z-1) + omega^2 z(z-1)] U = 0,
//
// related to the standard form by H_C(z) = exp(i omega z) U(z). Substituting
// that product into the standard equation removes the alpha z(z-1) part of the
// first-derivative coefficient iff i omega = -alpha/2, which fixes
//
//   omega = i alpha / 2,   B1 = -(beta+1),   B2 = beta+gamma+2,
//   eta   = i delta / alpha,   B3 = eta_HC + delta + (beta+gamma+beta gamma)/2.

#include "error.hpp"
#include "heun.hpp"

#include <complex>

namespace heunrad::heun {

struct SpheroidalForm {
    cplx B1{};
    cplx B2{};
    cplx B3{};
    cplx etaS{};
    cplx omegaS{};
};

[[nodiscard]] inline SpheroidalForm to_spheroidal(const Params& p)
{
    if (p.alpha == cplx{0.0, 0.0}) {
        throw Error(ErrorCode::NotIrregular,
                    "alpha = 0: infinity is not an irregular singular point of this form");
    }
    const cplx i{0.0, 1.0};
    SpheroidalForm s;
    s.omegaS = i * p.alpha / 2.0;
    s.B1 = -(p.beta + 1.0);
    s.B2 = p.beta + p.gamma + 2.0;
    s.etaS = i * p.delta / p.alpha;
    s.B3 = p.eta + p.delta + (p.beta + p.gamma + p.beta * p.gamma) / 2.0;
    return s;
}

[[nodiscard]] inline Params from_spheroidal(const SpheroidalForm& s)
{
    if (s.omegaS == cplx{0.0, 0.0}) {
        throw Error(ErrorCode::NotIrregular, "omega = 0 has no standard-form counterpart");
    }
    const cplx i{0.0, 1.0};
    Params p;
    p.alpha = -2.0 * i * s.omegaS;
    p.beta = -s.B1 - 1.0;
    p.gamma = s.B2 + s.B1 - 1.0;
    p.delta = -2.0 * s.omegaS * s.etaS;
    p.eta = s.B3 - p.delta - (p.beta + p.gamma + p.beta * p.gamma) / 2.0;
    return p;
}

enum class ThomeBranch { Plus, Minus };

/// Leading Thome behaviour U(z) ~ exp(exp_rate z) z^power.
struct LeadingBehavior {
    cplx exp_rate{};
    cplx power{};
};

/// U ~ exp(+-i omega z) z^(-+i eta - B2/2); only the first term of the
/// (divergent) asymptotic series.
[[nodiscard]] inline LeadingBehavior thome_leading(const SpheroidalForm& s, ThomeBranch branch)
{
    if (s.omegaS == cplx{0.0, 0.0}) {
        throw Error(ErrorCode::NotIrregular, "omega must be nonzero");
    }
    const cplx i{0.0, 1.0};
    const double sign = branch == ThomeBranch::Plus ? 1.0 : -1.0;
    return {sign * i * s.omegaS, -sign * i * s.etaS - s.B2 / 2.0};
}

} // namespace heunrad::heun

#endif
