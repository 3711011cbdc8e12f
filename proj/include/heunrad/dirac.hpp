#ifndef HEUNRAD_DIRAC_HPP
#define HEUNRAD_DIRAC_HPP

// Massless Dirac radial problem on the first background:
//
//   T1' + i (k/H^2) T1 = lambda/(R H) T2
//   T2' - i (k/H^2) T2 = lambda/(R H) T1
//
// with H^2 R^2 = r^2 - 2Mr, its second-order form for T1 in u = r - 2M, and
// the four closed-form confluent Heun solutions (two about r = 0, two about
// r = 2M).

#include "dop853.hpp"
#include "error.hpp"
#include "heun.hpp"
#include "prefactored.hpp"
#include "spacetimes.hpp"
#include "spheroidal.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace heunrad::dirac {

using heun::cplx;
using heun::EvalResult;

/// Coefficients of A T1'' + B T1' + (C + D + E) T1 = 0 at u = r - 2M.
struct SecondOrderCoeffs {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    cplx D{};
    double E = 0.0;
    cplx Csum{};
};

/// E carries -lambda^2 (u+2M) u, the sign produced by eliminating T2 from the
/// first-order system; with +lambda^2 none of the closed forms solves the equation.
[[nodiscard]] inline SecondOrderCoeffs second_order_coeffs(const DiracBackground& bg,
                                                          const DiracMode& mode, double u)
{
    const double M = bg.M();
    const double a = bg.a();
    const double p = bg.p();
    const double k = mode.k;
    const double r = u + 2.0 * M;
    const cplx i{0.0, 1.0};

    SecondOrderCoeffs c;
    c.A = r * r * u * u;
    c.B = (M + u) * r * u;
    const double area = ((p / 2.0 + 0.5) * a * a + p / 2.0 - 0.5) * r * r -
                        ((p + 1.0) * a * a - 2.0 * a + p - 1.0) * M * r +
                        M * M * (a * a * p - 2.0 * a + p);
    c.C = area * area * k * k;
    c.D = ((i / 2.0 + i / 2.0 * p) * a * a + i / 2.0 * p - i / 2.0) * r * r * r -
          1.5 * i * M * ((p + 1.0) * a * a + p - 1.0) * r * r +
          i * (a - 1.0) * M * M * (a + 1.0) * r + i * M * M * M * (a * a * p - 2.0 * a + p);
    c.D *= k;
    c.E = -mode.lambda * mode.lambda * r * u;
    c.Csum = c.C + c.D + c.E;
    return c;
}

struct SpinorPair {
    cplx T1{};
    cplx T2{};
};

struct SpinorSample {
    double r = 0.0;
    SpinorPair value;
};

namespace detail {

/// k/H^2 = k r^2 f / (r^2 - 2Mr) and RH = sqrt(r^2 - 2Mr) (principal root).
struct SystemCoeffs {
    double k_over_h2 = 0.0;
    cplx rh{};
};

inline SystemCoeffs system_coeffs(const DiracBackground& bg, const DiracMode& mode, double r)
{
    const double s2 = r * r - 2.0 * bg.M() * r;
    return {mode.k * rsq_f(bg, r) / s2, std::sqrt(cplx{s2, 0.0})};
}

} // namespace detail

/// Right-hand side of the first-order system at r.
[[nodiscard]] inline SpinorPair system_rhs(const DiracBackground& bg, const DiracMode& mode,
                                           double r, const SpinorPair& y)
{
    const auto c = detail::system_coeffs(bg, mode, r);
    const cplx i{0.0, 1.0};
    const cplx coupling = mode.lambda / c.rh;
    return {-i * c.k_over_h2 * y.T1 + coupling * y.T2, i * c.k_over_h2 * y.T2 + coupling * y.T1};
}

/// Recovers T2 from T1 and T1' through the first equation of the system.
[[nodiscard]] inline SpinorPair spinor_from_t1(const DiracBackground& bg, const DiracMode& mode,
                                               double r, const EvalResult& t1)
{
    if (mode.lambda == 0.0) {
        throw Error(ErrorCode::InvalidParameter, "T2 is not determined by T1 when lambda = 0");
    }
    const auto c = detail::system_coeffs(bg, mode, r);
    const cplx i{0.0, 1.0};
    return {t1.value, c.rh / mode.lambda * (t1.derivative + i * c.k_over_h2 * t1.value)};
}

/// Integrates the coupled first-order system from r_start through the
/// monotone output points r_out, returning one sample per output point.
[[nodiscard]] inline std::vector<SpinorSample>
integrate_system(const DiracBackground& bg, const DiracMode& mode, double r_start,
                 const SpinorPair& initial, std::span<const double> r_out, double tol)
{
    const double horizon = 2.0 * bg.M();
    const auto side = [horizon](double r) { return r < 0.0 ? -1 : (r < horizon ? 0 : 1); };
    const auto singular = [horizon](double r) { return r == 0.0 || r == horizon; };
    if (singular(r_start)) {
        throw Error(ErrorCode::IntervalContainsSingularity, "start point is singular");
    }
    double direction = 0.0;
    double prev = r_start;
    for (const double r : r_out) {
        if (singular(r) || side(r) != side(r_start)) {
            throw Error(ErrorCode::IntervalContainsSingularity,
                        "integration interval contains r = 0 or r = 2M");
        }
        const double step = r - prev;
        if (step != 0.0) {
            const double d = step > 0.0 ? 1.0 : -1.0;
            if (direction != 0.0 && d != direction) {
                throw Error(ErrorCode::InvalidParameter, "output points must be monotone");
            }
            direction = d;
        }
        prev = r;
    }

    const auto rhs = [&bg, &mode](double r, const ode::ComplexState<2>& y) {
        const SpinorPair d = system_rhs(bg, mode, r, {y[0], y[1]});
        return ode::ComplexState<2>{d.T1, d.T2};
    };
    ode::Dop853Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-6 * std::max(std::abs(initial.T1), std::abs(initial.T2));
    ode::Dop853<2, decltype(rhs)> stepper(rhs, r_start, {initial.T1, initial.T2}, opt);

    std::vector<SpinorSample> out;
    out.reserve(r_out.size());
    for (const double r : r_out) {
        const auto& y = stepper.advance_to(r);
        out.push_back({r, {y[0], y[1]}});
    }
    return out;
}

enum class ExpansionPoint { Origin, Horizon };
enum class Branch { Regular, Second };

/// One of the four closed-form solutions. `form` evaluates T1 as a function
/// of r (Origin) or u = r - 2M (Horizon). Origin solutions live inside the
/// horizon, where the background is only formally defined.
struct ClosedSolutionSpec {
    ExpansionPoint expansion_point = ExpansionPoint::Horizon;
    Branch branch = Branch::Regular;
    PrefactoredHeun form;

    [[nodiscard]] bool formal() const noexcept
    {
        return expansion_point == ExpansionPoint::Origin;
    }
    [[nodiscard]] double z_at(double position) const noexcept
    {
        return form.z_scale * position;
    }
};

/// The closed-form prefactors and Heun argument lists, as functions of
/// (M, p, a, k, lambda). Single source of truth for all four solutions.
[[nodiscard]] inline ClosedSolutionSpec closed_solution_spec(const DiracBackground& bg,
                                                             const DiracMode& mode,
                                                             ExpansionPoint at, Branch branch)
{
    const double M = bg.M();
    const double p = bg.p();
    const double a = bg.a();
    const double k = mode.k;
    const double lam2 = mode.lambda * mode.lambda;
    const cplx i{0.0, 1.0};
    const double K = (p + 1.0) * a * a + p - 1.0;
    const double P = a * a * p + 2.0 * a + p;
    const double Q = a * a * p - 2.0 * a + p;
    const bool second = branch == Branch::Second;

    ClosedSolutionSpec s;
    s.expansion_point = at;
    s.branch = branch;
    PrefactoredHeun& f = s.form;
    f.params.alpha = 2.0 * i * M * K * k;

    if (at == ExpansionPoint::Origin) {
        f.exp_rate = i / 2.0 * K * k;
        f.near_power = second ? 0.5 - i / 2.0 * k * Q * M : i / 2.0 * k * Q * M;
        f.far_power = 0.5 + i / 2.0 * k * P * M;
        f.far_slope = -1.0;
        f.far_offset = 2.0 * M;
        f.z_scale = 1.0 / (2.0 * M);
        f.params.beta = second ? 0.5 - i * k * Q * M : -0.5 + i * k * Q * M;
        f.params.gamma = 0.5 + i * k * P * M;
        f.params.delta = (4.0 * M * a * k + i) * M * K * k;
        f.params.eta = 0.5 * k * k * M * M * (a * a + 1.0) * (a * a + 1.0) * p * p -
                       0.5 * M * (a * a + 1.0) *
                           (-2.0 * M * a * a * k + 4.0 * M * a * k + 2.0 * k * M + i) * k * p -
                       2.0 * k * k * a * a * a * M * M -
                       0.5 * M * k * (-4.0 * k * M + i) * a * a +
                       M * (2.0 * k * M + i) * k * a + i / 2.0 * k * M - lam2 + 3.0 / 8.0;
    } else {
        f.exp_rate = -i / 2.0 * k * K;
        f.near_power = second ? 0.5 + i / 2.0 * P * k * M : -i / 2.0 * P * k * M;
        f.far_power = i / 2.0 * k * Q * M;
        f.far_slope = 1.0;
        f.far_offset = 2.0 * M;
        f.z_scale = -1.0 / (2.0 * M);
        f.params.beta = second ? 0.5 + i * P * k * M : -0.5 - i * P * k * M;
        f.params.gamma = -0.5 + i * k * Q * M;
        f.params.delta = -M * K * (4.0 * k * M * a + i) * k;
        f.params.eta = 0.5 * M * M * k * k * (a * a + 1.0) * (a * a + 1.0) * p * p +
                       0.5 * M * (a * a + 1.0) *
                           (2.0 * M * a * a * k + 4.0 * k * M * a - 2.0 * M * k + i) * k * p +
                       2.0 * k * k * a * a * a * M * M +
                       0.5 * M * (4.0 * M * k + i) * k * a * a +
                       M * k * (-2.0 * M * k + i) * a - i / 2.0 * M * k - lam2 + 3.0 / 8.0;
    }
    return s;
}

/// T1 at r (Origin, 0 < r < 2M) or u (Horizon, u > 0).
[[nodiscard]] inline EvalResult closed_solution(const DiracBackground& bg, const DiracMode&,
                                                const ClosedSolutionSpec& spec, double position,
                                                double tol)
{
    if (spec.expansion_point == ExpansionPoint::Origin) {
        if (!(position > 0.0 && position < 2.0 * bg.M())) {
            throw Error(ErrorCode::OutOfDomain, "origin expansion requires 0 < r < 2M");
        }
    } else if (!(position > 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "horizon expansion requires u > 0");
    }
    return spec.form.eval(position, tol);
}

using SolutionFn = std::function<EvalResult(double)>;

/// Finite-difference step for residual checks at a point whose nearest
/// singular point is `distance` away: 1e-3 min(1, distance), floored at 1e-7.
[[nodiscard]] inline double default_fd_step(double distance) noexcept
{
    return std::max(1e-7, 1e-3 * std::min(1.0, std::abs(distance)));
}

/// default_fd_step that also resolves the local length scale |T/T'| of the
/// solution, which is much shorter than `distance` for fast oscillation.
[[nodiscard]] inline double adaptive_fd_step(const SolutionFn& solution, double x, double distance)
{
    const EvalResult v = solution(x);
    double scale = std::abs(distance);
    if (v.derivative != cplx{}) {
        scale = std::min(scale, std::abs(v.value / v.derivative));
    }
    return default_fd_step(scale);
}

/// Fourth-order central difference of the supplied derivative,
/// f'' ~ (-f'(x+2h) + 8f'(x+h) - 8f'(x-h) + f'(x-2h)) / 12h.
[[nodiscard]] inline cplx central_second_derivative(const SolutionFn& solution, double x, double h)
{
    const cplx p1 = solution(x + h).derivative;
    const cplx m1 = solution(x - h).derivative;
    const cplx p2 = solution(x + 2.0 * h).derivative;
    const cplx m2 = solution(x - 2.0 * h).derivative;
    return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
}

namespace detail {

inline double normalized_residual(const SecondOrderCoeffs& c, const SolutionFn& solution,
                                  double x, double h)
{
    const EvalResult mid = solution(x);
    const cplx d2 = central_second_derivative(solution, x, h);
    const cplx t2 = c.A * d2;
    const cplx t1 = c.B * mid.derivative;
    const cplx t0 = c.Csum * mid.value;
    return std::abs(t2 + t1 + t0) / (std::abs(t2) + std::abs(t1) + std::abs(t0));
}

} // namespace detail

/// Normalized residual of the second-order equation at u > 0, with T1''
/// from a central difference of the supplied derivative.
[[nodiscard]] inline double residual_second_order(const DiracBackground& bg,
                                                  const DiracMode& mode,
                                                  const SolutionFn& solution, double u, double h)
{
    if (!(u > 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "residual requires u > 0");
    }
    if (!(h > 0.0) || h > u / 10.0) {
        throw Error(ErrorCode::StepTooLarge, "finite-difference step must satisfy 0 < h <= u/10");
    }
    return detail::normalized_residual(second_order_coeffs(bg, mode, u), solution, u, h);
}

/// Same equation written in r for the origin solutions (0 < r < 2M); the
/// coefficients are the u-polynomials evaluated at u = r - 2M.
[[nodiscard]] inline double residual_origin(const DiracBackground& bg, const DiracMode& mode,
                                            const SolutionFn& solution, double r, double h)
{
    const double horizon = 2.0 * bg.M();
    if (!(r > 0.0 && r < horizon)) {
        throw Error(ErrorCode::OutOfDomain, "origin residual requires 0 < r < 2M");
    }
    if (!(h > 0.0) || h > std::min(r, horizon - r) / 10.0) {
        throw Error(ErrorCode::StepTooLarge, "finite-difference step too large for r");
    }
    return detail::normalized_residual(second_order_coeffs(bg, mode, r - horizon), solution, r,
                                       h);
}

enum class AsymptoticBranch { Oscillatory, Decaying };

/// Leading large-u behaviour T1 ~ exp(exp_rate u) u^power, composed from the
/// horizon prefactor and the Thome leading term of the mapped Heun function.
[[nodiscard]] inline heun::LeadingBehavior asymptotic_behavior(const DiracBackground& bg,
                                                               const DiracMode& mode,
                                                               AsymptoticBranch branch)
{
    const ClosedSolutionSpec spec =
        closed_solution_spec(bg, mode, ExpansionPoint::Horizon, Branch::Regular);
    const heun::SpheroidalForm sph = heun::to_spheroidal(spec.form.params);
    const cplx i{0.0, 1.0};

    const auto compose = [&](heun::ThomeBranch tb) {
        const heun::LeadingBehavior u_lead = heun::thome_leading(sph, tb);
        // H = exp(i omega z) U, z = z_scale u; constant factors such as
        // (-1)^power from the negative z axis do not affect the rate.
        heun::LeadingBehavior out;
        out.exp_rate = (i * sph.omegaS + u_lead.exp_rate) * spec.form.z_scale + spec.form.exp_rate;
        out.power = u_lead.power + spec.form.near_power + spec.form.far_power;
        return out;
    };
    const heun::LeadingBehavior plus = compose(heun::ThomeBranch::Plus);
    const heun::LeadingBehavior minus = compose(heun::ThomeBranch::Minus);
    const bool plus_decays = plus.power.real() < minus.power.real();
    if (branch == AsymptoticBranch::Decaying) {
        return plus_decays ? plus : minus;
    }
    return plus_decays ? minus : plus;
}

/// The two analytic phase-rate candidates for the oscillatory branch: the
/// horizon prefactor rate k K/2 and the rate 2 K M k obtained by reading
/// exp(-alpha z) with z replaced by u (no 1/2M scaling).
struct PhaseRateCandidates {
    double prefactor_rate = 0.0;
    double unscaled_rate = 0.0;
};

[[nodiscard]] inline PhaseRateCandidates phase_rate_candidates(const DiracBackground& bg,
                                                               const DiracMode& mode) noexcept
{
    const double K = bg.K();
    return {0.5 * mode.k * K, 2.0 * K * bg.M() * mode.k};
}

} // namespace heunrad::dirac

#endif
