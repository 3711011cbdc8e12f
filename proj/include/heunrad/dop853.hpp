#ifndef HEUNRAD_DOP853_HPP
#define HEUNRAD_DOP853_HPP

// Explicit Runge-Kutta 8(5,3) of Dormand & Prince with Hairer's combined
// error estimate, for small complex-valued systems integrated along the real
// axis in either direction.

#include "error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

namespace heunrad::ode {

template <std::size_t N>
using ComplexState = std::array<std::complex<double>, N>;

struct Dop853Options {
    double rtol = 1e-10;
    double atol = 1e-14;
    std::size_t max_steps = 2'000'000;
};

struct Dop853Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

namespace dop853_tableau {
// nodes
inline constexpr double c2 = 0.526001519587677318785587544488e-01;
inline constexpr double c3 = 0.789002279381515978178381316732e-01;
inline constexpr double c4 = 0.118350341907227396726757197510e+00;
inline constexpr double c5 = 0.281649658092772603273242802490e+00;
inline constexpr double c6 = 0.333333333333333333333333333333e+00;
inline constexpr double c7 = 0.25e+00;
inline constexpr double c8 = 0.307692307692307692307692307692e+00;
inline constexpr double c9 = 0.651282051282051282051282051282e+00;
inline constexpr double c10 = 0.6e+00;
inline constexpr double c11 = 0.857142857142857142857142857142e+00;

inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

// 8th order weights
inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd order embedded estimate
inline constexpr double bhh1 = 0.244094488188976377952755905512e+00;
inline constexpr double bhh2 = 0.733846688281611857341361741547e+00;
inline constexpr double bhh3 = 0.220588235294117647058823529412e-01;

// 5th order embedded estimate
inline constexpr double er1 = 0.1312004499419488073250102996e-01;
inline constexpr double er6 = -0.1225156446376204440720569753e+01;
inline constexpr double er7 = -0.4957589496572501915214079952e+00;
inline constexpr double er8 = 0.1664377182454986536961530415e+01;
inline constexpr double er9 = -0.3503288487499736816886487290e+00;
inline constexpr double er10 = 0.3341791187130174790297318841e+00;
inline constexpr double er11 = 0.8192320648511571246570742613e-01;
inline constexpr double er12 = -0.2235530786388629525884427845e-01;
} // namespace dop853_tableau

/// Stateful stepper: holds the current point, state, and the step size the
/// controller would try next, so a trajectory can be advanced through a
/// sequence of output points without restarting the controller.
///
/// `Rhs` is any callable `ComplexState<N>(double x, const ComplexState<N>&)`.
template <std::size_t N, class Rhs>
class Dop853 {
public:
    using State = ComplexState<N>;

    Dop853(Rhs rhs, double x0, const State& y0, Dop853Options opt = {})
        : rhs_(std::move(rhs)), opt_(opt), x_(x0), y_(y0)
    {
        k1_ = call(x_, y_);
    }

    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] const State& y() const noexcept { return y_; }
    [[nodiscard]] const Dop853Stats& stats() const noexcept { return stats_; }

    /// Integrates up to `x_end` (which may lie on either side of x()).
    const State& advance_to(double x_end)
    {
        using namespace dop853_tableau;
        const double span = x_end - x_;
        if (span == 0.0) {
            return y_;
        }
        const double dir = span > 0 ? 1.0 : -1.0;
        if (h_ == 0.0 || direction_ != dir) {
            h_ = initial_step(dir, std::abs(span));
            direction_ = dir;
        }

        bool last = false;
        bool prev_rejected = false;
        while (!last) {
            if (stats_.accepted + stats_.rejected >= opt_.max_steps) {
                throw Error(ErrorCode::DidNotConverge,
                            "DOP853: step budget exhausted before reaching the endpoint");
            }
            double h = dir * std::min(std::abs(h_), std::abs(x_end - x_));
            last = std::abs(h) >= std::abs(x_end - x_);
            if (std::abs(h) <= 16.0 * std::numeric_limits<double>::epsilon() *
                                   std::max(1.0, std::abs(x_))) {
                throw Error(ErrorCode::DidNotConverge,
                            "DOP853: step size underflow; tolerance cannot be met");
            }

            State k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yt;
            const auto stage = [&](State& out, double c, auto&& combine) {
                for (std::size_t i = 0; i < N; ++i) {
                    yt[i] = y_[i] + h * combine(i);
                }
                out = call(x_ + c * h, yt);
            };
            stage(k2, c2, [&](std::size_t i) { return a21 * k1_[i]; });
            stage(k3, c3, [&](std::size_t i) { return a31 * k1_[i] + a32 * k2[i]; });
            stage(k4, c4, [&](std::size_t i) { return a41 * k1_[i] + a43 * k3[i]; });
            stage(k5, c5, [&](std::size_t i) {
                return a51 * k1_[i] + a53 * k3[i] + a54 * k4[i];
            });
            stage(k6, c6, [&](std::size_t i) {
                return a61 * k1_[i] + a64 * k4[i] + a65 * k5[i];
            });
            stage(k7, c7, [&](std::size_t i) {
                return a71 * k1_[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i];
            });
            stage(k8, c8, [&](std::size_t i) {
                return a81 * k1_[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i];
            });
            stage(k9, c9, [&](std::size_t i) {
                return a91 * k1_[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] +
                       a98 * k8[i];
            });
            stage(k10, c10, [&](std::size_t i) {
                return a101 * k1_[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] +
                       a107 * k7[i] + a108 * k8[i] + a109 * k9[i];
            });
            stage(k11, c11, [&](std::size_t i) {
                return a111 * k1_[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] +
                       a117 * k7[i] + a118 * k8[i] + a119 * k9[i] + a1110 * k10[i];
            });
            stage(k12, 1.0, [&](std::size_t i) {
                return a121 * k1_[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] +
                       a127 * k7[i] + a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] +
                       a1211 * k11[i];
            });

            State y_new;
            double err3 = 0.0;
            double err5 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const std::complex<double> incr = b1 * k1_[i] + b6 * k6[i] + b7 * k7[i] +
                                                  b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                                                  b11 * k11[i] + b12 * k12[i];
                y_new[i] = y_[i] + h * incr;
                const double sk =
                    opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
                const double e3 = std::abs(incr - bhh1 * k1_[i] - bhh2 * k9[i] - bhh3 * k12[i]) / sk;
                const double e5 = std::abs(er1 * k1_[i] + er6 * k6[i] + er7 * k7[i] +
                                           er8 * k8[i] + er9 * k9[i] + er10 * k10[i] +
                                           er11 * k11[i] + er12 * k12[i]) /
                                  sk;
                err3 += e3 * e3;
                err5 += e5 * e5;
            }
            double deno = err5 + 0.01 * err3;
            if (deno <= 0.0) {
                deno = 1.0;
            }
            const double err = std::abs(h) * err5 / std::sqrt(static_cast<double>(N) * deno);

            // Hairer's default controller: safety 0.9, factor clamped to [1/3, 6].
            const double fac11 = std::pow(err, 0.125);
            const double fac = std::clamp(fac11 / 0.9, 1.0 / 6.0, 3.0);
            double h_new = h / fac;

            if (err <= 1.0 && std::isfinite(err)) {
                ++stats_.accepted;
                State k13 = call(x_ + h, y_new);
                x_ = last ? x_end : x_ + h;
                y_ = y_new;
                k1_ = k13;
                if (prev_rejected) {
                    h_new = dir * std::min(std::abs(h_new), std::abs(h));
                }
                prev_rejected = false;
                // keep the controller's proposal, not the clipped final step
                if (!last || std::abs(h_new) > std::abs(h_)) {
                    h_ = std::abs(h_new);
                }
            } else {
                ++stats_.rejected;
                last = false;
                prev_rejected = true;
                h_ = std::isfinite(err) ? std::abs(h) / std::min(3.0, fac11 / 0.9)
                                        : std::abs(h) * 0.1;
            }
        }
        return y_;
    }

private:
    State call(double x, const State& y)
    {
        ++stats_.rhs_calls;
        return rhs_(x, y);
    }

    double norm_scaled(const State& v, const State& scale_ref) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt_.atol + opt_.rtol * std::abs(scale_ref[i]);
            const double q = std::abs(v[i]) / sk;
            s += q * q;
        }
        return std::sqrt(s / static_cast<double>(N));
    }

    // Hairer's starting step heuristic.
    double initial_step(double dir, double span)
    {
        const double d0 = norm_scaled(y_, y_);
        const double d1 = norm_scaled(k1_, y_);
        double h0 = (d0 <= 1e-10 || d1 <= 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        State y1;
        for (std::size_t i = 0; i < N; ++i) {
            y1[i] = y_[i] + dir * h0 * k1_[i];
        }
        const State f1 = call(x_ + dir * h0, y1);
        State diff;
        for (std::size_t i = 0; i < N; ++i) {
            diff[i] = f1[i] - k1_[i];
        }
        const double d2 = norm_scaled(diff, y_) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.125);
        return std::min({100.0 * h0, h1, span});
    }

    Rhs rhs_;
    Dop853Options opt_;
    double x_;
    State y_;
    State k1_{};
    double h_ = 0.0;
    double direction_ = 0.0;
    Dop853Stats stats_;
};

template <std::size_t N, class Rhs>
Dop853(Rhs, double, const ComplexState<N>&, Dop853Options) -> Dop853<N, Rhs>;

/// One-shot integration from x0 to x1.
template <std::size_t N, class Rhs>
ComplexState<N> integrate(Rhs rhs, double x0, const ComplexState<N>& y0, double x1,
                          Dop853Options opt = {}, Dop853Stats* stats = nullptr)
{
    Dop853<N, Rhs> stepper(std::move(rhs), x0, y0, opt);
    ComplexState<N> out = stepper.advance_to(x1);
    if (stats != nullptr) {
        *stats = stepper.stats();
    }
    return out;
}

} // namespace heunrad::ode

#endif
