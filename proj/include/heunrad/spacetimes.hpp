#ifndef HEUNRAD_SPACETIMES_HPP
#define HEUNRAD_SPACETIMES_HPP

// The two static backgrounds: the Dirac background with area function
// r^2 f(r) and the Klein-Gordon background with Delta = r^2 - 2Mr + M^2(1-a^2).
// Geometric units; all inputs are raw positive reals.

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace heunrad {

namespace detail {
inline void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw Error(ErrorCode::InvalidParameter, what);
    }
}
} // namespace detail

class DiracBackground {
public:
    DiracBackground(double M, double p, double a) : M_(M), p_(p), a_(a)
    {
        detail::require(std::isfinite(M) && M > 0.0, "M must be a positive real");
        detail::require(std::isfinite(p), "p must be finite");
        detail::require(std::isfinite(a) && a >= 0.0 && a <= 1.0, "a must lie in [0, 1]");
    }

    [[nodiscard]] double M() const noexcept { return M_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double a() const noexcept { return a_; }

    /// (p+1)a^2 + p - 1: twice the r^2 coefficient of r^2 f(r).
    [[nodiscard]] double K() const noexcept { return (p_ + 1.0) * a_ * a_ + p_ - 1.0; }
    /// a^2 p + 2a + p = r^2 f(2M) / M^2
    [[nodiscard]] double P() const noexcept { return a_ * a_ * p_ + 2.0 * a_ + p_; }
    /// a^2 p - 2a + p = r^2 f(0) / M^2
    [[nodiscard]] double Q() const noexcept { return a_ * a_ * p_ - 2.0 * a_ + p_; }

    /// Throws unless r^2 f(r) > 0 on [lo, hi].
    void require_positive_area(double lo, double hi) const;

private:
    double M_;
    double p_;
    double a_;
};

struct DiracMode {
    double k = 0.0;
    double lambda = 0.0; ///< enters the radial system only through lambda^2
};

/// r^2 f(r) = 1/2 r (r-2M)[p(1+a^2)+a^2-1] + 2Mar + M^2[p(1+a^2)-2a]
[[nodiscard]] inline double rsq_f(const DiracBackground& bg, double r) noexcept
{
    const double M = bg.M();
    const double p = bg.p();
    const double a = bg.a();
    return 0.5 * r * (r - 2.0 * M) * (p * (1.0 + a * a) + a * a - 1.0) + 2.0 * M * a * r +
           M * M * (p * (1.0 + a * a) - 2.0 * a);
}

/// d(r^2 f)/dr
[[nodiscard]] inline double rsq_f_prime(const DiracBackground& bg, double r) noexcept
{
    const double M = bg.M();
    return bg.K() * r - M * (bg.K() - 2.0 * bg.a());
}

[[nodiscard]] inline double h_squared(const DiracBackground& bg, double r)
{
    const double area = rsq_f(bg, r);
    if (area == 0.0) {
        throw Error(ErrorCode::DivisionBySingularArea, "r^2 f(r) vanishes at r = " + std::to_string(r));
    }
    return (r * r - 2.0 * bg.M() * r) / area;
}

inline void DiracBackground::require_positive_area(double lo, double hi) const
{
    // r^2 f is a quadratic; its minimum on [lo, hi] sits at an endpoint or the vertex.
    double rmin = std::min(rsq_f(*this, lo), rsq_f(*this, hi));
    const double K = this->K();
    if (K != 0.0) {
        const double vertex = M_ * (K - 2.0 * a_) / K;
        if (vertex > lo && vertex < hi) {
            rmin = std::min(rmin, rsq_f(*this, vertex));
        }
    }
    if (!(rmin > 0.0)) {
        throw Error(ErrorCode::InvalidParameter,
                    "r^2 f(r) is not positive on the requested range");
    }
}

class KGBackground {
public:
    KGBackground(double M, double a) : M_(M), a_(a)
    {
        detail::require(std::isfinite(M) && M > 0.0, "M must be a positive real");
        // a = 0 merges the horizons; the Heun mapping divides by r1 - r2.
        detail::require(std::isfinite(a) && a > 0.0 && a <= 1.0, "a must lie in (0, 1]");
    }

    [[nodiscard]] double M() const noexcept { return M_; }
    [[nodiscard]] double a() const noexcept { return a_; }

private:
    double M_;
    double a_;
};

struct KGMode {
    double omega = 0.0;
    int n = 0;
    double lambda = 0.0; ///< separation constant, l(l+1) on the Legendre branch

    [[nodiscard]] static KGMode legendre(double omega, int l, int n)
    {
        detail::require(l >= 0 && std::abs(n) <= l, "require 0 <= |n| <= l");
        return {omega, n, static_cast<double>(l) * (l + 1)};
    }
};

[[nodiscard]] inline double kg_delta(const KGBackground& bg, double r) noexcept
{
    const double M = bg.M();
    return r * r - 2.0 * M * r + M * M * (1.0 - bg.a() * bg.a());
}

struct Horizons {
    double r1 = 0.0; ///< outer
    double r2 = 0.0; ///< inner
};

[[nodiscard]] inline Horizons kg_horizons(const KGBackground& bg) noexcept
{
    return {bg.M() * (1.0 + bg.a()), bg.M() * (1.0 - bg.a())};
}

} // namespace heunrad

#endif
