//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/numerics.hpp
//! Summation, quadrature, and filtering utilities shared by the models.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "constants.hpp"
#include "error.hpp"

namespace prag::numerics
{
//---------------------------------------------------------------------------//
/*!
 * Even-index Bernoulli number B_k for 2 <= k <= 20.
 */
inline double bernoulli(int k)
{
    // B_2 ... B_20 as exact rationals
    static constexpr std::array<std::array<double, 2>, 10> table = {{
        {1.0, 6.0},
        {-1.0, 30.0},
        {1.0, 42.0},
        {-1.0, 30.0},
        {5.0, 66.0},
        {-691.0, 2730.0},
        {7.0, 6.0},
        {-3617.0, 510.0},
        {43867.0, 798.0},
        {-174611.0, 330.0},
    }};
    if (k < 2 || k > 20 || k % 2 != 0)
    {
        throw InvalidInput("bernoulli: index must be even and in [2, 20], got "
                           + std::to_string(k));
    }
    auto const& r = table[static_cast<std::size_t>(k / 2 - 1)];
    return r[0] / r[1];
}

//---------------------------------------------------------------------------//
// QUADRATURE
//---------------------------------------------------------------------------//
struct IntegrationResult
{
    double value{0};
    double error_estimate{0};
    bool converged{true};
};

/*!
 * Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
 *
 * The interval is first split into equal panels, each refined adaptively, so
 * that narrow features on a wide interval cannot be skipped by a lucky
 * agreement of the coarsest Gauss and Kronrod estimates. Convergence means
 * the summed error estimate is below rel_tol times the L1 norm.
 */
template<class F>
IntegrationResult integrate(F&& f,
                            double a,
                            double b,
                            double rel_tol = 1e-9,
                            unsigned max_depth = 30,
                            unsigned panels = 16)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    detail::require(panels >= 1, "integrate: need at least one panel");
    IntegrationResult result;
    double l1_total = 0;
    double const width = (b - a) / panels;
    for (unsigned i = 0; i < panels; ++i)
    {
        double const lo = a + i * width;
        double const hi = i + 1 == panels ? b : lo + width;
        double err = 0, l1 = 0;
        result.value += GK::integrate(
            [&f](double x) { return static_cast<double>(f(x)); },
            lo,
            hi,
            max_depth,
            rel_tol,
            &err,
            &l1);
        result.error_estimate += err;
        l1_total += l1;
    }
    result.converged = !(result.error_estimate > rel_tol * l1_total);
    return result;
}

//! Composite trapezoid rule on (possibly non-uniform) samples
inline double trapezoid(std::span<double const> x, std::span<double const> y)
{
    detail::require(x.size() == y.size(), "trapezoid: size mismatch");
    double sum = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return sum;
}

//---------------------------------------------------------------------------//
// FINITE DIFFERENCES
//---------------------------------------------------------------------------//
/*!
 * Fornberg weights for the derivative of given order at 0 on the stencil
 * offsets (in units of the step).
 */
inline std::vector<double>
fornberg_weights(std::span<double const> offsets, int order)
{
    auto const n = offsets.size();
    auto const m = static_cast<std::size_t>(order);
    detail::require(n > m, "fornberg_weights: stencil too small");
    // c[j][k]: weight of node j for derivative k
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = offsets[0];
    for (std::size_t i = 1; i < n; ++i)
    {
        auto const mn = std::min(i, m);
        double c2 = 1.0;
        double const c5 = c4;
        c4 = offsets[i];
        for (std::size_t j = 0; j < i; ++j)
        {
            double const c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if (j == i - 1)
            {
                for (std::size_t k = mn; k >= 1; --k)
                {
                    c[i][k] = c1
                              * (static_cast<double>(k) * c[i - 1][k - 1]
                                 - c5 * c[i - 1][k])
                              / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
            {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1])
                          / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        w[j] = c[j][m];
    }
    return w;
}

/*!
 * Fourth-order accurate central difference of f at x.
 */
template<class F>
double central_derivative(F&& f, double x, int order, double h)
{
    detail::require(order >= 1, "central_derivative: order must be >= 1");
    int const half = (order + 1) / 2 + 1;
    std::vector<double> offsets;
    for (int i = -half; i <= half; ++i)
    {
        offsets.push_back(static_cast<double>(i));
    }
    auto const w = fornberg_weights(offsets, order);
    double sum = 0;
    for (std::size_t j = 0; j < offsets.size(); ++j)
    {
        sum += w[j] * f(x + offsets[j] * h);
    }
    return sum / std::pow(h, order);
}

//---------------------------------------------------------------------------//
// EULER-MACLAURIN
//---------------------------------------------------------------------------//
/*!
 * Decomposition of an equally spaced N-point sum.
 *
 * value = integral_term + boundary_term + sum(correction_terms). The
 * residual estimate is the magnitude of the first omitted correction.
 */
struct EulerMaclaurinResult
{
    double value{0};
    double integral_term{0};
    double boundary_term{0};
    std::vector<double> correction_terms;
    double residual_estimate{0};
};

/*!
 * Approximate sum_{i=1}^{N} f(a + (i-1) Delta) with Delta = (b-a)/(N-1),
 * keeping corrections m = 1 .. M-1.
 *
 * The derivative callable is invoked as derivative(order, x).
 */
template<class F, class D>
EulerMaclaurinResult euler_maclaurin_sum(
    F&& f, D&& derivative, double a, double b, std::size_t n, int m)
{
    detail::require(n >= 2, "euler_maclaurin_sum: need N >= 2");
    detail::require(m >= 1 && 2 * m <= 20,
                    "euler_maclaurin_sum: need 1 <= M <= 10");
    detail::require(b > a, "euler_maclaurin_sum: need b > a");
    double const delta = (b - a) / static_cast<double>(n - 1);

    EulerMaclaurinResult r;
    r.integral_term = integrate(f, a, b, 1e-13).value / delta;
    r.boundary_term = 0.5 * (f(a) + f(b));

    auto correction = [&](int k) {
        int const order = 2 * k - 1;
        return std::pow(delta, order) * bernoulli(2 * k)
               / std::tgamma(2.0 * k + 1.0)
               * (derivative(order, b) - derivative(order, a));
    };
    r.value = r.integral_term + r.boundary_term;
    for (int k = 1; k < m; ++k)
    {
        r.correction_terms.push_back(correction(k));
        r.value += r.correction_terms.back();
    }
    r.residual_estimate = std::abs(correction(m));
    return r;
}

//! Euler-Maclaurin with derivatives from central differences, h = Delta/8
template<class F>
EulerMaclaurinResult
euler_maclaurin_sum(F&& f, double a, double b, std::size_t n, int m = 2)
{
    detail::require(n >= 2, "euler_maclaurin_sum: need N >= 2");
    double const h = (b - a) / static_cast<double>(n - 1) / 8.0;
    return euler_maclaurin_sum(
        f,
        [&f, h](int order, double x) {
            return central_derivative(f, x, order, h);
        },
        a,
        b,
        n,
        m);
}

//---------------------------------------------------------------------------//
// FILTERING
//---------------------------------------------------------------------------//
/*!
 * Blackman-windowed sinc low-pass taps, unit DC gain.
 *
 * \param cutoff normalized cutoff in cycles per sample, in (0, 0.5)
 */
inline std::vector<double> blackman_sinc_taps(double cutoff, std::size_t taps)
{
    detail::require(cutoff > 0 && cutoff < 0.5,
                    "blackman_sinc_taps: cutoff must be in (0, 0.5)");
    detail::require(taps >= 3 && taps % 2 == 1,
                    "blackman_sinc_taps: need an odd tap count >= 3");
    std::vector<double> h(taps);
    double const mid = 0.5 * static_cast<double>(taps - 1);
    double sum = 0;
    for (std::size_t n = 0; n < taps; ++n)
    {
        double const x = static_cast<double>(n) - mid;
        double const sinc
            = x == 0 ? 2 * cutoff
                     : std::sin(two_pi * cutoff * x) / (std::numbers::pi * x);
        double const phase = two_pi * static_cast<double>(n)
                             / static_cast<double>(taps - 1);
        double const window
            = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2 * phase);
        h[n] = sinc * window;
        sum += h[n];
    }
    for (auto& v : h)
    {
        v /= sum;
    }
    return h;
}

//! Default tap count: transition band about as wide as the cutoff itself
inline std::size_t default_lowpass_taps(double cutoff)
{
    auto taps = static_cast<std::size_t>(std::ceil(5.5 / cutoff));
    return taps | 1u;
}

/*!
 * Zero-phase low-pass filter of a uniformly sampled real series.
 *
 * The windowed-sinc FIR is run forward then backward over a mirrored
 * extension of the signal, which cancels the group delay and squares the
 * magnitude response. Mirroring keeps the local mean at the ends even when
 * they fall on a strong oscillation.
 *
 * \param sample_interval spacing of the samples (e.g. seconds)
 * \param cutoff angular cutoff frequency in radians per unit of the spacing
 * \param taps FIR length, 0 selects default_lowpass_taps
 */
inline std::vector<double> lowpass_zero_phase(std::span<double const> signal,
                                              double sample_interval,
                                              double cutoff,
                                              std::size_t taps = 0)
{
    detail::require(sample_interval > 0,
                    "lowpass_zero_phase: sample interval must be positive");
    double const fc = cutoff / two_pi * sample_interval;
    if (!(fc > 0 && fc < 0.5))
    {
        throw InvalidInput("lowpass_zero_phase: cutoff must lie in (0, Nyquist)");
    }
    if (taps == 0)
    {
        taps = default_lowpass_taps(fc);
    }
    auto const h = blackman_sinc_taps(fc, taps);
    auto const n = signal.size();
    if (n == 0)
    {
        return {};
    }

    // Even extension: x[-k] = x[k]
    std::size_t const pad = std::min(taps, n - 1);
    std::vector<double> x;
    x.reserve(n + 2 * pad);
    for (std::size_t k = pad; k >= 1; --k)
    {
        x.push_back(signal[k]);
    }
    x.insert(x.end(), signal.begin(), signal.end());
    for (std::size_t k = 1; k <= pad; ++k)
    {
        x.push_back(signal[n - 1 - k]);
    }

    auto const len = x.size();
    std::vector<double> y(len, 0.0);
    for (std::size_t i = 0; i < len; ++i)
    {
        double acc = 0;
        std::size_t const kmax = std::min(taps - 1, i);
        for (std::size_t k = 0; k <= kmax; ++k)
        {
            acc += h[k] * x[i - k];
        }
        y[i] = acc;
    }
    std::vector<double> z(len, 0.0);
    for (std::size_t i = 0; i < len; ++i)
    {
        double acc = 0;
        std::size_t const kmax = std::min(taps - 1, len - 1 - i);
        for (std::size_t k = 0; k <= kmax; ++k)
        {
            acc += h[k] * y[i + k];
        }
        z[i] = acc;
    }
    return {z.begin() + static_cast<std::ptrdiff_t>(pad),
            z.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

//---------------------------------------------------------------------------//
}  // namespace prag::numerics
