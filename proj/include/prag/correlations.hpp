//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/correlations.hpp
//! Closed-form first- and second-order temporal coherence of PRAG states.
//---------------------------------------------------------------------------//
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "prag_state.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
/*!
 * A correlation function sampled on a delay grid.
 *
 * The standard error column is filled only by Monte-Carlo estimators.
 */
template<class T>
struct BasicCorrelationTrace
{
    std::vector<double> tau;
    std::vector<T> value;
    std::optional<std::vector<double>> std_error;

    std::size_t size() const { return tau.size(); }

    void validate() const
    {
        detail::require(value.size() == tau.size(),
                        "CorrelationTrace: value length must match tau");
        if (std_error)
        {
            detail::require(std_error->size() == tau.size(),
                            "CorrelationTrace: stderr length must match tau");
        }
        for (std::size_t i = 1; i < tau.size(); ++i)
        {
            detail::require(tau[i] > tau[i - 1],
                            "CorrelationTrace: tau must be strictly increasing");
        }
    }
};

using CorrelationTrace = BasicCorrelationTrace<double>;
using ComplexCorrelationTrace = BasicCorrelationTrace<std::complex<double>>;

//! n equally spaced delays in [lo, hi]
inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    detail::require(n >= 1, "linspace: need at least one point");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = n == 1 ? lo
                        : lo
                              + (hi - lo) * static_cast<double>(i)
                                    / static_cast<double>(n - 1);
    }
    return out;
}

namespace detail
{
//! sum_i w_i exp(-i omega_i tau) over the comb
template<class Weight>
std::complex<double>
comb_field(PragState const& state, double tau, Weight&& weight)
{
    std::complex<double> acc{0, 0};
    for (std::size_t i = 0; i < state.size(); ++i)
    {
        double const w = weight(i);
        if (w == 0)
            continue;
        double const phase = -state.omega(i) * tau;
        acc += w * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}

inline double total_power(PragState const& state)
{
    double p = 0;
    for (std::size_t i = 0; i < state.size(); ++i)
    {
        double const w = state.p_s()[i] + state.p_t()[i];
        if (w != 0)
            p += w;
    }
    return p;
}

inline double sum_ps_sq(PragState const& state)
{
    double s = 0;
    for (double p : state.p_s())
        s += p * p;
    return s;
}

template<class F>
auto make_trace(std::span<double const> taus, F&& f)
{
    using T = decltype(f(0.0));
    BasicCorrelationTrace<T> trace;
    trace.tau.assign(taus.begin(), taus.end());
    trace.value.reserve(taus.size());
    for (double t : taus)
        trace.value.push_back(f(t));
    trace.validate();
    return trace;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Normalized first-order correlation g1(tau) = (1/P) sum (p_s + p_t) e^{-i w tau}.
 *
 * The sum at tau = 0 runs in the same order as the total power, so
 * g1(0) == 1 exactly.
 */
inline std::complex<double> g1(PragState const& state, double tau)
{
    double const p = detail::total_power(state);
    auto const field = detail::comb_field(state, tau, [&](std::size_t i) {
        return state.p_s()[i] + state.p_t()[i];
    });
    return field / p;
}

/*!
 * Normalized second-order correlation
 * g2(tau) = 1 + |g1(tau)|^2 - sum p_s^2 / P^2.
 */
inline double g2_tau(PragState const& state, double tau)
{
    double const p = detail::total_power(state);
    return 1 + std::norm(g1(state, tau)) - detail::sum_ps_sq(state) / (p * p);
}

/*!
 * Equal-time g2 from the power statistics:
 * 2 - (1/N) (1 + Delta^2 p_s / <p_s>^2) / (1 + <p_t>/<p_s>)^2.
 *
 * Undefined without incoherent power; use g2_tau(state, 0) for pure thermal
 * light.
 */
inline double g2_zero(PragState const& state)
{
    auto const s = power_summary(state);
    detail::require(s.mean_ps > 0,
                    "g2_zero: state has no incoherent power (use g2_tau)");
    double const ratio = 1 + s.mean_pt / s.mean_ps;
    return 2
           - (1 + s.relative_width) / static_cast<double>(s.n_modes)
                 / (ratio * ratio);
}

namespace detail
{
//! N powers have sum p^2 <= (sum p)^2, hence var / mean^2 <= N - 1
inline void require_relative_width(std::size_t n_modes, double relative_width)
{
    require(n_modes >= 1, "need N >= 1");
    require(relative_width >= 0, "relative width must be >= 0");
    require(relative_width <= static_cast<double>(n_modes - 1) * (1 + 1e-12),
            "relative width exceeds N - 1");
}
}  // namespace detail

//! Equal-time g2 of N modes with given relative width and no thermal part
inline double g2_zero(std::size_t n_modes, double relative_width)
{
    detail::require_relative_width(n_modes, relative_width);
    return 2 - (1 + relative_width) / static_cast<double>(n_modes);
}

/*!
 * g2(0) versus mode number at fixed relative width, thermal part neglected.
 *
 * The width is capped at its largest possible value N - 1 for small N, so a
 * single mode gives 1.
 */
inline std::vector<std::pair<std::size_t, double>>
g2_mode_sweep(double relative_width, std::size_t n_first, std::size_t n_last)
{
    detail::require(relative_width >= 0,
                    "g2_mode_sweep: relative width must be >= 0");
    detail::require(n_first >= 1 && n_last >= n_first,
                    "g2_mode_sweep: need 1 <= first <= last");
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(n_last - n_first + 1);
    for (std::size_t n = n_first; n <= n_last; ++n)
        out.emplace_back(
            n, g2_zero(n, std::min(relative_width, static_cast<double>(n - 1))));
    return out;
}

inline ComplexCorrelationTrace
g1_trace(PragState const& state, std::span<double const> taus)
{
    return detail::make_trace(taus, [&](double t) { return g1(state, t); });
}

inline CorrelationTrace
g2_trace(PragState const& state, std::span<double const> taus)
{
    return detail::make_trace(taus, [&](double t) { return g2_tau(state, t); });
}

//---------------------------------------------------------------------------//
}  // namespace prag
