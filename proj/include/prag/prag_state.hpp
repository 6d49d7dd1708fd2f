//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/prag_state.hpp
//! Discrete-mode phase-randomized Gaussian (PRAG) light state.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "error.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
/*!
 * Equally spaced comb of longitudinal mode frequencies.
 *
 * Mode i (zero-based) sits at omega_1 + i * delta_omega.
 */
struct ModeGrid
{
    double omega_1{0};  //!< [rad/s]
    double delta_omega{1};  //!< [rad/s]
    std::size_t count{1};

    double omega(std::size_t i) const
    {
        return omega_1 + static_cast<double>(i) * delta_omega;
    }
    double omega_last() const { return omega(count - 1); }

    void validate() const
    {
        detail::require(count >= 1, "ModeGrid: need at least one mode");
        detail::require(delta_omega > 0 && std::isfinite(delta_omega),
                        "ModeGrid: delta_omega must be positive");
        detail::require(std::isfinite(omega_1), "ModeGrid: omega_1 not finite");
    }
};

//! Comb with the given spacing covering [lo, hi]
inline ModeGrid comb_covering(double lo, double hi, double spacing)
{
    detail::require(hi >= lo, "comb_covering: empty interval");
    detail::require(spacing > 0, "comb_covering: spacing must be positive");
    auto const n = static_cast<std::size_t>(std::floor((hi - lo) / spacing)) + 1;
    return {lo, spacing, n};
}

//---------------------------------------------------------------------------//
/*!
 * Mean thermal photon number of a mode (Bose-Einstein).
 *
 * Exactly zero at T = 0; evaluated through exp(-x) for large x so it never
 * overflows.
 */
inline double thermal_occupation(double omega, double temperature)
{
    detail::require(omega > 0, "thermal_occupation: omega must be positive");
    detail::require(temperature >= 0,
                    "thermal_occupation: temperature must be non-negative");
    if (temperature == 0)
    {
        return 0;
    }
    double const x = hbar * omega / (boltzmann * temperature);
    if (x < 1)
    {
        return 1 / std::expm1(x);
    }
    return std::exp(-x) / -std::expm1(-x);
}

//! Energy flux per photon in a mode of a cavity of length L: hbar omega c / L
inline double photon_power(double omega, double length)
{
    return hbar * omega * speed_of_light / length;
}

/*!
 * Photon-number distribution of a (phase-randomized) coherent state,
 * exp(-m) m^n / n!, evaluated in log space.
 */
inline double photon_number_pmf(double mean_photons, long n)
{
    detail::require(mean_photons >= 0,
                    "photon_number_pmf: mean must be non-negative");
    detail::require(n >= 0, "photon_number_pmf: n must be non-negative");
    if (mean_photons == 0)
    {
        return n == 0 ? 1.0 : 0.0;
    }
    auto const dn = static_cast<double>(n);
    return std::exp(-mean_photons + dn * std::log(mean_photons)
                    - std::lgamma(dn + 1));
}

//---------------------------------------------------------------------------//
/*!
 * PRAG state on a mode comb.
 *
 * Holds the incoherent (displaced, phase-randomized) power p_s and the
 * thermal power p_t of every mode. Phases are never stored: the ensemble
 * average removes them. Powers may be in watts or arbitrary units; every
 * correlation function is scale invariant.
 */
class PragState
{
  public:
    PragState(ModeGrid grid,
              std::vector<double> p_s,
              std::vector<double> p_t = {},
              double temperature = 0)
        : grid_(grid)
        , p_s_(std::move(p_s))
        , p_t_(std::move(p_t))
        , temperature_(temperature)
    {
        if (p_t_.empty())
        {
            p_t_.assign(p_s_.size(), 0.0);
        }
        this->validate();
    }

    /*!
     * Build from mean displaced photon numbers |gamma_i|^2 of a cavity of
     * length L (metres), keeping them for photon-counting use.
     */
    static PragState from_gamma_sq(ModeGrid grid,
                                   std::vector<double> gamma_sq,
                                   double length,
                                   double temperature = 0)
    {
        detail::require(length > 0, "PragState: cavity length must be positive");
        detail::require(gamma_sq.size() == grid.count,
                        "PragState: gamma_sq length must equal mode count");
        std::vector<double> p_s(grid.count), p_t(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i)
        {
            double const w = grid.omega(i);
            p_s[i] = photon_power(w, length) * gamma_sq[i];
            p_t[i] = temperature > 0 ? photon_power(w, length)
                                           * thermal_occupation(w, temperature)
                                     : 0.0;
        }
        PragState s(grid, std::move(p_s), std::move(p_t), temperature);
        s.gamma_sq_ = std::move(gamma_sq);
        s.length_ = length;
        return s;
    }

    /*!
     * Deterministic state with N modes whose incoherent powers have mean 1
     * and relative variance Delta^2 p / <p>^2 = relative_width exactly.
     *
     * One mode carries the excess power, the remaining N-1 are equal; any
     * relative width in [0, N-1] is reachable with non-negative powers.
     */
    static PragState with_statistics(std::size_t n,
                                     double relative_width,
                                     double omega_1 = thz_to_rad_s(242.6),
                                     double delta_omega = thz_to_rad_s(1.465e-2))
    {
        detail::require(n >= 1, "with_statistics: need N >= 1");
        auto const dn = static_cast<double>(n);
        detail::require(relative_width >= 0 && relative_width <= dn - 1,
                        "with_statistics: relative width must be in [0, N-1]");
        double const t = n > 1 ? std::sqrt(relative_width / (dn - 1)) : 0.0;
        std::vector<double> p(n, 1.0 - t);
        p[n / 2] += t * dn;
        return PragState({omega_1, delta_omega, n}, std::move(p));
    }

    ModeGrid const& grid() const { return grid_; }
    std::size_t size() const { return grid_.count; }
    double omega(std::size_t i) const { return grid_.omega(i); }
    std::vector<double> const& p_s() const { return p_s_; }
    std::vector<double> const& p_t() const { return p_t_; }
    double temperature() const { return temperature_; }
    std::optional<std::vector<double>> const& gamma_sq() const
    {
        return gamma_sq_;
    }
    std::optional<double> length() const { return length_; }

    //! Same state with |gamma_i|^2 recorded for a cavity of length L
    PragState with_length(double length) const
    {
        detail::require(length > 0, "PragState: cavity length must be positive");
        PragState s = *this;
        std::vector<double> gamma_sq(grid_.count);
        for (std::size_t i = 0; i < grid_.count; ++i)
        {
            gamma_sq[i] = p_s_[i] / photon_power(grid_.omega(i), length);
        }
        s.gamma_sq_ = std::move(gamma_sq);
        s.length_ = length;
        return s;
    }

    //! Same state with every power multiplied by c > 0
    PragState scaled(double c) const
    {
        detail::require(c > 0, "PragState::scaled: factor must be positive");
        auto ps = p_s_;
        auto pt = p_t_;
        for (auto& v : ps)
            v *= c;
        for (auto& v : pt)
            v *= c;
        return PragState(grid_, std::move(ps), std::move(pt), temperature_);
    }

  private:
    ModeGrid grid_;
    std::vector<double> p_s_;
    std::vector<double> p_t_;
    double temperature_{0};
    std::optional<std::vector<double>> gamma_sq_;
    std::optional<double> length_;

    void validate() const
    {
        grid_.validate();
        detail::require(p_s_.size() == grid_.count && p_t_.size() == grid_.count,
                        "PragState: power lists must match the mode count ("
                            + std::to_string(grid_.count) + ")");
        detail::require(temperature_ >= 0,
                        "PragState: temperature must be non-negative");
        bool any = false;
        for (std::size_t i = 0; i < grid_.count; ++i)
        {
            detail::require(p_s_[i] >= 0 && p_t_[i] >= 0
                                && std::isfinite(p_s_[i])
                                && std::isfinite(p_t_[i]),
                            "PragState: powers must be finite and non-negative");
            any = any || p_s_[i] + p_t_[i] > 0;
        }
        detail::require(any, "PragState: at least one mode must carry power");
    }
};

//---------------------------------------------------------------------------//
/*!
 * Frequency-averaged power statistics.
 *
 * Averages run over the N active modes (p_s + p_t > 0) with population
 * (1/N) normalization. Modes that carry no power are not emitting and do not
 * count toward N; no correlation function depends on that choice.
 */
struct PowerSummary
{
    std::size_t n_modes{0};
    double p_s_total{0};
    double p_t_total{0};
    double p_total{0};
    double mean_ps{0};
    double var_ps{0};
    double mean_pt{0};
    //! var_ps / mean_ps^2, NaN when there is no incoherent power
    double relative_width{0};
    //! sum over modes of p_s^2
    double sum_ps_sq{0};
};

inline PowerSummary power_summary(PragState const& state)
{
    PowerSummary s;
    for (std::size_t i = 0; i < state.size(); ++i)
    {
        double const ps = state.p_s()[i];
        double const pt = state.p_t()[i];
        if (ps + pt <= 0)
            continue;
        ++s.n_modes;
        s.p_s_total += ps;
        s.p_t_total += pt;
        s.sum_ps_sq += ps * ps;
    }
    auto const n = static_cast<double>(s.n_modes);
    s.p_total = s.p_s_total + s.p_t_total;
    s.mean_ps = s.p_s_total / n;
    s.mean_pt = s.p_t_total / n;
    // Two-pass variance
    double m2 = 0;
    for (std::size_t i = 0; i < state.size(); ++i)
    {
        double const ps = state.p_s()[i];
        if (ps + state.p_t()[i] <= 0)
            continue;
        m2 += (ps - s.mean_ps) * (ps - s.mean_ps);
    }
    s.var_ps = m2 / n;
    s.relative_width = s.mean_ps > 0
                           ? s.var_ps / (s.mean_ps * s.mean_ps)
                           : std::numeric_limits<double>::quiet_NaN();
    return s;
}

//---------------------------------------------------------------------------//
}  // namespace prag
