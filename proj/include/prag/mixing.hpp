//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/mixing.hpp
//! Superposition of a single-mode laser with a PRAG state.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "correlations.hpp"
#include "error.hpp"
#include "prag_state.hpp"
#include "spectrum.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
/*!
 * PRAG state plus one coherent line at omega_k with power P_l.
 *
 * The broadband part is optional so that a pure laser is representable.
 * The laser frequency need not coincide with a comb mode.
 */
class MixedState
{
  public:
    MixedState(PragState base, double omega_k, double laser_power)
        : base_(std::move(base)), omega_k_(omega_k), p_l_(laser_power)
    {
        this->validate();
    }

    static MixedState laser_only(double omega_k, double laser_power)
    {
        MixedState m(omega_k, laser_power);
        detail::require(laser_power > 0,
                        "MixedState: laser-only state needs positive power");
        return m;
    }

    /*!
     * Laser power chosen so that P_l / (P_l + P_s) equals zeta.
     *
     * zeta = 1 yields the laser alone, carrying the base state's total power.
     */
    static MixedState
    with_zeta(PragState const& base, double omega_k, double zeta)
    {
        detail::require(zeta >= 0 && zeta <= 1, "with_zeta: zeta must be in [0, 1]");
        auto const s = power_summary(base);
        if (zeta == 1)
        {
            return laser_only(omega_k, s.p_total);
        }
        detail::require(s.p_s_total > 0,
                        "with_zeta: base state has no incoherent power");
        return MixedState(base, omega_k, zeta / (1 - zeta) * s.p_s_total);
    }

    std::optional<PragState> const& base() const { return base_; }
    double omega_k() const { return omega_k_; }
    double laser_power() const { return p_l_; }

    //! Incoherent power P_s of the broadband part
    double incoherent_power() const
    {
        return base_ ? power_summary(*base_).p_s_total : 0.0;
    }

    //! Total power P_m = P_l + P_s + P_t
    double total_power() const
    {
        return p_l_ + (base_ ? detail::total_power(*base_) : 0.0);
    }

  private:
    std::optional<PragState> base_;
    double omega_k_{0};
    double p_l_{0};

    MixedState(double omega_k, double laser_power)
        : omega_k_(omega_k), p_l_(laser_power)
    {
        this->validate();
    }

    void validate() const
    {
        detail::require(omega_k_ > 0 && std::isfinite(omega_k_),
                        "MixedState: laser frequency must be positive");
        detail::require(p_l_ >= 0 && std::isfinite(p_l_),
                        "MixedState: laser power must be non-negative");
    }
};

//---------------------------------------------------------------------------//
//! Laser power fraction zeta = P_l / (P_l + P_s)
inline double zeta(double laser_power, double incoherent_power)
{
    detail::require(laser_power >= 0 && incoherent_power >= 0,
                    "zeta: powers must be non-negative");
    detail::require(laser_power + incoherent_power > 0,
                    "zeta: both powers are zero");
    return laser_power / (laser_power + incoherent_power);
}

inline double zeta(MixedState const& state)
{
    return zeta(state.laser_power(), state.incoherent_power());
}

//! First-order correlation including the laser line
inline std::complex<double> g1_mixed(MixedState const& state, double tau)
{
    std::complex<double> field{0, 0};
    if (auto const& b = state.base())
    {
        field = detail::comb_field(
            *b, tau, [&](std::size_t i) { return b->p_s()[i] + b->p_t()[i]; });
    }
    double const phase = -state.omega_k() * tau;
    field += state.laser_power()
             * std::complex<double>(std::cos(phase), std::sin(phase));
    return field / state.total_power();
}

namespace detail
{
inline double coherent_sq_fraction(MixedState const& state)
{
    double const pm = state.total_power();
    double const pl = state.laser_power();
    double const sq = state.base() ? sum_ps_sq(*state.base()) : 0.0;
    return (pl * pl + sq) / (pm * pm);
}
}  // namespace detail

//! g2(tau) = 1 + |g1(tau)|^2 - (P_l^2 + sum p_s^2) / P_m^2
inline double g2_tau_mixed(MixedState const& state, double tau)
{
    return 1 + std::norm(g1_mixed(state, tau))
           - detail::coherent_sq_fraction(state);
}

//! g2(0) = 2 - (P_l^2 + sum p_s^2) / P_m^2
inline double g2_zero_mixed(MixedState const& state)
{
    return 2 - detail::coherent_sq_fraction(state);
}

/*!
 * g2(0) written through the frequency-averaged mode statistics:
 * 2 - (1/N)(1 + rw + P_l^2/(N <p_s>^2)) / (1 + <p_t>/<p_s> + P_l/(N <p_s>))^2.
 */
inline double g2_zero_mixed_statistics(MixedState const& state)
{
    detail::require(state.base().has_value(),
                    "g2_zero_mixed_statistics: needs a broadband part");
    auto const s = power_summary(*state.base());
    detail::require(s.mean_ps > 0,
                    "g2_zero_mixed_statistics: no incoherent power");
    auto const n = static_cast<double>(s.n_modes);
    double const pl = state.laser_power();
    double const num = 1 + s.relative_width + pl * pl / (n * s.mean_ps * s.mean_ps);
    double const den = 1 + s.mean_pt / s.mean_ps + pl / (n * s.mean_ps);
    return 2 - num / (n * den * den);
}

/*!
 * Mixed-light g2 in terms of zeta, thermal power neglected.
 *
 * Without g1_sq the equal-time form is returned; with it, the delay form
 * 1 + |g1|^2 - zeta^2 - (1/N)(1 + rw)(1 - zeta)^2.
 */
inline double g2_zeta_forms(double z,
                            std::size_t n_modes,
                            double relative_width,
                            std::optional<double> g1_sq = std::nullopt)
{
    detail::require(z >= 0 && z <= 1, "g2_zeta_forms: zeta must be in [0, 1]");
    detail::require_relative_width(n_modes, relative_width);
    double const g1 = g1_sq.value_or(1.0);
    return 1 + g1 - z * z
           - (1 + relative_width) / static_cast<double>(n_modes) * (1 - z)
                 * (1 - z);
}

inline CorrelationTrace
g2_trace_mixed(MixedState const& state, std::span<double const> taus)
{
    return detail::make_trace(
        taus, [&](double t) { return g2_tau_mixed(state, t); });
}

//---------------------------------------------------------------------------//
/*!
 * Spectrum of a mixed state: the comb density (p_s + p_t)/delta_omega at
 * each mode plus delta lines that are kept separate from the continuum.
 */
struct MixedSpectrum
{
    std::optional<OpticalSpectrum> continuum;
    std::vector<SpectrumSample> lines;  //!< (omega, power)
};

inline MixedSpectrum mixed_spectrum(MixedState const& state)
{
    MixedSpectrum out;
    if (auto const& b = state.base())
    {
        std::vector<SpectrumSample> samples;
        double const dw = b->grid().delta_omega;
        for (std::size_t i = 0; i < b->size(); ++i)
        {
            samples.push_back({b->omega(i), (b->p_s()[i] + b->p_t()[i]) / dw});
        }
        if (samples.size() >= 2)
        {
            out.continuum = OpticalSpectrum(std::move(samples), UnitTag::arbitrary);
        }
        else
        {
            out.lines.push_back({samples[0].omega, samples[0].density * dw});
        }
    }
    if (state.laser_power() > 0)
    {
        out.lines.push_back({state.omega_k(), state.laser_power()});
    }
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Dimensionless parameters of a Gaussian broadband spectrum mixed with a
 * laser; frequencies and delays are scaled by the spectral sigma.
 */
struct ScaledGaussianParams
{
    double epsilon{0};  //!< P_l / P_s
    double delta_omega_tilde{0};  //!< comb spacing / sigma
    double omega_bar_tilde{0};  //!< central frequency / sigma
    double delta_k_tilde{0};  //!< (central - laser frequency) / sigma

    //! Offset eta derived from the spacing and center
    double eta() const
    {
        return delta_omega_tilde / (2 * std::sqrt(std::numbers::pi))
               * (1 + 1 / (2 * omega_bar_tilde * omega_bar_tilde));
    }

    void validate() const
    {
        detail::require(epsilon >= 0 && std::isfinite(epsilon),
                        "ScaledGaussianParams: epsilon must be >= 0");
        detail::require(delta_omega_tilde > 0,
                        "ScaledGaussianParams: spacing must be positive");
        detail::require(omega_bar_tilde > 0,
                        "ScaledGaussianParams: center must be positive");
        detail::require(std::isfinite(delta_k_tilde),
                        "ScaledGaussianParams: detuning must be finite");
    }
};

inline double gaussian_case_g2(ScaledGaussianParams const& p, double tau_tilde)
{
    p.validate();
    double const t = tau_tilde;
    double const ratio = t / p.omega_bar_tilde;
    double const onepe = 1 + p.epsilon;
    double const bracket
        = std::exp(-t * t) * (1 + ratio * ratio) - p.eta()
          + 2 * p.epsilon * std::exp(-0.5 * t * t)
                * (std::cos(p.delta_k_tilde * t)
                   - ratio * std::sin(p.delta_k_tilde * t));
    return 1 + bracket / (onepe * onepe);
}

inline double gaussian_case_g2_zero(ScaledGaussianParams const& p)
{
    p.validate();
    double const onepe = 1 + p.epsilon;
    return 2 - (p.eta() + p.epsilon * p.epsilon) / (onepe * onepe);
}

//---------------------------------------------------------------------------//
}  // namespace prag
