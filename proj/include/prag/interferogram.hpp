//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/interferogram.hpp
//! Two-photon-absorption interferometric autocorrelation: synthesis from a
//! stochastic field and recovery of g2 by fringe removal.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "constants.hpp"
#include "correlations.hpp"
#include "error.hpp"
#include "mixing.hpp"
#include "numerics.hpp"
#include "oracle.hpp"
#include "prag_state.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
/*!
 * TPA counts on a uniform delay grid.
 *
 * Synthesized interferograms also carry the Monte-Carlo standard error and
 * the fringe carrier frequency used for the field envelope.
 */
struct Interferogram
{
    std::vector<double> tau;
    std::vector<double> counts;
    std::optional<std::vector<double>> std_error;
    std::optional<double> carrier;  //!< [rad/s]

    double spacing() const { return tau.size() > 1 ? tau[1] - tau[0] : 0.0; }

    void validate() const
    {
        detail::require(tau.size() >= 3, "Interferogram: need at least 3 samples");
        detail::require(counts.size() == tau.size(),
                        "Interferogram: counts length must match tau");
        if (std_error)
        {
            detail::require(std_error->size() == tau.size(),
                            "Interferogram: stderr length must match tau");
        }
        double const d = spacing();
        detail::require(d > 0, "Interferogram: tau must be increasing");
        for (std::size_t i = 1; i < tau.size(); ++i)
        {
            detail::require(std::abs(tau[i] - tau[i - 1] - d) <= 1e-6 * d,
                            "Interferogram: tau grid must be uniform");
        }
    }
};

//! Largest delay step that keeps 8 samples per optical period
inline double max_fringe_step(double omega_bar)
{
    return two_pi / omega_bar / 8;
}

/*!
 * Symmetric delay grid k T / M, |k T / M| <= tau_max, commensurate with the
 * comb period T = 2 pi / delta_omega so that synthesis needs no snapping.
 */
inline std::vector<double>
tpa_delay_grid(ModeGrid const& grid, double tau_max, std::size_t samples_per_period)
{
    grid.validate();
    detail::require(tau_max > 0, "tpa_delay_grid: tau_max must be positive");
    detail::require(samples_per_period >= 8,
                    "tpa_delay_grid: need at least 8 samples per period");
    double const dt = two_pi / grid.delta_omega / static_cast<double>(samples_per_period);
    auto const k = static_cast<long>(std::floor(tau_max / dt));
    std::vector<double> out;
    for (long i = -k; i <= k; ++i)
        out.push_back(static_cast<double>(i) * dt);
    return out;
}

namespace detail
{
//---------------------------------------------------------------------------//
struct FftwFree
{
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

inline FftwBuffer fftw_buffer(std::size_t n)
{
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!p)
        throw std::bad_alloc();
    return FftwBuffer(p);
}

//! Planner calls are not thread-safe in FFTW
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

//! Forward and backward in-place-capable plans for length-M transforms
class FftPlans
{
  public:
    explicit FftPlans(std::size_t m) : m_(m)
    {
        auto a = fftw_buffer(m), b = fftw_buffer(m);
        std::lock_guard lock(fftw_planner_mutex());
        auto const n = static_cast<int>(m);
        fwd_ = fftw_plan_dft_1d(n, a.get(), b.get(), FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, a.get(), b.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPlans()
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftPlans(FftPlans const&) = delete;
    FftPlans& operator=(FftPlans const&) = delete;

    void forward(fftw_complex* in, fftw_complex* out) const
    {
        fftw_execute_dft(fwd_, in, out);
    }
    void backward(fftw_complex* in, fftw_complex* out) const
    {
        fftw_execute_dft(bwd_, in, out);
    }
    std::size_t size() const { return m_; }

  private:
    std::size_t m_;
    fftw_plan fwd_{};
    fftw_plan bwd_{};
};

inline std::complex<double>& as_complex(fftw_complex& c)
{
    return reinterpret_cast<std::complex<double>&>(c);
}

//! Round x to the nearest integer index, as a signed value
inline long nearest_index(double x)
{
    return static_cast<long>(std::lround(x));
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Ideal TPA interferogram <|E(t) + E(t + tau)|^4>.
 *
 * Each realization is averaged over one comb period T = 2 pi / delta_omega,
 * which is exact for a field periodic in T. A laser line is moved to the
 * nearest comb frequency. Writing E(t) = e^{-i w0 t} F(t) with carrier w0
 * on the comb, the period average reduces to
 *   2 <I^2> + 4 C1(tau) + 4 Re(e^{-i w0 tau} C2(tau))
 *   + 2 Re(e^{-2i w0 tau} C3(tau)),
 * with C1 = <I(t) I(t+tau)>, C2 = <F*(t) F(t+tau) (I(t) + I(t+tau))> and
 * C3 = <F*(t)^2 F(t+tau)^2>, all evaluated as circular correlations by FFT.
 *
 * The time step is T/M with M = round(T / d tau), so every requested delay
 * is snapped to a multiple of the step. The delay grid must be uniform and
 * sample the optical carrier at least 8 times per period.
 */
inline Interferogram synthesize_tpa(FieldModel const& model,
                                    std::span<double const> tau_grid,
                                    OracleConfig const& config)
{
    config.validate();
    detail::require(model.grid().has_value(),
                    "synthesize_tpa: the state needs a mode comb");
    detail::require(tau_grid.size() >= 3, "synthesize_tpa: need at least 3 delays");
    auto const& grid = *model.grid();
    double const dtau = tau_grid[1] - tau_grid[0];
    for (std::size_t i = 1; i < tau_grid.size(); ++i)
    {
        detail::require(std::abs(tau_grid[i] - tau_grid[i - 1] - dtau) <= 1e-6 * dtau,
                        "synthesize_tpa: delay grid must be uniform");
    }

    // Carrier: power-weighted mean frequency, moved onto the comb
    double wsum = 0;
    for (auto const& l : model.lines())
        wsum += (l.p_s + l.p_t) * l.omega;
    long const i0 = detail::nearest_index(
        (wsum / model.total_power() - grid.omega_1) / grid.delta_omega);
    double const carrier = grid.omega(0) + static_cast<double>(i0) * grid.delta_omega;
    if (!(dtau > 0 && dtau <= max_fringe_step(carrier) * (1 + 1e-9)))
    {
        char limit[32];
        std::snprintf(limit, sizeof limit, "%.4g", max_fringe_step(carrier));
        throw InvalidInput(std::string("synthesize_tpa: delay step must be positive "
                                       "and at most ")
                           + limit + " s (8 samples per optical period)");
    }

    double const period = two_pi / grid.delta_omega;
    auto const m = static_cast<std::size_t>(std::llround(period / dtau));
    detail::require(m >= 8, "synthesize_tpa: delay step exceeds the comb period");
    detail::require(m <= (std::size_t{1} << 25),
                    "synthesize_tpa: delay step too fine for one comb period");
    double const dt = period / static_cast<double>(m);

    // Envelope bins: line l sits at (comb index - i0) mod M
    std::vector<std::size_t> bins;
    long const half = static_cast<long>(m / 2);
    for (auto const& l : model.lines())
    {
        long const j = detail::nearest_index((l.omega - grid.omega_1) / grid.delta_omega)
                       - i0;
        detail::require(std::abs(j) < half,
                        "synthesize_tpa: spectrum wider than the sampling band");
        bins.push_back(static_cast<std::size_t>((j % static_cast<long>(m) + static_cast<long>(m))
                                                % static_cast<long>(m)));
    }

    // Delay indices (signed) and output
    Interferogram ig;
    ig.carrier = carrier;
    std::vector<long> lag;
    for (double t : tau_grid)
    {
        long const k = detail::nearest_index(t / dt);
        detail::require(std::abs(k) < static_cast<long>(m),
                        "synthesize_tpa: delay exceeds the comb period");
        lag.push_back(k);
        ig.tau.push_back(static_cast<double>(k) * dt);
    }
    auto const n_tau = lag.size();

    double const work = static_cast<double>(m) * std::log2(static_cast<double>(m)) * 7
                        * static_cast<double>(config.n_realizations);
    if (work > config.max_work)
    {
        throw BudgetExceeded("synthesize_tpa: FFT work exceeds the budget");
    }

    detail::FftPlans const plans(m);
    double const inv_m2 = 1 / (static_cast<double>(m) * static_cast<double>(m));
    auto const um = m;

    auto body = [&](std::size_t r, std::span<double> out) {
        RandomStream rng(config.seed, r);
        auto const a = model.sample(rng).amplitudes;

        thread_local std::size_t buf_size = 0;
        thread_local detail::FftwBuffer f, fi, f2, s_f, s_fi, s_f2, s_i, c1, c2, c3;
        if (buf_size != um)
        {
            for (auto* b : {&f, &fi, &f2, &s_f, &s_fi, &s_f2, &s_i, &c1, &c2, &c3})
                *b = detail::fftw_buffer(um);
            buf_size = um;
        }
        auto cx = [](detail::FftwBuffer& b, std::size_t i) -> std::complex<double>& {
            return detail::as_complex(b[i]);
        };

        // F_t = sum_l A_l e^{-2 pi i j_l t / M}
        std::fill_n(&s_f[0][0], 2 * um, 0.0);
        for (std::size_t l = 0; l < a.size(); ++l)
            cx(s_f, bins[l]) += a[l];
        plans.forward(s_f.get(), f.get());

        for (std::size_t t = 0; t < um; ++t)
        {
            auto const v = cx(f, t);
            double const in = std::norm(v);
            cx(fi, t) = v * in;
            cx(f2, t) = v * v;
            cx(c1, t) = in;
        }
        // Spectra; s_f is reused for the spectrum of F itself
        plans.forward(f.get(), s_f.get());
        plans.forward(fi.get(), s_fi.get());
        plans.forward(f2.get(), s_f2.get());
        plans.forward(c1.get(), s_i.get());

        double d0 = 0;
        for (std::size_t t = 0; t < um; ++t)
            d0 += std::norm(cx(c1, t).real());
        d0 /= static_cast<double>(um);

        // Circular correlations <X*(t) Y(t+k)> = BACKWARD(conj(X^) Y^)_k / M^2
        for (std::size_t k = 0; k < um; ++k)
        {
            auto const fh = cx(s_f, k);
            auto const fih = cx(s_fi, k);
            auto const f2h = cx(s_f2, k);
            auto const ih = cx(s_i, k);
            cx(c1, k) = std::conj(ih) * ih;
            cx(c2, k) = std::conj(fih) * fh + std::conj(fh) * fih;
            cx(c3, k) = std::conj(f2h) * f2h;
        }
        plans.backward(c1.get(), fi.get());
        plans.backward(c2.get(), f2.get());
        plans.backward(c3.get(), f.get());

        for (std::size_t j = 0; j < n_tau; ++j)
        {
            long const k = lag[j];
            auto const idx = static_cast<std::size_t>(k < 0 ? k + static_cast<long>(um) : k);
            double const tau = ig.tau[j];
            double const corr1 = cx(fi, idx).real() * inv_m2;
            auto const corr2 = cx(f2, idx) * inv_m2;
            auto const corr3 = cx(f, idx) * inv_m2;
            std::complex<double> const e1(std::cos(-carrier * tau),
                                          std::sin(-carrier * tau));
            out[j] = 2 * d0 + 4 * corr1 + 4 * (e1 * corr2).real()
                     + 2 * (e1 * e1 * corr3).real();
        }
    };

    // Realizations are expensive here, so every one is its own block
    auto const moments = detail::block_reduce(
        config.n_realizations, n_tau, config.threads, body, 1);
    ig.counts = moments.mean;
    ig.std_error = moments.std_error();
    ig.validate();
    return ig;
}

inline Interferogram synthesize_tpa(PragState const& state,
                                    std::span<double const> tau_grid,
                                    OracleConfig const& config)
{
    return synthesize_tpa(FieldModel(state), tau_grid, config);
}

inline Interferogram synthesize_tpa(MixedState const& state,
                                    std::span<double const> tau_grid,
                                    OracleConfig const& config)
{
    return synthesize_tpa(FieldModel(state), tau_grid, config);
}

//! Mixed state with its laser moved to the nearest mode of the base comb
inline MixedState snap_laser_to_comb(MixedState const& state)
{
    detail::require(state.base().has_value(),
                    "snap_laser_to_comb: the state needs a mode comb");
    auto const& g = state.base()->grid();
    long const k = detail::nearest_index((state.omega_k() - g.omega_1) / g.delta_omega);
    return MixedState(*state.base(),
                      g.omega_1 + static_cast<double>(k) * g.delta_omega,
                      state.laser_power());
}

//---------------------------------------------------------------------------//
/*!
 * Fraction of the non-DC periodogram energy of the counts that falls in
 * [omega_bar/4, 3 omega_bar/4], the gap between envelope and first fringe.
 */
inline double fringe_gap_energy_fraction(Interferogram const& ig, double omega_bar)
{
    ig.validate();
    auto const n = ig.counts.size();
    double mean = 0;
    for (double c : ig.counts)
        mean += c;
    mean /= static_cast<double>(n);

    auto in = detail::fftw_buffer(n), out = detail::fftw_buffer(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        in[i][0] = ig.counts[i] - mean;
        in[i][1] = 0;
    }
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        auto plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(),
                                     FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    double const dw = two_pi / (static_cast<double>(n) * ig.spacing());
    double total = 0, gap = 0;
    for (std::size_t k = 1; k <= n / 2; ++k)
    {
        double const e = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        double const w = static_cast<double>(k) * dw;
        total += e;
        if (w >= 0.25 * omega_bar && w <= 0.75 * omega_bar)
            gap += e;
    }
    return total > 0 ? gap / total : 0.0;
}

/*!
 * Recover g2(tau) from a TPA interferogram.
 *
 * A zero-phase low-pass at omega_bar/2 keeps the envelope
 * E = 2 <I^2> + 4 C1(tau). Since E(0) = 6 <I^2>, subtracting E(0)/3 leaves
 * 4 C1, which is normalized by its mean over the outer 10% of the delay
 * range so that g2 tends to 1 at large delay.
 *
 * Only delays where the filter has full support are returned: the first and
 * last (taps - 1) samples are dropped.
 *
 * Throws when more than 1% of the signal energy lies between envelope and
 * fringe bands, i.e. when they cannot be separated.
 */
inline CorrelationTrace extract_g2(Interferogram const& ig, double omega_bar)
{
    ig.validate();
    detail::require(omega_bar > 0, "extract_g2: omega_bar must be positive");
    double const dt = ig.spacing();
    detail::require(dt <= max_fringe_step(omega_bar) * (1 + 1e-9),
                    "extract_g2: delay grid under-samples the optical fringes");
    if (fringe_gap_energy_fraction(ig, omega_bar) > 0.01)
    {
        throw InvalidInput(
            "extract_g2: envelope and fringe bands overlap (envelope bandwidth "
            "reaches omega_bar/2)");
    }

    double const cutoff = 0.5 * omega_bar;
    auto const taps = numerics::default_lowpass_taps(cutoff / two_pi * dt);
    auto const n_all = ig.tau.size();
    detail::require(n_all > 2 * (taps - 1) + 1,
                    "extract_g2: delay range shorter than the envelope filter");
    auto const full = numerics::lowpass_zero_phase(ig.counts, dt, cutoff, taps);
    auto const first = taps - 1;
    auto const n = n_all - 2 * first;
    std::vector<double> const tau(ig.tau.begin() + first, ig.tau.begin() + first + n);
    std::vector<double> const envelope(full.begin() + first, full.begin() + first + n);

    std::size_t i_zero = 0;
    for (std::size_t i = 1; i < n; ++i)
    {
        if (std::abs(tau[i]) < std::abs(tau[i_zero]))
            i_zero = i;
    }
    detail::require(std::abs(tau[i_zero]) <= 0.5 * dt * (1 + 1e-9),
                    "extract_g2: delay grid must contain tau = 0");

    double const tau_max = std::max(std::abs(tau.front()), std::abs(tau.back()));
    double baseline = 0;
    std::size_t nb = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (std::abs(tau[i]) >= 0.9 * tau_max)
        {
            baseline += envelope[i];
            ++nb;
        }
    }
    baseline /= static_cast<double>(nb);
    double const floor = envelope[i_zero] / 3;
    double const scale = baseline - floor;
    detail::require(scale > 0, "extract_g2: degenerate large-delay baseline");

    CorrelationTrace trace;
    trace.tau = tau;
    trace.value.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        trace.value[i] = (envelope[i] - floor) / scale;
    if (ig.std_error)
    {
        // Errors of neighbouring delays are strongly correlated, so the
        // filtered error is a good stand-in for the error of the filtered
        // signal
        auto const err = numerics::lowpass_zero_phase(*ig.std_error, dt, cutoff, taps);
        trace.std_error.emplace(n);
        for (std::size_t i = 0; i < n; ++i)
            (*trace.std_error)[i] = std::abs(err[first + i]) / scale;
    }
    trace.validate();
    return trace;
}

//---------------------------------------------------------------------------//
}  // namespace prag
