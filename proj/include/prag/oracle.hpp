//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/oracle.hpp
//! Stochastic-field Monte-Carlo estimates of the PRAG correlation functions.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "correlations.hpp"
#include "error.hpp"
#include "mixing.hpp"
#include "prag_state.hpp"
#include "random.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
struct OracleConfig
{
    std::size_t n_realizations{100000};
    std::uint64_t seed{0};
    std::vector<double> tau_grid;
    //! Worker threads; 0 selects the hardware concurrency
    unsigned threads{0};
    //! Upper bound on lines x delays x realizations
    double max_work{5e10};

    void validate() const
    {
        detail::require(n_realizations >= 1,
                        "OracleConfig: need at least one realization");
    }
};

//! One draw of the complex mode amplitudes, in sqrt-power units
struct FieldRealization
{
    std::vector<std::complex<double>> amplitudes;
};

//---------------------------------------------------------------------------//
/*!
 * Classical stochastic-field representation of a (mixed) PRAG state.
 *
 * Each comb mode carries sqrt(p_s) e^{i phi} with phi uniform, plus a
 * circular complex-normal thermal part of variance p_t. A laser line is
 * appended with constant amplitude sqrt(P_l) and phase 0.
 */
class FieldModel
{
  public:
    struct Line
    {
        double omega;
        double p_s;
        double p_t;
        bool fixed_phase;
    };

    explicit FieldModel(PragState const& state) : grid_(state.grid())
    {
        this->add_base(state);
    }

    explicit FieldModel(MixedState const& state)
    {
        if (auto const& b = state.base())
        {
            grid_ = b->grid();
            this->add_base(*b);
        }
        if (state.laser_power() > 0)
        {
            lines_.push_back({state.omega_k(), state.laser_power(), 0.0, true});
            total_power_ += state.laser_power();
        }
    }

    std::vector<Line> const& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    double total_power() const { return total_power_; }
    std::optional<ModeGrid> const& grid() const { return grid_; }

    FieldRealization sample(RandomStream& rng) const
    {
        FieldRealization r;
        r.amplitudes.reserve(lines_.size());
        for (auto const& l : lines_)
        {
            std::complex<double> a{0, 0};
            if (l.p_s > 0)
            {
                a = std::sqrt(l.p_s);
                if (!l.fixed_phase)
                    a *= rng.unit_phase();
            }
            if (l.p_t > 0)
            {
                a += rng.complex_normal(l.p_t);
            }
            r.amplitudes.push_back(a);
        }
        return r;
    }

  private:
    std::vector<Line> lines_;
    std::optional<ModeGrid> grid_;
    double total_power_{0};

    void add_base(PragState const& s)
    {
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            lines_.push_back({s.omega(i), s.p_s()[i], s.p_t()[i], false});
            total_power_ += s.p_s()[i] + s.p_t()[i];
        }
    }
};

inline FieldRealization sample_realization(PragState const& state, RandomStream& rng)
{
    return FieldModel(state).sample(rng);
}

inline FieldRealization sample_realization(MixedState const& state, RandomStream& rng)
{
    return FieldModel(state).sample(rng);
}

namespace detail
{
//---------------------------------------------------------------------------//
//! Running mean and sum of squared deviations of a vector-valued sample
struct VectorMoments
{
    std::size_t n{0};
    std::vector<double> mean;
    std::vector<double> m2;

    explicit VectorMoments(std::size_t dim = 0) : mean(dim, 0.0), m2(dim, 0.0)
    {
    }

    void add(std::span<double const> x)
    {
        ++n;
        auto const dn = static_cast<double>(n);
        for (std::size_t j = 0; j < x.size(); ++j)
        {
            double const d = x[j] - mean[j];
            mean[j] += d / dn;
            m2[j] += d * (x[j] - mean[j]);
        }
    }

    //! Chan et al. pairwise combination
    void merge(VectorMoments const& o)
    {
        if (o.n == 0)
            return;
        if (n == 0)
        {
            *this = o;
            return;
        }
        auto const na = static_cast<double>(n);
        auto const nb = static_cast<double>(o.n);
        double const nt = na + nb;
        for (std::size_t j = 0; j < mean.size(); ++j)
        {
            double const d = o.mean[j] - mean[j];
            mean[j] += d * nb / nt;
            m2[j] += o.m2[j] + d * d * na * nb / nt;
        }
        n += o.n;
    }

    std::vector<double> std_error() const
    {
        std::vector<double> out(mean.size(), 0.0);
        if (n < 2)
            return out;
        auto const dn = static_cast<double>(n);
        for (std::size_t j = 0; j < mean.size(); ++j)
            out[j] = std::sqrt(m2[j] / (dn - 1) / dn);
        return out;
    }
};

inline unsigned resolve_threads(unsigned requested)
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Accumulate per-realization vectors in fixed blocks and combine the blocks
 * in index order, so the result is independent of the worker count.
 *
 * The body is invoked as body(realization_index, out_span) and must depend
 * only on its index.
 */
template<class Body>
VectorMoments block_reduce(std::size_t n_realizations,
                           std::size_t dim,
                           unsigned threads,
                           Body&& body,
                           std::size_t block = 256)
{
    std::size_t const n_blocks = (n_realizations + block - 1) / block;
    std::vector<VectorMoments> partial(n_blocks, VectorMoments(dim));
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        std::vector<double> x(dim);
        for (std::size_t b = next++; b < n_blocks; b = next++)
        {
            std::size_t const end = std::min(n_realizations, (b + 1) * block);
            for (std::size_t r = b * block; r < end; ++r)
            {
                body(r, std::span<double>(x));
                partial[b].add(x);
            }
        }
    };
    auto const nt = static_cast<unsigned>(
        std::min<std::size_t>(resolve_threads(threads), n_blocks));
    if (nt <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(worker);
    }

    VectorMoments total(dim);
    for (auto const& p : partial)
        total.merge(p);
    return total;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Monte-Carlo estimate of g2(tau) = <I(0) I(tau)> / P_m^2.
 *
 * Realization r draws its amplitudes from stream r of the seed. The
 * normalization uses the exact ensemble power P_m, which is also the
 * ensemble mean of I.
 */
inline CorrelationTrace estimate_g2(FieldModel const& model, OracleConfig const& config)
{
    config.validate();
    auto const& taus = config.tau_grid;
    double const work = static_cast<double>(model.size())
                        * static_cast<double>(std::max<std::size_t>(taus.size(), 1))
                        * static_cast<double>(config.n_realizations);
    if (work > config.max_work)
    {
        throw BudgetExceeded("estimate_g2: " + std::to_string(work)
                             + " line-delay-realization products exceed the budget of "
                             + std::to_string(config.max_work));
    }

    auto const n_lines = model.size();
    auto const n_tau = taus.size();
    // Phase factors e^{-i omega_l tau}, row per delay
    std::vector<std::complex<double>> phase(n_tau * n_lines);
    for (std::size_t j = 0; j < n_tau; ++j)
    {
        for (std::size_t l = 0; l < n_lines; ++l)
        {
            double const p = -model.lines()[l].omega * taus[j];
            phase[j * n_lines + l] = {std::cos(p), std::sin(p)};
        }
    }

    auto body = [&](std::size_t r, std::span<double> out) {
        RandomStream rng(config.seed, r);
        auto const a = model.sample(rng).amplitudes;
        std::complex<double> f0{0, 0};
        for (auto const& v : a)
            f0 += v;
        double const i0 = std::norm(f0);
        for (std::size_t j = 0; j < n_tau; ++j)
        {
            std::complex<double> f{0, 0};
            auto const* row = &phase[j * n_lines];
            for (std::size_t l = 0; l < n_lines; ++l)
                f += a[l] * row[l];
            out[j] = i0 * std::norm(f);
        }
    };
    auto const m = detail::block_reduce(
        config.n_realizations, n_tau, config.threads, body);

    double const norm = 1 / (model.total_power() * model.total_power());
    CorrelationTrace trace;
    trace.tau = taus;
    trace.value = m.mean;
    auto err = m.std_error();
    for (std::size_t j = 0; j < n_tau; ++j)
    {
        trace.value[j] *= norm;
        err[j] *= norm;
    }
    trace.std_error = std::move(err);
    trace.validate();
    return trace;
}

inline CorrelationTrace estimate_g2(PragState const& state, OracleConfig const& config)
{
    return estimate_g2(FieldModel(state), config);
}

inline CorrelationTrace estimate_g2(MixedState const& state, OracleConfig const& config)
{
    return estimate_g2(FieldModel(state), config);
}

//---------------------------------------------------------------------------//
// PHOTON COUNTING
//---------------------------------------------------------------------------//
struct PhotonCountHistogram
{
    double mean_photons{0};
    std::size_t n_draws{0};
    std::map<long, std::size_t> counts;
    double sample_mean{0};
    double chi_square{0};
    int degrees_of_freedom{0};
    double p_value{1};
};

namespace detail
{
/*!
 * Fock-basis probabilities |<n|alpha>|^2 of a coherent state with the given
 * complex amplitude, by the recursion c_{n+1} = c_n alpha / sqrt(n+1).
 */
inline std::vector<double> fock_probabilities(std::complex<double> alpha, long n_max)
{
    std::vector<double> prob(static_cast<std::size_t>(n_max) + 1);
    std::complex<double> c = std::exp(-0.5 * std::norm(alpha));
    for (long n = 0; n <= n_max; ++n)
    {
        prob[static_cast<std::size_t>(n)] = std::norm(c);
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return prob;
}

inline long fock_cutoff(double mean)
{
    return static_cast<long>(std::ceil(mean + 20 * std::sqrt(mean) + 30));
}
}  // namespace detail

/*!
 * Photon-number draws from a phase-randomized coherent state.
 *
 * Each draw picks a random phase, builds the coherent-state Fock
 * distribution, and samples it by inverse transform. The histogram is
 * tested against the Poisson law with a chi-square statistic; tail bins are
 * pooled until every expected count is at least 5.
 */
inline PhotonCountHistogram
sample_photon_counts(double mean_photons, std::size_t n_draws, std::uint64_t seed)
{
    detail::require(mean_photons >= 0 && std::isfinite(mean_photons),
                    "sample_photon_counts: mean must be non-negative");
    detail::require(n_draws >= 1, "sample_photon_counts: need at least one draw");
    long const n_max = detail::fock_cutoff(mean_photons);
    double const modulus = std::sqrt(mean_photons);

    PhotonCountHistogram h;
    h.mean_photons = mean_photons;
    h.n_draws = n_draws;
    double sum = 0;
    for (std::size_t d = 0; d < n_draws; ++d)
    {
        RandomStream rng(seed, d);
        auto const prob
            = detail::fock_probabilities(modulus * rng.unit_phase(), n_max);
        double const u = rng.uniform();
        long n = 0;
        double cum = prob[0];
        while (cum <= u && n < n_max)
        {
            ++n;
            cum += prob[static_cast<std::size_t>(n)];
        }
        ++h.counts[n];
        sum += static_cast<double>(n);
    }
    h.sample_mean = sum / static_cast<double>(n_draws);

    // Pool bins left to right; the final bin absorbs the whole upper tail
    auto const total = static_cast<double>(n_draws);
    std::vector<std::pair<double, double>> bins;  // (observed, expected)
    double obs = 0, expct = 0, cdf = 0;
    for (long n = 0; n <= n_max; ++n)
    {
        double const p = photon_number_pmf(mean_photons, n);
        auto const it = h.counts.find(n);
        obs += it == h.counts.end() ? 0.0 : static_cast<double>(it->second);
        expct += total * p;
        cdf += p;
        if (expct >= 5 && total * (1 - cdf) >= 5)
        {
            bins.emplace_back(obs, expct);
            obs = expct = 0;
        }
    }
    // Remaining tail including anything beyond the cutoff
    for (auto const& [n, c] : h.counts)
    {
        if (n > n_max)
            obs += static_cast<double>(c);
    }
    expct += total * std::max(0.0, 1 - cdf);
    if (bins.empty())
    {
        bins.emplace_back(obs, expct);
    }
    else
    {
        bins.back().first += obs;
        bins.back().second += expct;
    }

    h.degrees_of_freedom = static_cast<int>(bins.size()) - 1;
    for (auto const& [o, e] : bins)
    {
        if (e > 0)
            h.chi_square += (o - e) * (o - e) / e;
    }
    h.p_value = h.degrees_of_freedom > 0
                    ? boost::math::gamma_q(0.5 * h.degrees_of_freedom,
                                           0.5 * h.chi_square)
                    : 1.0;
    return h;
}

//---------------------------------------------------------------------------//
}  // namespace prag
