//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/spectrum.hpp
//! Optical power spectra: ingestion, Gaussian-mixture models, spectral
//! moments and widths, and conversion into PRAG mode combs.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "constants.hpp"
#include "error.hpp"
#include "numerics.hpp"
#include "prag_state.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
enum class UnitTag
{
    absolute_watts,
    arbitrary,
};

//! Abscissa of an input spectrum file
enum class AxisUnit
{
    hz,
    thz,
    rad_s,
    nm,
};

struct SpectrumSample
{
    double omega{0};  //!< [rad/s]
    double density{0};  //!< power per unit angular frequency
};

//---------------------------------------------------------------------------//
/*!
 * Sampled power spectral density versus angular frequency.
 */
class OpticalSpectrum
{
  public:
    explicit OpticalSpectrum(std::vector<SpectrumSample> samples,
                             UnitTag unit = UnitTag::arbitrary)
        : samples_(std::move(samples)), unit_(unit)
    {
        detail::require(samples_.size() >= 2,
                        "OpticalSpectrum: need at least 2 samples");
        for (std::size_t i = 0; i < samples_.size(); ++i)
        {
            auto const& s = samples_[i];
            detail::require(std::isfinite(s.omega) && std::isfinite(s.density),
                            "OpticalSpectrum: non-finite sample");
            detail::require(s.density >= 0,
                            "OpticalSpectrum: negative density at sample "
                                + std::to_string(i));
            if (i > 0)
            {
                detail::require(s.omega > samples_[i - 1].omega,
                                "OpticalSpectrum: frequency axis must be "
                                "strictly increasing");
            }
        }
    }

    std::vector<SpectrumSample> const& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    UnitTag unit() const { return unit_; }
    double omega_min() const { return samples_.front().omega; }
    double omega_max() const { return samples_.back().omega; }

    std::vector<double> omegas() const
    {
        std::vector<double> out;
        out.reserve(samples_.size());
        for (auto const& s : samples_)
            out.push_back(s.omega);
        return out;
    }
    std::vector<double> densities() const
    {
        std::vector<double> out;
        out.reserve(samples_.size());
        for (auto const& s : samples_)
            out.push_back(s.density);
        return out;
    }

    //! Linear interpolation, zero outside the sampled band
    double operator()(double omega) const
    {
        if (omega < omega_min() || omega > omega_max())
            return 0;
        auto it = std::lower_bound(
            samples_.begin(),
            samples_.end(),
            omega,
            [](SpectrumSample const& s, double w) { return s.omega < w; });
        if (it == samples_.begin())
            return it->density;
        auto const& hi = *it;
        auto const& lo = *(it - 1);
        double const t = (omega - lo.omega) / (hi.omega - lo.omega);
        return lo.density + t * (hi.density - lo.density);
    }

  private:
    std::vector<SpectrumSample> samples_;
    UnitTag unit_;
};

//---------------------------------------------------------------------------//
/*!
 * Parse a two-column spectrum (abscissa, density).
 *
 * Accepts comma or whitespace separators, '#' comments, and an optional
 * non-numeric header line. Wavelength densities are converted to angular
 * frequency densities with the Jacobian |d lambda / d omega|.
 */
inline OpticalSpectrum load_spectrum(std::istream& in,
                                     AxisUnit axis,
                                     UnitTag unit = UnitTag::arbitrary)
{
    std::vector<SpectrumSample> samples;
    std::string line;
    std::size_t lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::replace(line.begin(), line.end(), ';', ' ');
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a))
            continue;
        fields >> b;
        fields >> extra;
        double x = 0, y = 0;
        std::size_t pa = 0, pb = 0;
        bool numeric = true;
        try
        {
            x = std::stod(a, &pa);
            y = std::stod(b, &pb);
        }
        catch (std::exception const&)
        {
            numeric = false;
        }
        numeric = numeric && pa == a.size() && pb == b.size();
        if (!numeric)
        {
            if (!seen_data && samples.empty())
            {
                // header line
                seen_data = true;
                continue;
            }
            throw InvalidInput("load_spectrum: malformed row at line "
                               + std::to_string(lineno));
        }
        if (!extra.empty())
        {
            throw InvalidInput("load_spectrum: expected two columns at line "
                               + std::to_string(lineno));
        }
        seen_data = true;
        detail::require(y >= 0,
                        "load_spectrum: negative density at line "
                            + std::to_string(lineno));
        double omega = 0;
        double density = y;
        switch (axis)
        {
            case AxisUnit::hz:
                omega = two_pi * x;
                density = y / two_pi;
                break;
            case AxisUnit::thz:
                omega = thz_to_rad_s(x);
                density = y / thz_to_rad_s(1.0);
                break;
            case AxisUnit::rad_s:
                omega = x;
                break;
            case AxisUnit::nm: {
                detail::require(x > 0,
                                "load_spectrum: wavelength must be positive");
                omega = nm_to_rad_s(x);
                double const lambda_m = x * 1e-9;
                // |d lambda[nm] / d omega|
                density = y * lambda_m * lambda_m * 1e9
                          / (two_pi * speed_of_light);
                break;
            }
        }
        samples.push_back({omega, density});
    }
    detail::require(!samples.empty(), "load_spectrum: no data rows");
    std::sort(samples.begin(),
              samples.end(),
              [](auto const& l, auto const& r) { return l.omega < r.omega; });
    for (std::size_t i = 1; i < samples.size(); ++i)
    {
        detail::require(samples[i].omega != samples[i - 1].omega,
                        "load_spectrum: duplicate abscissa");
    }
    return OpticalSpectrum(std::move(samples), unit);
}

//---------------------------------------------------------------------------//
// GAUSSIAN MIXTURE
//---------------------------------------------------------------------------//
struct GaussianComponent
{
    double amplitude{0};  //!< peak density S0
    double center{0};  //!< [rad/s]
    double sigma{1};  //!< [rad/s]

    double operator()(double omega) const
    {
        double const z = (omega - center) / sigma;
        return amplitude * std::exp(-0.5 * z * z);
    }
    //! Integral over the real line
    double area() const
    {
        return amplitude * sigma * std::sqrt(two_pi);
    }
};

/*!
 * S(omega) = sum_i S0_i exp(-(omega - center_i)^2 / (2 sigma_i^2)).
 */
class GaussianMixture
{
  public:
    explicit GaussianMixture(std::vector<GaussianComponent> components)
        : components_(std::move(components))
    {
        detail::require(!components_.empty(),
                        "GaussianMixture: need at least one component");
        for (auto const& c : components_)
        {
            detail::require(c.amplitude >= 0,
                            "GaussianMixture: amplitude must be non-negative");
            detail::require(c.sigma > 0,
                            "GaussianMixture: sigma must be positive");
        }
    }

    std::vector<GaussianComponent> const& components() const
    {
        return components_;
    }
    std::size_t size() const { return components_.size(); }

    double operator()(double omega) const
    {
        double sum = 0;
        for (auto const& c : components_)
            sum += c(omega);
        return sum;
    }

    double total_power() const
    {
        double sum = 0;
        for (auto const& c : components_)
            sum += c.area();
        return sum;
    }

    //! Band outside which every component is below exp(-k^2/2) of its peak
    std::pair<double, double> support(double k = 8) const
    {
        double lo = std::numeric_limits<double>::max();
        double hi = std::numeric_limits<double>::lowest();
        for (auto const& c : components_)
        {
            lo = std::min(lo, c.center - k * c.sigma);
            hi = std::max(hi, c.center + k * c.sigma);
        }
        return {lo, hi};
    }

  private:
    std::vector<GaussianComponent> components_;
};

//! Sample a mixture on n equally spaced frequencies in [lo, hi]
inline OpticalSpectrum
sample_spectrum(GaussianMixture const& model, double lo, double hi, std::size_t n)
{
    detail::require(n >= 2 && hi > lo, "sample_spectrum: bad sampling range");
    std::vector<SpectrumSample> s(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double const w
            = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        s[i] = {w, model(w)};
    }
    return OpticalSpectrum(std::move(s));
}

//---------------------------------------------------------------------------//
// SPECTRAL MOMENTS AND WIDTHS
//---------------------------------------------------------------------------//
namespace detail
{
struct Moments
{
    double power;
    double mean;
    double variance;
    double sum_sq;  //!< integral of S^2
};

inline Moments moments(OpticalSpectrum const& spec)
{
    // Peak-normalized densities and offsets from the first sample keep the
    // sums well conditioned and the result independent of the density scale
    auto const w = spec.omegas();
    auto d = spec.densities();
    double const peak = *std::max_element(d.begin(), d.end());
    require(peak > 0, "spectrum has zero total power");
    for (auto& x : d)
        x /= peak;
    double const w0 = w.front();
    std::vector<double> f(w.size());
    double const power = numerics::trapezoid(w, d);
    for (std::size_t i = 0; i < w.size(); ++i)
        f[i] = (w[i] - w0) * d[i];
    double const offset = numerics::trapezoid(w, f) / power;
    for (std::size_t i = 0; i < w.size(); ++i)
        f[i] = (w[i] - w0 - offset) * (w[i] - w0 - offset) * d[i];
    double const variance = numerics::trapezoid(w, f) / power;
    for (std::size_t i = 0; i < w.size(); ++i)
        f[i] = d[i] * d[i];
    double const sum_sq = numerics::trapezoid(w, f);
    return {power * peak, w0 + offset, variance, sum_sq * peak * peak};
}

inline Moments moments(GaussianMixture const& model)
{
    double const power = model.total_power();
    require(power > 0, "spectrum has zero total power");
    double mean = 0;
    for (auto const& c : model.components())
    {
        mean += c.area() / power * c.center;
    }
    double variance = 0;
    for (auto const& c : model.components())
    {
        double const weight = c.area() / power;
        variance += weight * (c.sigma * c.sigma
                              + (c.center - mean) * (c.center - mean));
    }
    // Overlap integral of two Gaussians
    double sum_sq = 0;
    for (auto const& a : model.components())
    {
        for (auto const& b : model.components())
        {
            double const s2 = a.sigma * a.sigma + b.sigma * b.sigma;
            double const dc = a.center - b.center;
            sum_sq += a.amplitude * b.amplitude * std::sqrt(two_pi) * a.sigma
                      * b.sigma / std::sqrt(s2) * std::exp(-0.5 * dc * dc / s2);
        }
    }
    return {power, mean, variance, sum_sq};
}
}  // namespace detail

using SpectrumModel = std::variant<OpticalSpectrum, GaussianMixture>;

//! Power-weighted mean angular frequency
inline double central_frequency(OpticalSpectrum const& s)
{
    return detail::moments(s).mean;
}
inline double central_frequency(GaussianMixture const& m)
{
    return detail::moments(m).mean;
}

//! Twice the standard deviation of the normalized spectrum
inline double width_two_sigma(OpticalSpectrum const& s)
{
    return 2 * std::sqrt(detail::moments(s).variance);
}
inline double width_two_sigma(GaussianMixture const& m)
{
    return 2 * std::sqrt(detail::moments(m).variance);
}

//! Suessmann width 1 / integral s^2 of the normalized spectrum
inline double width_sussmann(OpticalSpectrum const& s)
{
    auto const m = detail::moments(s);
    return m.power * m.power / m.sum_sq;
}
inline double width_sussmann(GaussianMixture const& g)
{
    auto const m = detail::moments(g);
    return m.power * m.power / m.sum_sq;
}

//---------------------------------------------------------------------------//
// FITTING
//---------------------------------------------------------------------------//
struct FitOptions
{
    int max_iterations{2000};
    double gradient_tol{1e-14};
    double step_tol{1e-13};
};

struct FitResult
{
    GaussianMixture mixture;
    double residual_rms{0};  //!< in density units
    bool converged{false};
    bool sigma_clamped{false};
    int iterations{0};
};

namespace detail
{
//! Quantile-band moment initialization
inline std::vector<GaussianComponent>
quantile_init(std::vector<double> const& w, std::vector<double> const& d, int n)
{
    std::vector<double> cum(w.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (w[i] - w[i - 1]) * (d[i] + d[i - 1]);
    double const total = cum.back();
    require(total > 0, "fit_gaussian_mixture: spectrum has zero power");

    OpticalSpectrum const interp = [&] {
        std::vector<SpectrumSample> s(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            s[i] = {w[i], d[i]};
        return OpticalSpectrum(std::move(s));
    }();

    std::vector<GaussianComponent> out;
    double const min_sigma = (w.back() - w.front()) / static_cast<double>(w.size());
    for (int k = 0; k < n; ++k)
    {
        double const lo = total * k / n;
        double const hi = total * (k + 1) / n;
        double mass = 0, first = 0, second = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
        {
            double const mid = 0.5 * (cum[i] + cum[i - 1]);
            if (mid < lo || mid > hi)
                continue;
            double const dm = cum[i] - cum[i - 1];
            double const wm = 0.5 * (w[i] + w[i - 1]);
            mass += dm;
            first += dm * wm;
            second += dm * wm * wm;
        }
        if (mass <= 0)
        {
            // Degenerate band (e.g. a single dominant bin): place it at the
            // quantile itself
            auto it = std::lower_bound(cum.begin(), cum.end(), 0.5 * (lo + hi));
            auto const idx = static_cast<std::size_t>(
                std::min<std::ptrdiff_t>(it - cum.begin(),
                                         static_cast<std::ptrdiff_t>(w.size() - 1)));
            out.push_back({d[idx], w[idx], 4 * min_sigma});
            continue;
        }
        double const mu = first / mass;
        double const var = std::max(second / mass - mu * mu, 0.0);
        out.push_back({interp(mu), mu, std::max(std::sqrt(var), min_sigma)});
    }
    return out;
}
}  // namespace detail

/*!
 * Levenberg-Marquardt least-squares fit of a Gaussian mixture.
 *
 * Works in normalized coordinates (frequency centred and scaled by the
 * sampled span, density scaled by its maximum). Components come back sorted
 * by descending amplitude. Non-convergence is reported through the flag and
 * the best parameters found are still returned.
 */
inline FitResult fit_gaussian_mixture(OpticalSpectrum const& spec,
                                      int n_components,
                                      std::optional<GaussianMixture> init = {},
                                      FitOptions const& opts = {})
{
    detail::require(n_components >= 1,
                    "fit_gaussian_mixture: need at least one component");
    detail::require(spec.size() >= 3 * static_cast<std::size_t>(n_components),
                    "fit_gaussian_mixture: need at least 3 samples per component");
    if (init)
    {
        detail::require(init->size() == static_cast<std::size_t>(n_components),
                        "fit_gaussian_mixture: initial guess has wrong size");
    }

    auto const w_raw = spec.omegas();
    auto const d_raw = spec.densities();
    double const w_ref = 0.5 * (w_raw.front() + w_raw.back());
    double const w_scale = 0.5 * (w_raw.back() - w_raw.front());
    double const d_scale = *std::max_element(d_raw.begin(), d_raw.end());
    detail::require(d_scale > 0, "fit_gaussian_mixture: spectrum is identically zero");

    auto const m = static_cast<Eigen::Index>(w_raw.size());
    auto const np = static_cast<Eigen::Index>(3 * n_components);
    Eigen::VectorXd x(m), y(m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        x[i] = (w_raw[static_cast<std::size_t>(i)] - w_ref) / w_scale;
        y[i] = d_raw[static_cast<std::size_t>(i)] / d_scale;
    }
    double const min_sigma = 0.5 * 2.0 / static_cast<double>(m - 1);

    auto const start = init ? init->components()
                            : detail::quantile_init(w_raw, d_raw, n_components);
    Eigen::VectorXd theta(np);
    for (int k = 0; k < n_components; ++k)
    {
        auto const& c = start[static_cast<std::size_t>(k)];
        theta[3 * k] = c.amplitude / d_scale;
        theta[3 * k + 1] = (c.center - w_ref) / w_scale;
        theta[3 * k + 2] = c.sigma / w_scale;
    }

    auto residual = [&](Eigen::VectorXd const& t, Eigen::VectorXd& r) {
        r = -y;
        for (int k = 0; k < n_components; ++k)
        {
            double const a = t[3 * k], c = t[3 * k + 1], s = t[3 * k + 2];
            for (Eigen::Index i = 0; i < m; ++i)
            {
                double const z = (x[i] - c) / s;
                r[i] += a * std::exp(-0.5 * z * z);
            }
        }
    };
    auto jacobian = [&](Eigen::VectorXd const& t, Eigen::MatrixXd& jac) {
        jac.resize(m, np);
        for (int k = 0; k < n_components; ++k)
        {
            double const a = t[3 * k], c = t[3 * k + 1], s = t[3 * k + 2];
            for (Eigen::Index i = 0; i < m; ++i)
            {
                double const z = (x[i] - c) / s;
                double const e = std::exp(-0.5 * z * z);
                jac(i, 3 * k) = e;
                jac(i, 3 * k + 1) = a * e * z / s;
                jac(i, 3 * k + 2) = a * e * z * z / s;
            }
        }
    };

    Eigen::VectorXd r(m), r_trial(m);
    Eigen::MatrixXd jac;
    residual(theta, r);
    double cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter)
    {
        jacobian(theta, jac);
        Eigen::VectorXd const g = jac.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < opts.gradient_tol)
        {
            converged = true;
            break;
        }
        Eigen::MatrixXd const h = jac.transpose() * jac;
        Eigen::VectorXd diag = h.diagonal().cwiseMax(1e-12);

        bool accepted = false;
        while (lambda < 1e16)
        {
            Eigen::MatrixXd a = h;
            a.diagonal() += lambda * diag;
            Eigen::VectorXd const step = a.ldlt().solve(-g);
            Eigen::VectorXd trial = theta + step;
            bool valid = step.allFinite();
            for (int k = 0; valid && k < n_components; ++k)
                valid = trial[3 * k + 2] > 0;
            if (valid)
            {
                residual(trial, r_trial);
                double const trial_cost = 0.5 * r_trial.squaredNorm();
                if (trial_cost <= cost)
                {
                    double const step_norm = step.norm();
                    double const decrease = cost - trial_cost;
                    theta = trial;
                    r = r_trial;
                    cost = trial_cost;
                    lambda = std::max(lambda / 3, 1e-12);
                    accepted = true;
                    if (step_norm < opts.step_tol * (theta.norm() + opts.step_tol)
                        || decrease <= 1e-15 * cost)
                    {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 4;
        }
        if (!accepted)
        {
            // No downhill step at any damping: stationary to working precision
            converged = g.lpNorm<Eigen::Infinity>() < 1e-8 * (1 + cost);
            break;
        }
        if (converged)
            break;
    }

    FitResult result{GaussianMixture({{1, 0, 1}})};
    bool clamped = false;
    std::vector<GaussianComponent> comps;
    for (int k = 0; k < n_components; ++k)
    {
        double s = theta[3 * k + 2];
        if (s < min_sigma)
        {
            s = min_sigma;
            clamped = true;
        }
        comps.push_back({std::max(theta[3 * k], 0.0) * d_scale,
                         theta[3 * k + 1] * w_scale + w_ref,
                         s * w_scale});
    }
    std::sort(comps.begin(), comps.end(), [](auto const& l, auto const& rr) {
        return l.amplitude > rr.amplitude;
    });
    result.mixture = GaussianMixture(std::move(comps));
    result.residual_rms = std::sqrt(2 * cost / static_cast<double>(m)) * d_scale;
    result.converged = converged;
    result.sigma_clamped = clamped;
    result.iterations = iter;
    return result;
}

//---------------------------------------------------------------------------//
// DISCRETIZATION
//---------------------------------------------------------------------------//
namespace detail
{
inline double evaluate(SpectrumModel const& model, double omega)
{
    return std::visit([omega](auto const& m) { return m(omega); }, model);
}
}  // namespace detail

/*!
 * Convert a continuous spectrum into a PRAG mode comb.
 *
 * Each grid mode receives p_s = max(0, Delta omega S(omega_i) - p_t). Modes
 * whose incoherent power is more than cutoff_db below the strongest one are
 * dropped: the comb is trimmed to the first and last surviving modes and any
 * sub-cutoff mode in between is zeroed (and therefore inactive).
 *
 * Thermal power needs an absolute photon energy scale, so a cavity length is
 * required whenever temperature > 0.
 */
inline PragState discretize(SpectrumModel const& model,
                            ModeGrid const& grid,
                            double cutoff_db,
                            double temperature = 0,
                            std::optional<double> cavity_length = {})
{
    grid.validate();
    detail::require(cutoff_db >= 0, "discretize: cutoff must be non-negative");
    detail::require(temperature >= 0, "discretize: temperature must be >= 0");
    detail::require(temperature == 0 || cavity_length,
                    "discretize: thermal power needs a cavity length");

    std::vector<double> ps(grid.count), pt(grid.count, 0.0);
    for (std::size_t i = 0; i < grid.count; ++i)
    {
        double const w = grid.omega(i);
        if (temperature > 0)
        {
            pt[i] = photon_power(w, *cavity_length)
                    * thermal_occupation(w, temperature);
        }
        ps[i] = std::max(0.0, grid.delta_omega * detail::evaluate(model, w) - pt[i]);
    }
    double const peak = *std::max_element(ps.begin(), ps.end());
    detail::require(peak > 0, "discretize: no incoherent power on the grid");
    double const threshold = peak * std::pow(10.0, -cutoff_db / 10.0);

    std::size_t first = grid.count, last = 0;
    for (std::size_t i = 0; i < grid.count; ++i)
    {
        if (ps[i] >= threshold)
        {
            first = std::min(first, i);
            last = i;
        }
    }
    detail::require(first <= last, "discretize: no modes survive the cutoff");

    ModeGrid trimmed{grid.omega(first), grid.delta_omega, last - first + 1};
    std::vector<double> out_s(trimmed.count), out_t(trimmed.count);
    for (std::size_t i = first; i <= last; ++i)
    {
        bool const keep = ps[i] >= threshold;
        out_s[i - first] = keep ? ps[i] : 0.0;
        out_t[i - first] = keep ? pt[i] : 0.0;
    }
    PragState state(trimmed, std::move(out_s), std::move(out_t), temperature);
    if (cavity_length)
    {
        return state.with_length(*cavity_length);
    }
    return state;
}

//---------------------------------------------------------------------------//
// MODE COUNTING
//---------------------------------------------------------------------------//
enum class ModeCountRegime
{
    peaks,  //!< resolved multimode emission: count spectral maxima
    comb,  //!< smooth ASE: count FSR comb points
};

struct ModeCount
{
    std::size_t n{0};
    ModeCountRegime regime{ModeCountRegime::comb};
    std::size_t local_maxima{0};
    double support{0};  //!< extent of the above-cutoff band [rad/s]
};

/*!
 * Number of emitting longitudinal modes above a relative cutoff.
 *
 * When the above-cutoff local maxima number at least half the FSR comb points
 * that fit in the above-cutoff band, the modes are resolved and the maxima
 * are counted. Otherwise the spectrum is treated as smooth: a comb with the
 * given spacing, anchored at the first sample, is laid over it and the points
 * above cutoff are counted.
 */
inline ModeCount
count_modes(OpticalSpectrum const& spec, double cutoff_db, double fsr)
{
    detail::require(fsr > 0, "count_modes: FSR must be positive");
    detail::require(cutoff_db >= 0, "count_modes: cutoff must be non-negative");
    auto const& s = spec.samples();
    double peak = 0;
    for (auto const& x : s)
        peak = std::max(peak, x.density);
    detail::require(peak > 0, "count_modes: empty spectrum");
    double const threshold = peak * std::pow(10.0, -cutoff_db / 10.0);

    ModeCount out;
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (auto const& x : s)
    {
        if (x.density >= threshold)
        {
            lo = std::min(lo, x.omega);
            hi = std::max(hi, x.omega);
        }
    }
    out.support = hi - lo;

    // Plateaus count once: strictly rising into the sample, non-rising after
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        double const prev = i > 0 ? s[i - 1].density : -1.0;
        double const next = i + 1 < s.size() ? s[i + 1].density : -1.0;
        if (s[i].density >= threshold && s[i].density > prev
            && s[i].density >= next)
        {
            ++out.local_maxima;
        }
    }

    double const comb_points = out.support / fsr;
    if (static_cast<double>(out.local_maxima) >= 0.5 * comb_points)
    {
        out.regime = ModeCountRegime::peaks;
        out.n = out.local_maxima;
        return out;
    }
    out.regime = ModeCountRegime::comb;
    auto const grid = comb_covering(spec.omega_min(), spec.omega_max(), fsr);
    for (std::size_t i = 0; i < grid.count; ++i)
    {
        if (spec(grid.omega(i)) >= threshold)
            ++out.n;
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace prag
