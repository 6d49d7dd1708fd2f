//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/test_spectrum.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "prag/random.hpp"
#include "prag/spectrum.hpp"
#include "support.hpp"

namespace prag
{
namespace
{
constexpr double sqrt_pi = 1.7724538509055160273;

OpticalSpectrum parse(std::string const& text, AxisUnit axis)
{
    std::istringstream in(text);
    return load_spectrum(in, axis);
}

//---------------------------------------------------------------------------//
// LOADING
//---------------------------------------------------------------------------//
TEST(LoadSpectrum, HertzColumns)
{
    auto const s = parse("242e12,1.0\n243e12,2.0\n", AxisUnit::hz);
    ASSERT_EQ(2u, s.size());
    EXPECT_DOUBLE_EQ(two_pi * 242e12, s.samples()[0].omega);
    EXPECT_DOUBLE_EQ(two_pi * 243e12, s.samples()[1].omega);
    // Density per Hz becomes density per rad/s
    EXPECT_DOUBLE_EQ(2.0 / two_pi, s.samples()[1].density);
}

TEST(LoadSpectrum, HeaderCommentsWhitespaceAndSorting)
{
    auto const s = parse("# measured\nfreq_thz density\n243  2\n\n242\t1\n",
                         AxisUnit::thz);
    ASSERT_EQ(2u, s.size());
    EXPECT_DOUBLE_EQ(thz_to_rad_s(242), s.omega_min());
}

TEST(LoadSpectrum, WavelengthAxis)
{
    auto const s = parse("1236,1\n1240,1\n", AxisUnit::nm);
    EXPECT_NEAR(1.0, s.omega_max() / thz_to_rad_s(242.6), 1e-3);
    // Jacobian: S_w = S_lambda lambda^2 / (2 pi c)
    double const lambda = 1236e-9;
    EXPECT_NEAR(lambda * lambda / (two_pi * speed_of_light) * 1e9,
                s.samples().back().density,
                1e-12 * s.samples().back().density);
}

TEST(LoadSpectrum, WavelengthJacobianPreservesPower)
{
    // A Gaussian in wavelength integrates to the same power on either axis
    std::ostringstream csv;
    double p_lambda = 0;
    double const dl = 0.01;
    for (int i = 0; i <= 8000; ++i)
    {
        double const l = 1196 + dl * i;
        double const d = std::exp(-0.5 * std::pow((l - 1236) / 5, 2));
        csv << l << "," << d << "\n";
        p_lambda += d * dl * ((i == 0 || i == 8000) ? 0.5 : 1.0);
    }
    auto const s = parse(csv.str(), AxisUnit::nm);
    double const p_omega = numerics::trapezoid(s.omegas(), s.densities());
    EXPECT_NEAR(1.0, p_omega / p_lambda, 1e-6);
}

TEST(LoadSpectrum, Errors)
{
    EXPECT_THROW(parse("1,1\n2,-1\n", AxisUnit::rad_s), InvalidInput);
    EXPECT_THROW(parse("1,1\n2,x\n", AxisUnit::rad_s), InvalidInput);
    EXPECT_THROW(parse("1,1\n1,2\n3,1\n", AxisUnit::rad_s), InvalidInput);
    EXPECT_THROW(parse("1,1,1\n2,2,2\n", AxisUnit::rad_s), InvalidInput);
    EXPECT_THROW(parse("", AxisUnit::rad_s), InvalidInput);
    EXPECT_THROW(parse("1,1\n", AxisUnit::rad_s), InvalidInput);
}

//---------------------------------------------------------------------------//
// WIDTHS
//---------------------------------------------------------------------------//
TEST(Widths, ReferenceMixture)
{
    auto const m = test::reference_mixture();
    EXPECT_NEAR(1.0, central_frequency(m) / thz_to_rad_s(242.6), 1e-3);
    EXPECT_NEAR(1.0, width_two_sigma(m) / thz_to_rad_s(7.5), 1e-2);
    EXPECT_NEAR(1.0, width_sussmann(m) / thz_to_rad_s(13), 1e-2);
    // Dense quadrature values
    EXPECT_NEAR(242.549087, rad_s_to_thz(central_frequency(m)), 1e-5);
    EXPECT_NEAR(7.511908, rad_s_to_thz(width_two_sigma(m)), 1e-5);
    EXPECT_NEAR(13.029610, rad_s_to_thz(width_sussmann(m)), 1e-5);
}

TEST(Widths, SampledAgreesWithClosedForm)
{
    auto const m = test::reference_mixture();
    auto const s
        = sample_spectrum(m, thz_to_rad_s(200), thz_to_rad_s(290), 20001);
    EXPECT_NEAR(1.0, central_frequency(s) / central_frequency(m), 1e-9);
    EXPECT_NEAR(1.0, width_two_sigma(s) / width_two_sigma(m), 1e-6);
    EXPECT_NEAR(1.0, width_sussmann(s) / width_sussmann(m), 1e-6);
}

TEST(Widths, SingleGaussian)
{
    double const w0 = thz_to_rad_s(240), sigma = thz_to_rad_s(3);
    GaussianMixture g({{2.0, w0, sigma}});
    EXPECT_NEAR(w0, central_frequency(g), 1e-12 * w0);
    EXPECT_NEAR(2 * sigma, width_two_sigma(g), 1e-12 * sigma);
    EXPECT_NEAR(2 * sqrt_pi * sigma, width_sussmann(g), 1e-12 * sigma);
    EXPECT_NEAR(sqrt_pi, width_sussmann(g) / width_two_sigma(g), 1e-9);
}

TEST(Widths, SymmetricPair)
{
    double const w0 = 1e15, d = 3e13, sigma = 5e12;
    GaussianMixture g({{1, w0 - d, sigma}, {1, w0 + d, sigma}});
    EXPECT_NEAR(w0, central_frequency(g), 1e-12 * w0);
}

TEST(Widths, SeparatedPairDoublesSussmann)
{
    double const sigma = 1e12;
    GaussianMixture one({{1, 1e15, sigma}});
    GaussianMixture two({{1, 1e15, sigma}, {1, 1e15 + 100 * sigma, sigma}});
    EXPECT_NEAR(2.0, width_sussmann(two) / width_sussmann(one), 1e-12);
    // Independent check by quadrature of the sampled pair
    auto const s = sample_spectrum(two, 1e15 - 10 * sigma, 1e15 + 110 * sigma, 60001);
    EXPECT_NEAR(2.0, width_sussmann(s) / width_sussmann(one), 1e-6);
}

TEST(Widths, NarrowLineShrinks)
{
    double prev = 1e300;
    for (double sigma : {1e12, 1e11, 1e10})
    {
        auto s = sample_spectrum(GaussianMixture({{1, 1e15, sigma}}),
                                 1e15 - 10 * sigma, 1e15 + 10 * sigma, 2001);
        double const b = width_two_sigma(s);
        EXPECT_LT(b, prev);
        prev = b;
    }
    EXPECT_LT(prev, 2.01e10);
}

TEST(Widths, ScaleInvariant)
{
    auto const m = test::reference_mixture();
    auto const s = sample_spectrum(m, thz_to_rad_s(220), thz_to_rad_s(265), 4001);
    std::vector<SpectrumSample> scaled = s.samples();
    for (auto& x : scaled)
        x.density *= 3.7e-9;
    OpticalSpectrum const t(scaled);
    double const eps = 4 * std::numeric_limits<double>::epsilon();
    EXPECT_NEAR(central_frequency(s), central_frequency(t), eps * central_frequency(s));
    EXPECT_NEAR(width_two_sigma(s), width_two_sigma(t), eps * width_two_sigma(s));
    EXPECT_NEAR(width_sussmann(s), width_sussmann(t), eps * width_sussmann(s));
}

TEST(Widths, ZeroPowerThrows)
{
    OpticalSpectrum z({{1, 0}, {2, 0}});
    EXPECT_THROW(central_frequency(z), InvalidInput);
}

//---------------------------------------------------------------------------//
// FITTING
//---------------------------------------------------------------------------//
OpticalSpectrum reference_samples(double noise, std::uint64_t seed)
{
    auto const m = test::reference_mixture();
    auto s = sample_spectrum(m, thz_to_rad_s(225), thz_to_rad_s(260), 701);
    auto samples = s.samples();
    RandomStream rng(seed, 0);
    double const peak = 2.0;
    for (auto& x : samples)
        x.density += noise * peak * rng.normal_pair().first;
    for (auto& x : samples)
        x.density = std::max(0.0, x.density);
    return OpticalSpectrum(samples);
}

void expect_component(GaussianComponent const& want,
                      GaussianComponent const& got,
                      double rel)
{
    EXPECT_NEAR(1.0, got.amplitude / want.amplitude, rel);
    EXPECT_NEAR(1.0, got.center / want.center, rel);
    EXPECT_NEAR(1.0, got.sigma / want.sigma, rel);
}

TEST(Fit, ReferenceMixtureExact)
{
    auto const r = fit_gaussian_mixture(reference_samples(0, 0), 3);
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.sigma_clamped);
    auto const want = test::reference_mixture();
    ASSERT_EQ(3u, r.mixture.size());
    for (std::size_t k = 0; k < 3; ++k)
        expect_component(want.components()[k], r.mixture.components()[k], 1e-3);
    EXPECT_LT(r.residual_rms, 1e-8);
}

TEST(Fit, SingleGaussianSelfFit)
{
    GaussianMixture g({{1.5, 2e15, 4e13}});
    auto const s = sample_spectrum(g, 1.8e15, 2.2e15, 301);
    auto const r = fit_gaussian_mixture(s, 1);
    EXPECT_TRUE(r.converged);
    expect_component(g.components()[0], r.mixture.components()[0], 1e-9);
}

TEST(Fit, OnePercentNoise)
{
    // The two overlapping lines near 242-246 THz trade amplitude and width
    // under this noise, so only the aggregate shape is checked
    double const noise = 0.01;
    auto const want = test::reference_mixture();
    for (std::uint64_t seed : {1, 2, 7})
    {
        auto const r = fit_gaussian_mixture(reference_samples(noise, seed), 3);
        EXPECT_TRUE(r.converged);
        // Residual matches the injected noise (2.0 is the spectral peak)
        EXPECT_NEAR(1.0, r.residual_rms / (noise * 2.0), 0.15);
        EXPECT_NEAR(1.0, r.mixture.total_power() / want.total_power(), 0.02);
        EXPECT_NEAR(1.0, central_frequency(r.mixture) / central_frequency(want), 1e-3);
        EXPECT_NEAR(1.0, width_two_sigma(r.mixture) / width_two_sigma(want), 0.02);
        EXPECT_NEAR(1.0, width_sussmann(r.mixture) / width_sussmann(want), 0.02);
    }
}

TEST(Fit, NoisyFitIsGlobalOptimum)
{
    // Starting from the true parameters never finds a lower residual
    auto const s = reference_samples(0.01, 7);
    auto const plain = fit_gaussian_mixture(s, 3);
    auto const seeded = fit_gaussian_mixture(s, 3, test::reference_mixture());
    EXPECT_LE(plain.residual_rms, seeded.residual_rms * (1 + 1e-9));
}

TEST(Fit, RoundTripIdempotent)
{
    auto const first = fit_gaussian_mixture(reference_samples(0.01, 3), 3);
    auto const resampled
        = sample_spectrum(first.mixture, thz_to_rad_s(225), thz_to_rad_s(260), 701);
    auto const second = fit_gaussian_mixture(resampled, 3, first.mixture);
    for (std::size_t k = 0; k < 3; ++k)
        expect_component(first.mixture.components()[k],
                         second.mixture.components()[k], 1e-6);
}

TEST(Fit, Errors)
{
    OpticalSpectrum s({{1, 1}, {2, 2}, {3, 1}, {4, 0.5}});
    EXPECT_THROW(fit_gaussian_mixture(s, 0), InvalidInput);
    EXPECT_THROW(fit_gaussian_mixture(s, 2), InvalidInput);
}

//---------------------------------------------------------------------------//
// DISCRETIZATION
//---------------------------------------------------------------------------//
TEST(Discretize, FlatDensity)
{
    OpticalSpectrum flat({{0.5, 2.0}, {20.5, 2.0}});
    ModeGrid g{1.0, 0.5, 30};
    auto const s = discretize(flat, g, 1e9);
    ASSERT_EQ(30u, s.size());
    for (double p : s.p_s())
        EXPECT_DOUBLE_EQ(1.0, p);
}

TEST(Discretize, CutoffDropsWeakMode)
{
    double const weak = std::pow(10.0, -1.4);
    OpticalSpectrum spec({{1, weak}, {2, 1}, {3, 1}, {4, weak}, {5, 1}});
    auto const s = discretize(spec, {1, 1, 5}, 13);
    // Edge modes are trimmed, the interior one is switched off
    ASSERT_EQ(4u, s.size());
    EXPECT_DOUBLE_EQ(2, s.omega(0));
    EXPECT_EQ(0.0, s.p_s()[2]);
    EXPECT_EQ(3u, power_summary(s).n_modes);
}

TEST(Discretize, ReferenceDeviceComb)
{
    auto const s = test::reference_state();
    auto const p = power_summary(s);
    EXPECT_EQ(1252u, p.n_modes);
    EXPECT_NEAR(0.444413, p.relative_width, 1e-6);
}

TEST(Discretize, SumMatchesIntegral)
{
    auto const m = test::reference_mixture();
    auto const s = discretize(m, test::reference_grid(), 200);
    double sum = 0;
    for (double p : s.p_s())
        sum += p;
    auto const em = numerics::euler_maclaurin_sum(
        [&](double w) { return s.grid().delta_omega * m(w); },
        s.grid().omega(0), s.grid().omega_last(), s.size());
    EXPECT_NEAR(1.0, sum / m.total_power(), 1e-9);
    EXPECT_NEAR(sum, em.value, std::max(em.residual_estimate, 1e-9 * sum));
}

TEST(Discretize, ThermalNeedsLength)
{
    auto const m = test::reference_mixture();
    EXPECT_THROW(discretize(m, test::reference_grid(), 13, 300), InvalidInput);
    auto const s = discretize(m, test::reference_grid(), 13, 300, 3e-3);
    EXPECT_GT(s.p_t()[0], 0.0);
    EXPECT_TRUE(s.gamma_sq().has_value());
}

TEST(Discretize, EmptyAfterCutoffThrows)
{
    OpticalSpectrum spec({{1, 1}, {2, 1}});
    EXPECT_THROW(discretize(spec, {10, 1, 3}, 13), InvalidInput);
}

//---------------------------------------------------------------------------//
// MODE COUNTING
//---------------------------------------------------------------------------//
OpticalSpectrum peak_comb(std::vector<double> const& heights, double spacing)
{
    std::vector<SpectrumSample> s;
    double const width = spacing / 20;
    double const lo = -spacing, hi = spacing * static_cast<double>(heights.size());
    for (double w = lo; w <= hi; w += width / 4)
    {
        double d = 0;
        for (std::size_t k = 0; k < heights.size(); ++k)
        {
            double const z = (w - spacing * static_cast<double>(k)) / width;
            d += heights[k] * std::exp(-0.5 * z * z);
        }
        s.push_back({1e15 + w, d});
    }
    return OpticalSpectrum(s);
}

TEST(CountModes, ResolvedPeaks)
{
    double const spacing = thz_to_rad_s(1);
    auto const c = count_modes(peak_comb({1, 1, 1, 1, 1}, spacing), 13, spacing);
    EXPECT_EQ(ModeCountRegime::peaks, c.regime);
    EXPECT_EQ(5u, c.n);
}

TEST(CountModes, WeakPeakDropped)
{
    double const spacing = thz_to_rad_s(1);
    double const weak = std::pow(10.0, -1.4);
    auto const c = count_modes(peak_comb({1, 1, weak, 1, 1}, spacing), 13, spacing);
    EXPECT_EQ(ModeCountRegime::peaks, c.regime);
    EXPECT_EQ(4u, c.n);
}

TEST(CountModes, SmoothAseSpectrum)
{
    // About 67 nm around 1236 nm on a 4 mm GaAs device
    auto const s = sample_spectrum(test::reference_mixture(), nm_to_rad_s(1290),
                                   nm_to_rad_s(1190), 5001);
    double const fsr = fsr_angular(4e-3, 3.41);
    auto const c = count_modes(s, 13, fsr);
    EXPECT_EQ(ModeCountRegime::comb, c.regime);
    EXPECT_GT(c.n, 1000u);
}

//---------------------------------------------------------------------------//
}  // namespace
}  // namespace prag
