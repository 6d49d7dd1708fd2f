//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/support.hpp
//! Shared fixtures: the three-Gaussian reference spectrum and its comb.
//---------------------------------------------------------------------------//
#pragma once

#include <random>

#include "prag/prag.hpp"

namespace prag::test
{
inline GaussianMixture reference_mixture()
{
    return GaussianMixture({{1.904, thz_to_rad_s(242.55), thz_to_rad_s(2.468)},
                            {0.637, thz_to_rad_s(246.05), thz_to_rad_s(2.875)},
                            {0.532, thz_to_rad_s(236.82), thz_to_rad_s(2.105)}});
}

//! FSR of the 3 mm device
inline double reference_fsr() { return thz_to_rad_s(1.465e-2); }

inline ModeGrid reference_grid()
{
    return comb_covering(thz_to_rad_s(200), thz_to_rad_s(290), reference_fsr());
}

//! Reference spectrum on the device comb with a 13 dB cutoff
inline PragState reference_state()
{
    return discretize(reference_mixture(), reference_grid(), 13.0);
}

inline double laser_1300nm() { return nm_to_rad_s(1300.0); }

//! Random small state for property checks
inline PragState random_state(std::mt19937_64& rng,
                              std::size_t max_modes,
                              bool thermal,
                              bool coherent = true)
{
    std::uniform_int_distribution<std::size_t> nd(1, max_modes);
    std::uniform_real_distribution<double> u(0, 1);
    auto const n = nd(rng);
    std::vector<double> ps(n, 0.0), pt(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        ps[i] = coherent ? u(rng) : 0.0;
        pt[i] = thermal ? u(rng) : 0.0;
    }
    if (coherent)
        ps[0] += 0.1;
    else
        pt[0] += 0.1;
    ModeGrid grid{thz_to_rad_s(200 + 50 * u(rng)), thz_to_rad_s(0.5 + u(rng)), n};
    return PragState(grid, std::move(ps), std::move(pt));
}
}  // namespace prag::test
