//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/constants.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <numbers>

namespace prag
{
//---------------------------------------------------------------------------//
// CODATA 2018 exact/recommended values, SI units
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double boltzmann = 1.380649e-23;  // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

//! Angular frequency [rad/s] of an ordinary frequency given in THz
constexpr double thz_to_rad_s(double thz) { return two_pi * thz * 1e12; }

//! Ordinary frequency [THz] of an angular frequency [rad/s]
constexpr double rad_s_to_thz(double omega) { return omega / (two_pi * 1e12); }

//! Vacuum wavelength [nm] <-> angular frequency [rad/s]
constexpr double nm_to_rad_s(double nm)
{
    return two_pi * speed_of_light / (nm * 1e-9);
}
constexpr double rad_s_to_nm(double omega)
{
    return two_pi * speed_of_light / omega * 1e9;
}

//! Longitudinal mode spacing 2 pi c / (2 n L) of a Fabry-Perot waveguide
constexpr double fsr_angular(double length_m, double group_index)
{
    return two_pi * speed_of_light / (2.0 * group_index * length_m);
}

//---------------------------------------------------------------------------//
}  // namespace prag
