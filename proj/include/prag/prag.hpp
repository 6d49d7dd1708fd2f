//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/prag.hpp
//! Convenience header for the whole library.
//---------------------------------------------------------------------------//
#pragma once

#include "constants.hpp"
#include "correlations.hpp"
#include "error.hpp"
#include "interferogram.hpp"
#include "mixing.hpp"
#include "numerics.hpp"
#include "oracle.hpp"
#include "prag_state.hpp"
#include "random.hpp"
#include "spectrum.hpp"

namespace prag
{
inline constexpr char const version[] = "1.0.0";
}
