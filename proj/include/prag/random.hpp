//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/random.hpp
//! Counter-based Philox4x32-10 generator and per-stream draws.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>

#include "constants.hpp"

namespace prag
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32 with 10 rounds (Salmon et al., SC'11).
 *
 * A pure function of a 128-bit counter and a 64-bit key.
 */
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t m0 = 0xD2511F53u;
    static constexpr std::uint32_t m1 = 0xCD9E8D57u;
    static constexpr std::uint32_t w0 = 0x9E3779B9u;
    static constexpr std::uint32_t w1 = 0xBB67AE85u;

    static constexpr Counter generate(Counter ctr, Key key)
    {
        for (int r = 0; r < 10; ++r)
        {
            if (r > 0)
            {
                key[0] += w0;
                key[1] += w1;
            }
            std::uint64_t const p0 = std::uint64_t{m0} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{m1} * ctr[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

//---------------------------------------------------------------------------//
/*!
 * Independent random stream identified by (seed, stream index).
 *
 * Draw j of stream s uses counter {j_lo, j_hi, s_lo, s_hi} with the seed as
 * key, so the output of a stream never depends on which thread evaluates it
 * or on what other streams have been used.
 */
class RandomStream
{
  public:
    using result_type = std::uint32_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)}
        , stream_(stream)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        if (pos_ == 4)
        {
            this->refill();
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64()
    {
        std::uint64_t const hi = (*this)();
        std::uint64_t const lo = (*this)();
        return (hi << 32) | lo;
    }

    //! Uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    //! Uniform on (0, 1), safe for logarithms
    double uniform_open()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    //! Pair of independent standard normals (Box-Muller)
    std::pair<double, double> normal_pair()
    {
        double const r = std::sqrt(-2 * std::log(uniform_open()));
        double const theta = two_pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    //! Circular complex normal with E|z|^2 = variance
    std::complex<double> complex_normal(double variance)
    {
        auto const [x, y] = normal_pair();
        double const s = std::sqrt(0.5 * variance);
        return {s * x, s * y};
    }

    //! Uniform phase factor e^{i phi}
    std::complex<double> unit_phase()
    {
        double const phi = two_pi * uniform();
        return {std::cos(phi), std::sin(phi)};
    }

    std::uint64_t draws() const { return draw_; }

  private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t draw_{0};
    Philox4x32::Counter block_{};
    int pos_{4};

    void refill()
    {
        block_ = Philox4x32::generate({static_cast<std::uint32_t>(draw_),
                                       static_cast<std::uint32_t>(draw_ >> 32),
                                       static_cast<std::uint32_t>(stream_),
                                       static_cast<std::uint32_t>(stream_ >> 32)},
                                      key_);
        ++draw_;
        pos_ = 0;
    }
};

//---------------------------------------------------------------------------//
}  // namespace prag
