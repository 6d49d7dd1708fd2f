//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file prag/io.hpp
//! JSON and CSV serialization of states, fits, traces, and interferograms.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "correlations.hpp"
#include "error.hpp"
#include "interferogram.hpp"
#include "oracle.hpp"
#include "prag_state.hpp"
#include "spectrum.hpp"

namespace prag::io
{
using nlohmann::json;

//---------------------------------------------------------------------------//
//! Shortest decimal text that round-trips to the same double
inline std::string format_double(double v)
{
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec)
    {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v)
            break;
    }
    return buf;
}

//---------------------------------------------------------------------------//
// PRAG STATE
//---------------------------------------------------------------------------//
inline json to_json(PragState const& s)
{
    json j{{"omega_1", s.grid().omega_1},
           {"delta_omega", s.grid().delta_omega},
           {"N", s.grid().count},
           {"p_s", s.p_s()},
           {"p_t", s.p_t()},
           {"temperature", s.temperature()}};
    if (s.length())
        j["length_m"] = *s.length();
    return j;
}

inline PragState state_from_json(json const& j)
{
    try
    {
        ModeGrid grid{j.at("omega_1").get<double>(),
                      j.at("delta_omega").get<double>(),
                      j.at("N").get<std::size_t>()};
        auto p_s = j.at("p_s").get<std::vector<double>>();
        std::vector<double> p_t;
        if (j.contains("p_t"))
            p_t = j.at("p_t").get<std::vector<double>>();
        PragState s(grid, std::move(p_s), std::move(p_t), j.value("temperature", 0.0));
        if (j.contains("length_m"))
            return s.with_length(j.at("length_m").get<double>());
        return s;
    }
    catch (json::exception const& e)
    {
        throw InvalidInput(std::string("PragState JSON: ") + e.what());
    }
}

//---------------------------------------------------------------------------//
// MIXTURES
//---------------------------------------------------------------------------//
inline json to_json(GaussianMixture const& m)
{
    json comps = json::array();
    for (auto const& c : m.components())
    {
        comps.push_back({{"amplitude", c.amplitude},
                         {"center_rad_s", c.center},
                         {"sigma_rad_s", c.sigma}});
    }
    return json{{"components", comps}};
}

inline json to_json(FitResult const& r)
{
    auto j = to_json(r.mixture);
    j["residual_rms"] = r.residual_rms;
    j["converged"] = r.converged;
    j["sigma_clamped"] = r.sigma_clamped;
    j["iterations"] = r.iterations;
    return j;
}

inline GaussianMixture mixture_from_json(json const& j)
{
    try
    {
        std::vector<GaussianComponent> comps;
        for (auto const& c : j.at("components"))
        {
            comps.push_back({c.at("amplitude").get<double>(),
                             c.at("center_rad_s").get<double>(),
                             c.at("sigma_rad_s").get<double>()});
        }
        return GaussianMixture(std::move(comps));
    }
    catch (json::exception const& e)
    {
        throw InvalidInput(std::string("GaussianMixture JSON: ") + e.what());
    }
}

//---------------------------------------------------------------------------//
// HISTOGRAMS
//---------------------------------------------------------------------------//
inline json to_json(PhotonCountHistogram const& h)
{
    json counts = json::object();
    for (auto const& [n, c] : h.counts)
        counts[std::to_string(n)] = c;
    return json{{"mean_photons", h.mean_photons},
                {"n_draws", h.n_draws},
                {"sample_mean", h.sample_mean},
                {"chi_square", h.chi_square},
                {"degrees_of_freedom", h.degrees_of_freedom},
                {"p_value", h.p_value},
                {"counts", counts}};
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//
//! Write '#'-prefixed header lines
inline void write_comment(std::ostream& os, std::string const& text)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        os << "# " << line << '\n';
}

inline void write_csv(std::ostream& os, CorrelationTrace const& t)
{
    os << "tau_s,value";
    if (t.std_error)
        os << ",stderr";
    os << '\n';
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        os << format_double(t.tau[i]) << ',' << format_double(t.value[i]);
        if (t.std_error)
            os << ',' << format_double((*t.std_error)[i]);
        os << '\n';
    }
}

inline void write_csv(std::ostream& os, ComplexCorrelationTrace const& t)
{
    os << "tau_s,value,value_im\n";
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        os << format_double(t.tau[i]) << ',' << format_double(t.value[i].real())
           << ',' << format_double(t.value[i].imag()) << '\n';
    }
}

inline void write_csv(std::ostream& os, Interferogram const& ig)
{
    os << "tau_s,counts";
    if (ig.std_error)
        os << ",stderr";
    os << '\n';
    for (std::size_t i = 0; i < ig.tau.size(); ++i)
    {
        os << format_double(ig.tau[i]) << ',' << format_double(ig.counts[i]);
        if (ig.std_error)
            os << ',' << format_double((*ig.std_error)[i]);
        os << '\n';
    }
}

/*!
 * Read an interferogram CSV (tau_s, counts[, stderr]); '#' comments and a
 * non-numeric header row are skipped.
 */
inline Interferogram read_interferogram(std::istream& in)
{
    Interferogram ig;
    std::vector<double> err;
    std::string line;
    bool header_allowed = true;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        auto const first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        for (auto& ch : line)
        {
            if (ch == ',' || ch == ';' || ch == '\t')
                ch = ' ';
        }
        std::istringstream row(line);
        std::vector<double> v;
        std::string tok;
        bool numeric = true;
        while (row >> tok)
        {
            try
            {
                std::size_t pos = 0;
                v.push_back(std::stod(tok, &pos));
                numeric = numeric && pos == tok.size();
            }
            catch (std::exception const&)
            {
                numeric = false;
            }
        }
        if (!numeric && header_allowed)
        {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (!numeric || v.size() < 2 || v.size() > 3)
        {
            throw InvalidInput("interferogram CSV: malformed row "
                               + std::to_string(lineno));
        }
        ig.tau.push_back(v[0]);
        ig.counts.push_back(v[1]);
        if (v.size() == 3)
            err.push_back(v[2]);
    }
    if (!err.empty())
    {
        detail::require(err.size() == ig.tau.size(),
                        "interferogram CSV: stderr column must be complete");
        ig.std_error = std::move(err);
    }
    ig.validate();
    return ig;
}

//---------------------------------------------------------------------------//
}  // namespace prag::io
