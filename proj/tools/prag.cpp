//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tools/prag.cpp
//! Command-line front end: spectrum fits, correlation traces, sweeps,
//! Monte Carlo checks and TPA interferograms.
//---------------------------------------------------------------------------//
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "prag/io.hpp"
#include "prag/prag.hpp"

namespace prag::cli
{
namespace
{
using io::json;

//! Exit status for a fit that did not converge
constexpr int exit_fit_failed = 2;

class FitNotConverged : public std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
// INPUT FILES
//---------------------------------------------------------------------------//
std::string read_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(std::string const& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

//! Input files read during a run, with their digests
class Inputs
{
  public:
    std::string read(std::string const& path)
    {
        auto data = read_file(path);
        digests_[path] = sha256_hex(data);
        return data;
    }
    std::map<std::string, std::string> const& digests() const { return digests_; }

  private:
    std::map<std::string, std::string> digests_;
};

//---------------------------------------------------------------------------//
// RUN METADATA AND OUTPUT
//---------------------------------------------------------------------------//
struct Run
{
    std::string command;
    json config = json::object();
    Inputs inputs;
    std::string out = "-";
};

//! Every option of the subcommand with its parsed or default value
json resolved_config(CLI::App const& app)
{
    json cfg = json::object();
    for (auto const* opt : app.get_options())
    {
        auto name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
        if (name == "help" || name == "config")
            continue;
        if (opt->count() > 0)
        {
            auto const& res = opt->results();
            if (opt->get_type_size() == 0)
                cfg[name] = true;
            else if (opt->get_items_expected_max() > 1)
                cfg[name] = res;
            else
                cfg[name] = res.back();
        }
        else if (opt->get_type_size() == 0)
        {
            cfg[name] = false;
        }
        else
        {
            auto const def = opt->get_default_str();
            cfg[name] = def.empty() ? json(nullptr) : json(def);
        }
    }
    return cfg;
}

json meta(Run const& run)
{
    return {{"tool", "prag"},
            {"version", prag::version},
            {"command", run.command},
            {"config", run.config},
            {"inputs", run.inputs.digests()}};
}

void write_header(std::ostream& os, Run const& run)
{
    io::write_comment(os, std::string("prag ") + prag::version);
    io::write_comment(os, "command: " + run.command);
    io::write_comment(os, "config: " + run.config.dump());
    for (auto const& [path, digest] : run.inputs.digests())
        io::write_comment(os, "input: " + path + " sha256 " + digest);
}

template<class F>
void emit(Run const& run, F&& body)
{
    // Render fully before touching the destination
    std::ostringstream buffer;
    body(buffer);
    if (run.out == "-")
    {
        std::cout << buffer.view() << std::flush;
        return;
    }
    std::ofstream os(run.out, std::ios::binary);
    if (!os)
        throw InvalidInput("cannot write '" + run.out + "'");
    os << buffer.view();
    if (!os.flush())
        throw InvalidInput("failed writing '" + run.out + "'");
}

void emit_json(Run const& run, json body)
{
    body["meta"] = meta(run);
    emit(run, [&](std::ostream& os) { os << body.dump(2) << '\n'; });
}

std::string num(double v) { return io::format_double(v); }

//---------------------------------------------------------------------------//
// SHARED OPTIONS
//---------------------------------------------------------------------------//
struct SpectrumOptions
{
    std::string path;
    std::string units = "nm";
    int components = 3;
};

void add_spectrum_options(CLI::App* app, SpectrumOptions& o, bool required)
{
    auto* s = app->add_option("--spectrum", o.path, "Two-column spectrum file (CSV or whitespace)");
    if (required)
        s->required();
    app->add_option("--units", o.units, "Abscissa of the spectrum file")
        ->check(CLI::IsMember({"nm", "THz", "rad_s", "Hz"}));
    app->add_option("--components", o.components, "Gaussian components in the fit")
        ->check(CLI::PositiveNumber);
}

OpticalSpectrum load(Run& run, SpectrumOptions const& o)
{
    std::istringstream in(run.inputs.read(o.path));
    AxisUnit axis = AxisUnit::nm;
    if (o.units == "THz")
        axis = AxisUnit::thz;
    else if (o.units == "rad_s")
        axis = AxisUnit::rad_s;
    else if (o.units == "Hz")
        axis = AxisUnit::hz;
    return load_spectrum(in, axis);
}

FitResult fit(Run& run, SpectrumOptions const& o)
{
    auto const r = fit_gaussian_mixture(load(run, o), o.components);
    if (!r.converged)
        throw FitNotConverged("fit did not converge after "
                              + std::to_string(r.iterations) + " iterations");
    return r;
}

//! Where a PRAG state comes from: a state file, a fitted spectrum, or
//! bare mode statistics
struct StateOptions
{
    SpectrumOptions spectrum;
    std::string state_path;
    std::size_t modes = 0;
    double relative_width = 0;
    double fsr_thz = 1.465e-2;
    double cutoff_db = 13;
    double temperature_k = 0;
    std::optional<double> length_mm;
    std::optional<double> zeta;
    double laser_nm = 1300;
};

void add_state_options(CLI::App* app, StateOptions& o, bool with_laser)
{
    add_spectrum_options(app, o.spectrum, false);
    app->add_option("--state", o.state_path, "PRAG state JSON");
    app->add_option("--modes", o.modes, "Mode number N of a statistics-only state");
    app->add_option("--relative-width", o.relative_width,
                    "Relative width var(p_s)/<p_s>^2 of a statistics-only state")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--fsr-thz", o.fsr_thz, "Mode spacing of the device comb [THz]")
        ->check(CLI::PositiveNumber);
    app->add_option("--cutoff-db", o.cutoff_db, "Mode cutoff below the peak [dB]")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--temperature-k", o.temperature_k, "Thermal background temperature [K]")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--length-mm", o.length_mm, "Cavity length for thermal power [mm]");
    if (with_laser)
    {
        app->add_option("--zeta", o.zeta, "Laser power fraction of a mixed state")
            ->check(CLI::Range(0.0, 1.0));
        app->add_option("--laser-nm", o.laser_nm, "Laser wavelength [nm]")
            ->check(CLI::PositiveNumber);
    }
}

PragState base_state(Run& run, StateOptions const& o)
{
    int const sources = !o.state_path.empty() + !o.spectrum.path.empty() + (o.modes > 0);
    if (sources != 1)
        throw CLI::ValidationError("state",
                                   "give exactly one of --state, --spectrum or --modes");
    if (!o.state_path.empty())
        return io::state_from_json(json::parse(run.inputs.read(o.state_path)));
    if (o.modes > 0)
        return PragState::with_statistics(o.modes, o.relative_width);
    auto const r = fit(run, o.spectrum);
    auto const [lo, hi] = r.mixture.support(8);
    auto const grid = comb_covering(lo, hi, thz_to_rad_s(o.fsr_thz));
    std::optional<double> length;
    if (o.length_mm)
        length = *o.length_mm * 1e-3;
    return discretize(r.mixture, grid, o.cutoff_db, o.temperature_k, length);
}

std::optional<MixedState> mixed_state(PragState const& base, StateOptions const& o)
{
    if (!o.zeta)
        return std::nullopt;
    return MixedState::with_zeta(base, nm_to_rad_s(o.laser_nm), *o.zeta);
}

struct OracleOptions
{
    std::uint64_t seed = 1;
    std::size_t realizations = 100000;
    unsigned threads = 0;
};

void add_oracle_options(CLI::App* app, OracleOptions& o, std::size_t realizations)
{
    o.realizations = realizations;
    app->add_option("--seed", o.seed, "Random seed");
    app->add_option("--realizations", o.realizations, "Monte Carlo realizations")
        ->check(CLI::PositiveNumber);
    app->add_option("--threads", o.threads, "Worker threads (0: hardware)");
}

OracleConfig oracle_config(OracleOptions const& o)
{
    OracleConfig c;
    c.seed = o.seed;
    c.n_realizations = o.realizations;
    c.threads = o.threads;
    return c;
}

json widths_json(double center, double two_sigma, double sussmann)
{
    return {{"central_frequency_thz", center / thz_to_rad_s(1)},
            {"width_two_sigma_thz", two_sigma / thz_to_rad_s(1)},
            {"width_sussmann_thz", sussmann / thz_to_rad_s(1)}};
}

//---------------------------------------------------------------------------//
// COMMAND LINE ASSEMBLY
//---------------------------------------------------------------------------//
/*!
 * Insert values from a JSON config file as flags ahead of the user's own,
 * so that with "take last" parsing the command line wins.
 */
std::vector<std::string> expand_config(std::vector<std::string> args, Run& run)
{
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (!path)
        return args;

    auto const cfg = json::parse(run.inputs.read(*path));
    if (!cfg.is_object())
        throw InvalidInput("config file must hold a JSON object");
    std::vector<std::string> injected;
    for (auto const& [key, value] : cfg.items())
    {
        std::string const flag = "--" + key;
        if (value.is_boolean())
        {
            if (value.get<bool>())
                injected.push_back(flag);
        }
        else if (value.is_array())
        {
            std::string joined;
            for (auto const& v : value)
                joined += (joined.empty() ? "" : ",")
                          + (v.is_string() ? v.get<std::string>() : v.dump());
            injected.insert(injected.end(), {flag, joined});
        }
        else if (value.is_string())
        {
            injected.insert(injected.end(), {flag, value.get<std::string>()});
        }
        else if (value.is_number())
        {
            injected.insert(injected.end(), {flag, value.dump()});
        }
        else
        {
            throw InvalidInput("config key '" + key + "' has an unsupported value");
        }
    }
    // Subcommand names come first: "tpa" takes a second level
    std::size_t insert_at = std::min<std::size_t>(1, args.size());
    if (!args.empty() && args[0] == "tpa")
        insert_at = std::min<std::size_t>(2, args.size());
    args.insert(args.begin() + static_cast<long>(insert_at), injected.begin(), injected.end());
    return args;
}

int main_impl(int argc, char** argv)
{
    Run run;
    std::vector<std::string> args(argv + 1, argv + argc);
    try
    {
        args = expand_config(args, run);
    }
    catch (std::exception const& e)
    {
        std::cerr << "prag: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"Photon statistics of broadband and mixed light"};
    app.set_version_flag("--version", std::string(prag::version));
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(
        CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", run.out, "Output file ('-' for stdout)");
        sub->add_option("--config", config_path, "JSON file mirroring the flags");
    };

    // fit
    SpectrumOptions fit_opts;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a Gaussian mixture and report widths");
    add_spectrum_options(fit_cmd, fit_opts, true);
    add_common(fit_cmd);

    // widths
    SpectrumOptions widths_opts;
    auto* widths_cmd = app.add_subcommand("widths", "Spectral center and widths of a sampled spectrum");
    add_spectrum_options(widths_cmd, widths_opts, true);
    double widths_fsr_thz = 1.465e-2;
    double widths_cutoff = 13;
    widths_cmd->add_option("--fsr-thz", widths_fsr_thz, "Mode spacing for the mode count [THz]")
        ->check(CLI::PositiveNumber);
    widths_cmd->add_option("--cutoff-db", widths_cutoff, "Mode cutoff below the peak [dB]")
        ->check(CLI::NonNegativeNumber);
    add_common(widths_cmd);

    // g2
    StateOptions g2_opts;
    double g2_tau_max_fs = 300;
    std::size_t g2_points = 601;
    std::string g2_state_out;
    auto* g2_cmd = app.add_subcommand("g2", "Analytic g2(tau) of a PRAG or mixed state");
    add_state_options(g2_cmd, g2_opts, true);
    g2_cmd->add_option("--tau-max-fs", g2_tau_max_fs, "Largest delay [fs]")
        ->check(CLI::PositiveNumber);
    g2_cmd->add_option("--points", g2_points, "Delays in [0, tau-max]")->check(CLI::Range(2, 10000000));
    g2_cmd->add_option("--state-out", g2_state_out, "Also write the PRAG state as JSON");
    add_common(g2_cmd);

    // feedback-sweep
    double fb_rw = 0.8;
    std::vector<std::size_t> fb_modes{1, 3, 10, 30, 100, 300, 1000, 1945, 3000};
    auto* fb_cmd = app.add_subcommand("feedback-sweep", "g2(0) versus mode number at fixed relative width");
    fb_cmd->add_option("--relative-width", fb_rw, "Relative width var(p_s)/<p_s>^2")
        ->check(CLI::NonNegativeNumber);
    fb_cmd->add_option("--modes", fb_modes, "Mode numbers N")->delimiter(',');
    fb_cmd->get_option("--modes")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    add_common(fb_cmd);

    // mix-sweep
    StateOptions mix_opts;
    OracleOptions mix_oracle;
    std::vector<double> mix_zetas;
    std::size_t mix_steps = 101;
    bool mix_with_oracle = false;
    auto* mix_cmd = app.add_subcommand("mix-sweep", "g2(0) versus laser power fraction zeta");
    add_state_options(mix_cmd, mix_opts, false);
    mix_cmd->add_option("--laser-nm", mix_opts.laser_nm, "Laser wavelength [nm]")
        ->check(CLI::PositiveNumber);
    mix_cmd->add_option("--zeta", mix_zetas, "Explicit zeta values")->delimiter(',');
    mix_cmd->get_option("--zeta")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    mix_cmd->add_option("--steps", mix_steps, "Equally spaced zeta values in [0, 1]")
        ->check(CLI::Range(2, 100000));
    mix_cmd->add_flag("--oracle", mix_with_oracle, "Add Monte Carlo estimates");
    add_oracle_options(mix_cmd, mix_oracle, 20000);
    add_common(mix_cmd);

    // gaussian-demo
    double gd_eps = 1.5, gd_dw = 1e-3, gd_wbar = 100, gd_dk = 4, gd_tau_max = 40;
    std::size_t gd_points = 401;
    auto* gd_cmd = app.add_subcommand("gaussian-demo", "g2 for a Gaussian spectrum plus laser, scaled units");
    gd_cmd->add_option("--epsilon", gd_eps, "Laser to incoherent power ratio")
        ->check(CLI::NonNegativeNumber);
    gd_cmd->add_option("--delta-omega", gd_dw, "Scaled mode spacing")->check(CLI::PositiveNumber);
    gd_cmd->add_option("--omega-bar", gd_wbar, "Scaled spectral center")->check(CLI::PositiveNumber);
    gd_cmd->add_option("--delta-k", gd_dk, "Scaled laser detuning");
    gd_cmd->add_option("--tau-max", gd_tau_max, "Largest scaled delay")->check(CLI::PositiveNumber);
    gd_cmd->add_option("--points", gd_points, "Delays in [0, tau-max]")->check(CLI::Range(2, 10000000));
    add_common(gd_cmd);

    // oracle-check
    StateOptions oc_opts;
    OracleOptions oc_oracle;
    double oc_tau_max_fs = 1000;
    std::size_t oc_points = 50;
    auto* oc_cmd = app.add_subcommand("oracle-check", "Compare analytic g2(tau) with Monte Carlo");
    add_state_options(oc_cmd, oc_opts, true);
    add_oracle_options(oc_cmd, oc_oracle, 100000);
    oc_cmd->add_option("--tau-max-fs", oc_tau_max_fs, "Largest delay [fs]")
        ->check(CLI::NonNegativeNumber);
    oc_cmd->add_option("--points", oc_points, "Delays in [0, tau-max]")->check(CLI::Range(1, 100000));
    add_common(oc_cmd);

    // tpa synthesize / extract
    auto* tpa_cmd = app.add_subcommand("tpa", "Two-photon absorption interferograms");
    tpa_cmd->require_subcommand(1);
    StateOptions ts_opts;
    OracleOptions ts_oracle;
    double ts_tau_max_fs = 300;
    std::size_t ts_samples = 1u << 18;
    auto* ts_cmd = tpa_cmd->add_subcommand("synthesize", "Simulate TPA counts versus delay");
    add_state_options(ts_cmd, ts_opts, true);
    add_oracle_options(ts_cmd, ts_oracle, 64);
    ts_cmd->add_option("--tau-max-fs", ts_tau_max_fs, "Largest delay [fs]")
        ->check(CLI::PositiveNumber);
    ts_cmd->add_option("--samples-per-period", ts_samples, "Time samples per comb period")
        ->check(CLI::Range(8, 1 << 26));
    add_common(ts_cmd);

    std::string te_path;
    std::optional<double> te_carrier_thz;
    auto* te_cmd = tpa_cmd->add_subcommand("extract", "Recover g2(tau) from TPA counts");
    te_cmd->add_option("--interferogram", te_path, "CSV with tau_s, counts[, stderr]")->required();
    te_cmd->add_option("--carrier-thz", te_carrier_thz,
                       "Fringe carrier frequency [THz]; defaults to the file header");
    add_common(te_cmd);

    try
    {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    CLI::App* active = nullptr;
    for (auto* sub : app.get_subcommands())
    {
        active = sub;
        run.command = sub->get_name();
        for (auto* inner : sub->get_subcommands())
        {
            active = inner;
            run.command += " " + inner->get_name();
        }
    }
    run.config = resolved_config(*active);
    if (!config_path.empty())
        run.inputs.read(config_path);

    try
    {
        if (fit_cmd->parsed())
        {
            auto const r = fit(run, fit_opts);
            auto const& m = r.mixture;
            emit_json(run,
                      {{"fit", io::to_json(r)},
                       {"widths",
                        widths_json(central_frequency(m), width_two_sigma(m),
                                    width_sussmann(m))}});
        }
        else if (widths_cmd->parsed())
        {
            auto const s = load(run, widths_opts);
            auto const modes = count_modes(s, widths_cutoff, thz_to_rad_s(widths_fsr_thz));
            auto body = widths_json(central_frequency(s), width_two_sigma(s), width_sussmann(s));
            body["mode_count"] = {{"n", modes.n},
                                  {"regime", modes.regime == ModeCountRegime::peaks ? "peaks" : "comb"},
                                  {"local_maxima", modes.local_maxima}};
            emit_json(run, {{"widths", body}});
        }
        else if (g2_cmd->parsed())
        {
            auto const base = base_state(run, g2_opts);
            auto const mixed = mixed_state(base, g2_opts);
            auto const taus = linspace(0, g2_tau_max_fs * 1e-15, g2_points);
            auto const trace = mixed ? g2_trace_mixed(*mixed, taus) : g2_trace(base, taus);
            auto const p = power_summary(base);
            if (!g2_state_out.empty())
            {
                std::ofstream os(g2_state_out, std::ios::binary);
                if (!os)
                    throw InvalidInput("cannot write '" + g2_state_out + "'");
                os << io::to_json(base).dump(2) << '\n';
            }
            emit(run, [&](std::ostream& os) {
                write_header(os, run);
                io::write_comment(os, "modes: " + std::to_string(p.n_modes));
                io::write_comment(os, "relative_width: " + num(p.relative_width));
                io::write_comment(os, "g2_zero: "
                                          + num(mixed ? g2_zero_mixed(*mixed) : g2_zero(base)));
                io::write_csv(os, trace);
            });
        }
        else if (fb_cmd->parsed())
        {
            std::vector<double> values;
            for (auto n : fb_modes)
                values.push_back(g2_mode_sweep(fb_rw, n, n).front().second);
            emit(run, [&](std::ostream& os) {
                write_header(os, run);
                io::write_comment(os, "relative width capped at N - 1 for small N");
                os << "N,g2_theory\n";
                for (std::size_t i = 0; i < fb_modes.size(); ++i)
                    os << fb_modes[i] << ',' << num(values[i]) << '\n';
            });
        }
        else if (mix_cmd->parsed())
        {
            auto const base = base_state(run, mix_opts);
            auto zetas = mix_zetas;
            if (zetas.empty())
            {
                for (std::size_t k = 0; k < mix_steps; ++k)
                    zetas.push_back(static_cast<double>(k) / static_cast<double>(mix_steps - 1));
            }
            double const omega_k = nm_to_rad_s(mix_opts.laser_nm);
            auto cfg = oracle_config(mix_oracle);
            cfg.tau_grid = {0.0};
            emit(run, [&](std::ostream& os) {
                write_header(os, run);
                os << "zeta,g2_theory" << (mix_with_oracle ? ",g2_oracle,stderr" : "") << '\n';
                for (std::size_t k = 0; k < zetas.size(); ++k)
                {
                    detail::require(zetas[k] >= 0 && zetas[k] <= 1, "zeta must lie in [0, 1]");
                    auto const m = MixedState::with_zeta(base, omega_k, zetas[k]);
                    os << num(zetas[k]) << ',' << num(g2_zero_mixed(m));
                    if (mix_with_oracle)
                    {
                        // One independent seed per sweep point
                        cfg.seed = mix_oracle.seed + k;
                        auto const mc = estimate_g2(m, cfg);
                        os << ',' << num(mc.value[0]) << ',' << num((*mc.std_error)[0]);
                    }
                    os << '\n';
                }
            });
        }
        else if (gd_cmd->parsed())
        {
            ScaledGaussianParams const p{gd_eps, gd_dw, gd_wbar, gd_dk};
            p.validate();
            emit(run, [&](std::ostream& os) {
                write_header(os, run);
                io::write_comment(os, "eta: " + num(p.eta()));
                os << "tau_scaled,g2\n";
                for (double t : linspace(0, gd_tau_max, gd_points))
                    os << num(t) << ',' << num(gaussian_case_g2(p, t)) << '\n';
            });
        }
        else if (oc_cmd->parsed())
        {
            auto const base = base_state(run, oc_opts);
            auto const mixed = mixed_state(base, oc_opts);
            auto cfg = oracle_config(oc_oracle);
            cfg.tau_grid = linspace(0, oc_tau_max_fs * 1e-15, oc_points);
            auto const mc = mixed ? estimate_g2(*mixed, cfg) : estimate_g2(base, cfg);
            double worst = 0;
            json points = json::array();
            for (std::size_t i = 0; i < mc.size(); ++i)
            {
                double const want = mixed ? g2_tau_mixed(*mixed, mc.tau[i])
                                          : g2_tau(base, mc.tau[i]);
                double const e = (*mc.std_error)[i];
                double const d = std::abs(mc.value[i] - want);
                double const z = e > 0 ? d / e : (d < 1e-12 ? 0.0 : 1e300);
                worst = std::max(worst, z);
                points.push_back({{"tau_s", mc.tau[i]},
                                  {"analytic", want},
                                  {"monte_carlo", mc.value[i]},
                                  {"stderr", e},
                                  {"ratio", z}});
            }
            emit_json(run,
                      {{"max_ratio", worst},
                       {"within_3_stderr", worst <= 3},
                       {"points", points}});
        }
        else if (ts_cmd->parsed())
        {
            auto const base = base_state(run, ts_opts);
            auto const mixed = mixed_state(base, ts_opts);
            auto const taus = tpa_delay_grid(base.grid(), ts_tau_max_fs * 1e-15, ts_samples);
            auto const cfg = oracle_config(ts_oracle);
            auto const ig = mixed ? synthesize_tpa(snap_laser_to_comb(*mixed), taus, cfg)
                                  : synthesize_tpa(base, taus, cfg);
            emit(run, [&](std::ostream& os) {
                write_header(os, run);
                io::write_comment(os, "carrier_rad_s: " + num(*ig.carrier));
                io::write_csv(os, ig);
            });
        }
        else if (te_cmd->parsed())
        {
            auto const text = run.inputs.read(te_path);
            std::istringstream in(text);
            auto const ig = io::read_interferogram(in);
            double carrier = 0;
            if (te_carrier_thz)
            {
                carrier = thz_to_rad_s(*te_carrier_thz);
            }
            else
            {
                std::istringstream lines(text);
                std::string line;
                std::string const key = "# carrier_rad_s: ";
                while (std::getline(lines, line))
                {
                    if (line.rfind(key, 0) == 0)
                        carrier = std::stod(line.substr(key.size()));
                }
                if (!(carrier > 0))
                    throw InvalidInput("no carrier in the file header; pass --carrier-thz");
            }
            auto const g2 = extract_g2(ig, carrier);
            emit(run, [&](std::ostream& os) {
                write_header(os, run);
                io::write_comment(os, "carrier_rad_s: " + num(carrier));
                io::write_csv(os, g2);
            });
        }
    }
    catch (FitNotConverged const& e)
    {
        std::cerr << "prag: " << e.what() << '\n';
        return exit_fit_failed;
    }
    catch (CLI::ValidationError const& e)
    {
        std::cerr << "prag: " << e.what() << '\n';
        return 1;
    }
    catch (std::exception const& e)
    {
        std::cerr << "prag: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

//---------------------------------------------------------------------------//
}  // namespace
}  // namespace prag::cli

int main(int argc, char** argv)
{
    return prag::cli::main_impl(argc, argv);
}
