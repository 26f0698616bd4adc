#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "sdmlab/errors.hpp"
#include "sdmlab/experiment.hpp"
#include "sdmlab/waveform_io.hpp"

namespace {

int to_int(sdmlab::ExitCode c)
{
    return static_cast<int>(c);
}

sdmlab::Architecture parse_arch(const std::string& s)
{
    if (s == "classical")
        return sdmlab::Architecture::classical;
    if (s == "ti_digital")
        return sdmlab::Architecture::ti_digital;
    if (s == "analog_mux")
        return sdmlab::Architecture::analog_mux;
    throw sdmlab::ConfigError("unknown architecture '" + s + "'");
}

void dump_waveform(const sdmlab::ScenarioConfig& cfg, const std::string& arch, const std::string& path,
                   std::size_t cells)
{
    const auto chain = cfg.chain();
    const auto out = sdmlab::run_chain(parse_arch(arch), chain, cfg.seed);
    std::ofstream os(path);
    if (!os)
        throw sdmlab::Error("cannot open " + path + " for writing");
    const sdmlab::WaveformHeader h{cfg.K, 1.0, cfg.M, cfg.effective_sigma_tau(), cfg.seed};
    sdmlab::write_waveform_csv(os, out.waveform, h, out.window_first, std::min(cells, out.window_cells));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-interleaved sigma-delta DAC experiments"};
    app.set_version_flag("--version", std::string("sdmlab ") + sdmlab::kToolVersion);

    std::string scenario;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> M;
    std::optional<int> osr;
    std::optional<double> sigma_tau;
    std::optional<double> amp_dbfs;
    std::vector<std::string> overrides;
    std::string corrupt;
    std::string dump_path;
    std::string dump_arch = "analog_mux";
    std::size_t dump_cells = 4096;

    app.add_option("scenario", scenario, "fig4 | fig6 | fig7 | equivalence | sweep")->required();
    app.add_option("--config", config, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--out", out, "Output directory");
    app.add_option("--M", M, "Interleaving factor");
    app.add_option("--osr", osr, "Oversampling ratio");
    app.add_option("--sigma-tau", sigma_tau, "Clock jitter rms, units of 1/f_H");
    app.add_option("--amp-dbfs", amp_dbfs, "Input amplitude, dBFS");
    app.add_option("--set", overrides, "Override any config key: section.key=value");
    app.add_option("--corrupt-entry", corrupt, "Equivalence audit: perturb block-filter entry row,col");
    app.add_option("--dump-waveform", dump_path, "Write the rendered analysis window as CSV");
    app.add_option("--dump-arch", dump_arch, "Architecture for --dump-waveform")
        ->check(CLI::IsMember({"classical", "ti_digital", "analog_mux"}));
    app.add_option("--dump-cells", dump_cells, "Grid cells written by --dump-waveform");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : to_int(sdmlab::ExitCode::runtime_error);
    }

    try {
        if (!sdmlab::ScenarioConfig::is_known_scenario(scenario))
            throw sdmlab::ConfigError("unknown scenario '" + scenario + "'");
        sdmlab::ScenarioConfig cfg;
        cfg.scenario = scenario;
        if (!config.empty())
            sdmlab::load_config_file(cfg, config);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw sdmlab::ConfigError("--set expects section.key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed)
            cfg.seed = *seed;
        if (out)
            cfg.out = *out;
        if (M)
            cfg.M = *M;
        if (osr)
            cfg.osr = *osr;
        if (sigma_tau)
            cfg.sigma_tau = *sigma_tau;
        if (amp_dbfs)
            cfg.amp_dbfs = *amp_dbfs;
        if (!corrupt.empty())
            cfg.set("audit.corrupt_entry", corrupt);
        cfg.validate();

        if (!dump_path.empty())
            dump_waveform(cfg, dump_arch, dump_path, dump_cells);

        const auto result = sdmlab::run_scenario(cfg);
        for (const auto& line : result.report)
            fmt::print("{}\n", line);
        for (const auto& f : result.files)
            fmt::print("wrote {}\n", f.string());
        return to_int(result.code);
    } catch (const std::exception& e) {
        fmt::print(stderr, "sdmlab: error: {}\n", e.what());
        return to_int(sdmlab::ExitCode::runtime_error);
    }
}
