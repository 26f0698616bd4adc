#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sdmlab/chain.hpp"
#include "sdmlab/errors.hpp"
#include "sdmlab/experiment.hpp"
#include "sdmlab/polyphase_ti.hpp"
#include "sdmlab/sdm_core.hpp"
#include "sdmlab/spectral_metrics.hpp"

namespace py = pybind11;
using namespace sdmlab;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using SymbolArray = py::array_t<std::int8_t, py::array::c_style | py::array::forcecast>;

std::span<const double> as_span(const RealArray& a)
{
    if (a.ndim() != 1)
        throw ArgumentError("expected a 1-D array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

std::span<const Symbol> as_span(const SymbolArray& a)
{
    if (a.ndim() != 1)
        throw ArgumentError("expected a 1-D array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v)
{
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

LowRateBank bank_from(const std::vector<SymbolArray>& streams)
{
    LowRateBank bank;
    for (const auto& s : streams) {
        const auto sp = as_span(s);
        bank.streams.emplace_back(sp.begin(), sp.end());
    }
    return bank;
}

py::list bank_to_list(const LowRateBank& bank)
{
    py::list out;
    for (const auto& s : bank.streams)
        out.append(to_array(s));
    return out;
}

Architecture parse_arch(const std::string& s)
{
    for (auto a : {Architecture::classical, Architecture::ti_digital, Architecture::analog_mux})
        if (to_string(a) == s)
            return a;
    throw ArgumentError("unknown architecture '" + s + "'");
}

} // namespace

PYBIND11_MODULE(_sdmlab, m)
{
    m.doc() = "Time-interleaved sigma-delta DAC simulation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<UnsupportedOrderError>(m, "UnsupportedOrderError", base.ptr());
    py::register_exception<NumericStateError>(m, "NumericStateError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // sdm_core
    m.def("make_loop_filter", [](int order) { return make_loop_filter(order).coeffs(); }, py::arg("order"));
    m.def(
        "ntf_of", [](const std::vector<double>& h) { return ntf_of(FirFilter(h)).coeffs(); }, py::arg("h"));
    m.def("quantize", [](double v) { return static_cast<int>(quantize(v)); }, py::arg("v"));
    m.def(
        "ef_modulate",
        [](const RealArray& x, int order) {
            const auto r = ef_modulate(as_span(x), make_loop_filter(order));
            return py::make_tuple(to_array(r.y), to_array(r.e));
        },
        py::arg("x"), py::arg("order") = 2, "Classical error-feedback modulator; returns (y, e).");

    // polyphase_ti
    m.def(
        "polyphase_decompose",
        [](const std::vector<double>& h, std::size_t M) {
            std::vector<std::vector<double>> out;
            for (const auto& c : polyphase_decompose(FirFilter(h), M).components)
                out.push_back(c.coeffs());
            return out;
        },
        py::arg("h"), py::arg("M"));
    m.def(
        "build_block_filter",
        [](const std::vector<double>& h, std::size_t M) {
            const auto b = build_block_filter(FirFilter(h), M);
            std::vector<std::vector<std::vector<double>>> rows(M);
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j)
                    rows[i].push_back(b.entry(i, j).canonical().coeffs());
            return rows;
        },
        py::arg("h"), py::arg("M"), "Entry (i, j) as low-rate taps in z^-1.");
    m.def(
        "ti_modulate",
        [](const RealArray& x, std::size_t M, int order) {
            return bank_to_list(ti_modulate(as_span(x), M, make_loop_filter(order)).bank);
        },
        py::arg("x"), py::arg("M"), py::arg("order") = 2);
    m.def(
        "ti_multiplex_digital",
        [](const std::vector<SymbolArray>& streams) { return to_array(ti_multiplex_digital(bank_from(streams))); },
        py::arg("streams"));
    m.def(
        "ti_demultiplex",
        [](const SymbolArray& y, std::size_t M) { return bank_to_list(ti_demultiplex(as_span(y), M)); },
        py::arg("y"), py::arg("M"));
    m.def(
        "equivalence_check",
        [](const RealArray& x, std::size_t M, int order) {
            const auto r = equivalence_check(as_span(x), M, order);
            py::dict d;
            d["max_abs_diff"] = r.max_abs_diff;
            d["aligned_delay"] = r.aligned_delay;
            d["mismatches"] = r.mismatches;
            d["first_mismatch"] = r.first_mismatch;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("x"), py::arg("M"), py::arg("order") = 2);

    // analog_frontend
    m.def(
        "comb_filter", [](const RealArray& y, std::size_t M) { return to_array(comb_filter(as_span(y), M)); },
        py::arg("y"), py::arg("M"));
    m.def(
        "render_nrz",
        [](const SymbolArray& y, std::size_t K, double sigma_tau, std::uint64_t seed) {
            const auto clock = make_clock(1.0, 0.0, JitterSpec{sigma_tau, seed, false}, y.size() + 1);
            const auto w = render_nrz(as_span(y), clock, K);
            return py::make_tuple(w.first_cell, to_array(w.samples));
        },
        py::arg("y"), py::arg("K") = 32, py::arg("sigma_tau") = 0.0, py::arg("seed") = 0,
        "Single NRZ DAC at f_H = 1; returns (first_cell, samples).");
    m.def(
        "dt_model_check",
        [](const std::vector<SymbolArray>& streams, std::size_t K) {
            const auto bank = bank_from(streams);
            const auto r = dt_model_check(bank, bank.M(), K);
            return py::make_tuple(r.max_abs_diff, r.passed);
        },
        py::arg("streams"), py::arg("K") = 16);

    // spectral_metrics
    m.def(
        "estimate_psd",
        [](const RealArray& x, double sample_rate, std::size_t segment) {
            const auto e = estimate_psd(as_span(x), sample_rate, segment);
            return py::make_tuple(to_array(e.freqs), to_array(e.psd), e.resolution);
        },
        py::arg("x"), py::arg("sample_rate") = 1.0, py::arg("segment") = 1u << 14,
        "Hann Welch PSD; returns (freqs, psd density, resolution).");
    m.def(
        "compute_sndr",
        [](const RealArray& x, double sample_rate, int osr, double fx_over_band, std::size_t guard_bins) {
            MetricConfig cfg;
            cfg.osr = osr;
            cfg.fx_over_band = fx_over_band;
            cfg.guard_bins = guard_bins;
            return compute_sndr(as_span(x), sample_rate, cfg).sndr_db;
        },
        py::arg("x"), py::arg("sample_rate") = 1.0, py::arg("osr") = 64, py::arg("fx_over_band") = 0.2,
        py::arg("guard_bins") = 3);
    m.def(
        "measure_sigma_dy", [](const RealArray& y, std::size_t lag) { return measure_sigma_dy(as_span(y), lag); },
        py::arg("y"), py::arg("lag") = 1);
    m.def("predict_snr_jtt1", &predict_snr_jtt1, py::arg("amplitude"), py::arg("f_s"), py::arg("sigma_tau"),
          py::arg("sigma_dy"), py::arg("osr"));
    m.def("dac_step", &dac_step, py::arg("M"), py::arg("v_s"));
    m.def("snr_improvement", &snr_improvement, py::arg("M"));
    m.def(
        "comb_response", [](std::size_t M, double f) { return comb_response(M, f).magnitude; }, py::arg("M"),
        py::arg("f"));
    m.def("comb_cutoff", &comb_cutoff, py::arg("M"), py::arg("droop_db") = 3.0103);
    m.def("min_osr_for_distortion", &min_osr_for_distortion, py::arg("M"), py::arg("max_droop_db"));

    // chain
    m.def(
        "chain_sndr",
        [](const std::string& arch, double amp_dbfs, double sigma_tau, std::size_t M, std::uint64_t seed,
           std::size_t samples) {
            ChainConfig cfg;
            cfg.amp_dbfs = amp_dbfs;
            cfg.jitter.sigma_tau = sigma_tau;
            cfg.M = M;
            cfg.samples = samples;
            py::gil_scoped_release release;
            return chain_sndr(parse_arch(arch), cfg, seed).sndr_db;
        },
        py::arg("arch"), py::arg("amp_dbfs") = -3.0, py::arg("sigma_tau") = 0.0, py::arg("M") = 4,
        py::arg("seed") = 1, py::arg("samples") = 1u << 18,
        "SNDR of one full chain: 'classical', 'ti_digital' or 'analog_mux'.");

    // experiment
    m.def(
        "run_scenario",
        [](const std::string& scenario, const std::map<std::string, std::string>& overrides) {
            ScenarioConfig cfg;
            cfg.scenario = scenario;
            for (const auto& [k, v] : overrides)
                cfg.set(k, v);
            ScenarioResult r;
            {
                py::gil_scoped_release release;
                r = run_scenario(cfg);
            }
            py::dict d;
            d["code"] = static_cast<int>(r.code);
            d["report"] = r.report;
            d["files"] = r.files;
            d["metrics"] = r.metrics;
            return d;
        },
        py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{},
        "Run a CLI scenario; overrides use section.key names.");
    m.attr("__version__") = kToolVersion;
}
