#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <functional>

#include "sdmlab/errors.hpp"
#include "sdmlab/experiment.hpp"
#include "sdmlab/parallel.hpp"

namespace sdmlab {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first)))
        ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(last[-1])))
        --last;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
    return value;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

std::string fmt_g(double v)
{
    return fmt::format("{:.9g}", v);
}

} // namespace

bool ScenarioConfig::is_known_scenario(const std::string& name)
{
    return name == "fig4" || name == "fig6" || name == "fig7" || name == "equivalence" || name == "sweep";
}

double ScenarioConfig::effective_sigma_tau() const
{
    if (sigma_tau)
        return *sigma_tau;
    return (scenario == "fig6" || scenario == "fig7") ? 0.015 : 0.0;
}

std::size_t ScenarioConfig::effective_threads() const
{
    return threads ? threads : default_thread_count();
}

std::vector<double> ScenarioConfig::amplitude_grid() const
{
    std::vector<double> grid;
    const auto steps = static_cast<long>(std::floor((amp_max - amp_min) / amp_step + 1e-9));
    for (long i = 0; i <= steps; ++i)
        grid.push_back(amp_min + static_cast<double>(i) * amp_step);
    return grid;
}

ChainConfig ScenarioConfig::chain() const
{
    ChainConfig c;
    c.order = order;
    c.M = M;
    c.samples = samples;
    c.warmup = warmup;
    c.K = K;
    c.amp_dbfs = amp_dbfs;
    c.jitter.sigma_tau = effective_sigma_tau(); // f_H = 1 Hz, so 1/f_H units are seconds
    c.jitter.correlated = correlated;
    c.metric.osr = osr;
    c.metric.fx_over_band = fx_over_band;
    c.metric.guard_bins = guard_bins;
    c.metric.psd_segment = psd_segment;
    return c;
}

void ScenarioConfig::validate() const
{
    if (!is_known_scenario(scenario))
        throw ConfigError("unknown scenario '" + scenario + "'");
    if (K < 8)
        throw ConfigError("render.K must be >= 8");
    if (samples < 65536)
        throw ConfigError("render.samples must be >= 65536 for SNDR estimation");
    if (!(amp_step > 0.0) || amp_min > amp_max || amp_max > 0.0)
        throw ConfigError("sweep grid must satisfy amp_min <= amp_max <= 0 and amp_step > 0");
    if (seeds < 1)
        throw ConfigError("run.seeds must be >= 1");
    if (corrupt_entry && (corrupt_entry->first >= M || corrupt_entry->second >= M))
        throw ConfigError("audit.corrupt_entry indices must be < M");
    chain().validate();
}

void ScenarioConfig::set(const std::string& key, const std::string& value)
{
    using Setter = std::function<void(ScenarioConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"modulator.order", [](auto& c, const auto& v) { c.order = parse_number<int>("modulator.order", v); }},
        {"interleave.M", [](auto& c, const auto& v) { c.M = parse_number<std::size_t>("interleave.M", v); }},
        {"metric.osr", [](auto& c, const auto& v) { c.osr = parse_number<int>("metric.osr", v); }},
        {"metric.guard_bins",
         [](auto& c, const auto& v) { c.guard_bins = parse_number<std::size_t>("metric.guard_bins", v); }},
        {"metric.psd_segment",
         [](auto& c, const auto& v) { c.psd_segment = parse_number<std::size_t>("metric.psd_segment", v); }},
        {"input.amp_dbfs", [](auto& c, const auto& v) { c.amp_dbfs = parse_number<double>("input.amp_dbfs", v); }},
        {"input.fx_over_band",
         [](auto& c, const auto& v) { c.fx_over_band = parse_number<double>("input.fx_over_band", v); }},
        {"jitter.sigma_tau",
         [](auto& c, const auto& v) { c.sigma_tau = parse_number<double>("jitter.sigma_tau", v); }},
        {"jitter.correlated", [](auto& c, const auto& v) { c.correlated = parse_bool("jitter.correlated", v); }},
        {"render.K", [](auto& c, const auto& v) { c.K = parse_number<std::size_t>("render.K", v); }},
        {"render.samples", [](auto& c, const auto& v) { c.samples = parse_number<std::size_t>("render.samples", v); }},
        {"render.warmup", [](auto& c, const auto& v) { c.warmup = parse_number<std::size_t>("render.warmup", v); }},
        {"sweep.amp_min", [](auto& c, const auto& v) { c.amp_min = parse_number<double>("sweep.amp_min", v); }},
        {"sweep.amp_max", [](auto& c, const auto& v) { c.amp_max = parse_number<double>("sweep.amp_max", v); }},
        {"sweep.amp_step", [](auto& c, const auto& v) { c.amp_step = parse_number<double>("sweep.amp_step", v); }},
        {"run.seed", [](auto& c, const auto& v) { c.seed = parse_number<std::uint64_t>("run.seed", v); }},
        {"run.seeds", [](auto& c, const auto& v) { c.seeds = parse_number<std::size_t>("run.seeds", v); }},
        {"run.threads", [](auto& c, const auto& v) { c.threads = parse_number<std::size_t>("run.threads", v); }},
        {"run.out", [](auto& c, const auto& v) { c.out = v; }},
        {"audit.corrupt_entry",
         [](auto& c, const auto& v) {
             const auto comma = v.find(',');
             if (comma == std::string::npos)
                 throw ConfigError("audit.corrupt_entry: expected 'row,col'");
             c.corrupt_entry = std::make_pair(parse_number<std::size_t>("audit.corrupt_entry", v.substr(0, comma)),
                                              parse_number<std::size_t>("audit.corrupt_entry", v.substr(comma + 1)));
         }},
    };

    const auto it = setters.find(key);
    if (it == setters.end())
        throw ConfigError("unknown configuration key '" + key + "'");
    it->second(*this, value);
}

std::map<std::string, std::string> ScenarioConfig::resolved() const
{
    std::map<std::string, std::string> r;
    r["scenario"] = scenario;
    r["modulator.order"] = std::to_string(order);
    r["interleave.M"] = std::to_string(M);
    r["metric.osr"] = std::to_string(osr);
    r["metric.guard_bins"] = std::to_string(guard_bins);
    r["metric.psd_segment"] = std::to_string(psd_segment);
    r["input.amp_dbfs"] = fmt_g(amp_dbfs);
    r["input.fx_over_band"] = fmt_g(fx_over_band);
    r["jitter.sigma_tau"] = fmt_g(effective_sigma_tau());
    r["jitter.correlated"] = correlated ? "true" : "false";
    r["render.K"] = std::to_string(K);
    r["render.samples"] = std::to_string(samples);
    r["render.warmup"] = std::to_string(warmup);
    r["sweep.amp_min"] = fmt_g(amp_min);
    r["sweep.amp_max"] = fmt_g(amp_max);
    r["sweep.amp_step"] = fmt_g(amp_step);
    r["run.seed"] = std::to_string(seed);
    r["run.seeds"] = std::to_string(seeds);
    r["run.out"] = out.string();
    if (corrupt_entry)
        r["audit.corrupt_entry"] = fmt::format("{},{}", corrupt_entry->first, corrupt_entry->second);
    return r;
}

void load_config_file(ScenarioConfig& cfg, const std::filesystem::path& file)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(file.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            // top-level key without a section
            if (section == "scenario")
                cfg.scenario = body.data();
            else
                throw ConfigError("config file: key '" + section + "' must be inside a section");
            continue;
        }
        for (const auto& [key, value] : body)
            cfg.set(section + "." + key, value.data());
    }
}

} // namespace sdmlab
