#include "sdmlab/waveform_io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <istream>
#include <ostream>
#include <string>

#include "sdmlab/errors.hpp"

namespace sdmlab {

void write_waveform_csv(std::ostream& os, const AnalogWaveform& w, const WaveformHeader& h, std::int64_t first,
                        std::size_t count)
{
    fmt::print(os, "# sdmlab waveform\n# K={}\n# f_H={:.17g}\n# M={}\n# sigma_tau={:.17g}\n# seed={}\n", h.K, h.f_high,
               h.M, h.sigma_tau, h.seed);
    os << "grid_index,value\n";
    for (std::size_t i = 0; i < count; ++i) {
        const std::int64_t c = first + static_cast<std::int64_t>(i);
        fmt::print(os, "{},{:.17g}\n", c, w.at_cell(c));
    }
}

WaveformDump read_waveform_csv(std::istream& is)
{
    WaveformDump d;
    std::string line;
    bool columns = false;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string val = line.substr(eq + 1);
            try {
                if (key == "K")
                    d.header.K = std::stoul(val);
                else if (key == "f_H")
                    d.header.f_high = std::stod(val);
                else if (key == "M")
                    d.header.M = std::stoul(val);
                else if (key == "sigma_tau")
                    d.header.sigma_tau = std::stod(val);
                else if (key == "seed")
                    d.header.seed = std::stoull(val);
            } catch (const std::exception&) {
                throw ArgumentError("waveform csv: bad header value in '" + line + "'");
            }
            continue;
        }
        if (!columns) {
            if (line != "grid_index,value")
                throw ArgumentError("waveform csv: missing column header");
            columns = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ArgumentError("waveform csv: malformed row '" + line + "'");
        try {
            d.grid_index.push_back(std::stoll(line.substr(0, comma)));
            d.value.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ArgumentError("waveform csv: malformed row '" + line + "'");
        }
    }
    return d;
}

} // namespace sdmlab
