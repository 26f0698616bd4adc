#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sdmlab/experiment.hpp"
#include "sdmlab/spectral_metrics.hpp"

namespace sdmlab::detail {

struct Metric
{
    std::string key;
    double value;
    std::string units;
};

std::string psd_csv(const SpectrumEstimate& est, double f_max);
std::string dr_csv(const std::vector<std::pair<std::string, const DrCurve*>>& curves);
std::string metrics_csv(const std::vector<Metric>& metrics);

std::string sha256_hex(const std::string& data);

/// Collects output files in memory and writes them, then the manifest, in
/// insertion order.
class OutputSet
{
public:
    explicit OutputSet(std::filesystem::path dir)
      : dir_(std::move(dir))
    {
    }

    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
    void seed(std::string stage, std::uint64_t value) { seeds_.emplace_back(std::move(stage), value); }

    /// Write every file plus manifest.txt; returns the paths written.
    std::vector<std::filesystem::path> flush(const ScenarioConfig& cfg) const;

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::vector<std::pair<std::string, std::uint64_t>> seeds_;
};

} // namespace sdmlab::detail
