#include "output.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <memory>

#include "sdmlab/errors.hpp"

namespace sdmlab::detail {

std::string psd_csv(const SpectrumEstimate& est, double f_max)
{
    std::string s = "freq_norm,psd_db\n";
    for (std::size_t k = 0; k < est.freqs.size() && est.freqs[k] <= f_max; ++k)
        s += fmt::format("{:.9g},{:.9g}\n", est.freqs[k], est.psd_db[k]);
    return s;
}

std::string dr_csv(const std::vector<std::pair<std::string, const DrCurve*>>& curves)
{
    std::string s = "amp_dbfs,sndr_db,scenario\n";
    for (const auto& [name, curve] : curves)
        for (const auto& p : curve->points)
            s += fmt::format("{:.9g},{:.9g},{}\n", p.amp_dbfs, p.sndr_db, name);
    return s;
}

std::string metrics_csv(const std::vector<Metric>& metrics)
{
    std::string s = "key,value,units\n";
    for (const auto& m : metrics)
        s += fmt::format("{},{:.9g},{}\n", m.key, m.value, m.units);
    return s;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw Error("sha256 failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i)
        hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::vector<std::filesystem::path> OutputSet::flush(const ScenarioConfig& cfg) const
{
    std::filesystem::create_directories(dir_);
    std::vector<std::filesystem::path> written;

    auto write = [&](const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw Error("cannot open " + path.string() + " for writing");
        os << content;
        if (!os)
            throw Error("write failed: " + path.string());
        written.push_back(path);
    };

    for (const auto& [name, content] : files_)
        write(name, content);

    std::string m = "# sdmlab run manifest\n";
    m += fmt::format("tool = sdmlab {}\n", kToolVersion);
    m += fmt::format("timestamp = {:%Y-%m-%dT%H:%M:%SZ}\n",
                     std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
    m += "\n[config]\n";
    for (const auto& [k, v] : cfg.resolved())
        m += fmt::format("{} = {}\n", k, v);
    m += "\n[seeds]\n";
    m += "split = derive_seed(master, stream) = splitmix64(splitmix64(master) ^ stream * 0xd1b54a32d192ed03)\n";
    for (const auto& [stage, value] : seeds_)
        m += fmt::format("{} = {}\n", stage, value);
    m += "\n[outputs]\n";
    for (const auto& [name, content] : files_)
        m += fmt::format("{} = sha256:{}\n", name, sha256_hex(content));
    write("manifest.txt", m);
    return written;
}

} // namespace sdmlab::detail
