// manifest.hpp: run manifests with resolved parameters, timing and output checksums.

#pragma once

#include "qcd/cli/records.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcd::cli {

inline constexpr const char* kArtifactVersion = "qcd 1.0.0";

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

inline std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "' for checksum");
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct OutputFile {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command_line;
    std::string subcommand;
    json parameters = json::object(); // every resolved option, defaults included
    json basis = nullptr;
    json solver = nullptr;
    std::chrono::system_clock::time_point started{std::chrono::system_clock::now()};
    double wall_seconds{0.0};
    std::vector<OutputFile> outputs;
    bool failed{false};
    std::string error; // set when the run stopped on an exception

    void add_output(const std::string& path) { outputs.push_back({path, sha256_file(path)}); }

    json to_json() const {
        json files = json::array();
        for (const auto& f : outputs) files.push_back({{"path", f.path}, {"sha256", f.sha256}});
        return {{"schema_version", kSchemaVersion},
                {"artifact_version", kArtifactVersion},
                {"command_line", command_line},
                {"subcommand", subcommand},
                {"parameters", parameters},
                {"basis", basis},
                {"solver", solver},
                {"started_utc", utc_timestamp(started)},
                {"wall_seconds", wall_seconds},
                {"outputs", files},
                {"failed", failed},
                {"error", error}};
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
        out << to_json().dump(2) << '\n';
    }
};

} // namespace qcd::cli
