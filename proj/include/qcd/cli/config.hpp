// config.hpp: key = value config files mirroring the long flags, and list parsing.
//
// A config line "t-final = 40" stands for the flag "--t-final 40". Entries are placed
// ahead of the command-line flags, so an explicit flag overrides the file.

#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcd::cli {

inline std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Blank lines and lines starting with '#' are skipped; values may be double-quoted.
inline ConfigEntries parse_config(std::istream& in, const std::string& origin = "config") {
    ConfigEntries out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        if (key.empty()) throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline ConfigEntries read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

inline std::vector<std::string> config_to_args(const ConfigEntries& entries) {
    std::vector<std::string> args;
    for (const auto& [k, v] : entries) args.push_back("--" + k + "=" + v);
    return args;
}

// Splices the entries of every "--config FILE" / "--config=FILE" after the subcommand
// token (args[0]) and ahead of the remaining flags; the --config flags themselves are dropped.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    if (args.empty()) return args;
    std::vector<std::string> files;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw std::invalid_argument("--config requires a file name");
            files.push_back(args[++i]);
        } else if (a.rfind("--config=", 0) == 0) {
            files.push_back(a.substr(9));
        } else {
            rest.push_back(a);
        }
    }
    std::vector<std::string> out{args[0]};
    for (const auto& f : files)
        for (auto& a : config_to_args(read_config(f))) out.push_back(std::move(a));
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

template <class T, class Conv>
std::vector<T> parse_list(const std::string& text, Conv conv) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
        std::size_t used = 0;
        out.push_back(conv(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::vector<double> parse_double_list(const std::string& text) {
    return parse_list<double>(text, [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
}

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
    return parse_list<std::size_t>(text, [](const std::string& s, std::size_t* used) {
        if (s[0] == '-') throw std::invalid_argument("negative size '" + s + "'");
        return static_cast<std::size_t>(std::stoul(s, used));
    });
}

} // namespace qcd::cli
