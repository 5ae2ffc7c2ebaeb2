#pragma once

#include "kvnlab/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace kvnlab::cli {

using Json = nlohmann::ordered_json;

// Parse or validation failure in a config file (exit code 2).
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& what, int line = 0)
        : InvalidArgument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Filesystem failure (exit code 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parsed config with defaults filled in.
struct ExperimentConfig {
    std::string experiment;
    double hbar = 1.0;
    unsigned seed = 1;
    std::filesystem::path base_dir;    // directory holding the config file
    std::string output_text = "output";
    std::filesystem::path output_dir;  // output_text resolved against base_dir
    bool svg = true;
    Json params;  // experiment block, defaults merged
    std::string hash;  // 16 hex digits over the resolved config

    Json resolved() const;
    // Looks up "a.b.c" inside params.
    const Json& at(const std::string& dotted) const;
    double number(const std::string& dotted) const;
    long long integer(const std::string& dotted) const;
    std::string text(const std::string& dotted) const;

    // Best-effort source line of a parameter key, 0 if unknown.
    int line_of(const std::string& dotted) const;
    [[noreturn]] void fail(const std::string& dotted, const std::string& message) const;

    std::string source;
};

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace kvnlab::cli
