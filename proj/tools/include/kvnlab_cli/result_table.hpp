#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kvnlab::cli {

struct Column {
    std::string name;
    std::string unit;
};

struct ResultTable {
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    // Provenance. Wall time goes to the run manifest so that tables stay byte-stable.
    std::string config_hash;
    std::string code_version;

    void add_row(std::vector<double> row);
    void note(const std::string& key, const std::string& value);
    void note(const std::string& key, double value);
};

// %.17g, with nan/inf spelled out.
std::string format_real(double v);

std::string to_csv(const ResultTable& t);
void write_csv(const std::filesystem::path& path, const ResultTable& t);

// Parses a file written by write_csv. Metadata lines come back as key/value pairs.
ResultTable read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kvnlab::cli
