#include "kvnlab_cli/result_table.hpp"

#include "kvnlab_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kvnlab::cli {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw InvalidArgument("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

void ResultTable::note(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
}

void ResultTable::note(const std::string& key, double value) {
    metadata.emplace_back(key, format_real(value));
}

std::string format_real(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const ResultTable& t) {
    std::ostringstream os;
    os << "# config_hash: " << t.config_hash << '\n';
    os << "# code_version: " << t.code_version << '\n';
    for (const auto& [k, v] : t.metadata) {
        os << "# " << k << ": " << v << '\n';
    }
    os << "# units: ";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        os << (c ? "," : "") << (t.columns[c].unit.empty() ? "1" : t.columns[c].unit);
    }
    os << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        os << (c ? "," : "") << t.columns[c].name;
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << format_real(row[c]);
        }
        os << '\n';
    }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

void write_csv(const std::filesystem::path& path, const ResultTable& t) {
    write_text(path, to_csv(t));
}

ResultTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read '" + path.string() + "'");
    }
    ResultTable t;
    std::string line;
    std::vector<std::string> units;
    bool header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            out.push_back(cell);
        }
        return out;
    };
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) {
                continue;
            }
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 2);
            if (key == "config_hash") {
                t.config_hash = value;
            } else if (key == "code_version") {
                t.code_version = value;
            } else if (key == "units") {
                units = split(value);
            } else {
                t.metadata.emplace_back(key, value);
            }
            continue;
        }
        if (!header) {
            for (const auto& name : split(line)) {
                t.columns.push_back({name, ""});
            }
            for (std::size_t c = 0; c < t.columns.size() && c < units.size(); ++c) {
                t.columns[c].unit = units[c] == "1" ? "" : units[c];
            }
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line)) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace kvnlab::cli
