#include "kvnlab_cli/config.hpp"

#include "kvnlab_cli/experiments.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace kvnlab::cli {

namespace {

int line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    int line = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return line;
}

int find_key_line(const std::string& text, const std::vector<std::string>& path) {
    std::size_t pos = 0;
    for (const auto& key : path) {
        const auto hit = text.find("\"" + key + "\"", pos);
        if (hit == std::string::npos) {
            return 0;
        }
        pos = hit + 1;
    }
    return line_at(text, pos);
}

std::vector<std::string> split(const std::string& dotted) {
    std::vector<std::string> out;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        out.push_back(part);
    }
    return out;
}

std::string kind_name(const Json& j) {
    if (j.is_object()) {
        return "an object";
    }
    if (j.is_boolean()) {
        return "a boolean";
    }
    if (j.is_number_integer() || j.is_number_unsigned()) {
        return "an integer";
    }
    if (j.is_number()) {
        return "a number";
    }
    if (j.is_string()) {
        return "a string";
    }
    return "a value";
}

void merge(Json& target, const Json& given, const std::string& prefix, const std::string& text,
           std::vector<std::string> path) {
    for (auto it = given.begin(); it != given.end(); ++it) {
        const std::string& key = it.key();
        path.push_back(key);
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (!target.contains(key)) {
            throw ConfigError("unknown key '" + name + "'", find_key_line(text, path));
        }
        Json& slot = target[key];
        const Json& value = it.value();
        bool ok = false;
        if (slot.is_object()) {
            if (value.is_object()) {
                merge(slot, value, name, text, path);
                path.pop_back();
                continue;
            }
        } else if (slot.is_boolean()) {
            ok = value.is_boolean();
        } else if (slot.is_number_integer() || slot.is_number_unsigned()) {
            ok = value.is_number_integer() || value.is_number_unsigned();
        } else if (slot.is_number()) {
            ok = value.is_number();
        } else if (slot.is_string()) {
            ok = value.is_string();
        }
        if (!ok) {
            throw ConfigError("'" + name + "' must be " + kind_name(slot) + ", got " + kind_name(value),
                              find_key_line(text, path));
        }
        if (value.is_number_float() && !std::isfinite(value.get<double>())) {
            throw ConfigError("'" + name + "' must be finite", find_key_line(text, path));
        }
        slot = value;
        path.pop_back();
    }
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json ExperimentConfig::resolved() const {
    Json j;
    j["experiment"] = experiment;
    j["hbar"] = hbar;
    j["seed"] = seed;
    j["output"] = {{"directory", output_text}, {"svg", svg}};
    j[experiment] = params;
    return j;
}

const Json& ExperimentConfig::at(const std::string& dotted) const {
    const Json* node = &params;
    for (const auto& key : split(dotted)) {
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError("internal: missing parameter '" + experiment + "." + dotted + "'");
        }
        node = &(*node)[key];
    }
    return *node;
}

double ExperimentConfig::number(const std::string& dotted) const {
    return at(dotted).get<double>();
}

long long ExperimentConfig::integer(const std::string& dotted) const {
    return at(dotted).get<long long>();
}

std::string ExperimentConfig::text(const std::string& dotted) const {
    return at(dotted).get<std::string>();
}

int ExperimentConfig::line_of(const std::string& dotted) const {
    auto path = split(dotted);
    path.insert(path.begin(), experiment);
    return find_key_line(source, path);
}

void ExperimentConfig::fail(const std::string& dotted, const std::string& message) const {
    throw ConfigError(experiment + "." + dotted + ": " + message, line_of(dotted));
}

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what(), line_at(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object", 1);
    }
    if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
        throw ConfigError("missing string key 'experiment'", 1);
    }
    ExperimentConfig cfg;
    cfg.source = text;
    cfg.base_dir = base_dir;
    cfg.experiment = doc["experiment"].get<std::string>();
    const Experiment* exp = find_experiment(cfg.experiment);
    if (exp == nullptr) {
        throw ConfigError("unknown experiment '" + cfg.experiment + "' (see 'kvnlab list')",
                          find_key_line(text, {"experiment"}));
    }

    Json top = {{"experiment", cfg.experiment},
                {"hbar", 1.0},
                {"seed", 1},
                {"output", {{"directory", "output"}, {"svg", true}}},
                {cfg.experiment, exp->defaults()}};
    merge(top, doc, "", text, {});

    cfg.hbar = top["hbar"].get<double>();
    if (!(cfg.hbar > 0.0)) {
        throw ConfigError("'hbar' must be positive", find_key_line(text, {"hbar"}));
    }
    const long long seed = top["seed"].get<long long>();
    if (seed < 0 || seed > std::numeric_limits<unsigned>::max()) {
        throw ConfigError("'seed' must fit in 32 bits unsigned", find_key_line(text, {"seed"}));
    }
    cfg.seed = static_cast<unsigned>(seed);
    cfg.output_text = top["output"]["directory"].get<std::string>();
    if (cfg.output_text.empty()) {
        throw ConfigError("'output.directory' must not be empty", find_key_line(text, {"output", "directory"}));
    }
    cfg.svg = top["output"]["svg"].get<bool>();
    cfg.output_dir = std::filesystem::path(cfg.output_text).is_absolute()
                         ? std::filesystem::path(cfg.output_text)
                         : base_dir / cfg.output_text;
    cfg.params = top[cfg.experiment];
    cfg.hash = fnv1a_hex(cfg.resolved().dump());
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("error reading config '" + path.string() + "'");
    }
    auto base = std::filesystem::absolute(path).parent_path();
    return parse_config_text(ss.str(), base);
}

}  // namespace kvnlab::cli
