#pragma once

#include "kvnlab_cli/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace kvnlab::cli {

struct Experiment {
    std::string name;
    std::string summary;
    Json (*defaults)();
    // Rebuilds the module configs so that their preconditions run; throws on violation.
    void (*validate)(const ExperimentConfig&);
    // Writes outputs and returns the files produced, relative to the output directory.
    std::vector<std::string> (*run)(const ExperimentConfig&);
};

const std::vector<Experiment>& experiments();
const Experiment* find_experiment(const std::string& name);

}  // namespace kvnlab::cli
