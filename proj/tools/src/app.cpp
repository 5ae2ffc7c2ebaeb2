#include "kvnlab_cli/app.hpp"

#include "kvnlab/error.hpp"
#include "kvnlab/parallel.hpp"
#include "kvnlab_cli/config.hpp"
#include "kvnlab_cli/experiments.hpp"
#include "kvnlab_cli/result_table.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ostream>

#ifndef KVNLAB_VERSION_STRING
#define KVNLAB_VERSION_STRING "0.0.0"
#endif

namespace kvnlab::cli {

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const InvalidArgument& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericalError& e) {
        err << "physics precondition violated: " << e.what() << '\n';
        return exit_physics;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

}  // namespace

const char* version() {
    return KVNLAB_VERSION_STRING;
}

int verify_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_config(config_path);
        find_experiment(cfg.experiment)->validate(cfg);
        out << "OK\n";
        out << "config_hash: " << cfg.hash << '\n';
        out << "output_directory: " << cfg.output_dir.lexically_normal().string() << '\n';
        out << cfg.resolved().dump(2) << '\n';
        return exit_ok;
    });
}

int run_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_config(config_path);
        const Experiment* exp = find_experiment(cfg.experiment);
        exp->validate(cfg);
        const auto start = std::chrono::steady_clock::now();
        const auto files = exp->run(cfg);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        Json manifest;
        manifest["experiment"] = cfg.experiment;
        manifest["config_hash"] = cfg.hash;
        manifest["code_version"] = version();
        manifest["threads"] = thread_count();
        manifest["wall_time_seconds"] = wall;
        manifest["files"] = files;
        write_text(cfg.output_dir / "run_manifest.json", manifest.dump(2) + "\n");

        for (const auto& f : files) {
            out << (cfg.output_dir / f).lexically_normal().string() << '\n';
        }
        return exit_ok;
    });
}

int list_command(std::ostream& out) {
    for (const auto& e : experiments()) {
        out << e.name << "  " << e.summary << '\n';
        out << e.defaults().dump(2) << "\n\n";
    }
    return exit_ok;
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum and Koopman-von Neumann phase-space laboratory", "kvnlab"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    std::string run_path;
    std::string verify_path;
    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", run_path, "Path to the JSON config")->required();
    auto* verify = app.add_subcommand("verify", "Parse and validate a config without running it");
    verify->add_option("config", verify_path, "Path to the JSON config")->required();
    auto* list = app.add_subcommand("list", "List experiments and their default parameters");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << app.help();
        return exit_usage;
    }
    if (run->parsed()) {
        return run_command(run_path, out, err);
    }
    if (verify->parsed()) {
        return verify_command(verify_path, out, err);
    }
    if (list->parsed()) {
        return list_command(out);
    }
    return exit_usage;
}

}  // namespace kvnlab::cli
