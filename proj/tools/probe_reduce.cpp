// Batch front end: parse a JSON run configuration, dispatch the requested
// experiment, and emit machine-readable CSV/JSON results.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "probe/dispatch.hpp"

int main(int argc, char** argv) {
    CLI::App app{"probe-reduce: localized-field detector reduction toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = -1;
    long long seed = -1;

    const std::vector<std::string> commands = {"modes", "influence", "reduce", "harvest", "sweep"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--threads", threads, "worker threads for sweeps (0 = all cores)");
        sub->add_option("--seed", seed, "override the config seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : probe::kExitConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    probe::RunConfig cfg;
    try {
        cfg = probe::parse_config(config_path);
    } catch (const probe::FileNotFound& e) {
        std::cerr << e.what() << "\n";
        return probe::kExitConfigError;
    } catch (const probe::SchemaError& e) {
        std::cerr << e.what() << "\n";
        return probe::kExitConfigError;
    }

    if (cfg.command != command) {
        std::cerr << "config error: $.command is '" << cfg.command
                  << "' but the CLI subcommand is '" << command << "'\n";
        return probe::kExitConfigError;
    }

    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) cfg.threads = threads;
    if (const char* env = std::getenv("PROBE_REDUCE_THREADS")) cfg.threads = std::atoi(env);

    return probe::dispatch(cfg, out_dir);
}
