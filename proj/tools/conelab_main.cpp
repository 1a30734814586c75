#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conelab/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"conelab: cone extension operator laboratory"};

    std::string config_path;
    std::string out_dir;
    int workers = 0;
    long long seed = -1;
    bool strict = true;

    app.add_option("--config", config_path, "path to the run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--workers", workers, "worker count (overrides CONELAB_WORKERS and the config)");
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_flag("--strict,!--no-strict", strict, "reject unknown config keys (default: strict)");

    CLI11_PARSE(app, argc, argv);

    try {
        conelab::RunConfig cfg = conelab::parse_config_file(config_path, strict);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (workers > 0) {
            cfg.workers = workers;
        } else if (const char* env = std::getenv("CONELAB_WORKERS")) {
            cfg.workers = std::max(1, std::atoi(env));
        }
        const conelab::RunOutcome outcome = conelab::run(cfg);
        std::cout << "command: " << cfg.command << '\n'
                  << "csv:     " << outcome.csv_path << '\n'
                  << "json:    " << outcome.json_path << '\n'
                  << "status:  " << (outcome.exit_status == 0 ? "pass" : "FAIL") << '\n';
        return outcome.exit_status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
