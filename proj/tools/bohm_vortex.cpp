// bohm-vortex: experiment runner for planar quantum-trajectory studies.
//
//   bohm-vortex <section|vortex-path|fixed-point|manifolds|lyapunov|scan>
//               --config FILE --out DIR [--threads N]
//
// Exit codes: 0 success, 2 config error, 3 runtime failure. The thread count
// can also come from BOHM_VORTEX_THREADS; the --threads flag wins.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bohm/commands.hpp"
#include "bohm/config.hpp"

namespace {

int resolve_threads(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("BOHM_VORTEX_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 0;  // library default: hardware concurrency
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bohmian quantum-trajectory experiments in the plane"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;

    const struct {
        const char* name;
        const char* help;
        int (*run)(const bohm::ExperimentConfig&, const std::string&, int);
    } commands[] = {
        {"section", "stroboscopic section dataset and plot", bohm::cmd_section},
        {"vortex-path", "analytic node track over one period", bohm::cmd_vortex_path},
        {"fixed-point", "period-map fixed points with Jacobians", bohm::cmd_fixed_point},
        {"manifolds", "saddle manifolds and homoclinic crossings", bohm::cmd_manifolds},
        {"lyapunov", "largest Lyapunov exponent per seed", bohm::cmd_lyapunov},
        {"scan", "chaos transition over a family of a/b ratios", bohm::cmd_scan},
    };

    for (const auto& command : commands) {
        auto* sub = app.add_subcommand(command.name, command.help);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker thread count (0 = all cores)");
    }

    CLI11_PARSE(app, argc, argv);

    bohm::ExperimentConfig config;
    try {
        config = bohm::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return bohm::kExitConfigError;
    }

    for (const auto& command : commands)
        if (app.get_subcommand(command.name)->parsed())
            return command.run(config, out_dir, resolve_threads(threads));
    return bohm::kExitConfigError;
}
