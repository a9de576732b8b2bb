// fractalfn <mode> --config <path> [--out <dir>] [--grid M] [--tol t] [--seed n]
//
// Modes: solve, attract, global-attract, check, interp, tensor, graph-ifs.
// Exit codes: 0 success, 2 failed condition check, 1 error.

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "fractalfn/config.hpp"
#include "fractalfn/runner.hpp"

namespace {

void usage(std::ostream& out) {
    out << "usage: fractalfn <mode> --config <path> [--out <dir>] [--grid M]"
           " [--tol t] [--seed n]\n"
           "modes: solve | attract | global-attract | check | interp | tensor | graph-ifs\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fractalfn;
    if (argc < 2) {
        usage(std::cerr);
        return 1;
    }
    const std::string mode_arg = argv[1];
    if (mode_arg == "--help" || mode_arg == "-h") {
        usage(std::cout);
        return 0;
    }

    std::string config_path, out_dir;
    std::string grid_arg, tol_arg, seed_arg;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        const auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "fractalfn: missing value for " << arg << "\n";
                std::exit(1);
            }
            return argv[++i];
        };
        if (arg == "--config") config_path = next();
        else if (arg == "--out") out_dir = next();
        else if (arg == "--grid") grid_arg = next();
        else if (arg == "--tol") tol_arg = next();
        else if (arg == "--seed") seed_arg = next();
        else {
            std::cerr << "fractalfn: unknown option " << arg << "\n";
            usage(std::cerr);
            return 1;
        }
    }
    if (config_path.empty()) {
        std::cerr << "fractalfn: --config is required\n";
        return 1;
    }

    try {
        const Mode mode = mode_from_string(mode_arg);
        JobConfig job = parse_config_file(config_path);
        if (job.mode != mode) {
            std::cerr << "fractalfn: config mode '" << to_string(job.mode)
                      << "' does not match command '" << mode_arg << "'\n";
            return 1;
        }
        if (!out_dir.empty()) job.out_dir = out_dir;
        if (!grid_arg.empty()) job.grid = std::stoi(grid_arg);
        if (!tol_arg.empty()) job.tol = std::stod(tol_arg);
        if (!seed_arg.empty()) job.seed = std::stoll(seed_arg);
        const RunResult result = run(job);
        std::cout << result.report;
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "fractalfn: " << e.what() << "\n";
        return 1;
    }
}
