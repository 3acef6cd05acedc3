#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "parlab/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"parlab: parabolic-equation numerical laboratory"};
    app.require_subcommand(1);

    std::string run_config, out_dir = "out", val_config;
    std::uint64_t seed = 0;
    int threads = 1;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", run_config, "path to a JSON experiment config")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override configured seeds");
    run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    CLI::App* validate = app.add_subcommand("validate", "validate an experiment config");
    validate->add_option("config", val_config, "path to a JSON experiment config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) {
            parlab::validate_experiment(val_config);
            std::printf("valid: %s\n", val_config.c_str());
            return 0;
        }
        parlab::RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        if (seed_opt->count() > 0) opt.seed = seed;
        const bool pass = parlab::run_experiment(run_config, opt);
        if (!pass) {
            std::fprintf(stderr, "expectation failure (see manifest.json)\n");
            return 3;
        }
        std::printf("ok: outputs in %s\n", out_dir.c_str());
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 2;
    }
}
