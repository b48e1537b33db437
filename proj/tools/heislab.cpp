#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "heislab/lab.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Heisenberg-group singular integral laboratory"};
    std::string suite, config, out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool timing = false;
    std::string names;
    for (const auto& s : heislab::suite_names()) names += (names.empty() ? "" : ", ") + s;
    app.add_option("suite", suite, "Suite to run: " + names)->required();
    app.add_option("--config", config, "JSON config file")->required();
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--out", out, "Output directory");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    app.add_flag("--timing", timing, "Record assembly times in the CSV");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    heislab::ExperimentConfig cfg;
    try {
        cfg = heislab::ExperimentConfig::load(config, suite);
    } catch (const heislab::ConfigError& e) {
        std::fprintf(stderr, "heislab: %s\n", e.what());
        return 2;
    }
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (!out.empty()) cfg.out = out;
    cfg.timing = cfg.timing || timing;

    try {
        const auto res = heislab::run(cfg);
        for (const auto& c : res.checks)
            if (!c.pass) std::fprintf(stderr, "heislab: check %s failed: %g (limit %g)\n", c.name.c_str(), c.value, c.limit);
        std::printf("%s: %zu checks, %s, %.2fs -> %s\n", cfg.suite.c_str(), res.checks.size(),
                    res.ok() ? "all passed" : "FAILED", res.wall_time, cfg.out.string().c_str());
        return res.ok() ? 0 : 1;
    } catch (const heislab::ConfigError& e) {
        std::fprintf(stderr, "heislab: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "heislab: %s\n", e.what());
        return 1;
    }
}
