// Experiment runner: onebit-sim run --scenario fig1 --out fig1.csv

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "onebit/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"One-bit dithered mean estimation simulator"};
    app.set_version_flag("--version", std::string(onebit::library_version()));
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment sweep and write CSV plus a JSON manifest");
    std::string scenario = "fig1";
    std::string out_path;
    std::string config_path;
    int trials = 100;
    std::uint64_t seed = 0;
    int threads = 1;
    run->add_option("--scenario", scenario, "fig1 | fig2 | fig3 | fig4 | fig5 | custom")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5", "custom"}));
    auto* trials_opt = run->add_option("--trials", trials, "Independent trials per sweep point")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "Master seed");
    auto* threads_opt = run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "Output CSV path")->required();
    run->add_option("--config", config_path, "JSON config (required for --scenario custom)")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        onebit::ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            nlohmann::json j = nlohmann::json::parse(in);
            if (scenario != "custom" && !j.contains("base")) j["base"] = scenario;
            cfg = onebit::config_from_json(j);
        } else if (scenario == "custom") {
            std::cerr << "error: --scenario custom needs --config <file.json>\n";
            return 2;
        } else {
            cfg = onebit::preset(scenario);
        }
        if (*trials_opt) cfg.trials = trials;
        if (*seed_opt) cfg.seed = seed;
        if (*threads_opt) cfg.threads = threads;
        cfg.validate();

        const auto start = std::chrono::steady_clock::now();
        const auto rows = onebit::run(cfg);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        onebit::write_csv(rows, out_path);
        const auto manifest = onebit::manifest_path_for(out_path);
        onebit::write_manifest(cfg, rows, wall, out_path, manifest);
        std::cout << "wrote " << rows.size() << " rows to " << out_path << " and " << manifest << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
