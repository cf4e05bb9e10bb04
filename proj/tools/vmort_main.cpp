#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vmort/experiments.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "experiment config file")->required();
    cmd->add_option("--seed", flags.seed, "master seed override")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", flags.out, "output directory override");
}

int execute(const CommonFlags& flags, std::optional<vmort::ExperimentKind> forced_kind) {
    vmort::RunOverrides ov;
    if (flags.seed_set) ov.seed = flags.seed;
    if (flags.threads >= 0) ov.threads = flags.threads;
    if (!flags.out.empty()) ov.output_dir = flags.out;
    ov.kind = forced_kind;
    return vmort::run_experiment(vmort::Config::load(flags.config), ov);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"volmort: long-range-dependent mortality models, pricing and hedging"};
    app.require_subcommand(1);

    CommonFlags price_flags, survival_flags, hedge_flags, experiment_flags;
    auto* price = app.add_subcommand("price", "price a single product from the config");
    add_common(price, price_flags);
    auto* survival = app.add_subcommand("survival", "survival-probability curves");
    add_common(survival, survival_flags);
    auto* hedge = app.add_subcommand("hedge", "mean-variance hedging comparison");
    add_common(hedge, hedge_flags);
    auto* experiment = app.add_subcommand("experiment", "run the experiment named in the config");
    add_common(experiment, experiment_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (price->parsed())
            return execute(price_flags, vmort::ExperimentKind::price_single);
        if (survival->parsed())
            return execute(survival_flags, vmort::ExperimentKind::survival_curves);
        if (hedge->parsed())
            return execute(hedge_flags, vmort::ExperimentKind::hedging_comparison);
        return execute(experiment_flags, std::nullopt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
