#include <CLI11.hpp>

#include <iostream>

#include "becsq/errors.hpp"
#include "becsq/runner.hpp"

// Batch experiment runner. Exit codes: 0 ok, 2 config error, 3 numerical failure.
int main(int argc, char** argv) {
    CLI::App app{"becsqueeze: spin squeezing in a two-component condensate"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("becsqueeze ") + becsq::kVersion);

    struct Args {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_set = false;
        int threads = -1;
    };

    std::vector<std::pair<becsq::ExperimentKind, Args>> jobs;
    for (becsq::ExperimentKind kind :
         {becsq::ExperimentKind::oat_curve, becsq::ExperimentKind::gpe_fig1,
          becsq::ExperimentKind::mc_fig2, becsq::ExperimentKind::witness_suite,
          becsq::ExperimentKind::scaling_sweep, becsq::ExperimentKind::dressing}) {
        auto* sub = app.add_subcommand(becsq::kind_name(kind), "run the " +
                                                                   becsq::kind_name(kind) +
                                                                   " experiment");
        auto args = std::make_shared<Args>();
        sub->add_option("--config", args->config, "config file (INI-style key = value)");
        sub->add_option("--out", args->out, "output directory");
        sub->add_option("--seed", args->seed, "random seed (u64)")
            ->each([args](const std::string&) { args->seed_set = true; });
        sub->add_option("--threads", args->threads, "worker threads (0 = auto)");
        sub->callback([kind, args, &jobs]() { jobs.emplace_back(kind, *args); });
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& [kind, args] : jobs) {
        try {
            becsq::ExperimentConfig cfg = becsq::default_config(kind);
            if (!args.config.empty()) becsq::apply_config_file(cfg, args.config);
            if (!args.out.empty()) cfg.out_dir = args.out;
            if (args.seed_set) cfg.seed = args.seed;
            if (args.threads >= 0) cfg.threads = args.threads;
            becsq::run(cfg);
        } catch (const becsq::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return e.code() == becsq::errc::config ? 2 : 3;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
    }
    return 0;
}
