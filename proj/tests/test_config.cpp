#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "becsq/config.hpp"
#include "becsq/errors.hpp"

using namespace becsq;

TEST_CASE("config parsing") {
    SUBCASE("defaults plus overrides") {
        ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
        std::istringstream in("# comment\n[oat-curve]\nn_atoms = 250\nchi = 0.5\nseed = 99\n");
        apply_config_stream(cfg, in, "test");
        CHECK(cfg.oat_n_atoms == 250);
        CHECK(cfg.oat_chi == 0.5);
        CHECK(cfg.seed == 99);
        CHECK(cfg.oat_n_times == 400); // untouched default
    }
    SUBCASE("unknown key is a hard error naming the key") {
        ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
        std::istringstream in("[oat-curve]\nn_atmos = 250\n");
        try {
            apply_config_stream(cfg, in, "test");
            FAIL("expected a config error");
        } catch (const Error& e) {
            CHECK(e.code() == errc::config);
            CHECK(std::string(e.what()).find("n_atmos") != std::string::npos);
        }
    }
    SUBCASE("wrong section is rejected") {
        ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
        std::istringstream in("[mc-fig2]\nn_atoms = 10\n");
        CHECK_THROWS_AS(apply_config_stream(cfg, in, "test"), Error);
    }
    SUBCASE("key before any section is rejected") {
        ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
        std::istringstream in("n_atoms = 10\n");
        CHECK_THROWS_AS(apply_config_stream(cfg, in, "test"), Error);
    }
    SUBCASE("malformed values carry line numbers") {
        ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
        std::istringstream in("[oat-curve]\nchi = abc\n");
        try {
            apply_config_stream(cfg, in, "test");
            FAIL("expected a config error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("test:2") != std::string::npos);
        }
    }
    SUBCASE("bool keys accept 0/1/true/false only") {
        ExperimentConfig cfg = default_config(ExperimentKind::gpe_fig1);
        std::istringstream ok("[gpe-fig1]\nfrozen_modes = true\n");
        apply_config_stream(cfg, ok, "test");
        CHECK(cfg.gpe_frozen_modes);
        std::istringstream bad("[gpe-fig1]\nfrozen_modes = yes\n");
        CHECK_THROWS_AS(apply_config_stream(cfg, bad, "test"), Error);
    }
}

TEST_CASE("manifest round trip preserves every field") {
    ExperimentConfig cfg = default_config(ExperimentKind::mc_fig2);
    cfg.mc_gamma_over_chi = 123.25;
    cfg.mc_t_max_chi = 7.5e-4;
    cfg.seed = 31337;
    cfg.out_dir = "somewhere";
    const std::string path = "manifest_test.ini";
    write_manifest(cfg, path, {"becsqueeze test", "wall_time_s = 0"});

    ExperimentConfig back = default_config(ExperimentKind::mc_fig2);
    apply_config_file(back, path);
    CHECK(back.mc_gamma_over_chi == cfg.mc_gamma_over_chi);
    CHECK(back.mc_t_max_chi == cfg.mc_t_max_chi);
    CHECK(back.seed == cfg.seed);
    CHECK(back.out_dir == cfg.out_dir);
    std::remove(path.c_str());
}

TEST_CASE("kind names") {
    CHECK(kind_name(ExperimentKind::scaling_sweep) == "scaling-sweep");
    CHECK(kind_from_name("witness-suite") == ExperimentKind::witness_suite);
    CHECK_THROWS_AS(kind_from_name("nope"), Error);
    // every kind exposes a documented key list
    for (auto k : {ExperimentKind::oat_curve, ExperimentKind::gpe_fig1, ExperimentKind::mc_fig2,
                   ExperimentKind::witness_suite, ExperimentKind::scaling_sweep,
                   ExperimentKind::dressing})
        CHECK(!config_keys(k).empty());
}
