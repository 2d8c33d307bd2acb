#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "becsq/runner.hpp"

using namespace becsq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TmpDir {
    fs::path path;
    explicit TmpDir(const std::string& name) : path(fs::path("runner_test_out") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TmpDir() { fs::remove_all("runner_test_out"); }
};

} // namespace

TEST_CASE("oat-curve run: schema and content") {
    TmpDir tmp("oat");
    ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
    cfg.oat_n_atoms = 120;
    cfg.oat_n_times = 40;
    cfg.out_dir = tmp.path.string();
    run(cfg);

    const std::string csv = slurp(tmp.path / "oat-curve.csv");
    CHECK(csv.rfind("t,xi2,theta_opt,jx\n", 0) == 0); // golden header
    std::istringstream lines(csv);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(first.rfind("0,1,", 0) == 0); // t = 0, xi2 = 1
    CHECK(fs::exists(tmp.path / "oat-curve.manifest"));
}

TEST_CASE("manifest re-run reproduces the CSV byte for byte") {
    TmpDir tmp("roundtrip");
    ExperimentConfig cfg = default_config(ExperimentKind::oat_curve);
    cfg.oat_n_atoms = 77;
    cfg.oat_n_times = 25;
    cfg.oat_chi = 0.8;
    cfg.out_dir = (tmp.path / "a").string();
    run(cfg);

    ExperimentConfig again = default_config(ExperimentKind::oat_curve);
    apply_config_file(again, (tmp.path / "a" / "oat-curve.manifest").string());
    again.out_dir = (tmp.path / "b").string();
    run(again);

    CHECK(slurp(tmp.path / "a" / "oat-curve.csv") == slurp(tmp.path / "b" / "oat-curve.csv"));
}

TEST_CASE("mc-fig2 run is deterministic") {
    TmpDir tmp("mc");
    ExperimentConfig cfg = default_config(ExperimentKind::mc_fig2);
    cfg.mc_n_atoms = 60;
    cfg.mc_n_trajectories = 12;
    cfg.mc_gamma_over_chi = 5.0;
    cfg.mc_t_max_chi = 0.05;
    cfg.mc_n_times = 6;
    cfg.out_dir = (tmp.path / "a").string();
    run(cfg);
    cfg.out_dir = (tmp.path / "b").string();
    cfg.threads = 2;
    run(cfg);
    CHECK(slurp(tmp.path / "a" / "mc-fig2.csv") == slurp(tmp.path / "b" / "mc-fig2.csv"));
    const std::string csv = slurp(tmp.path / "a" / "mc-fig2.csv");
    CHECK(csv.rfind("chi_t,xi2_loss,xi2_lossless,mean_n\n", 0) == 0);
}

TEST_CASE("witness-suite run finds no violations") {
    TmpDir tmp("wit");
    ExperimentConfig cfg = default_config(ExperimentKind::witness_suite);
    cfg.wit_n_samples = 300;
    cfg.out_dir = tmp.path.string();
    run(cfg);
    const std::string csv = slurp(tmp.path / "witness-suite.csv");
    CHECK(csv.rfind("n_atoms,n_samples,min_xi2,n_violations\n", 0) == 0);
    // every row ends in ",0" (no violations)
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line))
        if (!line.empty()) CHECK(line.substr(line.rfind(',')) == ",0");
}

#ifdef BECSQ_CLI_PATH
TEST_CASE("CLI exit codes") {
    TmpDir tmp("cli");
    const std::string cli = BECSQ_CLI_PATH;
    SUBCASE("malformed config key exits 2") {
        const fs::path bad = tmp.path / "bad.ini";
        std::ofstream(bad) << "[oat-curve]\nnot_a_key = 1\n";
        const std::string cmd = cli + " oat-curve --config " + bad.string() + " --out " +
                                (tmp.path / "o").string() + " 2>/dev/null";
        const int rc = std::system(cmd.c_str());
        CHECK(WEXITSTATUS(rc) == 2);
    }
    SUBCASE("numerical failure exits 3") {
        const fs::path bad = tmp.path / "numfail.ini";
        // r_max too small for the requested parameters
        std::ofstream(bad) << "[gpe-fig1]\nn_atoms = 100000\nr_max = 5\ngrid_points = 65\n";
        const std::string cmd = cli + " gpe-fig1 --config " + bad.string() + " --out " +
                                (tmp.path / "o").string() + " 2>/dev/null";
        const int rc = std::system(cmd.c_str());
        CHECK(WEXITSTATUS(rc) == 3);
    }
    SUBCASE("dressing runs clean and exits 0") {
        const std::string cmd =
            cli + " dressing --out " + (tmp.path / "o").string() + " >/dev/null";
        const int rc = std::system(cmd.c_str());
        CHECK(WEXITSTATUS(rc) == 0);
    }
}
#endif
