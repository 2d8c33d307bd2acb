#include "becsq/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "becsq/errors.hpp"

namespace becsq {

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::oat_curve: return "oat-curve";
        case ExperimentKind::gpe_fig1: return "gpe-fig1";
        case ExperimentKind::mc_fig2: return "mc-fig2";
        case ExperimentKind::witness_suite: return "witness-suite";
        case ExperimentKind::scaling_sweep: return "scaling-sweep";
        case ExperimentKind::dressing: return "dressing";
    }
    return "?";
}

ExperimentKind kind_from_name(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::oat_curve, ExperimentKind::gpe_fig1, ExperimentKind::mc_fig2,
          ExperimentKind::witness_suite, ExperimentKind::scaling_sweep, ExperimentKind::dressing})
        if (kind_name(k) == name) return k;
    fail(errc::config, "unknown experiment kind '" + name + "'");
}

namespace {

struct Field {
    const char* key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v); // survives a reparse bit-exactly
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        fail(errc::config, "key '" + std::string(key) + "': cannot parse '" + v + "' as number");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty())
        fail(errc::config, "key '" + std::string(key) + "': cannot parse '" + v + "' as integer");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "0" || v == "false") return false;
    if (v == "1" || v == "true") return true;
    fail(errc::config, "key '" + std::string(key) + "': expected 0/1/true/false, got '" + v + "'");
}

Field f_int(const char* key, int ExperimentConfig::*m) {
    return {key,
            [key, m](ExperimentConfig& c, const std::string& v) {
                c.*m = static_cast<int>(parse_int(key, v));
            },
            [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

Field f_double(const char* key, double ExperimentConfig::*m) {
    return {key,
            [key, m](ExperimentConfig& c, const std::string& v) { c.*m = parse_double(key, v); },
            [m](const ExperimentConfig& c) { return fmt_double(c.*m); }};
}

Field f_bool(const char* key, bool ExperimentConfig::*m) {
    return {key,
            [key, m](ExperimentConfig& c, const std::string& v) { c.*m = parse_bool(key, v); },
            [m](const ExperimentConfig& c) { return std::string(c.*m ? "1" : "0"); }};
}

Field f_string(const char* key, std::string ExperimentConfig::*m) {
    return {key, [m](ExperimentConfig& c, const std::string& v) { c.*m = v; },
            [m](const ExperimentConfig& c) { return c.*m; }};
}

Field f_seed() {
    return {"seed",
            [](ExperimentConfig& c, const std::string& v) {
                char* end = nullptr;
                c.seed = std::strtoull(v.c_str(), &end, 10);
                if (end != v.c_str() + v.size() || v.empty())
                    fail(errc::config, "key 'seed': cannot parse '" + v + "' as unsigned integer");
            },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }};
}

std::vector<Field> fields_for(ExperimentKind kind) {
    std::vector<Field> common = {
        f_string("out", &ExperimentConfig::out_dir),
        f_seed(),
        f_int("threads", &ExperimentConfig::threads),
    };
    std::vector<Field> f;
    switch (kind) {
        case ExperimentKind::oat_curve:
            f = {f_int("n_atoms", &ExperimentConfig::oat_n_atoms),
                 f_double("chi", &ExperimentConfig::oat_chi),
                 f_double("t_max", &ExperimentConfig::oat_t_max),
                 f_int("n_times", &ExperimentConfig::oat_n_times),
                 f_bool("emit_gnuplot", &ExperimentConfig::emit_gnuplot)};
            break;
        case ExperimentKind::gpe_fig1:
            f = {f_int("n_atoms", &ExperimentConfig::gpe_n_atoms),
                 f_double("a_aa", &ExperimentConfig::gpe_a_aa),
                 f_double("a_bb", &ExperimentConfig::gpe_a_bb),
                 f_double("a_ab", &ExperimentConfig::gpe_a_ab),
                 f_int("grid_points", &ExperimentConfig::gpe_grid_points),
                 f_double("r_max", &ExperimentConfig::gpe_r_max),
                 f_double("dt", &ExperimentConfig::gpe_dt),
                 f_double("t_max", &ExperimentConfig::gpe_t_max),
                 f_int("n_times", &ExperimentConfig::gpe_n_times),
                 f_double("window_sigmas", &ExperimentConfig::gpe_window_sigmas),
                 f_bool("frozen_modes", &ExperimentConfig::gpe_frozen_modes),
                 f_bool("emit_gnuplot", &ExperimentConfig::emit_gnuplot)};
            break;
        case ExperimentKind::mc_fig2:
            f = {f_int("n_atoms", &ExperimentConfig::mc_n_atoms),
                 f_double("gamma_over_chi", &ExperimentConfig::mc_gamma_over_chi),
                 f_int("n_trajectories", &ExperimentConfig::mc_n_trajectories),
                 f_double("t_max_chi", &ExperimentConfig::mc_t_max_chi),
                 f_int("n_times", &ExperimentConfig::mc_n_times),
                 f_string("loss_norm", &ExperimentConfig::mc_loss_norm),
                 f_bool("emit_gnuplot", &ExperimentConfig::emit_gnuplot)};
            break;
        case ExperimentKind::witness_suite:
            f = {f_int("n_samples", &ExperimentConfig::wit_n_samples),
                 f_int("n_min", &ExperimentConfig::wit_n_min),
                 f_int("n_max", &ExperimentConfig::wit_n_max),
                 f_int("frames_per_sample", &ExperimentConfig::wit_frames_per_sample)};
            break;
        case ExperimentKind::scaling_sweep:
            f = {f_string("n_list", &ExperimentConfig::sw_n_list),
                 f_string("a_list", &ExperimentConfig::sw_a_list),
                 f_int("n_fixed", &ExperimentConfig::sw_n_fixed),
                 f_double("a_fixed", &ExperimentConfig::sw_a_fixed),
                 f_int("grid_points", &ExperimentConfig::sw_grid_points),
                 f_double("dt", &ExperimentConfig::sw_dt),
                 f_double("window_sigmas", &ExperimentConfig::sw_window_sigmas),
                 f_int("n_times", &ExperimentConfig::sw_n_times),
                 f_double("t_max", &ExperimentConfig::sw_t_max)};
            break;
        case ExperimentKind::dressing:
            f = {f_double("rabi_mhz", &ExperimentConfig::dr_rabi_mhz),
                 f_double("detuning_mhz", &ExperimentConfig::dr_detuning_mhz)};
            break;
    }
    f.insert(f.end(), common.begin(), common.end());
    return f;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    return c;
}

void apply_config_stream(ExperimentConfig& cfg, std::istream& in, const std::string& origin) {
    const auto fields = fields_for(cfg.kind);
    std::string line;
    int lineno = 0;
    bool in_section = false;
    bool seen_section = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(errc::config, origin + ":" + std::to_string(lineno) + ": malformed section");
            const std::string sec = trim(line.substr(1, line.size() - 2));
            in_section = (sec == kind_name(cfg.kind));
            if (!in_section)
                fail(errc::config, origin + ":" + std::to_string(lineno) + ": section '" + sec +
                                       "' does not match experiment '" + kind_name(cfg.kind) + "'");
            seen_section = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::config, origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (!in_section)
            fail(errc::config,
                 origin + ":" + std::to_string(lineno) + ": key outside a [" +
                     kind_name(cfg.kind) + "] section");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        bool found = false;
        for (const auto& f : fields) {
            if (key == f.key) {
                try {
                    f.set(cfg, val);
                } catch (const Error& e) {
                    fail(errc::config, origin + ":" + std::to_string(lineno) + ": " + e.what());
                }
                found = true;
                break;
            }
        }
        if (!found)
            fail(errc::config, origin + ":" + std::to_string(lineno) + ": unknown key '" + key +
                                   "' for experiment '" + kind_name(cfg.kind) + "'");
    }
    if (!seen_section)
        fail(errc::config, origin + ": no [" + kind_name(cfg.kind) + "] section found");
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::config, "cannot open config file '" + path + "'");
    apply_config_stream(cfg, in, path);
}

void write_manifest(const ExperimentConfig& cfg, const std::string& path,
                    const std::vector<std::string>& meta_comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io, "cannot write manifest '" + path + "'");
    for (const auto& c : meta_comments) out << "# " << c << "\n";
    out << "[" << kind_name(cfg.kind) << "]\n";
    for (const auto& f : fields_for(cfg.kind)) out << f.key << " = " << f.get(cfg) << "\n";
}

std::vector<std::string> config_keys(ExperimentKind kind) {
    std::vector<std::string> keys;
    for (const auto& f : fields_for(kind)) keys.push_back(f.key);
    return keys;
}

} // namespace becsq
