// Command-line front end over the sentinet C API.
//
// Subcommands: analyze, design, simulate, sweep, verify.
// Exit codes: 0 success, 2 parse error, 3 infeasible design, 4 synthesis
// failure (1 for anything else).

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "sentinet/sentinet.h"

namespace {

int map_exit(int status) {
    switch (status) {
        case SN_OK: return 0;
        case SN_PARSE_ERROR: return 2;
        case SN_INFEASIBLE: return 3;
        case SN_SYNTHESIS_FAILED: return 4;
        default: return 1;
    }
}

int fail(int status) {
    std::fprintf(stderr, "error: %s\n", sn_last_error());
    return map_exit(status);
}

int get_structure(const std::string& file, const std::string& builtin,
                  sn_structure** out) {
    if (!file.empty()) return sn_structure_load(file.c_str(), out);
    return sn_structure_builtin(builtin.c_str(), out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sentinet: distributed estimation, anomaly detection and "
                 "redundant sensor-network design"};
    app.require_subcommand(1);

    std::string structure_file, builtin = "fig2";
    std::string scenario_file, scenario_builtin = "section5";
    std::string out_dir = "out";
    int q = 0;
    unsigned long long seed = 1;
    double epsilon = 0.14;

    auto* analyze = app.add_subcommand("analyze", "decompose a system digraph");
    analyze->add_option("--structure", structure_file, "edge-list file");
    analyze->add_option("--builtin", builtin, "built-in structure name");

    auto* design = app.add_subcommand("design", "Q-redundant sensor/network/gain design");
    design->add_option("--structure", structure_file, "edge-list file");
    design->add_option("--builtin", builtin, "built-in structure name");
    design->add_option("--q", q, "redundancy level");
    design->add_option("--seed", seed, "network weight seed");
    design->add_option("--epsilon", epsilon, "isolation constraint factor");
    design->add_option("--out-dir", out_dir, "directory for design files");

    auto* simulate = app.add_subcommand("simulate", "run a scenario and emit a report bundle");
    simulate->add_option("--scenario", scenario_file, "scenario file");
    simulate->add_option("--builtin", scenario_builtin, "built-in scenario name");
    simulate->add_option("--out-dir", out_dir, "bundle output directory");

    double sweep_value = 2.0;
    int t_min = 2, t_max = 16;
    std::vector<double> mus = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "FAR grid over window length and weight");
    sweep->add_option("--value", sweep_value, "sustained normalized squared residual");
    sweep->add_option("--t-min", t_min, "smallest window length");
    sweep->add_option("--t-max", t_max, "largest window length");
    sweep->add_option("--mu", mus, "weights to sweep");
    sweep->add_option("--out", sweep_out, "CSV output path (stdout when omitted)");

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "re-check a report bundle's manifest");
    verify->add_option("--dir", verify_dir, "bundle directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) {
        sn_structure* s = nullptr;
        int rc = get_structure(structure_file, builtin, &s);
        if (rc != SN_OK) return fail(rc);
        char* report = nullptr;
        rc = sn_analyze(s, &report);
        sn_structure_free(s);
        if (rc != SN_OK) return fail(rc);
        std::fputs(report, stdout);
        sn_string_free(report);
        return 0;
    }

    if (design->parsed()) {
        sn_structure* s = nullptr;
        int rc = get_structure(structure_file, builtin, &s);
        if (rc != SN_OK) return fail(rc);
        sn_design* d = nullptr;
        rc = sn_design_run(s, q, seed, epsilon, &d);
        sn_structure_free(s);
        if (rc != SN_OK) return fail(rc);
        char* report = nullptr;
        rc = sn_design_report(d, &report);
        if (rc == SN_OK) {
            std::fputs(report, stdout);
            sn_string_free(report);
            rc = sn_design_write(d, out_dir.c_str());
        }
        sn_design_free(d);
        if (rc != SN_OK) return fail(rc);
        std::printf("design files written to %s\n", out_dir.c_str());
        return 0;
    }

    if (simulate->parsed()) {
        sn_scenario* s = nullptr;
        int rc = scenario_file.empty()
                     ? sn_scenario_builtin(scenario_builtin.c_str(), &s)
                     : sn_scenario_load(scenario_file.c_str(), &s);
        if (rc != SN_OK) return fail(rc);
        rc = sn_simulate(s, out_dir.c_str());
        sn_scenario_free(s);
        if (rc != SN_OK) return fail(rc);
        std::printf("report bundle written to %s\n", out_dir.c_str());
        return 0;
    }

    if (sweep->parsed()) {
        char* csv = nullptr;
        const int rc = sn_sweep(sweep_value, t_min, t_max, mus.data(), mus.size(), &csv);
        if (rc != SN_OK) return fail(rc);
        if (sweep_out.empty()) {
            std::fputs(csv, stdout);
        } else {
            std::FILE* f = std::fopen(sweep_out.c_str(), "wb");
            if (!f) {
                sn_string_free(csv);
                std::fprintf(stderr, "error: cannot write %s\n", sweep_out.c_str());
                return 1;
            }
            std::fputs(csv, f);
            std::fclose(f);
        }
        sn_string_free(csv);
        return 0;
    }

    if (verify->parsed()) {
        int ok = 0;
        char* report = nullptr;
        const int rc = sn_verify(verify_dir.c_str(), &ok, &report);
        if (rc != SN_OK) return fail(rc);
        std::fputs(report, stdout);
        sn_string_free(report);
        return ok ? 0 : 1;
    }
    return 1;
}
