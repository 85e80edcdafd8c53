#pragma once

#include <map>
#include <string>
#include <vector>

#include "detect.hpp"
#include "gain.hpp"
#include "network.hpp"
#include "sim.hpp"
#include "structural.hpp"

namespace sn {

// Scenario description (flat key-value text with [section] headers), the
// built-in fixtures, the end-to-end design pipeline and report-bundle
// emission used by the CLI.

struct Scenario {
    // [structure]
    std::string structure_source = "fig2";  // builtin name or edge-list path
    bool fixed_weights = true;              // use stored edge weights
    std::uint64_t lsi_seed = 1;             // draws for entries without weights
    double value_lo = 0.1, value_hi = 1.0;

    // [placement]
    int q = 0;
    std::vector<int> explicit_states;  // overrides auto placement when nonempty

    // [network]
    std::string network_mode = "section5";  // "section5" | "synth" | "files"
    std::uint64_t network_seed = 1;
    std::string w_file, u_file, alpha_file;

    // [gain]
    GainConfig gain;

    // [noise]
    double sigma_nu = 0.01;   // scalar per-state process-noise variance
    double sigma_zeta = 0.01; // scalar per-sensor measurement-noise variance

    // [faults]
    FaultProfile faults;

    // [run]
    int horizon = 200;
    std::vector<std::uint64_t> seeds;

    // [detectors]
    std::vector<DetectorConfig> detectors;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_text(const Scenario& s);  // canonical serialization

// Built-in fixtures.
SystemStructure fig2_structure();                 // digraph with stored weights
Eigen::MatrixXd section5_consensus_matrix();      // pinned row-stochastic W
Scenario section5_scenario();                     // the full experiment setup

struct Design {
    SystemStructure structure;   // with placed outputs
    OutputPlacement placement;
    LtiSystem sys;
    SensorNetwork net;
    GainMatrix gain;
    ErrorBound bound;
    ResidualStats stats;
};

// placement -> LSI -> networks -> gain -> bound.  Throws module errors.
Design build_design(const Scenario& s);

// Decomposition report for cmd_analyze.
std::string analyze_report(const SystemStructure& s);

// Design verification summary for cmd_design (connectivity survival,
// distributed observability, exhaustive Q-removal checks for Q <= 2).
std::string design_report(const Design& d, int q);

struct ReportBundle {
    std::map<std::string, std::string> files;  // name -> contents (manifest included)
};

ReportBundle run_scenario(const Scenario& s);
void write_bundle(const ReportBundle& b, const std::string& out_dir);

// FAR sweep over the (T, mu) grid at a fixed sustained normalized residual.
std::string sweep_csv(double normalized_sq_residual, int t_min, int t_max,
                      const std::vector<double>& mus);

// Re-runs the scenario stored in a bundle directory and compares content
// hashes against the manifest.  Returns a human-readable report; mismatch
// flag set on any difference.
std::string verify_bundle(const std::string& dir, bool& ok);

} // namespace sn
