#pragma once

#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "sim.hpp"
#include "specfun.hpp"

namespace sn {

// Stateless and stateful (windowed / exponentially weighted chi-squared)
// residual detectors with analytic thresholds and FAR computations.

enum class DetectorMode { Stateless, StatefulWindow, StatefulWeighted };

struct DetectorConfig {
    DetectorMode mode = DetectorMode::Stateless;
    double far_target = 0.05;  // p in (0,1)
    int window = 1;            // T, stateful modes
    double weight = 1.0;       // mu in (0,1]; mu = 1 coincides with the plain window

    std::string label() const;
};

struct ThresholdSet {
    double kappa = 0.0;       // sqrt(2) * erfinv(1 - p)
    double theta_p = 0.0;     // stateless threshold, kappa * sigma_r
    double theta_p_T = 0.0;   // windowed chi-squared threshold
    double theta_p_mu = 0.0;  // weighted chi-squared threshold
};

struct AlarmEvent {
    int sensor = 0;
    int step = 0;
    DetectorMode mode = DetectorMode::Stateless;
    double measure = 0.0;    // |r|, iota or weighted iota
    double threshold = 0.0;
    double far = 0.0;        // configured FAR p
    int delay = -1;          // steps since fault onset; -1 when unknown/healthy
};

double stateless_threshold(double p, double sigma_r_i);

// Folded-Gaussian false-negative probability:
//   pbar = (erf(3 kappa / sqrt 2) - erf(kappa / sqrt 2)) / 2.
double false_negative_rate(double kappa);

// Weighted squared-residual sum over a window: sum_m mu^{k-m} r(m)^2 / sigma_r.
// `window` is ordered oldest-first; mu = 1 gives the plain statistic.
double distance_measure(const std::vector<double>& window, double sigma_r_i, double mu);

// 2 * Pinv(1 - p, d) with d = T/2 for mu = 1 and d = (1 - mu^T)/(2 - 2 mu)
// otherwise (weighted chi-squared effective degrees of freedom).
double stateful_threshold(double p, int T, double mu);

// FAR implied by an observed measure: 1 - P(d, measure / 2).
double far_from_measure(double measure, int T, double mu);

ThresholdSet make_thresholds(double p, double sigma_r_i, int T, double mu);

// Fault onsets (sensor -> onset step) let the detector annotate alarm
// delay; sensors without a known onset get delay = -1.
std::vector<AlarmEvent> run_detector(const SimTrace& trace, const ResidualStats& stats,
                                     const DetectorConfig& config,
                                     const std::map<int, int>& fault_onsets = {});

} // namespace sn
