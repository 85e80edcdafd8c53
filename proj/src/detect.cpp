#include "detect.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace sn {

std::string DetectorConfig::label() const {
    std::ostringstream os;
    switch (mode) {
        case DetectorMode::Stateless: os << "stateless"; break;
        case DetectorMode::StatefulWindow: os << "window"; break;
        case DetectorMode::StatefulWeighted: os << "weighted"; break;
    }
    os << "_p" << far_target;
    if (mode != DetectorMode::Stateless) {
        os << "_T" << window;
        if (mode == DetectorMode::StatefulWeighted) os << "_mu" << weight;
    }
    return os.str();
}

double stateless_threshold(double p, double sigma_r_i) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("stateless_threshold: p must be in (0,1)");
    if (!(sigma_r_i > 0.0)) throw DomainError("stateless_threshold: sigma_r must be positive");
    return std::sqrt(2.0) * erfinv(1.0 - p) * sigma_r_i;
}

double false_negative_rate(double kappa) {
    if (!(kappa > 0.0)) throw DomainError("false_negative_rate: kappa must be positive");
    const double s = 1.0 / std::sqrt(2.0);
    return 0.5 * (erf(3.0 * kappa * s) - erf(kappa * s));
}

double distance_measure(const std::vector<double>& window, double sigma_r_i, double mu) {
    if (window.empty()) throw DomainError("distance_measure: empty window");
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("distance_measure: mu must be in (0,1]");
    if (!(sigma_r_i > 0.0)) throw DomainError("distance_measure: sigma_r must be positive");
    double acc = 0.0;
    const int T = static_cast<int>(window.size());
    for (int m = 0; m < T; ++m)
        acc += std::pow(mu, T - 1 - m) * window[m] * window[m] / sigma_r_i;
    return acc;
}

namespace {

double effective_dof(int T, double mu) {
    if (mu == 1.0) return 0.5 * T;
    return (1.0 - std::pow(mu, T)) / (2.0 - 2.0 * mu);
}

} // namespace

double stateful_threshold(double p, int T, double mu) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("stateful_threshold: p must be in (0,1)");
    if (T < 1) throw DomainError("stateful_threshold: T must be at least 1");
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("stateful_threshold: mu must be in (0,1]");
    return 2.0 * inv_reg_lower_gamma(1.0 - p, effective_dof(T, mu));
}

double far_from_measure(double measure, int T, double mu) {
    if (measure < 0.0) throw DomainError("far_from_measure: measure must be nonnegative");
    if (T < 1) throw DomainError("far_from_measure: T must be at least 1");
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("far_from_measure: mu must be in (0,1]");
    return 1.0 - reg_lower_gamma(effective_dof(T, mu), 0.5 * measure);
}

ThresholdSet make_thresholds(double p, double sigma_r_i, int T, double mu) {
    ThresholdSet ts;
    ts.kappa = std::sqrt(2.0) * erfinv(1.0 - p);
    ts.theta_p = ts.kappa * sigma_r_i;
    ts.theta_p_T = stateful_threshold(p, T, 1.0);
    ts.theta_p_mu = stateful_threshold(p, T, mu);
    return ts;
}

std::vector<AlarmEvent> run_detector(const SimTrace& trace, const ResidualStats& stats,
                                     const DetectorConfig& config,
                                     const std::map<int, int>& fault_onsets) {
    if (stats.sigma_r.size() != trace.N)
        throw ConfigMismatch("run_detector: stats sensor count != trace sensor count");
    if (!(config.far_target > 0.0 && config.far_target < 1.0))
        throw ConfigMismatch("run_detector: far_target out of range");
    const double mu = (config.mode == DetectorMode::StatefulWeighted) ? config.weight : 1.0;
    if (config.mode != DetectorMode::Stateless && config.window < 1)
        throw ConfigMismatch("run_detector: window must be at least 1");

    std::vector<AlarmEvent> events;
    for (int i = 0; i < trace.N; ++i) {
        const double sr = stats.sigma_r(i);
        const double theta_sl = stateless_threshold(config.far_target, sr);
        const auto onset_it = fault_onsets.find(i);

        std::deque<double> win;
        for (int k = 0; k < trace.horizon; ++k) {
            const double r = trace.R(k, i);
            double measure = 0.0, threshold = 0.0;
            bool fire = false;
            if (config.mode == DetectorMode::Stateless) {
                measure = std::abs(r);
                threshold = theta_sl;
                fire = measure >= threshold;
            } else {
                win.push_back(r);
                if (static_cast<int>(win.size()) > config.window) win.pop_front();
                // Warm-up: before a full window exists, both the measure and
                // the threshold use the current sample count in place of T.
                const int Teff = static_cast<int>(win.size());
                measure = distance_measure({win.begin(), win.end()}, sr, mu);
                threshold = stateful_threshold(config.far_target, Teff, mu);
                fire = measure >= threshold;
            }
            if (fire) {
                AlarmEvent ev;
                ev.sensor = i;
                ev.step = k;
                ev.mode = config.mode;
                ev.measure = measure;
                ev.threshold = threshold;
                ev.far = config.far_target;
                ev.delay = (onset_it != fault_onsets.end() && k >= onset_it->second)
                               ? k - onset_it->second
                               : -1;
                events.push_back(ev);
            }
        }
    }
    return events;
}

} // namespace sn
