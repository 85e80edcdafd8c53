#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "gain.hpp"
#include "network.hpp"
#include "structural.hpp"

namespace sn {

// Numeric LSI instantiation and the single time-scale distributed
// estimator loop (consensus prior + innovation posterior) with noise and
// injected output faults.

struct LtiSystem {
    Eigen::MatrixXd A;           // n x n
    Eigen::MatrixXd C;           // N x n, row i is sensor i's output vector
    Eigen::MatrixXd sigma_nu;    // n x n process-noise covariance (PSD)
    Eigen::VectorXd sigma_zeta;  // per-sensor measurement-noise variance

    int n() const { return static_cast<int>(A.rows()); }
    int N() const { return static_cast<int>(C.rows()); }
};

struct FaultSpec {
    enum class Kind { Constant, Gaussian };
    int sensor = 0;   // 0-based
    int onset = 0;    // first step at which the fault is active
    Kind kind = Kind::Constant;
    double magnitude = 0.0;
    double stddev = 0.0;  // Gaussian only
};
using FaultProfile = std::vector<FaultSpec>;

struct SimTrace {
    int horizon = 0, n = 0, N = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd X;                  // horizon x n true states
    std::vector<Eigen::MatrixXd> Xhat;  // per sensor: horizon x n posterior estimates
    Eigen::MatrixXd R;                  // horizon x N residuals r_i(k) = y_i - C_i xhat_i
    Eigen::VectorXd mse;                // mean over sensors of ||xhat_i - x||^2
    // Recorded draws, so the error recursion can be replayed exactly.
    Eigen::MatrixXd nu;     // horizon x n
    Eigen::MatrixXd zeta;   // horizon x N
    Eigen::MatrixXd fault;  // horizon x N
};

struct ResidualStats {
    Eigen::VectorXd sigma_r;    // per-sensor analytic residual-variance bound
    Eigen::VectorXd empirical;  // per-sensor empirical residual variance (optional)
};

// Numeric system from a sparsity pattern: entries drawn uniformly from
// [lo, hi] via the counter stream, or taken from the stored edge weights
// when fixed_weights is set (entries without a stored weight are drawn).
// unit_outputs makes every C entry 1 instead of a draw.
LtiSystem instantiate_lsi(const SystemStructure& s, std::uint64_t seed,
                          double lo, double hi, bool fixed_weights = false,
                          bool unit_outputs = false);

SimTrace simulate(const LtiSystem& sys, const SensorNetwork& net,
                  const GainMatrix& K, const FaultProfile& faults, int horizon,
                  std::uint64_t seed,
                  const Eigen::VectorXd* x0 = nullptr,
                  const std::vector<Eigen::VectorXd>* xhat0 = nullptr);

// Working residual-variance bound: ||C_i|| * ||Sigma_e|| / N + szeta_i.
double residual_variance_bound(const ErrorBound& eb, const Eigen::VectorXd& c_i,
                               double sigma_zeta_i, int N);

ResidualStats residual_stats(const LtiSystem& sys, const SensorNetwork& net,
                             const ErrorBound& eb);

// Steps to discard before steady-state statistics: max(50, 5 / (1 - rho)).
int warmup_steps(double rho);

struct ReducedDesign {
    SensorNetwork net;
    LtiSystem sys;
    GainMatrix gain;
};

// Delete sensors: rows/cols of W and U (W re-normalized row-stochastic),
// C rows and gain blocks.  removal_set holds 0-based indices.
ReducedDesign remove_sensors(const SensorNetwork& net, const LtiSystem& sys,
                             const GainMatrix& gain, const std::vector<int>& removal_set);

} // namespace sn
