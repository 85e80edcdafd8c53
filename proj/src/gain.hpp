#pragma once

#include <Eigen/Dense>
#include <vector>

#include "errors.hpp"

namespace sn {

// Block-diagonal estimator gain synthesis for the networked error dynamics
//   Ahat = (I - K Dc) (W (x) A)
// subject to the fault-isolation constraint
//   |C_i K_i C_j'| <= epsilon |1 - C_j K_j C_j'|   for j in N_alpha(i), j != i.

enum class GainSolver {
    Subgradient,     // projected subgradient descent on sigma_max(Ahat)
    DiagonalSearch,  // scaled-identity line search fallback
};

struct GainConfig {
    double epsilon = 0.14;    // isolation scale factor, in (0,1)
    int max_iterations = 500;
    double margin = 0.006;    // accept when ||Ahat||_2 <= 1 - margin
    GainSolver solver = GainSolver::Subgradient;
};

struct GainMatrix {
    std::vector<Eigen::MatrixXd> blocks;  // N blocks, each n x n
    Eigen::MatrixXd assembled;            // nN x nN block diagonal
    double achieved_norm = 0.0;           // ||Ahat||_2 at acceptance
    double achieved_radius = 0.0;         // rho(Ahat)
    int iterations = 0;
};

struct ErrorBound {
    double b = 0.0;               // ||Ahat||_2
    double a1 = 0.0;              // ||I - K Dc||_2^2
    double a2 = 0.0;              // ||K||_2^2
    double sigma_zeta_bar = 0.0;  // ||Sigma_zeta_bar||_2
    double bound = 0.0;           // infinite when b >= 1
};

// D_C = diag_i [ sum_{j: U_ij=1} C_j C_j' ], size nN x nN.
Eigen::MatrixXd assemble_dc(const Eigen::MatrixXd& U, const Eigen::MatrixXd& C);

// Dbar_C = (U (x) 1_n) .* (1_N (x) C'), size nN x N.
Eigen::MatrixXd assemble_dc_bar(const Eigen::MatrixXd& U, const Eigen::MatrixXd& C);

// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& M);

// Largest eigenvalue magnitude by power iteration on a two-dimensional
// Krylov projection (handles complex-conjugate dominant pairs), with
// deterministic restarts.  Throws NonConvergence past the iteration cap.
double spectral_radius(const Eigen::MatrixXd& M, int max_iter = 5000, double tol = 1e-10);

// Requires the distributed-observability guard to have passed (checked
// internally; throws NotObservable).  Throws SynthesisFailed when no
// stabilizing constrained gain is found within max_iterations.
GainMatrix synthesize_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                           const Eigen::MatrixXd& U, const Eigen::MatrixXd& C,
                           const GainConfig& config = {});

// Steady-state error-variance bound
//   ||Sigma_e|| = (a1 N ||Sigma_nu|| + a2 ||Sigma_zeta_bar||) / (1 - b^2),
// with Sigma_zeta_bar = diag_i [ sum_{j in N_alpha(i)} C_j' szeta_j C_j ].
ErrorBound error_bound(const Eigen::MatrixXd& K, const Eigen::MatrixXd& A,
                       const Eigen::MatrixXd& W, const Eigen::MatrixXd& U,
                       const Eigen::MatrixXd& C, const Eigen::MatrixXd& sigma_nu,
                       const Eigen::VectorXd& sigma_zeta);

// Hard certification of the isolation constraint on a synthesized gain
// (re-evaluated independently of the solver path); slack in absolute terms.
bool isolation_constraint_holds(const std::vector<Eigen::MatrixXd>& blocks,
                                const Eigen::MatrixXd& U, const Eigen::MatrixXd& C,
                                double epsilon, double slack = 1e-9);

} // namespace sn
