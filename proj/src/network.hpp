#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "errors.hpp"
#include "structural.hpp"

namespace sn {

// Consensus (beta) network and hub (alpha) network construction plus the
// connectivity / distributed-observability verification used by the
// redundant-design pipeline.

struct SensorNetwork {
    int N = 0;
    Eigen::MatrixXd W;           // row-stochastic consensus weights
    Eigen::MatrixXd U;           // 0-1 hub adjacency, U(i,i) = 1
    std::vector<int> alpha_set;  // 0-based sensor indices acting as hubs

    void validate() const;  // row sums, U invariants
};

struct ConnectivityReport {
    int vertex_connectivity = 0;
    std::map<int, bool> survives_removals;  // removal-set size -> survives
};

// Directed circulant pattern with out-degree Q+1 (sensor j feeds sensors
// j-1 .. j-(Q+1) mod N, reproducing the reference N=4, Q=0 cycle
// 1->4->3->2->1), positive weights drawn from the seeded counter stream and
// row-normalized.  Throws InfeasibleConnectivity when N <= Q+1.
SensorNetwork build_beta_network(int N, int q, std::uint64_t seed);

// Hub matrix from a placement: sensor i measures placement.placed()[i];
// alpha sensors are those assigned to a contraction.  An alpha sensor links
// to every sensor except those assigned to the same contraction (its
// observationally-equivalent twins).
void build_alpha_network(const OutputPlacement& placement, SensorNetwork& net);

// Menger vertex connectivity of a directed pattern (adjacency given as a
// 0/1 matrix, diagonal ignored): minimum over ordered non-adjacent pairs of
// the vertex-capacitated max-flow; complete digraphs return N-1.
int vertex_connectivity(const Eigen::MatrixXd& pattern);

// True iff removing every subset of `removals` nodes leaves the pattern
// strongly connected.
bool survives_removals(const Eigen::MatrixXd& pattern, int removals);

ConnectivityReport connectivity_report(const Eigen::MatrixXd& pattern, int max_removals);

// Numeric distributed observability of (W (x) A, D_C) via the PBH test at
// every eigenvalue of W (x) A, with relative singular-value tolerance.
// (The nN-step observability-matrix rank is numerically unusable at the
// nN = 70..80 scale exercised here; PBH is the robust equivalent.)
// Unobservable modes produce sigma_min / sigma_max at machine-noise level
// (~1e-14); genuinely observable but weakly coupled modes have been
// measured down to ~5e-9, so the default splits the two regimes.
bool check_distributed_observability(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C,
                                     const Eigen::MatrixXd& W,
                                     const Eigen::MatrixXd& U,
                                     double rel_tol = 1e-12);

// Kronecker product helper (dense).
Eigen::MatrixXd kron(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

} // namespace sn
