#include "network.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <functional>

#include "gain.hpp"
#include "rng.hpp"

namespace sn {

Eigen::MatrixXd kron(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    Eigen::MatrixXd out(X.rows() * Y.rows(), X.cols() * Y.cols());
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j)
            out.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
    return out;
}

void SensorNetwork::validate() const {
    if (N <= 0 || W.rows() != N || W.cols() != N || U.rows() != N || U.cols() != N)
        throw DimensionMismatch("sensor network dimensions inconsistent");
    for (int i = 0; i < N; ++i) {
        if (std::abs(W.row(i).sum() - 1.0) > 1e-12)
            throw DomainError("W row does not sum to 1");
        if (W.row(i).minCoeff() < 0.0)
            throw DomainError("W has a negative weight");
        if (U(i, i) != 1.0)
            throw DomainError("U must have unit diagonal");
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (U(i, j) != 0.0 && U(i, j) != 1.0)
                throw DomainError("U must be 0-1");
            if (U(i, j) == 1.0 && i != j) {
                bool is_alpha = false;
                for (int a : alpha_set) is_alpha |= (a == j);
                if (!is_alpha) throw DomainError("U link from a non-alpha sensor");
            }
        }
}

SensorNetwork build_beta_network(int N, int q, std::uint64_t seed) {
    if (N <= q + 1) throw InfeasibleConnectivity("need N >= Q + 2 sensors");
    SensorNetwork net;
    net.N = N;
    net.W = Eigen::MatrixXd::Zero(N, N);
    net.U = Eigen::MatrixXd::Identity(N, N);
    // Row i receives from itself and the next Q+1 sensors (mod N); i.e.
    // sensor j has out-links to j-1 .. j-(Q+1).
    for (int i = 0; i < N; ++i) {
        net.W(i, i) = rng::uniform(seed, 0, 4, static_cast<std::uint64_t>(i) * (N + 1), 0.1, 1.0);
        for (int d = 1; d <= q + 1; ++d) {
            const int j = (i + d) % N;
            net.W(i, j) = rng::uniform(seed, 0, 4,
                                       static_cast<std::uint64_t>(i) * (N + 1) + d, 0.1, 1.0);
        }
        net.W.row(i) /= net.W.row(i).sum();
    }
    return net;
}

void build_alpha_network(const OutputPlacement& placement, SensorNetwork& net) {
    // Sensor index -> owning assignment.
    std::vector<int> owner;
    std::vector<bool> is_contr;
    for (std::size_t a = 0; a < placement.assignments.size(); ++a)
        for (std::size_t k = 0; k < placement.assignments[a].states.size(); ++k) {
            owner.push_back(static_cast<int>(a));
            is_contr.push_back(placement.assignments[a].is_contraction);
        }
    if (static_cast<int>(owner.size()) != net.N)
        throw DimensionMismatch("placement output count != network size");

    net.U = Eigen::MatrixXd::Identity(net.N, net.N);
    net.alpha_set.clear();
    for (int j = 0; j < net.N; ++j) {
        if (!is_contr[j]) continue;
        net.alpha_set.push_back(j);
        for (int i = 0; i < net.N; ++i) {
            if (i == j) continue;
            if (owner[i] == owner[j]) continue;  // equivalent twin: no link needed
            net.U(i, j) = 1.0;
        }
    }
}

namespace {

bool strongly_connected(const Eigen::MatrixXd& pattern, const std::vector<bool>& active) {
    const int N = static_cast<int>(pattern.rows());
    int start = -1, count = 0;
    for (int i = 0; i < N; ++i)
        if (active[i]) {
            if (start < 0) start = i;
            ++count;
        }
    if (count <= 1) return count == 1;

    auto reach = [&](bool transpose) {
        std::vector<bool> seen(N, false);
        std::vector<int> queue{start};
        seen[start] = true;
        int visited = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int v = queue[qi];
            for (int w = 0; w < N; ++w) {
                if (!active[w] || seen[w]) continue;
                const double entry = transpose ? pattern(v, w) : pattern(w, v);
                // pattern(i,j) != 0 means j -> i (receiver row convention)
                if (entry != 0.0) {
                    seen[w] = true;
                    queue.push_back(w);
                    ++visited;
                }
            }
        }
        return visited == count;
    };
    return reach(false) && reach(true);
}

// Unit-node-capacity max flow by repeated BFS augmentation on the split
// graph (v_in -> v_out).  Small N only; used for Menger connectivity.
int node_maxflow(const Eigen::MatrixXd& pattern, int s, int t) {
    const int N = static_cast<int>(pattern.rows());
    const int V = 2 * N;  // v_in = 2v, v_out = 2v+1
    std::vector<std::vector<int>> cap(V, std::vector<int>(V, 0));
    const int INF = 1 << 20;
    for (int v = 0; v < N; ++v)
        cap[2 * v][2 * v + 1] = (v == s || v == t) ? INF : 1;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j && pattern(i, j) != 0.0)  // edge j -> i
                cap[2 * j + 1][2 * i] = INF;

    int flow = 0;
    while (true) {
        std::vector<int> prev(V, -1);
        std::vector<int> queue{2 * s + 1};
        prev[2 * s + 1] = 2 * s + 1;
        for (std::size_t qi = 0; qi < queue.size() && prev[2 * t] == -1; ++qi) {
            const int v = queue[qi];
            for (int w = 0; w < V; ++w)
                if (prev[w] == -1 && cap[v][w] > 0) {
                    prev[w] = v;
                    queue.push_back(w);
                }
        }
        if (prev[2 * t] == -1) break;
        for (int v = 2 * t; v != 2 * s + 1; v = prev[v]) {
            cap[prev[v]][v] -= 1;
            cap[v][prev[v]] += 1;
        }
        ++flow;
        if (flow >= N) break;
    }
    return flow;
}

} // namespace

int vertex_connectivity(const Eigen::MatrixXd& pattern) {
    const int N = static_cast<int>(pattern.rows());
    if (N < 2) throw DomainError("vertex connectivity needs >= 2 nodes");
    bool complete = true;
    for (int i = 0; i < N && complete; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j && pattern(i, j) == 0.0) {
                complete = false;
                break;
            }
    if (complete) return N - 1;

    int best = N;
    for (int s = 0; s < N; ++s)
        for (int t = 0; t < N; ++t) {
            if (s == t) continue;
            if (pattern(t, s) != 0.0) continue;  // adjacent pair, no separator
            best = std::min(best, node_maxflow(pattern, s, t));
        }
    return best;
}

bool survives_removals(const Eigen::MatrixXd& pattern, int removals) {
    const int N = static_cast<int>(pattern.rows());
    if (removals >= N) return false;
    std::vector<int> subset(removals);
    std::vector<bool> active(N, true);

    std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
        if (pos == removals) return strongly_connected(pattern, active);
        for (int v = start; v < N; ++v) {
            active[v] = false;
            const bool ok = rec(pos + 1, v + 1);
            active[v] = true;
            if (!ok) return false;
        }
        return true;
    };
    return rec(0, 0);
}

ConnectivityReport connectivity_report(const Eigen::MatrixXd& pattern, int max_removals) {
    ConnectivityReport rep;
    rep.vertex_connectivity = vertex_connectivity(pattern);
    for (int q = 0; q <= max_removals; ++q)
        rep.survives_removals[q] = survives_removals(pattern, q);
    return rep;
}

bool check_distributed_observability(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C,
                                     const Eigen::MatrixXd& W,
                                     const Eigen::MatrixXd& U,
                                     double rel_tol) {
    const int n = static_cast<int>(A.rows());
    const int N = static_cast<int>(W.rows());
    if (A.cols() != n || C.cols() != n || C.rows() != N || W.cols() != N ||
        U.rows() != N || U.cols() != N)
        throw DimensionMismatch("check_distributed_observability: bad shapes");

    const Eigen::MatrixXd F = kron(W, A);
    const Eigen::MatrixXd Dc = assemble_dc(U, C);
    const int d = n * N;

    Eigen::EigenSolver<Eigen::MatrixXd> eig(F, /*computeEigenvectors=*/false);
    const auto lambdas = eig.eigenvalues();

    Eigen::MatrixXcd M(2 * d, d);
    M.bottomRows(d) = Dc.cast<std::complex<double>>();
    for (int e = 0; e < d; ++e) {
        const std::complex<double> lam = lambdas(e);
        if (lam.imag() < -1e-14) continue;  // conjugate pair: same rank
        M.topRows(d) = -F.cast<std::complex<double>>();
        for (int i = 0; i < d; ++i) M(i, i) += lam;
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= rel_tol * sv(0)) return false;
    }
    return true;
}

} // namespace sn
