#include "gain.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "network.hpp"

namespace sn {

Eigen::MatrixXd assemble_dc(const Eigen::MatrixXd& U, const Eigen::MatrixXd& C) {
    const int N = static_cast<int>(U.rows());
    const int n = static_cast<int>(C.cols());
    if (U.cols() != N || C.rows() != N)
        throw DimensionMismatch("assemble_dc: U must be NxN, C must be Nxn");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n * N, n * N);
    for (int i = 0; i < N; ++i) {
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < N; ++j)
            if (U(i, j) != 0.0)
                blk += C.row(j).transpose() * C.row(j);
        D.block(i * n, i * n, n, n) = blk;
    }
    return D;
}

Eigen::MatrixXd assemble_dc_bar(const Eigen::MatrixXd& U, const Eigen::MatrixXd& C) {
    const int N = static_cast<int>(U.rows());
    const int n = static_cast<int>(C.cols());
    if (U.cols() != N || C.rows() != N)
        throw DimensionMismatch("assemble_dc_bar: U must be NxN, C must be Nxn");
    // (U (x) 1_n) .* (1_N (x) C')
    Eigen::MatrixXd D(n * N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            D.block(i * n, j, n, 1) = U(i, j) * C.row(j).transpose();
    return D;
}

double spectral_norm(const Eigen::MatrixXd& M) {
    return Eigen::BDCSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

double spectral_radius(const Eigen::MatrixXd& M, int max_iter, double tol) {
    const int n = static_cast<int>(M.rows());
    if (M.cols() != n) throw DimensionMismatch("spectral_radius: square matrix required");
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(M(0, 0));

    // Power iteration with a 2-dimensional Krylov (Rayleigh-Ritz) estimate
    // so complex-conjugate dominant pairs still converge in magnitude.
    for (int restart = 0; restart < 4; ++restart) {
        Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
        for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.1 * ((i * 7 + restart * 13) % 11);
        x.normalize();
        double prev = -1.0;
        for (int it = 0; it < max_iter; ++it) {
            const Eigen::VectorXd mx = M * x;
            // Orthonormal basis of span{x, Mx}.
            Eigen::VectorXd q2 = mx - (x.dot(mx)) * x;
            double est;
            const double q2n = q2.norm();
            if (q2n < 1e-14 * std::max(1.0, mx.norm())) {
                est = std::abs(x.dot(mx));  // converged to a real eigenvector
            } else {
                q2 /= q2n;
                Eigen::MatrixXd Q(n, 2);
                Q.col(0) = x;
                Q.col(1) = q2;
                const Eigen::Matrix2d H = Q.transpose() * M * Q;
                const double tr = H.trace(), det = H.determinant();
                const double disc = tr * tr / 4.0 - det;
                if (disc >= 0.0) {
                    const double r = std::sqrt(disc);
                    est = std::max(std::abs(tr / 2.0 + r), std::abs(tr / 2.0 - r));
                } else {
                    est = std::sqrt(det);  // complex pair: |lambda| = sqrt(det)
                }
            }
            if (prev >= 0.0 && std::abs(est - prev) <= tol * std::max(1.0, est))
                return est;
            prev = est;
            const double mxn = mx.norm();
            if (mxn == 0.0) return 0.0;  // nilpotent direction; x in kernel
            x = mx / mxn;
        }
    }
    throw NonConvergence("spectral_radius: power iteration did not settle");
}

namespace {

struct Workspace {
    int n = 0, N = 0;
    Eigen::MatrixXd F, Dc, G;  // G = Dc * F
};

Eigen::MatrixXd assemble_blocks(const std::vector<Eigen::MatrixXd>& blocks) {
    const int N = static_cast<int>(blocks.size());
    const int n = static_cast<int>(blocks[0].rows());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * N, n * N);
    for (int i = 0; i < N; ++i) K.block(i * n, i * n, n, n) = blocks[i];
    return K;
}

// Project the blocks onto the isolation-constraint set.  Alpha sensors get
// their self-innovation term pinned to zero first, which maximizes the
// right-hand-side budget epsilon * |1 - C_j K_j C_j'| for all their
// neighbors; then each violated cross term is removed by the minimal-norm
// rank-one correction (for single-state unit outputs this is an exact
// entry clip).
void project(std::vector<Eigen::MatrixXd>& blocks, const Eigen::MatrixXd& U,
             const Eigen::MatrixXd& C, const std::vector<int>& alpha_set,
             double epsilon) {
    const int N = static_cast<int>(U.rows());
    for (int a : alpha_set) {
        const Eigen::VectorXd ca = C.row(a).transpose();
        const double t = ca.dot(blocks[a] * ca);
        const double nrm4 = std::pow(ca.squaredNorm(), 2);
        if (nrm4 > 0.0) blocks[a] -= (t / nrm4) * (ca * ca.transpose());
    }
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXd ci = C.row(i).transpose();
        for (int j = 0; j < N; ++j) {
            if (i == j || U(i, j) == 0.0) continue;
            const Eigen::VectorXd cj = C.row(j).transpose();
            const double self = 1.0 - cj.dot(blocks[j] * cj);
            const double lim = epsilon * std::abs(self);
            const double t = ci.dot(blocks[i] * cj);
            if (std::abs(t) <= lim) continue;
            const double target = (t > 0.0) ? lim : -lim;
            const double denom = ci.squaredNorm() * cj.squaredNorm();
            blocks[i] -= ((t - target) / denom) * (ci * cj.transpose());
        }
    }
}

GainMatrix solve_subgradient(const Workspace& ws, const Eigen::MatrixXd& U,
                             const Eigen::MatrixXd& C, const std::vector<int>& alpha_set,
                             const GainConfig& cfg) {
    const int n = ws.n, N = ws.N;
    std::vector<Eigen::MatrixXd> blocks(N, Eigen::MatrixXd::Zero(n, n));
    const double goal = 1.0 - cfg.margin;

    GainMatrix gm;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const Eigen::MatrixXd K = assemble_blocks(blocks);
        const Eigen::MatrixXd Ahat = ws.F - K * ws.G;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(Ahat, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double b = svd.singularValues()(0);
        if (b <= goal) {
            gm.blocks = blocks;
            gm.assembled = K;
            gm.achieved_norm = b;
            gm.iterations = it;
            return gm;
        }
        // d sigma_max / dK = -u (G v)' restricted to the block diagonal.
        const Eigen::VectorXd u = svd.matrixU().col(0);
        const Eigen::VectorXd gv = ws.G * svd.matrixV().col(0);
        double gnorm2 = 0.0;
        std::vector<Eigen::MatrixXd> grad(N);
        for (int i = 0; i < N; ++i) {
            grad[i] = -u.segment(i * n, n) * gv.segment(i * n, n).transpose();
            gnorm2 += grad[i].squaredNorm();
        }
        const double gnorm = std::max(std::sqrt(gnorm2), 1e-12);
        const double step = 0.5 * std::max(b - goal, 0.01) / gnorm;
        for (int i = 0; i < N; ++i) blocks[i] -= step * grad[i];
        project(blocks, U, C, alpha_set, cfg.epsilon);
    }
    throw SynthesisFailed("subgradient solver: ||Ahat|| did not reach 1 - margin");
}

GainMatrix solve_diagonal(const Workspace& ws, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& C, const std::vector<int>& alpha_set,
                          const GainConfig& cfg) {
    const int n = ws.n, N = ws.N;
    const double goal = 1.0 - cfg.margin;
    GainMatrix best;
    double best_b = std::numeric_limits<double>::infinity();
    const int steps = std::max(2, cfg.max_iterations);
    for (int s = 0; s <= steps; ++s) {
        const double c = 1.5 * static_cast<double>(s) / steps;
        std::vector<Eigen::MatrixXd> blocks(N, c * Eigen::MatrixXd::Identity(n, n));
        project(blocks, U, C, alpha_set, cfg.epsilon);
        const Eigen::MatrixXd K = assemble_blocks(blocks);
        const double b = spectral_norm(ws.F - K * ws.G);
        if (b < best_b) {
            best_b = b;
            best.blocks = blocks;
            best.assembled = K;
            best.achieved_norm = b;
            best.iterations = s;
        }
        if (b <= goal) break;
    }
    if (best_b > goal)
        throw SynthesisFailed("diagonal search: no scaled-identity gain reaches 1 - margin");
    return best;
}

} // namespace

GainMatrix synthesize_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W,
                           const Eigen::MatrixXd& U, const Eigen::MatrixXd& C,
                           const GainConfig& config) {
    if (config.epsilon <= 0.0 || config.epsilon >= 1.0)
        throw DomainError("epsilon must lie in (0,1)");
    if (!check_distributed_observability(A, C, W, U))
        throw NotObservable("(W (x) A, D_C) is not observable; cannot stabilize");

    Workspace ws;
    ws.n = static_cast<int>(A.rows());
    ws.N = static_cast<int>(W.rows());
    ws.F = kron(W, A);
    ws.Dc = assemble_dc(U, C);
    ws.G = ws.Dc * ws.F;

    // Alpha sensors: those with an off-diagonal presence in U's columns.
    std::vector<int> alpha_set;
    for (int j = 0; j < ws.N; ++j)
        for (int i = 0; i < ws.N; ++i)
            if (i != j && U(i, j) != 0.0) {
                alpha_set.push_back(j);
                break;
            }

    GainMatrix gm = (config.solver == GainSolver::Subgradient)
                        ? solve_subgradient(ws, U, C, alpha_set, config)
                        : solve_diagonal(ws, U, C, alpha_set, config);
    gm.achieved_radius = spectral_radius(ws.F - gm.assembled * ws.G);

    // Hard certification, independent of the solver path.
    if (!isolation_constraint_holds(gm.blocks, U, C, config.epsilon))
        throw SynthesisFailed("isolation constraint violated on returned gain");
    return gm;
}

ErrorBound error_bound(const Eigen::MatrixXd& K, const Eigen::MatrixXd& A,
                       const Eigen::MatrixXd& W, const Eigen::MatrixXd& U,
                       const Eigen::MatrixXd& C, const Eigen::MatrixXd& sigma_nu,
                       const Eigen::VectorXd& sigma_zeta) {
    const int n = static_cast<int>(A.rows());
    const int N = static_cast<int>(W.rows());
    const Eigen::MatrixXd F = kron(W, A);
    const Eigen::MatrixXd Dc = assemble_dc(U, C);

    ErrorBound eb;
    eb.b = spectral_norm(F - K * Dc * F);
    eb.a1 = std::pow(spectral_norm(Eigen::MatrixXd::Identity(n * N, n * N) - K * Dc), 2);
    eb.a2 = std::pow(spectral_norm(K), 2);

    Eigen::MatrixXd Szb = Eigen::MatrixXd::Zero(n * N, n * N);
    for (int i = 0; i < N; ++i) {
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < N; ++j)
            if (U(i, j) != 0.0)
                blk += sigma_zeta(j) * (C.row(j).transpose() * C.row(j));
        Szb.block(i * n, i * n, n, n) = blk;
    }
    eb.sigma_zeta_bar = spectral_norm(Szb);

    if (eb.b >= 1.0) {
        eb.bound = std::numeric_limits<double>::infinity();
    } else {
        eb.bound = (eb.a1 * N * spectral_norm(sigma_nu) + eb.a2 * eb.sigma_zeta_bar) /
                   (1.0 - eb.b * eb.b);
    }
    return eb;
}

bool isolation_constraint_holds(const std::vector<Eigen::MatrixXd>& blocks,
                                const Eigen::MatrixXd& U, const Eigen::MatrixXd& C,
                                double epsilon, double slack) {
    const int N = static_cast<int>(U.rows());
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXd ci = C.row(i).transpose();
        for (int j = 0; j < N; ++j) {
            if (i == j || U(i, j) == 0.0) continue;
            const Eigen::VectorXd cj = C.row(j).transpose();
            const double lhs = std::abs(ci.dot(blocks[i] * cj));
            const double rhs = epsilon * std::abs(1.0 - cj.dot(blocks[j] * cj));
            if (lhs > rhs + slack) return false;
        }
    }
    return true;
}

} // namespace sn
