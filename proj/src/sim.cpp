#include "sim.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

#include "rng.hpp"

namespace sn {

LtiSystem instantiate_lsi(const SystemStructure& s, std::uint64_t seed,
                          double lo, double hi, bool fixed_weights,
                          bool unit_outputs) {
    s.validate();
    LtiSystem sys;
    sys.A = Eigen::MatrixXd::Zero(s.n, s.n);
    std::uint64_t idx = 0;
    for (const auto& e : s.edges) {
        double v;
        if (fixed_weights && e.has_weight)
            v = e.weight;
        else
            v = rng::uniform(seed, 0, 3, idx, lo, hi);
        sys.A(e.dst - 1, e.src - 1) = v;
        ++idx;
    }
    const int N = static_cast<int>(s.c_pattern.size());
    sys.C = Eigen::MatrixXd::Zero(N, s.n);
    for (int i = 0; i < N; ++i)
        for (int st : s.c_pattern[i]) {
            sys.C(i, st - 1) = unit_outputs ? 1.0 : rng::uniform(seed, 0, 3, idx, lo, hi);
            ++idx;
        }
    sys.sigma_nu = Eigen::MatrixXd::Zero(s.n, s.n);
    sys.sigma_zeta = Eigen::VectorXd::Zero(N);
    return sys;
}

namespace {

// Symmetric PSD square root for sampling correlated process noise.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd d = es.eigenvalues();
    for (int i = 0; i < d.size(); ++i) d(i) = std::sqrt(std::max(d(i), 0.0));
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

SimTrace simulate(const LtiSystem& sys, const SensorNetwork& net,
                  const GainMatrix& K, const FaultProfile& faults, int horizon,
                  std::uint64_t seed, const Eigen::VectorXd* x0,
                  const std::vector<Eigen::VectorXd>* xhat0) {
    const int n = sys.n();
    const int N = sys.N();
    if (net.N != N || static_cast<int>(K.blocks.size()) != N)
        throw DimensionMismatch("simulate: network / gain / system sensor counts differ");
    for (const auto& b : K.blocks)
        if (b.rows() != n || b.cols() != n)
            throw DimensionMismatch("simulate: gain block must be n x n");
    net.validate();
    for (const auto& f : faults)
        if (f.sensor < 0 || f.sensor >= N)
            throw DimensionMismatch("simulate: fault sensor index out of range");

    const Eigen::MatrixXd Lnu = psd_sqrt(sys.sigma_nu);
    const bool has_nu = sys.sigma_nu.cwiseAbs().maxCoeff() > 0.0;

    SimTrace tr;
    tr.horizon = horizon;
    tr.n = n;
    tr.N = N;
    tr.seed = seed;
    tr.X.resize(horizon, n);
    tr.Xhat.assign(N, Eigen::MatrixXd(horizon, n));
    tr.R.resize(horizon, N);
    tr.mse.resize(horizon);
    tr.nu.setZero(horizon, n);
    tr.zeta.setZero(horizon, N);
    tr.fault.setZero(horizon, N);

    Eigen::VectorXd x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
    std::vector<Eigen::VectorXd> xh(N, Eigen::VectorXd::Zero(n));
    if (xhat0) {
        if (static_cast<int>(xhat0->size()) != N)
            throw DimensionMismatch("simulate: xhat0 size");
        xh = *xhat0;
    }

    std::vector<Eigen::VectorXd> prior(N, Eigen::VectorXd::Zero(n));
    for (int k = 0; k < horizon; ++k) {
        // Truth propagation and faulted sensor outputs.
        Eigen::VectorXd nu_k = Eigen::VectorXd::Zero(n);
        if (has_nu) {
            Eigen::VectorXd z(n);
            for (int i = 0; i < n; ++i) z(i) = rng::normal(seed, k, 0, i);
            nu_k = Lnu * z;
        }
        x = sys.A * x + nu_k;
        tr.nu.row(k) = nu_k.transpose();

        Eigen::VectorXd y(N);
        for (int i = 0; i < N; ++i) {
            double zeta_k = 0.0;
            if (sys.sigma_zeta(i) > 0.0)
                zeta_k = std::sqrt(sys.sigma_zeta(i)) * rng::normal(seed, k, 1, i);
            tr.zeta(k, i) = zeta_k;
            y(i) = sys.C.row(i).dot(x) + zeta_k;
        }
        for (const auto& f : faults) {
            if (k < f.onset) continue;
            double v = f.magnitude;
            if (f.kind == FaultSpec::Kind::Gaussian)
                v += f.stddev * rng::normal(seed, k, 2, f.sensor);
            tr.fault(k, f.sensor) += v;
        }
        y += tr.fault.row(k).transpose();

        // Consensus prior: xhat_i(k|k-1) = sum_j W_ij A xhat_j(k-1|k-1).
        for (int i = 0; i < N; ++i) {
            prior[i].setZero();
            for (int j = 0; j < N; ++j)
                if (net.W(i, j) != 0.0)
                    prior[i] += net.W(i, j) * (sys.A * xh[j]);
        }
        // Innovation posterior over alpha-in-neighbors.
        for (int i = 0; i < N; ++i) {
            Eigen::VectorXd innov = Eigen::VectorXd::Zero(n);
            for (int j = 0; j < N; ++j)
                if (net.U(i, j) != 0.0)
                    innov += sys.C.row(j).transpose() * (y(j) - sys.C.row(j).dot(prior[i]));
            xh[i] = prior[i] + K.blocks[i] * innov;
        }

        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
            tr.Xhat[i].row(k) = xh[i].transpose();
            tr.R(k, i) = y(i) - sys.C.row(i).dot(xh[i]);
            acc += (xh[i] - x).squaredNorm();
        }
        tr.X.row(k) = x.transpose();
        tr.mse(k) = acc / N;
    }
    return tr;
}

double residual_variance_bound(const ErrorBound& eb, const Eigen::VectorXd& c_i,
                               double sigma_zeta_i, int N) {
    if (eb.b >= 1.0) throw UnstableError("residual bound undefined: ||Ahat|| >= 1");
    return c_i.norm() * eb.bound / N + sigma_zeta_i;
}

ResidualStats residual_stats(const LtiSystem& sys, const SensorNetwork& net,
                             const ErrorBound& eb) {
    ResidualStats st;
    st.sigma_r.resize(sys.N());
    for (int i = 0; i < sys.N(); ++i)
        st.sigma_r(i) = residual_variance_bound(eb, sys.C.row(i).transpose(),
                                                sys.sigma_zeta(i), net.N);
    st.empirical = Eigen::VectorXd::Zero(sys.N());
    return st;
}

int warmup_steps(double rho) {
    if (rho >= 1.0) return 50;
    return std::max(50, static_cast<int>(std::ceil(5.0 / (1.0 - rho))));
}

ReducedDesign remove_sensors(const SensorNetwork& net, const LtiSystem& sys,
                             const GainMatrix& gain, const std::vector<int>& removal_set) {
    const int N = net.N;
    std::set<int> dead(removal_set.begin(), removal_set.end());
    if (static_cast<int>(dead.size()) >= N)
        throw EmptyNetwork("cannot remove every sensor");
    for (int r : dead)
        if (r < 0 || r >= N) throw DimensionMismatch("removal index out of range");

    std::vector<int> keep;
    for (int i = 0; i < N; ++i)
        if (!dead.count(i)) keep.push_back(i);
    const int M = static_cast<int>(keep.size());

    ReducedDesign red;
    red.net.N = M;
    red.net.W.resize(M, M);
    red.net.U.resize(M, M);
    red.sys.A = sys.A;
    red.sys.sigma_nu = sys.sigma_nu;
    red.sys.C.resize(M, sys.A.cols());
    red.sys.sigma_zeta.resize(M);
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) {
            red.net.W(a, b) = net.W(keep[a], keep[b]);
            red.net.U(a, b) = net.U(keep[a], keep[b]);
        }
        const double rs = red.net.W.row(a).sum();
        if (rs <= 0.0) throw EmptyNetwork("removal isolates a sensor in W");
        red.net.W.row(a) /= rs;
        red.sys.C.row(a) = sys.C.row(keep[a]);
        red.sys.sigma_zeta(a) = sys.sigma_zeta(keep[a]);
        if (!gain.blocks.empty()) red.gain.blocks.push_back(gain.blocks[keep[a]]);
    }
    for (int a : net.alpha_set)
        if (!dead.count(a)) {
            int shifted = 0;
            for (int r : dead)
                if (r < a) ++shifted;
            red.net.alpha_set.push_back(a - shifted);
        }
    if (!red.gain.blocks.empty()) {
        const int n = static_cast<int>(sys.A.rows());
        red.gain.assembled = Eigen::MatrixXd::Zero(n * M, n * M);
        for (int a = 0; a < M; ++a)
            red.gain.assembled.block(a * n, a * n, n, n) = red.gain.blocks[a];
    }
    return red;
}

} // namespace sn
