#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <functional>
#include <set>
#include <vector>

#include "network.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "sim.hpp"
#include "structural.hpp"

using namespace sn;

namespace {

// Oracle: strong connectivity by BFS in both edge directions from node 0.
bool strongly_connected(const Eigen::MatrixXd& P, const std::vector<bool>& alive) {
    const int N = static_cast<int>(P.rows());
    int start = -1, count = 0;
    for (int i = 0; i < N; ++i)
        if (alive[i]) {
            if (start < 0) start = i;
            ++count;
        }
    if (count <= 1) return true;
    for (int dir = 0; dir < 2; ++dir) {
        std::vector<bool> seen(N, false);
        std::vector<int> q{start};
        seen[start] = true;
        int reached = 1;
        while (!q.empty()) {
            const int v = q.back();
            q.pop_back();
            for (int w = 0; w < N; ++w) {
                if (w == v || seen[w] || !alive[w]) continue;
                const bool edge = dir == 0 ? P(v, w) != 0.0 : P(w, v) != 0.0;
                if (edge) {
                    seen[w] = true;
                    ++reached;
                    q.push_back(w);
                }
            }
        }
        if (reached != count) return false;
    }
    return true;
}

// Oracle: vertex connectivity by exhaustive separator enumeration (small N).
int brute_connectivity(const Eigen::MatrixXd& P) {
    const int N = static_cast<int>(P.rows());
    for (int k = 0; k < N - 1; ++k) {
        // does some k-subset disconnect the graph?
        std::vector<int> pick(k);
        std::function<bool(int, int)> rec = [&](int idx, int lo) -> bool {
            if (idx == k) {
                std::vector<bool> alive(N, true);
                for (int p : pick) alive[p] = false;
                return !strongly_connected(P, alive);
            }
            for (int v = lo; v < N; ++v) {
                pick[idx] = v;
                if (rec(idx + 1, v + 1)) return true;
            }
            return false;
        };
        if (rec(0, 0)) return k;
    }
    return N - 1;
}

Eigen::MatrixXd random_pattern(int N, std::uint64_t seed, double density) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j && rng::uniform01(seed, i, 8, j) < density) P(i, j) = 1.0;
    // guarantee strong connectivity with a ring backbone
    for (int i = 0; i < N; ++i) P(i, (i + 1) % N) = 1.0;
    return P;
}

} // namespace

TEST_CASE("beta network is row-stochastic with positive circulant weights") {
    for (int q = 0; q <= 2; ++q) {
        const auto net = build_beta_network(8, q, 5);
        REQUIRE(net.N == 8);
        for (int i = 0; i < 8; ++i) {
            CHECK(net.W.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
            int nnz = 0;
            for (int j = 0; j < 8; ++j) {
                if (net.W(i, j) < 0.0) CHECK(net.W(i, j) >= 0.0);
                if (net.W(i, j) > 0.0) ++nnz;
            }
            CHECK(nnz == q + 2);  // self + q + 1 in-neighbors
            CHECK(net.W(i, i) > 0.0);
        }
    }
}

TEST_CASE("beta network N=4 Q=0 reproduces the reference cycle") {
    // 1 -> 4 -> 3 -> 2 -> 1 plus self-loops: row i hears i and i+1 (mod 4).
    const auto net = build_beta_network(4, 0, 1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool expect = (j == i) || (j == (i + 1) % 4);
            CHECK((net.W(i, j) != 0.0) == expect);
        }
    // same sparsity as the pinned consensus matrix of the reference design
    const Eigen::MatrixXd W5 = section5_consensus_matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK((net.W(i, j) != 0.0) == (W5(i, j) != 0.0));
}

TEST_CASE("beta network weight draws differ by seed but not by call") {
    const auto a = build_beta_network(6, 1, 3);
    const auto b = build_beta_network(6, 1, 3);
    const auto c = build_beta_network(6, 1, 4);
    CHECK((a.W - b.W).norm() == 0.0);
    CHECK((a.W - c.W).norm() > 0.0);
}

TEST_CASE("beta network rejects N <= Q + 1") {
    CHECK_THROWS_AS(build_beta_network(2, 1, 1), InfeasibleConnectivity);
    CHECK_THROWS_AS(build_beta_network(3, 2, 1), InfeasibleConnectivity);
}

TEST_CASE("alpha network from the Q=0 fig2 placement") {
    const auto placement = place_outputs_q_redundant(fig2_structure(), 0);
    SensorNetwork net;
    net.N = 4;
    net.W = section5_consensus_matrix();
    build_alpha_network(placement, net);
    // sensor 3 (x5, the contraction cover) is the only hub
    CHECK(net.alpha_set == std::vector<int>{3});
    for (int i = 0; i < 4; ++i) {
        CHECK(net.U(i, i) == 1.0);
        for (int j = 0; j < 4; ++j)
            if (i != j)
                CHECK(net.U(i, j) == ((j == 3) ? 1.0 : 0.0));
    }
    net.validate();
}

TEST_CASE("alpha twins assigned to one contraction are not linked") {
    const auto placement = place_outputs_q_redundant(fig2_structure(), 1);
    SensorNetwork net;
    net.N = 8;
    net.W = build_beta_network(8, 1, 1).W;
    build_alpha_network(placement, net);
    REQUIRE(net.alpha_set.size() == 2);
    const int a0 = net.alpha_set[0], a1 = net.alpha_set[1];
    // the two contraction sensors do not exchange outputs
    CHECK(net.U(a0, a1) == 0.0);
    CHECK(net.U(a1, a0) == 0.0);
    // but every non-twin receives both hub outputs
    for (int i = 0; i < 8; ++i)
        if (i != a0 && i != a1) {
            CHECK(net.U(i, a0) == 1.0);
            CHECK(net.U(i, a1) == 1.0);
        }
}

TEST_CASE("vertex connectivity on canonical graphs") {
    // complete digraph on 4 nodes
    Eigen::MatrixXd K4 = Eigen::MatrixXd::Ones(4, 4);
    CHECK(vertex_connectivity(K4) == 3);

    // directed 5-cycle
    Eigen::MatrixXd C5 = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) C5(i, (i + 1) % 5) = 1.0;
    CHECK(vertex_connectivity(C5) == 1);

    // bidirectional 5-cycle has connectivity 2
    Eigen::MatrixXd B5 = C5 + Eigen::MatrixXd(C5.transpose());
    CHECK(vertex_connectivity(B5) == 2);
}

TEST_CASE("vertex connectivity matches the exhaustive separator oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto P = random_pattern(6, seed, 0.3 + 0.05 * (seed % 5));
        CHECK(vertex_connectivity(P) == brute_connectivity(P));
    }
}

TEST_CASE("beta network connectivity grows with Q") {
    for (int q = 0; q <= 2; ++q) {
        const auto net = build_beta_network(8, q, 2);
        CHECK(vertex_connectivity(net.W) == q + 1);
        CHECK(survives_removals(net.W, q));
        CHECK(!survives_removals(net.W, q + 1));
    }
}

TEST_CASE("survives_removals by exhaustive subset check on N=8 Q=1") {
    const auto net = build_beta_network(8, 1, 7);
    // oracle: enumerate all single and double removals directly
    for (int a = 0; a < 8; ++a) {
        std::vector<bool> alive(8, true);
        alive[a] = false;
        CHECK(strongly_connected(net.W, alive));
    }
    CHECK(survives_removals(net.W, 1));
    bool all_pairs_ok = true;
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b) {
            std::vector<bool> alive(8, true);
            alive[a] = alive[b] = false;
            if (!strongly_connected(net.W, alive)) all_pairs_ok = false;
        }
    CHECK(survives_removals(net.W, 2) == all_pairs_ok);
}

TEST_CASE("connectivity report") {
    const auto net = build_beta_network(8, 1, 2);
    const auto rep = connectivity_report(net.W, 2);
    CHECK(rep.vertex_connectivity == 2);
    CHECK(rep.survives_removals.at(1));
    CHECK(!rep.survives_removals.at(2));
}

TEST_CASE("distributed observability of the reference design") {
    const auto placement = place_outputs_q_redundant(fig2_structure(), 0);
    const auto st = with_outputs(fig2_structure(), placement.placed());
    const auto sys = instantiate_lsi(st, 1, 0.1, 1.0, true, true);
    SensorNetwork net;
    net.N = 4;
    net.W = section5_consensus_matrix();
    build_alpha_network(placement, net);
    CHECK(check_distributed_observability(sys.A, sys.C, net.W, net.U));

    // breaking consensus (W = I) destroys it: no sensor sees enough alone
    CHECK(!check_distributed_observability(sys.A, sys.C,
                                           Eigen::MatrixXd::Identity(4, 4), net.U));
}

TEST_CASE("distributed observability reduces to the PBH test for N = 1") {
    // scalar observable pair
    Eigen::MatrixXd A(2, 2), C(1, 2);
    A << 0.9, 0.3, 0.0, 0.7;
    C << 1.0, 0.0;
    const Eigen::MatrixXd W1 = Eigen::MatrixXd::Ones(1, 1);
    const Eigen::MatrixXd U1 = Eigen::MatrixXd::Ones(1, 1);
    CHECK(check_distributed_observability(A, C, W1, U1));
    // unobservable: output decoupled from the second mode
    Eigen::MatrixXd A2(2, 2);
    A2 << 0.9, 0.0, 0.0, 0.7;
    CHECK(!check_distributed_observability(A2, C, W1, U1));
}

TEST_CASE("network validation rejects malformed inputs") {
    SensorNetwork net;
    net.N = 2;
    net.W.resize(2, 2);
    net.W << 0.7, 0.2, 0.5, 0.5;  // first row sums to 0.9
    net.U = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(net.validate(), DomainError);

    net.W << 0.7, 0.3, 0.5, 0.5;
    net.U(0, 0) = 0.0;  // diagonal must be 1
    CHECK_THROWS_AS(net.validate(), DomainError);

    net.U = Eigen::MatrixXd::Identity(2, 2);
    net.validate();  // now fine
}

TEST_CASE("kron helper matches a hand-rolled product") {
    Eigen::MatrixXd X(2, 2), Y(2, 3);
    X << 1, 2, 3, 4;
    Y << 5, 6, 7, 8, 9, 10;
    const auto Z = kron(X, Y);
    REQUIRE(Z.rows() == 4);
    REQUIRE(Z.cols() == 6);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(Z(i, j) == X(i / 2, j / 3) * Y(i % 2, j % 3));
}
