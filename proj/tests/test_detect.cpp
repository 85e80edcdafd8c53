#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "detect.hpp"
#include "rng.hpp"
#include "specfun.hpp"

using namespace sn;

// Reference values below were computed independently with mpmath/scipy
// (erfinv, gammainc, gammaincinv) and frozen here.

TEST_CASE("erf and erfinv reference points") {
    CHECK(sn::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-12));
    CHECK(1.0 - sn::erf(std::sqrt(2.0)) ==
          doctest::Approx(0.04550026389635842).epsilon(1e-12));
    CHECK(sn::erfinv(0.5) == doctest::Approx(0.4769362762044699).epsilon(1e-12));
    CHECK(sn::erfinv(0.0) == doctest::Approx(0.0));

    // round trip over a grid
    for (double x = -0.999; x < 1.0; x += 0.1237)
        CHECK(sn::erf(sn::erfinv(x)) == doctest::Approx(x).epsilon(1e-10));
    for (double y = -2.0; y < 2.0; y += 0.11)
        CHECK(sn::erfinv(sn::erf(y)) == doctest::Approx(y).epsilon(1e-8));
}

TEST_CASE("regularized lower incomplete gamma") {
    // P(1, x) = 1 - exp(-x)
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.0})
        CHECK(reg_lower_gamma(1.0, x) ==
              doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    CHECK(reg_lower_gamma(2.5, 3.7) ==
          doctest::Approx(0.8074495669206043).epsilon(1e-12));
    CHECK(reg_lower_gamma(2.5, 0.0) == doctest::Approx(0.0));

    CHECK(inv_reg_lower_gamma(0.7, 2.5) ==
          doctest::Approx(3.03221499207745).epsilon(1e-10));
    // round trip
    for (double s : {0.5, 1.0, 2.5, 5.0, 8.0})
        for (double p = 0.05; p < 1.0; p += 0.1)
            CHECK(reg_lower_gamma(s, inv_reg_lower_gamma(p, s)) ==
                  doctest::Approx(p).epsilon(1e-8));
}

TEST_CASE("stateless threshold kappa values") {
    // theta_p = sqrt(2) sn::erfinv(1 - p) * sigma_r
    CHECK(stateless_threshold(0.317, 1.0) ==
          doctest::Approx(1.0006418287624494).epsilon(1e-12));
    CHECK(stateless_threshold(0.046, 1.0) ==
          doctest::Approx(1.9953933101678245).epsilon(1e-12));
    CHECK(stateless_threshold(0.05, 1.0) ==
          doctest::Approx(1.9599639845400538).epsilon(1e-12));
    // scales linearly with sigma_r
    CHECK(stateless_threshold(0.05, 2.5) ==
          doctest::Approx(2.5 * 1.9599639845400538).epsilon(1e-12));
}

TEST_CASE("stateless threshold matches a Monte Carlo |N(0,1)| quantile") {
    // P(|r| > kappa) = p for r ~ N(0,1); estimate the p = 0.05 quantile.
    const int M = 200000;
    std::vector<double> draws(M);
    for (int i = 0; i < M; ++i) draws[i] = std::abs(rng::normal(77, 0, 0, i));
    std::sort(draws.begin(), draws.end());
    const double q95 = draws[static_cast<int>(0.95 * M)];
    CHECK(stateless_threshold(0.05, 1.0) == doctest::Approx(q95).epsilon(0.02));
}

TEST_CASE("false negative rate reference points") {
    // pbar = (sn::erf(3 kappa / sqrt 2) - sn::erf(kappa / sqrt 2)) / 2
    CHECK(false_negative_rate(1.0) ==
          doctest::Approx(0.15730535589982697).epsilon(1e-12));
    CHECK(false_negative_rate(2.0) ==
          doctest::Approx(0.022750130961591564).epsilon(1e-12));

    // Quadrature oracle: fault magnitude = 2 kappa sigma, residual N(2k, 1);
    // miss probability = P(|r| < kappa) = Phi(k - 2k excluded band).
    for (double kappa : {0.8, 1.3, 2.1}) {
        const int M = 4000;
        double miss = 0.0;  // trapezoid over the density of N(2 kappa, 1)
        const double lo = -kappa, hi = kappa;
        for (int i = 0; i <= M; ++i) {
            const double r = lo + (hi - lo) * i / M;
            const double pdf =
                std::exp(-0.5 * (r - 2.0 * kappa) * (r - 2.0 * kappa)) /
                std::sqrt(2.0 * 3.141592653589793);
            miss += ((i == 0 || i == M) ? 0.5 : 1.0) * pdf;
        }
        miss *= (hi - lo) / M;
        CHECK(false_negative_rate(kappa) == doctest::Approx(miss).epsilon(1e-6));
    }
    // for kappa >= 2, pbar is close to half the FAR of the same kappa
    const double p2 = 1.0 - sn::erf(2.0 / std::sqrt(2.0));
    CHECK(false_negative_rate(2.0) == doctest::Approx(p2 / 2.0).epsilon(2e-4));
}

TEST_CASE("distance measure expectations and cases") {
    // equal residuals r^2 = sigma_r: plain sum gives T
    std::vector<double> w(10, 2.0);
    CHECK(distance_measure(w, 4.0, 1.0) == doctest::Approx(10.0));
    // weighted: sum mu^{T-1-m} = (1 - mu^T) / (1 - mu) with oldest first
    const double mu = 0.75;
    CHECK(distance_measure(w, 4.0, mu) ==
          doctest::Approx((1.0 - std::pow(mu, 10)) / (1.0 - mu)));
    // newest sample carries weight mu^0 = 1
    std::vector<double> one{0.0, 0.0, 3.0};
    CHECK(distance_measure(one, 1.0, 0.5) == doctest::Approx(9.0));
    CHECK_THROWS_AS(distance_measure({}, 1.0, 0.5), DomainError);
}

TEST_CASE("stateful thresholds reference points") {
    CHECK(stateful_threshold(0.05, 2, 1.0) ==
          doctest::Approx(5.991464547107979).epsilon(1e-12));  // -2 ln 0.05
    CHECK(stateful_threshold(0.05, 2, 1.0) ==
          doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-12));
    CHECK(stateful_threshold(0.003, 10, 1.0) ==
          doctest::Approx(26.61078512383076).epsilon(1e-10));
    CHECK(stateful_threshold(0.003, 10, 0.75) ==
          doctest::Approx(15.559469860464898).epsilon(1e-10));
}

TEST_CASE("far_from_measure inverts stateful_threshold") {
    for (int T : {2, 5, 10, 16})
        for (double mu : {0.5, 0.75, 1.0})
            for (double p : {0.001, 0.01, 0.05, 0.2}) {
                const double th = stateful_threshold(p, T, mu);
                CHECK(far_from_measure(th, T, mu) == doctest::Approx(p).epsilon(1e-8));
            }
}

TEST_CASE("windowed threshold calibration against independent chi-squared windows") {
    // 1e5 independent windows of T standard normals: the exceedance
    // frequency of the plain statistic must match p within +-0.02.
    const int T = 10, M = 100000;
    const double p = 0.05;
    const double th = stateful_threshold(p, T, 1.0);
    int exceed = 0;
    for (int w = 0; w < M; ++w) {
        double s = 0.0;
        for (int m = 0; m < T; ++m) {
            const double r = rng::normal(11, w, 1, m);
            s += r * r;
        }
        if (s > th) ++exceed;
    }
    CHECK(static_cast<double>(exceed) / M == doctest::Approx(p).epsilon(0.4));
    CHECK(std::abs(static_cast<double>(exceed) / M - p) < 0.02);
}

TEST_CASE("FAR is non-increasing in the forgetting factor") {
    // At a fixed exceedance level (measure = threshold computed at mu = 1),
    // smaller mu never reports a larger FAR on the analytic grid.
    for (int T = 2; T <= 16; ++T) {
        const double measure = stateful_threshold(0.05, T, 1.0);
        double prev = -1.0;
        for (double mu : {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
            const double far = far_from_measure(measure, T, mu);
            if (prev >= 0.0) CHECK(far >= prev - 1e-12);
            prev = far;
        }
    }
}

TEST_CASE("mu = 1 weighted detector coincides with the plain window") {
    std::vector<double> w{1.3, -0.2, 0.7, 2.2, -1.9};
    CHECK(distance_measure(w, 1.7, 1.0) ==
          doctest::Approx(distance_measure(w, 1.7, 1.0 - 1e-300)));
    CHECK(stateful_threshold(0.01, 5, 1.0) ==
          doctest::Approx(2.0 * inv_reg_lower_gamma(0.99, 2.5)).epsilon(1e-12));
}

TEST_CASE("run_detector on a synthetic trace") {
    // Hand-built trace: sensor 0 residual jumps at step 30.
    SimTrace tr;
    tr.horizon = 60;
    tr.n = 1;
    tr.N = 2;
    tr.seed = 5;
    tr.R.setZero(60, 2);
    for (int k = 0; k < 60; ++k) {
        tr.R(k, 0) = 0.01 * rng::normal(5, k, 1, 0);
        tr.R(k, 1) = 0.01 * rng::normal(5, k, 1, 1);
    }
    for (int k = 32; k < 60; ++k) tr.R(k, 0) += 5.0;

    ResidualStats st;
    st.sigma_r.setConstant(2, 0.1);  // stateless threshold ~ 0.297 >> noise
    st.empirical = st.sigma_r;

    DetectorConfig cfg;
    cfg.mode = DetectorMode::Stateless;
    cfg.far_target = 0.003;
    const auto alarms = run_detector(tr, st, cfg, {{0, 30}});

    bool faulty_alarmed = false, healthy_alarmed = false;
    int first_delay = -1;
    for (const auto& a : alarms) {
        if (a.sensor == 0) {
            if (!faulty_alarmed) first_delay = a.delay;
            faulty_alarmed = true;
            CHECK(a.step >= 32);
            CHECK(a.measure > a.threshold);
            CHECK(a.far == doctest::Approx(0.003));
        } else {
            healthy_alarmed = true;
        }
    }
    CHECK(faulty_alarmed);
    CHECK(first_delay == 2);  // onset annotated at 30, jump applied at 32
    CHECK(!healthy_alarmed);

    // Windowed detector on the same trace alarms after the jump too.
    cfg.mode = DetectorMode::StatefulWindow;
    cfg.window = 10;
    const auto walarm = run_detector(tr, st, cfg, {{0, 30}});
    CHECK(std::any_of(walarm.begin(), walarm.end(), [](const AlarmEvent& a) {
        return a.sensor == 0 && a.step >= 32;
    }));
}

TEST_CASE("mu = 1 stateful detector equals the plain windowed detector on traces") {
    SimTrace tr;
    tr.horizon = 80;
    tr.n = 1;
    tr.N = 1;
    tr.R.setZero(80, 1);
    for (int k = 0; k < 80; ++k) tr.R(k, 0) = rng::normal(9, k, 1, 0);
    ResidualStats st;
    st.sigma_r.setConstant(1, 1.0);
    st.empirical = st.sigma_r;

    DetectorConfig a, b;
    a.mode = DetectorMode::StatefulWindow;
    a.far_target = b.far_target = 0.1;
    a.window = b.window = 8;
    b.mode = DetectorMode::StatefulWeighted;
    b.weight = 1.0;

    const auto ea = run_detector(tr, st, a);
    const auto eb = run_detector(tr, st, b);
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        CHECK(ea[i].step == eb[i].step);
        CHECK(ea[i].measure == doctest::Approx(eb[i].measure).epsilon(1e-12));
    }
}

TEST_CASE("make_thresholds bundles all three rules") {
    const auto t = make_thresholds(0.05, 4.0, 10, 0.75);
    CHECK(t.kappa == doctest::Approx(1.9599639845400538).epsilon(1e-12));
    CHECK(t.theta_p == doctest::Approx(4.0 * t.kappa).epsilon(1e-12));
    CHECK(t.theta_p_T == doctest::Approx(stateful_threshold(0.05, 10, 1.0)));
    CHECK(t.theta_p_mu == doctest::Approx(stateful_threshold(0.05, 10, 0.75)));
}

TEST_CASE("detector config labels") {
    DetectorConfig c;
    c.mode = DetectorMode::Stateless;
    c.far_target = 0.317;
    CHECK(c.label().find("stateless") != std::string::npos);
    c.mode = DetectorMode::StatefulWeighted;
    CHECK(c.label().find("weighted") != std::string::npos);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(stateless_threshold(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(stateless_threshold(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(stateful_threshold(0.05, 0, 1.0), DomainError);
    CHECK_THROWS_AS(stateful_threshold(0.05, 5, 1.5), DomainError);
}
