#include "grafield/smoothing.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace grafield;
using oracles::Rat;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("smoothing") {

TEST_CASE("laplace smoothing of the toy degrees") {
    const Graph g = oracles::toy_graph();
    const VertexDistribution p1 = laplace_smooth_vertex(g.degrees(), g.volume(), 1.0);
    // (d_j + 1) / (22 + 4)
    CHECK(p1.prob(0) == doctest::Approx(Rat(3, 26).value()).epsilon(1e-14));
    CHECK(p1.prob(1) == doctest::Approx(Rat(9, 26).value()).epsilon(1e-14));
    CHECK(p1.prob(2) == doctest::Approx(Rat(7, 26).value()).epsilon(1e-14));
    CHECK(p1.prob(3) == doctest::Approx(Rat(7, 26).value()).epsilon(1e-14));

    const VertexDistribution p0 = laplace_smooth_vertex(g.degrees(), g.volume(), 0.0);
    CHECK((p0.probs() - empirical_vertex_pmf(g).probs()).cwiseAbs().maxCoeff() == 0.0);

    const VertexDistribution huge = laplace_smooth_vertex(g.degrees(), g.volume(), 1e9);
    for (int x = 0; x < 4; ++x) CHECK(huge.prob(x) == doctest::Approx(0.25).epsilon(1e-6));

    const VertexDistribution inf = laplace_smooth_vertex(g.degrees(), g.volume(), kInf);
    for (int x = 0; x < 4; ++x) CHECK(inf.prob(x) == 0.25);

    CHECK_THROWS_WITH_AS(laplace_smooth_vertex(g.degrees(), g.volume(), -0.5),
                         doctest::Contains("bad shrinkage parameter"), std::runtime_error);
}

TEST_CASE("laplace smoothing is the stated convex combination") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> tau_draw(0.0, 5.0);
    for (int rep = 0; rep < 50; ++rep) {
        const Graph g = oracles::random_connected_graph(5 + rep % 20, rep);
        const double n = g.size(), N = g.volume();
        const double tau = tau_draw(rng);
        const VertexDistribution smooth = laplace_smooth_vertex(g.degrees(), N, tau);
        const Eigen::VectorXd convex = ((N / (N + n * tau)) * (g.degrees().array() / N) +
                                        (n * tau / (N + n * tau)) * (1.0 / n))
                                           .matrix();
        CHECK((smooth.probs() - convex).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("tau presets") {
    const Graph g = oracles::toy_graph();
    CHECK(resolve_tau(TauKind::Laplace, 4, 22.0, g.degrees()).resolved_value == 1.0);
    CHECK(resolve_tau(TauKind::KrichevskyTrofimov, 4, 22.0, g.degrees()).resolved_value == 0.5);
    CHECK(resolve_tau(TauKind::Perks, 4, 22.0, g.degrees()).resolved_value == 0.25);
    CHECK(resolve_tau(TauKind::Minimax, 4, 22.0, g.degrees()).resolved_value ==
          doctest::Approx(std::sqrt(22.0) / 4.0).epsilon(1e-12));
    CHECK(resolve_tau(TauKind::Minimax, 4, 22.0, g.degrees()).resolved_value ==
          doctest::Approx(1.17260).epsilon(1e-5));
    CHECK_THROWS_WITH_AS(parse_tau_kind("voodoo"), doctest::Contains("unknown preset"),
                         std::runtime_error);
}

TEST_CASE("Stein-optimal shrinkage parameter") {
    const Graph g = oracles::toy_graph();
    // N^2 = 484, sum d^2 = 140, n = 4 -> 344/76 = 86/19
    CHECK(stein_optimal_tau(g.degrees(), 22.0, 4) ==
          doctest::Approx(Rat(86, 19).value()).epsilon(1e-14));
    CHECK(stein_optimal_tau(g.degrees(), 22.0, 4) == doctest::Approx(4.52632).epsilon(1e-5));

    Eigen::VectorXd regular(4);
    regular << 3, 3, 3, 3;
    CHECK(std::isinf(stein_optimal_tau(regular, 12.0, 4)));

    Eigen::VectorXd skew(2);
    skew << 1, 99;
    CHECK(stein_optimal_tau(skew, 100.0, 2) ==
          doctest::Approx(Rat(198, 9604).value()).epsilon(1e-14));
    CHECK(stein_optimal_tau(skew, 100.0, 2) == doctest::Approx(0.02062).epsilon(1e-3));
}

TEST_CASE("mse risk at tau = 0 is the MLE variance") {
    Eigen::VectorXd probs(4);
    probs << 0.4, 0.3, 0.2, 0.1;
    const VertexDistribution p = VertexDistribution::from_probs(probs, "test");
    double expected = 0.0;
    for (int i = 0; i < 4; ++i) expected += probs(i) * (1.0 - probs(i)) / 50.0;
    CHECK(mse_risk(p, 50.0, 0.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(mse_risk(p, 50.0, -1.0), std::runtime_error);
}

TEST_CASE("uniform truth: risk decreases toward zero in tau") {
    const VertexDistribution uniform =
        VertexDistribution::from_probs(Eigen::VectorXd::Constant(5, 0.2), "test");
    double prev = mse_risk(uniform, 30.0, 0.0);
    for (double tau : {0.5, 1.0, 2.0, 10.0, 100.0, 1e6}) {
        const double r = mse_risk(uniform, 30.0, tau);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
    CHECK(prev == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("grid minimizer of the risk matches the closed form") {
    std::mt19937_64 rng(42);
    int tested = 0;
    for (int rep = 0; rep < 140 && tested < 100; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 28);
        Eigen::VectorXd raw(n);
        std::exponential_distribution<double> expo(1.0);
        for (int i = 0; i < n; ++i) raw(i) = expo(rng) + 1e-3;
        raw /= raw.sum();
        const VertexDistribution p = VertexDistribution::from_probs(raw, "test");
        const double N = 40.0;

        const double sum_sq = p.probs().squaredNorm();
        const double closed_form = (1.0 - sum_sq) / (n * sum_sq - 1.0);
        if (!(closed_form > 0.0) || closed_form > 200.0) continue;  // off-grid or degenerate
        ++tested;

        const double step = 0.01;
        const double hi = std::max(50.0, 2.0 * closed_form);
        const int cells = static_cast<int>(hi / step) + 1;
        Eigen::VectorXd taus(cells);
        for (int i = 0; i < cells; ++i) taus(i) = i * step;
        const RiskCurve curve = mse_risk_curve(p, N, taus);
        const double grid_best = taus(curve.argmin_index());
        CHECK(std::abs(grid_best - closed_form) <= step + 1e-12);
    }
    CHECK(tested >= 100);
}

TEST_CASE("Good-Turing worked examples") {
    Eigen::VectorXd d1(4);
    d1 << 1, 1, 2, 3;
    const GoodTuringResult r1 = good_turing(d1);
    CHECK(r1.raw(0) == doctest::Approx(Rat(1, 7).value()).epsilon(1e-14));
    CHECK(r1.raw(1) == doctest::Approx(Rat(1, 7).value()).epsilon(1e-14));
    CHECK(r1.raw(2) == doctest::Approx(Rat(3, 7).value()).epsilon(1e-14));
    CHECK(r1.raw(3) == 0.0);
    CHECK(r1.normalized.prob(0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(r1.normalized.prob(2) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(r1.normalized.prob(3) == 0.0);

    Eigen::VectorXd d2(2);
    d2 << 1, 2;
    const GoodTuringResult r2 = good_turing(d2);
    CHECK(r2.raw(0) == doctest::Approx(Rat(2, 3).value()).epsilon(1e-14));
    CHECK(r2.raw(1) == 0.0);
    CHECK(r2.normalized.prob(0) == doctest::Approx(1.0));
    CHECK(r2.normalized.prob(1) == 0.0);

    Eigen::VectorXd regular(5);
    regular << 3, 3, 3, 3, 3;
    CHECK_THROWS_WITH_AS(good_turing(regular), doctest::Contains("degenerate Good-Turing"),
                         std::runtime_error);

    Eigen::VectorXd frac(2);
    frac << 1.5, 2.0;
    CHECK_THROWS_WITH_AS(good_turing(frac), doctest::Contains("integer"), std::runtime_error);
}

TEST_CASE("Good-Turing zeroes every degree class without a successor") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 4 + static_cast<int>(rng() % 12);
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d(i) = 1.0 + static_cast<double>(rng() % 5);
        GoodTuringResult r;
        try {
            r = good_turing(d);
        } catch (const std::runtime_error&) {
            continue;  // degenerate draws are fine
        }
        for (int i = 0; i < n; ++i) {
            const long long next = static_cast<long long>(d(i)) + 1;
            const bool has_next = (d.array() == static_cast<double>(next)).any();
            if (!has_next) CHECK(r.raw(i) == 0.0);
        }
    }
}

TEST_CASE("2-D laplace smoothing") {
    const Graph g = oracles::toy_graph();
    const NetworkDistribution joint = laplace_smooth_network(g, 1.0);
    CHECK(joint.entry(0, 1) == doctest::Approx(Rat(9, 104).value()).epsilon(1e-13));
    CHECK(joint.entry(0, 1) == doctest::Approx(0.086538).epsilon(1e-5));

    // marginals equal the vertex smoother at the same tau
    const VertexDistribution marg_oracle = laplace_smooth_vertex(g.degrees(), g.volume(), 1.0);
    CHECK((joint.marginals() - marg_oracle.probs()).cwiseAbs().maxCoeff() < 1e-13);

    const NetworkDistribution empirical = laplace_smooth_network(g, 0.0);
    CHECK(empirical.entry(0, 1) == doctest::Approx(Rat(2, 22).value()).epsilon(1e-14));

    for (double tau : {0.0, 0.3, 2.0, 17.0}) {
        const NetworkDistribution nd = laplace_smooth_network(g, tau);
        double total = 0.0;
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) total += nd.entry(x, y);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("smoothed transition matrix") {
    const Graph g = oracles::toy_graph();
    const Eigen::MatrixXd t1 = smooth_transition(g, 1.0);
    CHECK(t1(0, 1) == doctest::Approx(0.75).epsilon(1e-14));  // 2.25 / 3
    // the remaining tau/(d_1+tau) = 1/3 teleport mass spreads uniformly
    CHECK(t1(0, 0) == doctest::Approx(0.25 / 3.0).epsilon(1e-14));

    const Eigen::MatrixXd t0 = smooth_transition(g, 0.0);
    const Eigen::VectorXd inv_d = g.degrees().cwiseInverse();
    const Eigen::MatrixXd walk = inv_d.asDiagonal() * g.dense_adjacency();
    CHECK((t0 - walk).cwiseAbs().maxCoeff() == 0.0);

    for (double tau : {0.0, 0.5, 3.0, 50.0}) {
        const Eigen::MatrixXd t = smooth_transition(g, tau);
        CHECK((t.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("transition smoothing rejects dangling vertices at tau = 0") {
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(3, 3);
    adj(0, 1) = adj(1, 0) = 1.0;
    const Graph g = build_graph_from_adjacency(adj);
    CHECK_THROWS_WITH_AS(smooth_transition(g, 0.0), doctest::Contains("dangling"),
                         std::runtime_error);
    CHECK_NOTHROW(smooth_transition(g, 0.1));
}

}  // TEST_SUITE
