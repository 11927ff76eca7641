#include "grafield/bases.hpp"

#include "grafield/smoothing.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace grafield;
using oracles::Rat;

namespace {

GraField toy_grafield() {
    const Graph g = oracles::toy_graph();
    return build_grafield(empirical_vertex_pmf(g), empirical_network_pmf(g));
}

}  // namespace

TEST_SUITE("grafield_bases") {

TEST_CASE("toy kernel reproduces the strength-of-ties matrix") {
    const GraField gf = toy_grafield();
    // N * A(x,y) / (d_x d_y), exact rationals
    CHECK(gf.entry(0, 1) == doctest::Approx(Rat(22, 8).value()).epsilon(1e-14));
    CHECK(gf.entry(1, 2) == doctest::Approx(Rat(22, 16).value()).epsilon(1e-14));
    CHECK(gf.entry(1, 3) == doctest::Approx(Rat(22, 16).value()).epsilon(1e-14));
    CHECK(gf.entry(2, 3) == doctest::Approx(Rat(22, 12).value()).epsilon(1e-14));
    CHECK(gf.entry(0, 2) == 0.0);  // non-adjacent pair
    CHECK(gf.entry(0, 3) == 0.0);
    CHECK(gf.entry(0, 0) == 0.0);  // no self-loops

    // Strength(1,2) is twice Strength(2,3) and 1.5x Strength(3,4)
    CHECK(gf.entry(0, 1) == doctest::Approx(2.0 * gf.entry(1, 2)));
    CHECK(gf.entry(0, 1) == doctest::Approx(1.5 * gf.entry(2, 3)));
}

TEST_CASE("kernel normalization and slice sums") {
    for (uint64_t seed = 0; seed < 25; ++seed) {
        const Graph g = oracles::random_connected_graph(4 + seed % 20, seed);
        const GraField gf = build_grafield(empirical_vertex_pmf(g), empirical_network_pmf(g));
        const Eigen::VectorXd& p = gf.vertex_dist().probs();

        double mass = 0.0;
        for (int x : gf.support())
            for (int y : gf.support()) mass += gf.entry(x, y) * p(x) * p(y);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

        for (int x : gf.support()) CHECK(gf.slice_sum(x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("marginal mismatch is rejected") {
    const Graph g = oracles::toy_graph();
    const VertexDistribution wrong =
        VertexDistribution::from_probs(Eigen::VectorXd::Constant(4, 0.25), "test");
    CHECK_THROWS_WITH_AS(build_grafield(wrong, empirical_network_pmf(g)),
                         doctest::Contains("inconsistent distributions"), std::runtime_error);
}

TEST_CASE("unit-square evaluation goes through the quantile transform") {
    const GraField gf = toy_grafield();
    CHECK(grafield_eval(gf, 0.05, 0.2) == doctest::Approx(2.75).epsilon(1e-14));
    CHECK(grafield_eval(gf, 0.99, 0.99) == 0.0);
    for (double u : {0.1, 0.37, 0.88})
        for (double v : {0.2, 0.55, 0.97})
            CHECK(grafield_eval(gf, u, v) == grafield_eval(gf, v, u));
    CHECK_THROWS_AS(grafield_eval(gf, -0.1, 0.5), std::runtime_error);
}

TEST_CASE("block-pulse amplitudes on the toy graph") {
    const VertexDistribution p = empirical_vertex_pmf(oracles::toy_graph());
    const OrthonormalBasis b = bpf_basis(p);
    CHECK(b.amplitudes()(0) == doctest::Approx(std::sqrt(11.0)).epsilon(1e-14));
    CHECK(b.amplitudes()(1) == doctest::Approx(std::sqrt(11.0 / 4.0)).epsilon(1e-14));
    CHECK(b.amplitudes()(2) == doctest::Approx(std::sqrt(11.0 / 3.0)).epsilon(1e-14));
    CHECK(b.amplitudes()(3) == doctest::Approx(std::sqrt(11.0 / 3.0)).epsilon(1e-14));

    // block widths are the pmf masses
    const Eigen::VectorXd bp = b.breakpoints();
    CHECK(bp(0) == 0.0);
    CHECK(bp(1) == doctest::Approx(Rat(1, 11).value()));
    CHECK(bp(4) == 1.0);
}

TEST_CASE("basis integrals and grams") {
    for (uint64_t seed = 40; seed < 50; ++seed) {
        const Graph g = oracles::random_connected_graph(10, seed);
        const VertexDistribution p = empirical_vertex_pmf(g);

        const OrthonormalBasis bpf = bpf_basis(p);
        CHECK((bpf.integrals().array() - p.probs().array().sqrt()).abs().maxCoeff() < 1e-14);
        CHECK(bpf.gram_identity_deviation() < 1e-14);

        const OrthonormalBasis ch = char_basis(p);
        CHECK((ch.integrals() - p.probs()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((ch.gram_diagonal() - p.probs()).cwiseAbs().maxCoeff() == 0.0);
        const Eigen::MatrixXd s = ch.gram();
        CHECK((s - Eigen::MatrixXd(p.probs().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

        const OrthonormalBasis lp = lp_basis(p, std::min(6, lp_max_order(p)));
        CHECK(lp.integrals().cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("characteristic gram on the toy graph") {
    const VertexDistribution p = empirical_vertex_pmf(oracles::toy_graph());
    const OrthonormalBasis ch = char_basis(p);
    CHECK(ch.gram_diagonal()(0) == doctest::Approx(Rat(1, 11).value()));
    CHECK(ch.gram_diagonal()(1) == doctest::Approx(Rat(4, 11).value()));
    CHECK(ch.gram_diagonal()(2) == doctest::Approx(Rat(3, 11).value()));
}

TEST_CASE("zero-mass vertices break indicator bases") {
    Eigen::VectorXd probs(3);
    probs << 0.5, 0.5, 0.0;
    const VertexDistribution p = VertexDistribution::from_probs(probs, "test");
    CHECK_THROWS_WITH_AS(bpf_basis(p), doctest::Contains("degenerate block amplitude"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(char_basis(p), doctest::Contains("degenerate block amplitude"),
                         std::runtime_error);
}

TEST_CASE("LP first polynomial on the uniform pmf") {
    const VertexDistribution p =
        VertexDistribution::from_probs(Eigen::VectorXd::Constant(4, 0.25), "test");
    const OrthonormalBasis lp = lp_basis(p, 3);
    // Fmid = (1/8, 3/8, 5/8, 7/8), 1 - sum p^3 = 15/16
    const double s5 = std::sqrt(5.0);
    CHECK(lp.value(0, 0) == doctest::Approx(-3.0 / s5).epsilon(1e-12));
    CHECK(lp.value(0, 1) == doctest::Approx(-1.0 / s5).epsilon(1e-12));
    CHECK(lp.value(0, 2) == doctest::Approx(1.0 / s5).epsilon(1e-12));
    CHECK(lp.value(0, 3) == doctest::Approx(3.0 / s5).epsilon(1e-12));
}

TEST_CASE("LP orthonormality conditions") {
    for (uint64_t seed = 60; seed < 80; ++seed) {
        const Graph g = oracles::random_connected_graph(6 + seed % 30, seed);
        const VertexDistribution p = empirical_vertex_pmf(g);
        const int m = std::min(8, lp_max_order(p));
        const OrthonormalBasis lp = lp_basis(p, m);
        const Eigen::MatrixXd v = lp.values_matrix();
        for (int j = 0; j < m; ++j) {
            CHECK((v.row(j) * p.probs()).value() == doctest::Approx(0.0).epsilon(1e-10));
            for (int l = 0; l <= j; ++l) {
                const double ip = (v.row(j).array() * v.row(l).array() * p.probs().transpose().array()).sum();
                CHECK(ip == doctest::Approx(j == l ? 1.0 : 0.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("LP rank cap") {
    Eigen::VectorXd two(2);
    two << 0.3, 0.7;
    const VertexDistribution p = VertexDistribution::from_probs(two, "test");
    CHECK(lp_max_order(p) == 1);
    CHECK_NOTHROW(lp_basis(p, 1));
    CHECK_THROWS_WITH_AS(lp_basis(p, 2), doctest::Contains("LP rank exceeded"),
                         std::runtime_error);
}

TEST_CASE("LP gram stays near the identity on larger graphs") {
    double worst = 0.0;
    for (uint64_t seed = 200; seed < 220; ++seed) {
        const Graph g = oracles::random_connected_graph(120 + static_cast<int>(seed % 80), seed);
        const VertexDistribution p = empirical_vertex_pmf(g);
        const OrthonormalBasis lp = lp_basis(p, std::min(20, lp_max_order(p)));
        worst = std::max(worst, lp.gram_identity_deviation());
    }
    CHECK(worst < 1e-10);
}

}  // TEST_SUITE
