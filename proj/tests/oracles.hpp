#pragma once

// Test-only oracles, independent of the library's computation paths:
// exact rational arithmetic for the hand-derivable toy values, random graph
// generators, and a plain cyclic-Jacobi eigensolver for small matrices.

#include "grafield/graph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::runtime_error("rational division by zero");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
};

/// The 4-node social-network example: weights 2 and 3, degrees (2,8,6,6),
/// volume 22.
inline grafield::Graph toy_graph() {
    return grafield::build_graph({{1, 2, 2.0}, {2, 3, 3.0}, {2, 4, 3.0}, {3, 4, 3.0}}, 4);
}

inline grafield::Graph unit_triangle() {
    return grafield::build_graph({{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}}, 3);
}

/// Connected weighted random graph: a random spanning tree plus extra edges,
/// weights uniform in [0.5, 2.0]. Continuous weights make degrees distinct
/// and spectra simple almost surely.
inline grafield::Graph random_connected_graph(int n, uint64_t seed, double extra_edge_factor = 1.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::vector<grafield::Edge> edges;
    for (int v = 2; v <= n; ++v) {
        std::uniform_int_distribution<int> parent(1, v - 1);
        edges.push_back({parent(rng), v, weight(rng)});
    }
    const int extra = static_cast<int>(extra_edge_factor * n);
    std::uniform_int_distribution<int> any(1, n);
    for (int e = 0; e < extra; ++e) {
        const int u = any(rng), v = any(rng);
        if (u != v) edges.push_back({u, v, weight(rng)});
    }
    return grafield::build_graph(edges, n);
}

/// Plain cyclic Jacobi rotations; an eigensolver route that shares nothing
/// with the library paths. Returns ascending eigenvalues and matching
/// eigenvector columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-30) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::VectorXd ap = a.col(p), aq = a.col(q);
                a.col(p) = c * ap - s * aq;
                a.col(q) = s * ap + c * aq;
                ap = a.row(p);
                aq = a.row(q);
                a.row(p) = (c * ap - s * aq).transpose();
                a.row(q) = (s * ap + c * aq).transpose();
                const Eigen::VectorXd vp = v.col(p), vq = v.col(q);
                v.col(p) = c * vp - s * vq;
                v.col(q) = s * vp + c * vq;
            }
    }
    Eigen::VectorXd lambda = a.diagonal();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return lambda(i) < lambda(j); });
    Eigen::VectorXd ls(n);
    Eigen::MatrixXd vs(n, n);
    for (int i = 0; i < n; ++i) {
        ls(i) = lambda(order[i]);
        vs.col(i) = v.col(order[i]);
    }
    return {ls, vs};
}

/// Max absolute difference of two eigenvalue multisets.
inline double spectrum_distance(Eigen::VectorXd a, Eigen::VectorXd b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return (a - b).cwiseAbs().maxCoeff();
}

/// Compares eigenvector matrices column-by-column after sign fixing,
/// merging clusters of near-degenerate eigenvalues via projector distance.
inline double eigenvector_distance(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& u1,
                                   const Eigen::MatrixXd& u2, double cluster_gap = 1e-8) {
    const int k = static_cast<int>(lambda.size());
    double worst = 0.0;
    int start = 0;
    while (start < k) {
        int end = start + 1;
        while (end < k && std::abs(lambda(end) - lambda(end - 1)) < cluster_gap) ++end;
        if (end - start == 1) {
            Eigen::VectorXd a = u1.col(start), b = u2.col(start);
            if (a.dot(b) < 0.0) b = -b;
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        } else {
            const auto block1 = u1.middleCols(start, end - start);
            const auto block2 = u2.middleCols(start, end - start);
            const Eigen::MatrixXd p1 = block1 * block1.transpose();
            const Eigen::MatrixXd p2 = block2 * block2.transpose();
            worst = std::max(worst, (p1 - p2).cwiseAbs().maxCoeff());
        }
        start = end;
    }
    return worst;
}

}  // namespace oracles
