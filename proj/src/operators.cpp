#include "grafield/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace grafield {

namespace {

void require_positive_degrees(const Graph& g) {
    const auto zeros = g.zero_degree_vertices();
    if (zeros.empty()) return;
    std::string msg = "zero-degree vertices:";
    for (int v : zeros) msg += " " + std::to_string(v + 1);
    throw std::runtime_error(msg);
}

}  // namespace

OperatorMatrix laplacian(const Graph& g) {
    require_positive_degrees(g);
    const Eigen::VectorXd inv_sqrt_d = g.degrees().array().rsqrt();
    OperatorMatrix op{OperatorKind::Laplacian, 0.0,
                      inv_sqrt_d.asDiagonal() * g.dense_adjacency() * inv_sqrt_d.asDiagonal(),
                      true};
    return op;
}

OperatorMatrix laplacian_star(const Graph& g) {
    OperatorMatrix op = laplacian(g);
    const Eigen::VectorXd sqrt_p = (g.degrees() / g.volume()).array().sqrt();
    op.kind = OperatorKind::LaplacianStar;
    op.matrix -= sqrt_p * sqrt_p.transpose();
    return op;
}

OperatorMatrix modularity(const Graph& g) {
    OperatorMatrix op{OperatorKind::Modularity, 0.0, g.dense_adjacency(), true};
    op.matrix -= g.degrees() * g.degrees().transpose() / g.volume();
    return op;
}

OperatorMatrix random_walk(const Graph& g) {
    require_positive_degrees(g);
    const Eigen::VectorXd inv_d = g.degrees().cwiseInverse();
    return {OperatorKind::RandomWalk, 0.0, inv_d.asDiagonal() * g.dense_adjacency(), false};
}

OperatorMatrix reg_laplacian_type1(const Graph& g, double tau) {
    if (tau < 0.0) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");
    const Eigen::VectorXd d_tau = g.degrees().array() + tau;
    if ((d_tau.array() <= 0.0).any())
        throw std::runtime_error("zero-degree vertex with zero smoothing");
    const Eigen::VectorXd scale = d_tau.array().rsqrt();
    return {OperatorKind::Type1, tau,
            scale.asDiagonal() * g.dense_adjacency() * scale.asDiagonal(), true};
}

OperatorMatrix reg_laplacian_type2(const Graph& g, double tau) {
    if (tau < 0.0) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");
    const int n = g.size();
    Eigen::MatrixXd a_tau = g.dense_adjacency();
    a_tau.array() += tau / n;
    const Eigen::VectorXd d_tau = g.degrees().array() + tau;
    if ((d_tau.array() <= 0.0).any())
        throw std::runtime_error("zero-degree vertex with zero smoothing");
    const Eigen::VectorXd scale = d_tau.array().rsqrt();
    return {OperatorKind::Type2, tau, scale.asDiagonal() * a_tau * scale.asDiagonal(), true};
}

OperatorMatrix reg_laplacian_type3(const Graph& g, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::runtime_error("alpha must lie in [0,1]");
    const int n = g.size();
    Eigen::MatrixXd t;
    if (alpha < 1.0) {
        require_positive_degrees(g);
        const Eigen::VectorXd inv_d = g.degrees().cwiseInverse();
        t = (1.0 - alpha) * (inv_d.asDiagonal() * g.dense_adjacency());
    } else {
        t = Eigen::MatrixXd::Zero(n, n);
    }
    t.array() += alpha / n;
    return {OperatorKind::Type3, alpha, std::move(t), false};
}

OperatorMatrix pagerank_matrix(const Graph& g, double alpha) {
    OperatorMatrix op = reg_laplacian_type3(g, alpha);
    op.kind = OperatorKind::PageRank;
    return op;
}

VertexDistribution pagerank_scores(const Graph& g, double alpha, double tol) {
    if (alpha < 0.0 || alpha > 1.0) throw std::runtime_error("alpha must lie in [0,1]");
    const int n = g.size();
    if (alpha == 1.0)
        return VertexDistribution::from_probs(Eigen::VectorXd::Constant(n, 1.0 / n),
                                              "pagerank(1)");
    require_positive_degrees(g);

    const Eigen::VectorXd inv_d = g.degrees().cwiseInverse();
    Eigen::VectorXd s = g.degrees() / g.volume();
    constexpr int kMaxIters = 100000;
    for (int iter = 0; iter < kMaxIters; ++iter) {
        // s' = (1-alpha) A^T D^{-1} s + alpha/n; A is symmetric.
        Eigen::VectorXd s_next =
            (1.0 - alpha) * g.apply_adjacency((s.array() * inv_d.array()).matrix());
        s_next.array() += alpha / n;
        s_next /= s_next.sum();
        const double delta = (s_next - s).cwiseAbs().sum();
        s = std::move(s_next);
        if (delta < tol)
            return VertexDistribution::from_probs(s / s.sum(),
                                                  "pagerank(" + std::to_string(alpha) + ")");
    }
    throw std::runtime_error("PageRank power iteration did not converge within " +
                             std::to_string(kMaxIters) + " iterations");
}

DiffusionCoordinates diffusion_map(const Graph& g, double t, int k, const SpectralOptions& opts) {
    if (t < 0.0) throw std::runtime_error("diffusion time must be >= 0");
    if (k < 1 || k > g.size() - 1) throw std::runtime_error("requested rank out of range");

    SpectralOptions bpf_opts = opts;
    bpf_opts.basis = BasisKind::BlockPulse;
    const GraphEmbedding emb = unified_spectral(g, k + 1, bpf_opts);

    // Drop the deflated trivial pair; every remaining coordinate is scaled
    // by lambda^t.
    const auto trivial = emb.trivial_index();
    DiffusionCoordinates dc;
    dc.t = t;
    dc.method = emb.method();
    dc.eigenvalues.resize(k);
    dc.coords.resize(g.size(), k);
    const bool integer_t = t == std::floor(t);
    int col = 0;
    for (int j = 0; j < emb.k() && col < k; ++j) {
        if (trivial && *trivial == j) continue;
        const double lambda = emb.eigenvalues()(j);
        double scale;
        if (integer_t) {
            scale = std::pow(lambda, t);
        } else if (lambda < 0.0) {
            scale = -std::pow(-lambda, t);
            dc.fractional_power_convention = true;
        } else {
            scale = std::pow(lambda, t);
        }
        dc.eigenvalues(col) = lambda;
        dc.coords.col(col) = scale * emb.coordinates().col(j);
        ++col;
    }
    if (col < k) throw std::runtime_error("requested rank out of range");
    return dc;
}

double diffusion_distance(const DiffusionCoordinates& dc, int x, int y) {
    return (dc.coords.row(x) - dc.coords.row(y)).norm();
}

}  // namespace grafield
