#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace grafield {

/// One weighted edge, endpoints given as 1-based vertex ids (file convention).
struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

struct GraphOptions {
    bool allow_self_loops = false;
    /// Adjacency is stored dense up to this vertex count, sparse above it.
    int dense_threshold = 8192;
};

/// Weighted undirected graph. Immutable after construction; adjacency is
/// symmetric with non-negative weights, degrees d = A*1, volume N = sum A.
/// Vertex indices in the in-memory API are 0-based; file formats are 1-based.
class Graph {
public:
    int size() const { return n_; }
    bool is_dense() const { return dense_; }
    double volume() const { return volume_; }
    const Eigen::VectorXd& degrees() const { return degrees_; }
    double degree(int x) const { return degrees_(x); }

    double weight(int x, int y) const {
        return dense_ ? adj_dense_(x, y) : adj_sparse_.coeff(x, y);
    }

    /// Dense adjacency; materializes a copy when held sparse.
    Eigen::MatrixXd dense_adjacency() const;
    const Eigen::SparseMatrix<double>& sparse_adjacency() const { return adj_sparse_; }

    /// Visits every stored nonzero entry (x, y, w), both orientations of
    /// each undirected edge.
    template <class F>
    void for_each_nonzero(F&& f) const {
        if (dense_) {
            for (int y = 0; y < n_; ++y)
                for (int x = 0; x < n_; ++x)
                    if (adj_dense_(x, y) != 0.0) f(x, y, adj_dense_(x, y));
        } else {
            for (int y = 0; y < adj_sparse_.outerSize(); ++y)
                for (Eigen::SparseMatrix<double>::InnerIterator it(adj_sparse_, y); it; ++it)
                    f(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }

    /// A * v without materializing a dense adjacency.
    Eigen::VectorXd apply_adjacency(const Eigen::VectorXd& v) const;

    std::vector<int> zero_degree_vertices() const;

private:
    friend Graph build_graph(const std::vector<Edge>&, int, const GraphOptions&);
    friend Graph build_graph_from_adjacency(const Eigen::MatrixXd&, const GraphOptions&);
    void finalize();

    int n_ = 0;
    bool dense_ = true;
    Eigen::MatrixXd adj_dense_;
    Eigen::SparseMatrix<double> adj_sparse_;
    Eigen::VectorXd degrees_;
    double volume_ = 0.0;
};

/// Builds a graph from a 1-based edge list; duplicate edges are summed.
/// Throws "bad vertex id" for out-of-range endpoints and "empty graph" when
/// no positive weight survives.
Graph build_graph(const std::vector<Edge>& edges, int n, const GraphOptions& opts = {});

/// Builds a graph from an explicit symmetric non-negative weight matrix.
Graph build_graph_from_adjacency(const Eigen::MatrixXd& adjacency, const GraphOptions& opts = {});

/// Probability mass function over vertices with its cdf and quantile views.
class VertexDistribution {
public:
    VertexDistribution() = default;

    /// Validates non-negativity and unit total mass (1e-12).
    static VertexDistribution from_probs(Eigen::VectorXd probs, std::string provenance);

    int size() const { return static_cast<int>(probs_.size()); }
    double prob(int x) const { return probs_(x); }
    const Eigen::VectorXd& probs() const { return probs_; }
    const Eigen::VectorXd& cdf() const { return cdf_; }
    const std::string& provenance() const { return provenance_; }

    /// Smallest x with cdf(x) >= u (left-continuous step quantile).
    /// Throws "u out of range" unless 0 < u <= 1.
    int quantile(double u) const;

    std::vector<int> zero_mass_vertices() const;

private:
    Eigen::VectorXd probs_;
    Eigen::VectorXd cdf_;
    std::string provenance_;
};

/// Symmetric joint pmf over vertex pairs, stored as a (dense or sparse)
/// base part plus a constant offset so that smoothed variants of sparse
/// graphs stay cheap: entry(x,y) = base(x,y) + uniform_term.
class NetworkDistribution {
public:
    NetworkDistribution() = default;

    static NetworkDistribution from_dense(Eigen::MatrixXd base, double uniform_term,
                                          std::string provenance);
    static NetworkDistribution from_sparse(Eigen::SparseMatrix<double> base, double uniform_term,
                                           std::string provenance);

    int size() const { return n_; }
    bool is_dense() const { return dense_; }
    double uniform_term() const { return uniform_term_; }
    const std::string& provenance() const { return provenance_; }

    double entry(int x, int y) const {
        return uniform_term_ + (dense_ ? base_dense_(x, y) : base_sparse_.coeff(x, y));
    }

    /// Row marginals p(x) = sum_y entry(x, y).
    Eigen::VectorXd marginals() const;

    template <class F>
    void for_each_base_nonzero(F&& f) const {
        if (dense_) {
            for (int y = 0; y < n_; ++y)
                for (int x = 0; x < n_; ++x)
                    if (base_dense_(x, y) != 0.0) f(x, y, base_dense_(x, y));
        } else {
            for (int y = 0; y < base_sparse_.outerSize(); ++y)
                for (Eigen::SparseMatrix<double>::InnerIterator it(base_sparse_, y); it; ++it)
                    f(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }

    /// base * v + uniform_term * sum(v) applied entry-wise.
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

private:
    void validate() const;

    int n_ = 0;
    bool dense_ = true;
    Eigen::MatrixXd base_dense_;
    Eigen::SparseMatrix<double> base_sparse_;
    double uniform_term_ = 0.0;
    std::string provenance_;
};

/// p~(x) = d(x) / N.
VertexDistribution empirical_vertex_pmf(const Graph& g);

/// P~(x,y) = A(x,y) / N.
NetworkDistribution empirical_network_pmf(const Graph& g);

/// Convenience forward to VertexDistribution::quantile.
int quantile(const VertexDistribution& dist, double u);

}  // namespace grafield
