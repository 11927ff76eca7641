#include "grafield/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grafield {

namespace {

constexpr double kMassTol = 1e-12;

}  // namespace

void Graph::finalize() {
    if (dense_) {
        degrees_ = adj_dense_.rowwise().sum();
    } else {
        adj_sparse_.makeCompressed();
        degrees_ = Eigen::VectorXd::Zero(n_);
        for (int k = 0; k < adj_sparse_.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(adj_sparse_, k); it; ++it)
                degrees_(it.row()) += it.value();
    }
    volume_ = degrees_.sum();
    if (volume_ <= 0.0) throw std::runtime_error("empty graph: total edge weight is zero");
}

Eigen::MatrixXd Graph::dense_adjacency() const {
    if (dense_) return adj_dense_;
    return Eigen::MatrixXd(adj_sparse_);
}

Eigen::VectorXd Graph::apply_adjacency(const Eigen::VectorXd& v) const {
    if (dense_) return adj_dense_ * v;
    return adj_sparse_ * v;
}

std::vector<int> Graph::zero_degree_vertices() const {
    std::vector<int> out;
    for (int x = 0; x < n_; ++x)
        if (degrees_(x) == 0.0) out.push_back(x);
    return out;
}

Graph build_graph(const std::vector<Edge>& edges, int n, const GraphOptions& opts) {
    if (n <= 0) throw std::runtime_error("empty graph: no vertices");
    if (edges.empty()) throw std::runtime_error("empty graph: no edges");

    Graph g;
    g.n_ = n;
    g.dense_ = n <= opts.dense_threshold;

    auto check = [&](const Edge& e) {
        if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
            throw std::runtime_error("bad vertex id: (" + std::to_string(e.u) + "," +
                                     std::to_string(e.v) + ") outside 1.." + std::to_string(n));
        if (e.w < 0.0) throw std::runtime_error("negative edge weight");
        if (e.u == e.v && !opts.allow_self_loops)
            throw std::runtime_error("self-loop rejected at vertex " + std::to_string(e.u));
    };

    if (g.dense_) {
        g.adj_dense_ = Eigen::MatrixXd::Zero(n, n);
        for (const Edge& e : edges) {
            check(e);
            int u = e.u - 1, v = e.v - 1;
            if (u == v) {
                g.adj_dense_(u, u) += e.w;
            } else {
                g.adj_dense_(u, v) += e.w;
                g.adj_dense_(v, u) += e.w;
            }
        }
    } else {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(2 * edges.size());
        for (const Edge& e : edges) {
            check(e);
            int u = e.u - 1, v = e.v - 1;
            if (u == v) {
                trips.emplace_back(u, u, e.w);
            } else {
                trips.emplace_back(u, v, e.w);
                trips.emplace_back(v, u, e.w);
            }
        }
        g.adj_sparse_.resize(n, n);
        g.adj_sparse_.setFromTriplets(trips.begin(), trips.end());
        g.adj_sparse_.prune(0.0);
    }
    g.finalize();
    return g;
}

Graph build_graph_from_adjacency(const Eigen::MatrixXd& adjacency, const GraphOptions& opts) {
    const int n = static_cast<int>(adjacency.rows());
    if (n == 0 || adjacency.cols() != n) throw std::runtime_error("adjacency must be square and non-empty");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (adjacency(i, j) < 0.0) throw std::runtime_error("negative edge weight");
            if (std::abs(adjacency(i, j) - adjacency(j, i)) > 1e-12 * std::max(1.0, std::abs(adjacency(i, j))))
                throw std::runtime_error("adjacency must be symmetric");
            if (i == j && adjacency(i, i) != 0.0 && !opts.allow_self_loops)
                throw std::runtime_error("self-loop rejected at vertex " + std::to_string(i + 1));
        }

    Graph g;
    g.n_ = n;
    g.dense_ = n <= opts.dense_threshold;
    if (g.dense_) {
        g.adj_dense_ = 0.5 * (adjacency + adjacency.transpose());
    } else {
        g.adj_sparse_ = (0.5 * (adjacency + adjacency.transpose())).sparseView();
    }
    g.finalize();
    return g;
}

VertexDistribution VertexDistribution::from_probs(Eigen::VectorXd probs, std::string provenance) {
    const int n = static_cast<int>(probs.size());
    if (n == 0) throw std::runtime_error("empty distribution");
    double total = 0.0;
    for (int x = 0; x < n; ++x) {
        if (probs(x) < 0.0) throw std::runtime_error("negative probability mass");
        total += probs(x);
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw std::runtime_error("vertex pmf does not sum to 1");

    VertexDistribution d;
    d.probs_ = std::move(probs);
    d.cdf_.resize(n);
    double acc = 0.0;
    for (int x = 0; x < n; ++x) {
        acc += d.probs_(x);
        d.cdf_(x) = acc;
    }
    d.cdf_(n - 1) = 1.0;  // pin the top so quantile(1) is well defined
    d.provenance_ = std::move(provenance);
    return d;
}

int VertexDistribution::quantile(double u) const {
    if (!(u > 0.0) || u > 1.0) throw std::runtime_error("u out of range (0,1]");
    const double* begin = cdf_.data();
    const double* end = begin + cdf_.size();
    const double* it = std::lower_bound(begin, end, u);
    return static_cast<int>(it - begin);
}

std::vector<int> VertexDistribution::zero_mass_vertices() const {
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
        if (probs_(x) == 0.0) out.push_back(x);
    return out;
}

void NetworkDistribution::validate() const {
    double total = uniform_term_ * static_cast<double>(n_) * static_cast<double>(n_);
    if (dense_) {
        total += base_dense_.sum();
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y) {
                if (base_dense_(x, y) + uniform_term_ < 0.0)
                    throw std::runtime_error("negative joint probability mass");
                if (std::abs(base_dense_(x, y) - base_dense_(y, x)) > kMassTol)
                    throw std::runtime_error("network pmf must be symmetric");
            }
    } else {
        if (uniform_term_ < 0.0) throw std::runtime_error("negative joint probability mass");
        for (int k = 0; k < base_sparse_.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(base_sparse_, k); it; ++it) {
                total += it.value();
                if (it.value() + uniform_term_ < 0.0)
                    throw std::runtime_error("negative joint probability mass");
                if (std::abs(it.value() - base_sparse_.coeff(it.col(), it.row())) > kMassTol)
                    throw std::runtime_error("network pmf must be symmetric");
            }
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("network pmf does not sum to 1");
}

NetworkDistribution NetworkDistribution::from_dense(Eigen::MatrixXd base, double uniform_term,
                                                    std::string provenance) {
    NetworkDistribution d;
    d.n_ = static_cast<int>(base.rows());
    d.dense_ = true;
    d.base_dense_ = std::move(base);
    d.uniform_term_ = uniform_term;
    d.provenance_ = std::move(provenance);
    d.validate();
    return d;
}

NetworkDistribution NetworkDistribution::from_sparse(Eigen::SparseMatrix<double> base,
                                                     double uniform_term, std::string provenance) {
    NetworkDistribution d;
    d.n_ = static_cast<int>(base.rows());
    d.dense_ = false;
    d.base_sparse_ = std::move(base);
    d.base_sparse_.makeCompressed();
    d.uniform_term_ = uniform_term;
    d.provenance_ = std::move(provenance);
    d.validate();
    return d;
}

Eigen::VectorXd NetworkDistribution::marginals() const {
    Eigen::VectorXd m = apply(Eigen::VectorXd::Ones(n_));
    return m;
}

Eigen::VectorXd NetworkDistribution::apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out;
    if (dense_) {
        out = base_dense_ * v;
    } else {
        out = base_sparse_ * v;
    }
    if (uniform_term_ != 0.0) out.array() += uniform_term_ * v.sum();
    return out;
}

VertexDistribution empirical_vertex_pmf(const Graph& g) {
    return VertexDistribution::from_probs(g.degrees() / g.volume(), "empirical");
}

NetworkDistribution empirical_network_pmf(const Graph& g) {
    if (g.is_dense())
        return NetworkDistribution::from_dense(g.dense_adjacency() / g.volume(), 0.0, "empirical");
    Eigen::SparseMatrix<double> base = g.sparse_adjacency();
    base /= g.volume();
    return NetworkDistribution::from_sparse(std::move(base), 0.0, "empirical");
}

int quantile(const VertexDistribution& dist, double u) { return dist.quantile(u); }

}  // namespace grafield
