#include "grafield/smoothing.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace grafield {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TauKind parse_tau_kind(const std::string& name) {
    if (name == "laplace") return TauKind::Laplace;
    if (name == "kt" || name == "krichevsky-trofimov") return TauKind::KrichevskyTrofimov;
    if (name == "perks") return TauKind::Perks;
    if (name == "minimax") return TauKind::Minimax;
    if (name == "stein" || name == "stein-optimal") return TauKind::SteinOptimal;
    throw std::runtime_error("unknown preset: " + name);
}

int RiskCurve::argmin_index() const {
    int best = 0;
    for (int i = 1; i < risks.size(); ++i)
        if (risks(i) < risks(best)) best = i;
    return best;
}

VertexDistribution laplace_smooth_vertex(const Eigen::VectorXd& degrees, double N, double tau) {
    if (tau < 0.0 || std::isnan(tau)) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");
    if (N <= 0.0) throw std::runtime_error("empty graph: total edge weight is zero");
    const int n = static_cast<int>(degrees.size());
    if (std::isinf(tau))
        return VertexDistribution::from_probs(Eigen::VectorXd::Constant(n, 1.0 / n),
                                              "laplace(inf)");
    if (tau == 0.0)
        return VertexDistribution::from_probs(degrees / N, "empirical");
    Eigen::VectorXd p = (degrees.array() + tau) / (N + n * tau);
    return VertexDistribution::from_probs(std::move(p), "laplace(" + std::to_string(tau) + ")");
}

TauChoice resolve_tau(TauKind kind, int n, double N, const Eigen::VectorXd& degrees) {
    if (n < 2) throw std::runtime_error("need at least two vertices");
    if (N <= 0.0) throw std::runtime_error("empty graph: total edge weight is zero");
    switch (kind) {
        case TauKind::Laplace: return {kind, 1.0};
        case TauKind::KrichevskyTrofimov: return {kind, 0.5};
        case TauKind::Perks: return {kind, 1.0 / n};
        case TauKind::Minimax: return {kind, std::sqrt(N) / n};
        case TauKind::SteinOptimal: return {kind, stein_optimal_tau(degrees, N, n)};
        case TauKind::Fixed: break;
    }
    throw std::runtime_error("unknown preset");
}

double stein_optimal_tau(const Eigen::VectorXd& degrees, double N, int n) {
    if (N <= 0.0) throw std::runtime_error("empty graph: total edge weight is zero");
    const double sum_sq = degrees.squaredNorm();
    const double den = n * sum_sq - N * N;
    if (den <= 0.0) return kInf;
    return (N * N - sum_sq) / den;
}

double mse_risk(const VertexDistribution& p_true, double N, double tau) {
    if (tau < 0.0) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");
    if (N < 1.0) throw std::runtime_error("sample size must be >= 1");
    const int n = p_true.size();
    const double w = std::isinf(tau) ? 1.0 : n * tau / (N + n * tau);
    double var_sum = 0.0, dev_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double p = p_true.prob(i);
        const double var = p * (1.0 - p) / N;
        var_sum += var;
        dev_sum += var + (p - 1.0 / n) * (p - 1.0 / n);
    }
    return (1.0 - 2.0 * w) * var_sum + w * w * dev_sum;
}

RiskCurve mse_risk_curve(const VertexDistribution& p_true, double N, const Eigen::VectorXd& taus) {
    RiskCurve c;
    c.taus = taus;
    c.risks.resize(taus.size());
    for (int i = 0; i < taus.size(); ++i) c.risks(i) = mse_risk(p_true, N, taus(i));
    return c;
}

GoodTuringResult good_turing(const Eigen::VectorXd& degrees) {
    const int n = static_cast<int>(degrees.size());
    double N = 0.0;
    std::map<long long, int> occupancy;  // degree value -> node count
    for (int i = 0; i < n; ++i) {
        const double d = degrees(i);
        if (d < 0.0 || d != std::floor(d))
            throw std::runtime_error("Good-Turing requires integer degrees");
        occupancy[static_cast<long long>(d)] += 1;
        N += d;
    }
    if (N <= 0.0) throw std::runtime_error("empty graph: total edge weight is zero");

    Eigen::VectorXd raw(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const long long d = static_cast<long long>(degrees(i));
        const auto next = occupancy.find(d + 1);
        const double next_count = next == occupancy.end() ? 0.0 : next->second;
        raw(i) = (next_count / occupancy.at(d)) * (static_cast<double>(d) + 1.0) / N;
        total += raw(i);
    }
    if (total <= 0.0)
        throw std::runtime_error("degenerate Good-Turing: no two adjacent occupied degree counts");

    GoodTuringResult r;
    r.raw = raw;
    r.normalized = VertexDistribution::from_probs(raw / total, "good-turing");
    return r;
}

NetworkDistribution laplace_smooth_network(const Graph& g, double tau) {
    if (tau < 0.0 || std::isnan(tau)) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");
    const int n = g.size();
    const double N = g.volume();
    if (std::isinf(tau)) {
        const double u = 1.0 / (static_cast<double>(n) * n);
        if (g.is_dense())
            return NetworkDistribution::from_dense(Eigen::MatrixXd::Zero(n, n), u, "laplace-2d(inf)");
        return NetworkDistribution::from_sparse(Eigen::SparseMatrix<double>(n, n), u,
                                                "laplace-2d(inf)");
    }
    const double scale = 1.0 / (N + n * tau);
    const double uniform = tau / n * scale;
    const std::string tag = tau == 0.0 ? "empirical" : "laplace-2d(" + std::to_string(tau) + ")";
    if (g.is_dense())
        return NetworkDistribution::from_dense(g.dense_adjacency() * scale, uniform, tag);
    Eigen::SparseMatrix<double> base = g.sparse_adjacency();
    base *= scale;
    return NetworkDistribution::from_sparse(std::move(base), uniform, tag);
}

Eigen::MatrixXd smooth_transition(const Graph& g, double tau) {
    if (tau < 0.0 || std::isnan(tau)) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");
    const int n = g.size();
    Eigen::MatrixXd t = g.dense_adjacency();
    t.array() += tau / n;
    for (int i = 0; i < n; ++i) {
        const double row_mass = g.degree(i) + tau;
        if (row_mass <= 0.0)
            throw std::runtime_error("dangling vertex with zero smoothing at vertex " +
                                     std::to_string(i + 1));
        t.row(i) /= row_mass;
    }
    return t;
}

}  // namespace grafield
