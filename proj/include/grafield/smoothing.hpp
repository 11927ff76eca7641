#pragma once

#include "grafield/graph.hpp"

#include <limits>
#include <string>

namespace grafield {

enum class TauKind { Laplace, KrichevskyTrofimov, Perks, Minimax, SteinOptimal, Fixed };

/// A resolved flattening constant. SteinOptimal may resolve to +inf, which
/// downstream smoothers interpret as full shrinkage to uniform.
struct TauChoice {
    TauKind kind = TauKind::Fixed;
    double resolved_value = 0.0;

    static TauChoice fixed(double tau) { return {TauKind::Fixed, tau}; }
};

TauKind parse_tau_kind(const std::string& name);

/// Evaluated MSE risk over a grid of tau values.
struct RiskCurve {
    Eigen::VectorXd taus;
    Eigen::VectorXd risks;
    int argmin_index() const;
};

/// p_hat(j) = (d_j + tau) / (N + n*tau); tau = +inf yields exact uniform.
VertexDistribution laplace_smooth_vertex(const Eigen::VectorXd& degrees, double N, double tau);

/// Resolves a named preset: laplace->1, krichevsky-trofimov->1/2, perks->1/n,
/// minimax->sqrt(N)/n, stein-optimal->stein_optimal_tau.
TauChoice resolve_tau(TauKind kind, int n, double N, const Eigen::VectorXd& degrees);

/// (N^2 - sum d_i^2) / (n sum d_i^2 - N^2); +inf when the denominator is <= 0
/// (regular-degree graph: the empirical pmf is already uniform).
double stein_optimal_tau(const Eigen::VectorXd& degrees, double N, int n);

/// Population MSE risk of the tau-smoothed estimator around a true pmf at
/// sample size N.
double mse_risk(const VertexDistribution& p_true, double N, double tau);

RiskCurve mse_risk_curve(const VertexDistribution& p_true, double N, const Eigen::VectorXd& taus);

struct GoodTuringResult {
    VertexDistribution normalized;
    Eigen::VectorXd raw;  // un-normalized masses, preserved for inspection
};

/// Good-Turing estimator from integer degrees; the normalized pmf is what
/// downstream code consumes, the raw masses do not sum to 1.
GoodTuringResult good_turing(const Eigen::VectorXd& degrees);

/// Joint smoothing: probs(j,k) = (A(j,k) + tau/n) / (N + n*tau), the pmf of
/// A_tau = A + (tau/n) 1 1^T. Marginals equal laplace_smooth_vertex at the
/// same tau.
NetworkDistribution laplace_smooth_network(const Graph& g, double tau);

/// Row-stochastic T_tau(i,j) = (A(i,j) + tau/n) / (d_i + tau).
Eigen::MatrixXd smooth_transition(const Graph& g, double tau);

}  // namespace grafield
