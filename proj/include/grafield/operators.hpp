#pragma once

#include "grafield/graph.hpp"
#include "grafield/spectral.hpp"

#include <string>

namespace grafield {

enum class OperatorKind {
    Laplacian,
    LaplacianStar,
    Modularity,
    RandomWalk,
    Type1,
    Type2,
    Type3,
    PageRank,
};

/// A classical spectral graph matrix, materialized dense. Large graphs go
/// through the engine's matrix-free paths instead; these constructors exist
/// for analysis and for checking the engine identities.
struct OperatorMatrix {
    OperatorKind kind;
    double param = 0.0;  // tau or alpha where applicable
    Eigen::MatrixXd matrix;
    bool symmetric = false;
};

/// L = D^{-1/2} A D^{-1/2}. Errors on zero-degree vertices, naming them.
OperatorMatrix laplacian(const Graph& g);

/// L* = L - sqrt(p~) sqrt(p~)^T; same spectrum as L with 1 -> 0.
OperatorMatrix laplacian_star(const Graph& g);

/// B = A - d d^T / N.
OperatorMatrix modularity(const Graph& g);

/// T = D^{-1} A, row-stochastic.
OperatorMatrix random_walk(const Graph& g);

/// D_tau^{-1/2} A D_tau^{-1/2} with D_tau = diag(d_i + tau).
OperatorMatrix reg_laplacian_type1(const Graph& g, double tau);

/// D_tau^{-1/2} A_tau D_tau^{-1/2} with A_tau = A + (tau/n) 1 1^T.
OperatorMatrix reg_laplacian_type2(const Graph& g, double tau);

/// (1-alpha) D^{-1} A + alpha/n in every entry (teleporting random walk).
OperatorMatrix reg_laplacian_type3(const Graph& g, double alpha);

/// Same matrix as reg_laplacian_type3, tagged as the PageRank operator.
OperatorMatrix pagerank_matrix(const Graph& g, double alpha);

/// Left stationary distribution of the teleporting walk, found by power
/// iteration from the empirical pmf (the exact fixed point at alpha = 0).
/// Works matrix-free on the graph; throws on non-convergence with the
/// iteration count.
VertexDistribution pagerank_scores(const Graph& g, double alpha, double tol = 1e-12);

/// Diffusion-map coordinates lambda_k^t phi_k(x) built from the block-pulse
/// engine's nontrivial eigenpairs.
struct DiffusionCoordinates {
    double t = 1.0;
    Eigen::VectorXd eigenvalues;  // nontrivial, descending signed
    Eigen::MatrixXd coords;       // n x k, column j scaled by lambda_j^t
    std::string method;
    /// Set when t is non-integer and a negative eigenvalue forced the
    /// sign(lambda) |lambda|^t convention.
    bool fractional_power_convention = false;
};

DiffusionCoordinates diffusion_map(const Graph& g, double t, int k,
                                   const SpectralOptions& opts = {});

/// Euclidean distance in diffusion-map space.
double diffusion_distance(const DiffusionCoordinates& dc, int x, int y);

}  // namespace grafield
