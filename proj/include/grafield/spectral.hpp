#pragma once

#include "grafield/bases.hpp"
#include "grafield/graph.hpp"
#include "grafield/smoothing.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace grafield {

/// Basis-projected transform-coefficient matrix
///   M[j,k] = sum_{x,y} xi_j(x) xi_k(y) P(x,y) - (sum_x xi_j p)(sum_y xi_k p),
/// always centered; the centering term vanishes for mean-zero bases.
class GMatrix {
public:
    int size() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& m() const { return m_; }
    const OrthonormalBasis& basis() const { return basis_; }
    Eigen::MatrixXd gram() const { return basis_.gram(); }
    bool centered() const { return true; }

private:
    friend GMatrix gmatrix(const GraField&, const OrthonormalBasis&);
    friend GMatrix type1_gmatrix(const Graph&, double);
    Eigen::MatrixXd m_;
    OrthonormalBasis basis_;
};

/// Projects the kernel onto the basis. The basis must share the GraField's
/// vertex distribution.
GMatrix gmatrix(const GraField& gf, const OrthonormalBasis& basis);

/// G-matrix of the *empirical* network pmf in a tau-regularized block-pulse
/// trial basis, M[j,k] = P~(j,k)/sqrt(p_tau(j) p_tau(k)) - sqrt(p_tau(j) p_tau(k)).
/// The mismatch is deliberate: only the trial basis is smoothed.
GMatrix type1_gmatrix(const Graph& g, double tau);

struct EigenPairs {
    Eigen::VectorXd lambda;  // descending
    Eigen::MatrixXd theta;   // S-orthonormal columns
};

/// Solves M Theta = S Theta Delta by symmetric-definite reduction: factor S,
/// transform, solve the standard symmetric problem, back-transform. Skipped
/// when S is the identity within 1e-12. Columns are sign-fixed so the
/// largest-magnitude entry is positive.
EigenPairs solve_generalized(const GMatrix& gm, int k);

struct SpectralOptions {
    BasisKind basis = BasisKind::BlockPulse;
    /// Laplace smoothing applied to both distributions before projection.
    std::optional<TauChoice> smoothing;
    /// Basis size for the LP kind.
    int lp_order = 0;
    /// Above this vertex count the indicator-basis path switches to a
    /// matrix-free iterative eigensolver.
    int dense_threshold = 8192;
    double iterative_tol = 1e-8;
    uint64_t seed = 42;
};

/// Approximate KL basis of a graph: eigenvalues plus per-vertex coordinate
/// functions phi_k(x) = sum_j Theta(j,k) xi_j(x).
class GraphEmbedding {
public:
    int n() const { return static_cast<int>(coordinates_.rows()); }
    int k() const { return static_cast<int>(coordinates_.cols()); }
    int basis_size() const { return basis_.size(); }

    /// Signed symmetric eigenvalues, descending.
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& coordinates() const { return coordinates_; }
    const Eigen::MatrixXd& coefficients() const { return coefficients_; }
    const OrthonormalBasis& basis() const { return basis_; }
    const std::string& method() const { return method_; }

    /// KL (singular) view: column order by |lambda| descending, stable.
    std::vector<int> singular_order() const;
    Eigen::VectorXd singular_values() const;

    /// n / m bookkeeping for compressed bases.
    double compression_ratio() const { return static_cast<double>(n()) / basis_size(); }

    /// Index of the deflated trivial pair (lambda ~ 0, phi ~ constant), if
    /// solved for.
    std::optional<int> trivial_index(double tol = 1e-8) const;

private:
    friend GraphEmbedding unified_spectral(const Graph&, int, const SpectralOptions&);
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd coordinates_;
    Eigen::MatrixXd coefficients_;
    OrthonormalBasis basis_;
    std::string method_;
};

/// The unified pipeline: (optionally smoothed) distributions -> basis ->
/// G-matrix -> eigensolve -> coordinate functions. With the block-pulse
/// basis this reproduces the deflated Laplacian embedding Phi = Dp^{-1/2} Theta.
GraphEmbedding unified_spectral(const Graph& g, int k, const SpectralOptions& opts = {});

/// Compressed path: projects onto the m-term LP polynomial basis, solves the
/// m x m symmetric eigenproblem, and expands Phi = S * U. One pass over the
/// edges plus an m x m solve.
GraphEmbedding lp_spectral(const Graph& g, int m, int k0, const SpectralOptions& opts = {});

/// L2[0,1] norm of the governing-equation residual
///   R_k(u) = int (C-1) phi_k dv - lambda_k phi_k
/// evaluated in the vertex domain.
double residual_norm(const GraField& gf, const GraphEmbedding& emb, int k);

namespace detail {

/// Thick-restart symmetric Lanczos with full reorthogonalization; returns
/// the k eigenpairs of largest magnitude of a matrix-free operator,
/// residuals verified to ||Mx - lambda x|| <= tol * spectral scale.
EigenPairs lanczos_topk(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                        int n, int k, double tol, uint64_t seed);

}  // namespace detail

}  // namespace grafield
