#pragma once

#include "grafield/graph.hpp"

#include <vector>

namespace grafield {

/// The normalized bivariate kernel C(x,y) = P(x,y) / (p(x) p(y)) in vertex
/// coordinates, with unit-square evaluation through the quantile transform.
/// Defined over the support of p; zero-mass vertices are reported, never
/// imputed.
class GraField {
public:
    const VertexDistribution& vertex_dist() const { return vdist_; }
    const NetworkDistribution& network_dist() const { return ndist_; }
    const std::vector<int>& support() const { return support_; }

    int size() const { return vdist_.size(); }

    /// C(x,y); both vertices must carry positive mass.
    double entry(int x, int y) const;

    /// C(Q(u), Q(v)) for u,v in (0,1].
    double eval(double u, double v) const;

    /// Dense kernel table; rows/columns of zero-mass vertices are zero.
    Eigen::MatrixXd table() const;

    /// sum_y C(x,y) p(y), equal to 1 on the support.
    double slice_sum(int x) const;

private:
    friend GraField build_grafield(VertexDistribution, NetworkDistribution);
    VertexDistribution vdist_;
    NetworkDistribution ndist_;
    std::vector<int> support_;
};

/// Validates marginal consistency (1e-9) and builds the kernel.
GraField build_grafield(VertexDistribution vdist, NetworkDistribution ndist);

inline double grafield_eval(const GraField& gf, double u, double v) { return gf.eval(u, v); }

enum class BasisKind { BlockPulse, Characteristic, LP };

/// A finite system of piecewise-constant functions on (0,1]: vertex-domain
/// values xi_j(x) plus the measure they are orthogonal under. The unit-
/// interval form eta_j(u) = xi_j(Q(u)) is a step function on the cdf grid.
///
/// Block-pulse and characteristic systems are indicator-shaped (xi_j(x) =
/// amp_j [x == j]) and store only their amplitudes; the LP system stores its
/// full m x n value table.
class OrthonormalBasis {
public:
    BasisKind kind() const { return kind_; }
    int size() const { return m_; }
    int domain_size() const { return measure_.size(); }
    const VertexDistribution& measure() const { return measure_; }
    bool indicator_shape() const { return kind_ != BasisKind::LP; }
    const Eigen::VectorXd& amplitudes() const { return amplitudes_; }

    double value(int j, int x) const {
        if (indicator_shape()) return x == j ? amplitudes_(j) : 0.0;
        return values_(j, x);
    }

    /// m x n table of xi_j(x); materializes for indicator systems.
    Eigen::MatrixXd values_matrix() const;

    /// Gram matrix S_jl = sum_x xi_j(x) xi_l(x) p(x). Structurally diagonal
    /// for indicator systems; the honestly computed (near-identity) matrix
    /// for LP.
    Eigen::MatrixXd gram() const;
    bool gram_is_diagonal() const { return indicator_shape(); }
    const Eigen::VectorXd& gram_diagonal() const { return gram_diag_; }
    double gram_identity_deviation() const;

    /// Integrals over (0,1]: int eta_j du = sum_x xi_j(x) p(x).
    Eigen::VectorXd integrals() const;

    /// The cdf grid {0, u_1, ..., u_n = 1} carrying the step functions.
    Eigen::VectorXd breakpoints() const;

private:
    friend OrthonormalBasis bpf_basis(const VertexDistribution&);
    friend OrthonormalBasis char_basis(const VertexDistribution&);
    friend OrthonormalBasis lp_basis(const VertexDistribution&, int);

    BasisKind kind_ = BasisKind::BlockPulse;
    int m_ = 0;
    VertexDistribution measure_;
    Eigen::VectorXd amplitudes_;  // indicator systems
    Eigen::MatrixXd values_;      // LP system, m x n
    Eigen::VectorXd gram_diag_;
    Eigen::MatrixXd gram_full_;   // LP system only
};

/// Degree-adaptive block pulses: xi_j(x) = p(j)^{-1/2} [x == j]; orthonormal.
OrthonormalBasis bpf_basis(const VertexDistribution& vdist);

/// Plain indicators xi_j(x) = [x == j]; orthogonal with gram = diag(p).
OrthonormalBasis char_basis(const VertexDistribution& vdist);

/// Data-adaptive orthonormal polynomials of the mid-distribution rank
/// transform T1; mean zero and unit variance under p. Requires
/// m <= r - 1 where r is the number of distinct T1 values on the support.
OrthonormalBasis lp_basis(const VertexDistribution& vdist, int m);

/// Rank cap for lp_basis on this measure.
int lp_max_order(const VertexDistribution& vdist);

}  // namespace grafield
