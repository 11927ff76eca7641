#include "grafield/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace grafield {

namespace {

void sign_fix_columns(Eigen::MatrixXd& theta) {
    for (int c = 0; c < theta.cols(); ++c) {
        int idx = 0;
        theta.col(c).cwiseAbs().maxCoeff(&idx);
        if (theta(idx, c) < 0.0) theta.col(c) = -theta.col(c);
    }
}

/// M1[j,k] = sum_{x,y} xi_j(x) xi_k(y) P(x,y), minus the centering term.
Eigen::MatrixXd assemble_gmatrix(const NetworkDistribution& nd, const OrthonormalBasis& basis) {
    Eigen::MatrixXd m;
    if (basis.indicator_shape()) {
        const Eigen::VectorXd& a = basis.amplitudes();
        const int n = nd.size();
        m = Eigen::MatrixXd::Zero(n, n);
        nd.for_each_base_nonzero([&](int x, int y, double w) { m(x, y) += a(x) * a(y) * w; });
        if (nd.uniform_term() != 0.0) m += nd.uniform_term() * a * a.transpose();
    } else {
        const Eigen::MatrixXd& v = basis.values_matrix();
        Eigen::MatrixXd pv(nd.size(), v.rows());  // P * V^T
        for (int j = 0; j < v.rows(); ++j) pv.col(j) = nd.apply(v.row(j).transpose());
        m = v * pv;
    }
    const Eigen::VectorXd w = basis.integrals();
    m -= w * w.transpose();
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd expand_coordinates(const OrthonormalBasis& basis, const Eigen::MatrixXd& theta) {
    if (basis.indicator_shape()) return basis.amplitudes().asDiagonal() * theta;
    return basis.values_matrix().transpose() * theta;
}

std::string method_tag(const SpectralOptions& opts, bool iterative) {
    switch (opts.basis) {
        case BasisKind::BlockPulse: return iterative ? "bpf-lanczos" : "bpf-exact";
        case BasisKind::Characteristic: return iterative ? "char-lanczos" : "char-exact";
        case BasisKind::LP: return "lp(" + std::to_string(opts.lp_order) + ")";
    }
    return "unknown";
}

}  // namespace

GMatrix gmatrix(const GraField& gf, const OrthonormalBasis& basis) {
    const VertexDistribution& bp = basis.measure();
    const VertexDistribution& gp = gf.vertex_dist();
    if (bp.size() != gp.size() || (bp.probs() - gp.probs()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::runtime_error("distribution mismatch between basis and GraField");
    GMatrix gm;
    gm.basis_ = basis;
    gm.m_ = assemble_gmatrix(gf.network_dist(), basis);
    return gm;
}

GMatrix type1_gmatrix(const Graph& g, double tau) {
    const VertexDistribution smoothed = laplace_smooth_vertex(g.degrees(), g.volume(), tau);
    GMatrix gm;
    gm.basis_ = bpf_basis(smoothed);
    gm.m_ = assemble_gmatrix(empirical_network_pmf(g), gm.basis_);
    return gm;
}

EigenPairs solve_generalized(const GMatrix& gm, int k) {
    const int m = gm.size();
    if (k < 1 || k > m) throw std::runtime_error("requested rank exceeds basis size");

    EigenPairs out;
    Eigen::MatrixXd reduced = gm.m();
    enum class Reduction { None, Diagonal, Cholesky } reduction = Reduction::None;
    Eigen::VectorXd inv_sqrt_diag;
    Eigen::LLT<Eigen::MatrixXd> llt;

    if (gm.basis().gram_is_diagonal()) {
        const Eigen::VectorXd& d = gm.basis().gram_diagonal();
        if ((d.array() <= 0.0).any()) throw std::runtime_error("degenerate Gram matrix");
        if ((d.array() - 1.0).abs().maxCoeff() > 1e-12) {
            reduction = Reduction::Diagonal;
            inv_sqrt_diag = d.array().rsqrt();
            reduced = inv_sqrt_diag.asDiagonal() * reduced * inv_sqrt_diag.asDiagonal();
        }
    } else {
        const Eigen::MatrixXd s = gm.gram();
        if ((s - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12) {
            llt.compute(s);
            if (llt.info() != Eigen::Success) throw std::runtime_error("degenerate Gram matrix");
            reduction = Reduction::Cholesky;
            const Eigen::MatrixXd l = llt.matrixL();
            reduced = l.triangularView<Eigen::Lower>().solve(reduced);
            reduced = l.triangularView<Eigen::Lower>().solve(reduced.transpose()).transpose();
            reduced = 0.5 * (reduced + reduced.transpose());
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

    out.lambda.resize(k);
    out.theta.resize(m, k);
    for (int c = 0; c < k; ++c) {
        const int src = m - 1 - c;  // descending
        out.lambda(c) = es.eigenvalues()(src);
        out.theta.col(c) = es.eigenvectors().col(src);
    }
    switch (reduction) {
        case Reduction::None: break;
        case Reduction::Diagonal: out.theta = inv_sqrt_diag.asDiagonal() * out.theta; break;
        case Reduction::Cholesky:
            out.theta = llt.matrixU().solve(out.theta);
            break;
    }
    sign_fix_columns(out.theta);
    return out;
}

std::vector<int> GraphEmbedding::singular_order() const {
    std::vector<int> order(k());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(eigenvalues_(a)) > std::abs(eigenvalues_(b));
    });
    return order;
}

Eigen::VectorXd GraphEmbedding::singular_values() const {
    const auto order = singular_order();
    Eigen::VectorXd s(k());
    for (int i = 0; i < k(); ++i) s(i) = std::abs(eigenvalues_(order[i]));
    return s;
}

std::optional<int> GraphEmbedding::trivial_index(double tol) const {
    const Eigen::VectorXd& p = basis_.measure().probs();
    for (int c = 0; c < k(); ++c) {
        if (std::abs(eigenvalues_(c)) > tol) continue;
        const Eigen::VectorXd phi = coordinates_.col(c);
        const double mean = phi.dot(p);
        const double second = (phi.array().square() * p.array()).sum();
        if (second > 0.0 && second - mean * mean <= 1e-10 * second) return c;
    }
    return std::nullopt;
}

GraphEmbedding unified_spectral(const Graph& g, int k, const SpectralOptions& opts) {
    const double tau = opts.smoothing ? opts.smoothing->resolved_value : 0.0;
    if (tau < 0.0) throw std::runtime_error("bad shrinkage parameter: tau must be >= 0");

    const VertexDistribution vdist =
        tau > 0.0 ? laplace_smooth_vertex(g.degrees(), g.volume(), tau) : empirical_vertex_pmf(g);

    if (opts.basis != BasisKind::LP && tau == 0.0) {
        const auto zeros = g.zero_degree_vertices();
        if (!zeros.empty()) {
            std::string msg = "zero-degree vertices break the indicator basis:";
            for (int v : zeros) msg += " " + std::to_string(v + 1);
            throw std::runtime_error(msg);
        }
    }

    GraphEmbedding emb;
    const bool exact = opts.basis == BasisKind::LP || g.size() <= opts.dense_threshold;
    if (exact) {
        const NetworkDistribution ndist =
            tau > 0.0 ? laplace_smooth_network(g, tau) : empirical_network_pmf(g);
        const GraField gf = build_grafield(vdist, ndist);
        OrthonormalBasis basis;
        switch (opts.basis) {
            case BasisKind::BlockPulse: basis = bpf_basis(vdist); break;
            case BasisKind::Characteristic: basis = char_basis(vdist); break;
            case BasisKind::LP: basis = lp_basis(vdist, opts.lp_order); break;
        }
        const GMatrix gm = gmatrix(gf, basis);
        EigenPairs pairs = solve_generalized(gm, k);
        emb.eigenvalues_ = std::move(pairs.lambda);
        emb.coordinates_ = expand_coordinates(basis, pairs.theta);
        emb.coefficients_ = std::move(pairs.theta);
        emb.basis_ = std::move(basis);
        emb.method_ = method_tag(opts, false);
        return emb;
    }

    // Matrix-free path. In block-pulse coordinates the projected operator is
    //   B = diag(a) P diag(a) - w w^T,  a = p^{-1/2},  w = sqrt(p),
    // and the characteristic basis reduces to the same operator, so one
    // Lanczos run serves both kinds.
    const NetworkDistribution ndist =
        tau > 0.0 ? laplace_smooth_network(g, tau) : empirical_network_pmf(g);
    const Eigen::VectorXd a = vdist.probs().array().rsqrt();
    const Eigen::VectorXd w = vdist.probs().array().sqrt();
    auto apply = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd out = a.array() * ndist.apply((a.array() * v.array()).matrix()).array();
        out -= w * w.dot(v);
        return out;
    };
    EigenPairs pairs = detail::lanczos_topk(apply, g.size(), k, opts.iterative_tol, opts.seed);

    emb.eigenvalues_ = std::move(pairs.lambda);
    if (opts.basis == BasisKind::BlockPulse) {
        OrthonormalBasis basis = bpf_basis(vdist);
        emb.coordinates_ = expand_coordinates(basis, pairs.theta);
        emb.coefficients_ = std::move(pairs.theta);
        emb.basis_ = std::move(basis);
    } else {
        OrthonormalBasis basis = char_basis(vdist);
        emb.coefficients_ = a.asDiagonal() * pairs.theta;  // back-transform from the reduction
        emb.coordinates_ = expand_coordinates(basis, emb.coefficients_);
        emb.basis_ = std::move(basis);
    }
    emb.method_ = method_tag(opts, true);
    return emb;
}

GraphEmbedding lp_spectral(const Graph& g, int m, int k0, const SpectralOptions& opts) {
    SpectralOptions lp_opts = opts;
    lp_opts.basis = BasisKind::LP;
    lp_opts.lp_order = m;
    if (k0 < 1 || k0 > m) throw std::runtime_error("requested rank exceeds basis size");
    return unified_spectral(g, k0, lp_opts);
}

double residual_norm(const GraField& gf, const GraphEmbedding& emb, int k) {
    if (k < 0 || k >= emb.k()) throw std::runtime_error("eigenpair index out of range");
    const Eigen::VectorXd& p = gf.vertex_dist().probs();
    const Eigen::VectorXd phi = emb.coordinates().col(k);
    const double lambda = emb.eigenvalues()(k);
    const Eigen::VectorXd pphi = gf.network_dist().apply(phi);
    const double mean = phi.dot(p);
    double norm_sq = 0.0;
    for (int x : gf.support()) {
        const double r = pphi(x) / p(x) - mean - lambda * phi(x);
        norm_sq += r * r * p(x);
    }
    return std::sqrt(norm_sq);
}

namespace detail {

EigenPairs lanczos_topk(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                        int n, int k, double tol, uint64_t seed) {
    if (k < 1 || k > n) throw std::runtime_error("requested rank exceeds dimension");
    const int ncv = std::min(n, std::max(2 * k + 16, 32));
    const int max_restarts = 400;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&](const Eigen::MatrixXd& against, int cols) {
        Eigen::VectorXd v(n);
        for (int attempt = 0; attempt < 64; ++attempt) {
            for (int i = 0; i < n; ++i) v(i) = gauss(rng);
            if (cols > 0) {
                v -= against.leftCols(cols) * (against.leftCols(cols).transpose() * v);
                v -= against.leftCols(cols) * (against.leftCols(cols).transpose() * v);
            }
            const double nrm = v.norm();
            if (nrm > 1e-8) return Eigen::VectorXd(v / nrm);
        }
        throw std::runtime_error("eigensolver failed: cannot extend Krylov basis");
    };

    Eigen::MatrixXd basis(n, ncv);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ncv, ncv);
    Eigen::VectorXd next = random_unit(basis, 0);
    int kept = 0;

    for (int restart = 0; restart < max_restarts; ++restart) {
        for (int j = kept; j < ncv; ++j) {
            basis.col(j) = next;
            Eigen::VectorXd u = apply(next);
            Eigen::VectorXd coeffs = basis.leftCols(j + 1).transpose() * u;
            u -= basis.leftCols(j + 1) * coeffs;
            const Eigen::VectorXd correction = basis.leftCols(j + 1).transpose() * u;
            u -= basis.leftCols(j + 1) * correction;
            coeffs += correction;
            h.col(j).head(j + 1) = coeffs;
            h.row(j).head(j + 1) = coeffs.transpose();
            const double beta = u.norm();
            next = beta > 1e-12 ? Eigen::VectorXd(u / beta) : random_unit(basis, j + 1);
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        std::vector<int> order(ncv);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
        });

        const double scale = std::max(std::abs(es.eigenvalues()(order[0])), 1e-30);
        bool converged = true;
        for (int i = 0; i < k; ++i) {
            const Eigen::VectorXd x = basis * es.eigenvectors().col(order[i]);
            const double res = (apply(x) - es.eigenvalues()(order[i]) * x).norm();
            if (res > tol * scale) {
                converged = false;
                break;
            }
        }
        if (converged || ncv >= n) {
            EigenPairs out;
            out.lambda.resize(k);
            out.theta.resize(n, k);
            std::vector<int> top(order.begin(), order.begin() + k);
            std::stable_sort(top.begin(), top.end(), [&](int a, int b) {
                return es.eigenvalues()(a) > es.eigenvalues()(b);
            });
            for (int i = 0; i < k; ++i) {
                out.lambda(i) = es.eigenvalues()(top[i]);
                out.theta.col(i) = basis * es.eigenvectors().col(top[i]);
                out.theta.col(i).normalize();
            }
            sign_fix_columns(out.theta);
            return out;
        }

        // Thick restart: keep the leading Ritz vectors, then continue the
        // recurrence from the current residual direction.
        kept = std::min(ncv - 2, k + std::max(k, 8));
        Eigen::MatrixXd keep(n, kept);
        Eigen::VectorXd theta(kept);
        for (int i = 0; i < kept; ++i) {
            keep.col(i) = basis * es.eigenvectors().col(order[i]);
            theta(i) = es.eigenvalues()(order[i]);
        }
        basis.leftCols(kept) = keep;
        h.setZero();
        h.topLeftCorner(kept, kept).diagonal() = theta;
        next -= basis.leftCols(kept) * (basis.leftCols(kept).transpose() * next);
        const double nrm = next.norm();
        next = nrm > 1e-8 ? Eigen::VectorXd(next / nrm) : random_unit(basis, kept);
    }
    throw std::runtime_error("eigensolver failed to converge after 400 restarts");
}

}  // namespace detail

}  // namespace grafield
