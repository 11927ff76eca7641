#include "grafield/bases.hpp"

#include <cmath>
#include <stdexcept>

namespace grafield {

GraField build_grafield(VertexDistribution vdist, NetworkDistribution ndist) {
    if (vdist.size() != ndist.size())
        throw std::runtime_error("inconsistent distributions: dimension mismatch");
    const Eigen::VectorXd marg = ndist.marginals();
    for (int x = 0; x < vdist.size(); ++x)
        if (std::abs(marg(x) - vdist.prob(x)) > 1e-9)
            throw std::runtime_error("inconsistent distributions: marginal mismatch at vertex " +
                                     std::to_string(x + 1));
    GraField gf;
    gf.vdist_ = std::move(vdist);
    gf.ndist_ = std::move(ndist);
    for (int x = 0; x < gf.vdist_.size(); ++x)
        if (gf.vdist_.prob(x) > 0.0) gf.support_.push_back(x);
    return gf;
}

double GraField::entry(int x, int y) const {
    const double px = vdist_.prob(x), py = vdist_.prob(y);
    if (px <= 0.0 || py <= 0.0)
        throw std::runtime_error("vertex outside GraField support");
    return ndist_.entry(x, y) / (px * py);
}

double GraField::eval(double u, double v) const {
    return entry(vdist_.quantile(u), vdist_.quantile(v));
}

Eigen::MatrixXd GraField::table() const {
    const int n = size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (int x : support_)
        for (int y : support_) t(x, y) = entry(x, y);
    return t;
}

double GraField::slice_sum(int x) const {
    const double px = vdist_.prob(x);
    if (px <= 0.0) throw std::runtime_error("vertex outside GraField support");
    // sum_y C(x,y) p(y) = sum_y P(x,y) / p(x)
    double row = 0.0;
    ndist_.for_each_base_nonzero([&](int i, int, double w) {
        if (i == x) row += w;
    });
    row += ndist_.uniform_term() * size();
    return row / px;
}

Eigen::MatrixXd OrthonormalBasis::values_matrix() const {
    if (!indicator_shape()) return values_;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(m_, measure_.size());
    for (int j = 0; j < m_; ++j) v(j, j) = amplitudes_(j);
    return v;
}

Eigen::MatrixXd OrthonormalBasis::gram() const {
    if (indicator_shape()) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m_, m_);
        s.diagonal() = gram_diag_;
        return s;
    }
    return gram_full_;
}

double OrthonormalBasis::gram_identity_deviation() const {
    const Eigen::MatrixXd s = gram();
    return (s - Eigen::MatrixXd::Identity(m_, m_)).cwiseAbs().maxCoeff();
}

Eigen::VectorXd OrthonormalBasis::integrals() const {
    Eigen::VectorXd out(m_);
    if (indicator_shape()) {
        for (int j = 0; j < m_; ++j) out(j) = amplitudes_(j) * measure_.prob(j);
    } else {
        out = values_ * measure_.probs();
    }
    return out;
}

Eigen::VectorXd OrthonormalBasis::breakpoints() const {
    const int n = measure_.size();
    Eigen::VectorXd b(n + 1);
    b(0) = 0.0;
    b.tail(n) = measure_.cdf();
    return b;
}

OrthonormalBasis bpf_basis(const VertexDistribution& vdist) {
    const int n = vdist.size();
    OrthonormalBasis b;
    b.kind_ = BasisKind::BlockPulse;
    b.m_ = n;
    b.measure_ = vdist;
    b.amplitudes_.resize(n);
    b.gram_diag_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double p = vdist.prob(j);
        if (p <= 0.0)
            throw std::runtime_error("degenerate block amplitude: zero-mass vertex " +
                                     std::to_string(j + 1));
        b.amplitudes_(j) = 1.0 / std::sqrt(p);
        b.gram_diag_(j) = b.amplitudes_(j) * b.amplitudes_(j) * p;
    }
    return b;
}

OrthonormalBasis char_basis(const VertexDistribution& vdist) {
    const int n = vdist.size();
    OrthonormalBasis b;
    b.kind_ = BasisKind::Characteristic;
    b.m_ = n;
    b.measure_ = vdist;
    b.amplitudes_ = Eigen::VectorXd::Ones(n);
    b.gram_diag_ = vdist.probs();
    for (int j = 0; j < n; ++j)
        if (vdist.prob(j) <= 0.0)
            throw std::runtime_error("degenerate block amplitude: zero-mass vertex " +
                                     std::to_string(j + 1));
    return b;
}

namespace {

/// T1(x) = sqrt(12) (Fmid(x) - 1/2) / sqrt(1 - sum_x p^3(x)), with
/// Fmid(x) = F(x) - p(x)/2. Values are defined for every vertex; only
/// positive-mass vertices enter inner products.
Eigen::VectorXd lp_t1(const VertexDistribution& vdist) {
    const int n = vdist.size();
    const double p3 = vdist.probs().array().cube().sum();
    const double denom = std::sqrt(1.0 - p3);
    if (!(denom > 0.0)) throw std::runtime_error("LP rank exceeded: single-atom distribution");
    Eigen::VectorXd t1(n);
    for (int x = 0; x < n; ++x) {
        const double fmid = vdist.cdf()(x) - 0.5 * vdist.prob(x);
        t1(x) = std::sqrt(12.0) * (fmid - 0.5) / denom;
    }
    return t1;
}

int distinct_support_values(const Eigen::VectorXd& t1, const VertexDistribution& vdist) {
    int r = 0;
    bool have_prev = false;
    double prev = 0.0;
    for (int x = 0; x < vdist.size(); ++x) {
        if (vdist.prob(x) <= 0.0) continue;
        if (!have_prev || std::abs(t1(x) - prev) > 1e-12 * std::max(1.0, std::abs(prev))) ++r;
        prev = t1(x);
        have_prev = true;
    }
    return r;
}

}  // namespace

int lp_max_order(const VertexDistribution& vdist) {
    if (vdist.size() < 2) throw std::runtime_error("LP basis needs at least two vertices");
    return distinct_support_values(lp_t1(vdist), vdist) - 1;
}

OrthonormalBasis lp_basis(const VertexDistribution& vdist, int m) {
    const int n = vdist.size();
    if (n < 2) throw std::runtime_error("LP basis needs at least two vertices");
    if (m < 1) throw std::runtime_error("LP order must be >= 1");

    const Eigen::VectorXd p = vdist.probs();
    const Eigen::VectorXd t1 = lp_t1(vdist);
    const int cap = distinct_support_values(t1, vdist) - 1;
    if (m > cap)
        throw std::runtime_error("LP rank exceeded: requested " + std::to_string(m) +
                                 ", achievable maximum " + std::to_string(cap));

    const auto dot_p = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (a.array() * b.array() * p.array()).sum();
    };

    // Gram-Schmidt on powers of T1 against {1, T_1, ..., T_{j-1}} in L2(p),
    // with a second re-orthogonalization pass. Values at zero-mass vertices
    // ride along (weight zero) so LP embeddings stay defined everywhere.
    Eigen::MatrixXd rows(m, n);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd power = ones;
    for (int j = 0; j < m; ++j) {
        power = power.array() * t1.array();  // T1^(j+1)
        Eigen::VectorXd v = power;
        const double pre_norm = std::sqrt(dot_p(v, v));
        for (int pass = 0; pass < 2; ++pass) {
            v -= dot_p(v, ones) * ones;
            for (int l = 0; l < j; ++l) {
                const Eigen::VectorXd tl = rows.row(l).transpose();
                v -= dot_p(v, tl) * tl;
            }
        }
        const double post_norm = std::sqrt(dot_p(v, v));
        if (!(post_norm > 1e-8 * pre_norm))
            throw std::runtime_error("LP rank exceeded: power " + std::to_string(j + 1) +
                                     " is numerically dependent");
        rows.row(j) = (v / post_norm).transpose();
    }

    OrthonormalBasis b;
    b.kind_ = BasisKind::LP;
    b.m_ = m;
    b.measure_ = vdist;
    b.values_ = std::move(rows);
    b.gram_full_ = b.values_ * p.asDiagonal() * b.values_.transpose();
    b.gram_diag_ = b.gram_full_.diagonal();
    return b;
}

}  // namespace grafield
