#include "grafield/changepoint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace grafield {

namespace {
constexpr double kUnstableImpurity = 0.2;
constexpr int kSmoothingWindow = 5;
}  // namespace

EventMatrix::EventMatrix(int rows, int cols) : n_(rows), d_(cols) {
    if (rows < 2 || cols < 1) throw std::runtime_error("event matrix needs n >= 2 rows and d >= 1 columns");
    words_per_row_ = (cols + 63) / 64;
    words_.assign(static_cast<size_t>(rows) * words_per_row_, 0);
}

void EventMatrix::set(int t, int f, bool value) {
    uint64_t& w = words_[t * words_per_row_ + f / 64];
    const uint64_t mask = uint64_t{1} << (f % 64);
    if (value)
        w |= mask;
    else
        w &= ~mask;
}

std::array<int, 4> EventMatrix::contingency(int s, int t) const {
    const uint64_t* a = &words_[s * words_per_row_];
    const uint64_t* b = &words_[t * words_per_row_];
    int n11 = 0, r1 = 0, c1 = 0;
    for (int w = 0; w < words_per_row_; ++w) {
        n11 += std::popcount(a[w] & b[w]);
        r1 += std::popcount(a[w]);
        c1 += std::popcount(b[w]);
    }
    const int n10 = r1 - n11;
    const int n01 = c1 - n11;
    const int n00 = d_ - n11 - n10 - n01;
    return {n11, n10, n01, n00};
}

Phi2GraphResult phi2_graph(const EventMatrix& z) {
    const int n = z.rows();
    const int d = z.cols();

    std::vector<int> row_ones(n, 0);
    for (int t = 0; t < n; ++t) {
        int ones = 0;
        for (int f = 0; f < d; ++f) ones += z.at(t, f);
        row_ones[t] = ones;
    }

    Phi2GraphResult result;
    for (int t = 0; t < n; ++t)
        if (row_ones[t] == 0 || row_ones[t] == d) result.constant_rows.push_back(t);

    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
    bool any_positive = false;
    for (int s = 0; s < n; ++s) {
        if (row_ones[s] == 0 || row_ones[s] == d) continue;
        for (int t = s + 1; t < n; ++t) {
            if (row_ones[t] == 0 || row_ones[t] == d) continue;
            const auto [n11, n10, n01, n00] = z.contingency(s, t);
            const double r1 = row_ones[s], r0 = d - row_ones[s];
            const double c1 = row_ones[t], c0 = d - row_ones[t];
            const double num = static_cast<double>(n11) * n00 - static_cast<double>(n10) * n01;
            const double w = num * num / (r1 * r0 * c1 * c0);
            if (w > 0.0) {
                weights(s, t) = w;
                weights(t, s) = w;
                any_positive = true;
            }
        }
    }
    if (!any_positive) throw std::runtime_error("degenerate association graph: all weights zero");
    result.graph = build_graph_from_adjacency(weights);
    return result;
}

std::vector<int> kmeans_1d(const std::vector<double>& values, int k) {
    const int n = static_cast<int>(values.size());
    if (k < 1) throw std::runtime_error("k must be >= 1");
    if (n < k) throw std::runtime_error("more clusters than points");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });

    std::vector<double> p1(n + 1, 0.0), p2(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        p1[i + 1] = p1[i] + values[order[i]];
        p2[i + 1] = p2[i] + values[order[i]] * values[order[i]];
    }
    auto cost = [&](int a, int b) {  // sorted range [a, b)
        const double s1 = p1[b] - p1[a], s2 = p2[b] - p2[a];
        return std::max(0.0, s2 - s1 * s1 / (b - a));
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd dp = Eigen::MatrixXd::Constant(k + 1, n + 1, kInf);
    Eigen::MatrixXi from = Eigen::MatrixXi::Zero(k + 1, n + 1);
    dp(0, 0) = 0.0;
    for (int c = 1; c <= k; ++c) {
        for (int i = c; i <= n; ++i) {
            for (int j = c - 1; j < i; ++j) {
                if (dp(c - 1, j) == kInf) continue;
                const double cand = dp(c - 1, j) + cost(j, i);
                if (cand < dp(c, i)) {  // strict: earliest split wins on ties
                    dp(c, i) = cand;
                    from(c, i) = j;
                }
            }
        }
    }

    std::vector<int> labels(n, 0);
    int end = n;
    for (int c = k; c >= 1; --c) {
        const int begin = from(c, end);
        for (int i = begin; i < end; ++i) labels[order[i]] = c - 1;
        end = begin;
    }
    return labels;
}

double within_cluster_ss(const std::vector<double>& values, const std::vector<int>& labels) {
    const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<double> sum(k, 0.0), sum_sq(k, 0.0);
    std::vector<int> count(k, 0);
    for (size_t i = 0; i < values.size(); ++i) {
        sum[labels[i]] += values[i];
        sum_sq[labels[i]] += values[i] * values[i];
        count[labels[i]] += 1;
    }
    double total = 0.0;
    for (int c = 0; c < k; ++c)
        if (count[c] > 0) total += sum_sq[c] - sum[c] * sum[c] / count[c];
    return total;
}

namespace {

std::vector<int> majority_smooth(const std::vector<int>& labels, int num_labels) {
    const int n = static_cast<int>(labels.size());
    const int radius = kSmoothingWindow / 2;
    std::vector<int> out(n);
    std::vector<int> counts(num_labels);
    for (int i = 0; i < n; ++i) {
        std::fill(counts.begin(), counts.end(), 0);
        const int lo = std::max(0, i - radius), hi = std::min(n - 1, i + radius);
        for (int j = lo; j <= hi; ++j) counts[labels[j]] += 1;
        int best = labels[i];  // ties keep the center label
        for (int l = 0; l < num_labels; ++l)
            if (counts[l] > counts[best]) best = l;
        out[i] = best;
    }
    return out;
}

/// Best contiguous partition of `labels` into exactly `pieces` segments,
/// minimizing disagreement with per-segment majorities. Returns segment end
/// indices (exclusive) except the final n.
std::vector<int> consolidate_segments(const std::vector<int>& labels, int num_labels, int pieces) {
    const int n = static_cast<int>(labels.size());
    // prefix[l][i] = occurrences of label l in labels[0..i)
    std::vector<std::vector<int>> prefix(num_labels, std::vector<int>(n + 1, 0));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < num_labels; ++l)
            prefix[l][i + 1] = prefix[l][i] + (labels[i] == l ? 1 : 0);
    auto cost = [&](int a, int b) {  // [a, b)
        int best = 0;
        for (int l = 0; l < num_labels; ++l) best = std::max(best, prefix[l][b] - prefix[l][a]);
        return (b - a) - best;
    };

    constexpr int kBig = 1 << 28;
    std::vector<std::vector<int>> dp(pieces + 1, std::vector<int>(n + 1, kBig));
    std::vector<std::vector<int>> from(pieces + 1, std::vector<int>(n + 1, 0));
    dp[0][0] = 0;
    for (int c = 1; c <= pieces; ++c)
        for (int i = c; i <= n; ++i)
            for (int j = c - 1; j < i; ++j) {
                if (dp[c - 1][j] >= kBig) continue;
                const int cand = dp[c - 1][j] + cost(j, i);
                if (cand < dp[c][i]) {
                    dp[c][i] = cand;
                    from[c][i] = j;
                }
            }

    std::vector<int> cuts;
    int end = n;
    for (int c = pieces; c >= 2; --c) {
        end = from[c][end];
        cuts.push_back(end);
    }
    std::reverse(cuts.begin(), cuts.end());
    return cuts;
}

int count_runs(const std::vector<int>& labels) {
    int runs = labels.empty() ? 0 : 1;
    for (size_t i = 1; i < labels.size(); ++i)
        if (labels[i] != labels[i - 1]) ++runs;
    return runs;
}

}  // namespace

ChangePointReport detect_changepoints(const EventMatrix& z, int m, int k,
                                      const SpectralOptions& opts) {
    if (k < 2) throw std::runtime_error("need at least two segments");
    const int n = z.rows();

    Phi2GraphResult pg = phi2_graph(z);
    const GraphEmbedding emb = lp_spectral(pg.graph, m, std::min(m, k - 1), opts);
    const auto order = emb.singular_order();

    const Eigen::VectorXd phi1 = emb.coordinates().col(order[0]);
    std::vector<double> phi1_vec(phi1.data(), phi1.data() + n);
    std::vector<int> labels = kmeans_1d(phi1_vec, 2);

    // k > 2: successive binary splits, each on the next KL coordinate within
    // the cluster it separates best.
    int num_labels = 2;
    for (int split = 2; split < k; ++split) {
        const int coord = std::min(split - 1, emb.k() - 1);
        const Eigen::VectorXd phi = emb.coordinates().col(order[coord]);
        int best_cluster = -1;
        double best_gain = 0.0;
        std::vector<int> best_sublabels;
        for (int c = 0; c < num_labels; ++c) {
            std::vector<double> vals;
            std::vector<int> idx;
            for (int t = 0; t < n; ++t)
                if (labels[t] == c) {
                    vals.push_back(phi(t));
                    idx.push_back(t);
                }
            if (vals.size() < 2) continue;
            std::vector<int> single(vals.size(), 0);
            const double before = within_cluster_ss(vals, single);
            const std::vector<int> sub = kmeans_1d(vals, 2);
            const double gain = before - within_cluster_ss(vals, sub);
            if (gain > best_gain) {
                best_gain = gain;
                best_cluster = c;
                best_sublabels.assign(n, -1);
                for (size_t i = 0; i < idx.size(); ++i) best_sublabels[idx[i]] = sub[i];
            }
        }
        if (best_cluster < 0) break;
        for (int t = 0; t < n; ++t)
            if (best_sublabels[t] == 1 && labels[t] == best_cluster) labels[t] = num_labels;
        ++num_labels;
    }

    const std::vector<int> smoothed = majority_smooth(labels, num_labels);
    const int pieces = std::min(k, count_runs(smoothed));
    const std::vector<int> cuts = consolidate_segments(smoothed, num_labels, pieces);

    ChangePointReport report;
    report.labels = labels;
    report.phi1 = phi1;
    report.constant_rows = pg.constant_rows;
    report.compression_ratio = emb.compression_ratio();
    for (int cut : cuts) report.boundaries.push_back(cut);  // rows before the boundary

    // Impurity: raw labels against the majority raw label of each final
    // segment.
    int disagree = 0;
    int start = 0;
    std::vector<int> bounds = cuts;
    bounds.push_back(n);
    for (int end : bounds) {
        std::vector<int> counts(num_labels, 0);
        for (int t = start; t < end; ++t) counts[labels[t]] += 1;
        const int majority =
            static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        for (int t = start; t < end; ++t)
            if (labels[t] != majority) ++disagree;
        start = end;
    }
    report.impurity = static_cast<double>(disagree) / n;
    report.unstable = report.impurity > kUnstableImpurity;
    return report;
}

}  // namespace grafield
