#pragma once

#include "grafield/graph.hpp"
#include "grafield/spectral.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace grafield {

/// Binary time-by-feature matrix; row order is temporal.
class EventMatrix {
public:
    EventMatrix(int rows, int cols);

    int rows() const { return n_; }
    int cols() const { return d_; }
    bool at(int t, int f) const { return (words_[t * words_per_row_ + f / 64] >> (f % 64)) & 1u; }
    void set(int t, int f, bool value);

    std::vector<std::string>& timestamps() { return timestamps_; }
    const std::vector<std::string>& timestamps() const { return timestamps_; }

    /// Contingency counts over features for a row pair: n11, n10, n01, n00.
    std::array<int, 4> contingency(int s, int t) const;

private:
    int n_ = 0;
    int d_ = 0;
    int words_per_row_ = 0;
    std::vector<uint64_t> words_;
    std::vector<std::string> timestamps_;
};

/// Time-indexed association graph: weight(s,t) = phi^2 between binary rows,
/// phi = (n11 n00 - n10 n01) / sqrt(r1 r0 c1 c0) over the d features.
/// Constant rows get zero weight everywhere and are reported.
struct Phi2GraphResult {
    Graph graph;
    std::vector<int> constant_rows;
};

Phi2GraphResult phi2_graph(const EventMatrix& z);

/// Exact optimal 1-D k-means by dynamic programming on sorted values;
/// deterministic, labels ordered by cluster mean.
std::vector<int> kmeans_1d(const std::vector<double>& values, int k);

double within_cluster_ss(const std::vector<double>& values, const std::vector<int>& labels);

struct ChangePointReport {
    /// Change occurs between rows tau_i and tau_i + 1 (1-based row numbers),
    /// i.e. tau_i counts the rows before the boundary.
    std::vector<int> boundaries;
    /// Raw per-row cluster ids from the 1-D clustering.
    std::vector<int> labels;
    /// The leading embedding coordinate the clustering ran on.
    Eigen::VectorXd phi1;
    /// Fraction of rows whose raw label disagrees with the majority label of
    /// their final segment.
    double impurity = 0.0;
    /// Null diagnostic: impurity above 0.2 marks the segmentation unstable.
    bool unstable = false;
    std::vector<int> constant_rows;
    double compression_ratio = 0.0;
};

/// The full pipeline: phi2 graph -> LP-compressed embedding -> 1-D k-means
/// on phi_1 -> majority-smoothed boundaries.
ChangePointReport detect_changepoints(const EventMatrix& z, int m, int k,
                                      const SpectralOptions& opts = {});

}  // namespace grafield
