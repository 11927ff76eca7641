#pragma once

#include "grafield/changepoint.hpp"
#include "grafield/graph.hpp"
#include "grafield/spectral.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace grafield::io {

/// TSV edge list "u<TAB>v<TAB>w" (w optional, default 1), 1-based ids,
/// '#' comments. MatrixMarket symmetric coordinate files are auto-detected
/// by their header. Duplicate edges are summed.
Graph parse_edgelist(const std::filesystem::path& path, const GraphOptions& opts = {});

/// TSV edge list writer; weights at full precision so a parse round-trips
/// exactly.
void write_edgelist(const Graph& g, const std::filesystem::path& path);

/// CSV with a header row; first column timestamp or index, remaining
/// columns strictly 0/1.
EventMatrix parse_event_matrix(const std::filesystem::path& path);

/// Formats a double with 12 significant digits (the CSV output contract).
std::string format_number(double x);

/// embedding.csv: vertex id (1-based), phi_1..phi_k.
void write_embedding_csv(const Eigen::MatrixXd& coordinates, const std::filesystem::path& path);

/// spectrum.csv: k, lambda_k.
void write_spectrum_csv(const Eigen::VectorXd& eigenvalues, const std::filesystem::path& path);

/// report.json for change-point runs: boundaries, impurity, parameters.
void write_changepoint_report(const ChangePointReport& report, int m, int k, uint64_t seed,
                              const std::filesystem::path& path);

/// Static line plot of a coordinate against the row index with optional
/// vertical boundary markers.
void write_plot_svg(const Eigen::VectorXd& series, const std::vector<int>& boundaries,
                    const std::string& title, const std::filesystem::path& path);

}  // namespace grafield::io
