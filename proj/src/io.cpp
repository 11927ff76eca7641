#include "grafield/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grafield::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

Graph parse_matrix_market(std::ifstream& in, const std::string& header,
                          const std::filesystem::path& path, const GraphOptions& opts) {
    std::string lowered = header;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lowered.find("coordinate") == std::string::npos)
        throw std::runtime_error(path.string() + ": only coordinate MatrixMarket supported");
    const bool pattern = lowered.find("pattern") != std::string::npos;
    if (lowered.find("symmetric") == std::string::npos)
        throw std::runtime_error(path.string() + ": MatrixMarket matrix must be symmetric");

    std::string line;
    int line_no = 1;
    long rows = 0, cols = 0, nnz = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        const auto toks = split_ws(t);
        if (toks.size() != 3)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed size line");
        rows = std::stol(toks[0]);
        cols = std::stol(toks[1]);
        nnz = std::stol(toks[2]);
        break;
    }
    if (rows == 0 || rows != cols)
        throw std::runtime_error(path.string() + ": MatrixMarket matrix must be square");

    std::vector<Edge> edges;
    edges.reserve(nnz);
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        const auto toks = split_ws(t);
        const size_t expected = pattern ? 2 : 3;
        if (toks.size() != expected)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed entry line");
        try {
            Edge e;
            e.u = std::stoi(toks[0]);
            e.v = std::stoi(toks[1]);
            e.w = pattern ? 1.0 : std::stod(toks[2]);
            edges.push_back(e);
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed entry line");
        }
    }
    return build_graph(edges, static_cast<int>(rows), opts);
}

}  // namespace

Graph parse_edgelist(const std::filesystem::path& path, const GraphOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string first;
    if (!std::getline(in, first)) throw std::runtime_error("empty graph: " + path.string());
    if (first.rfind("%%MatrixMarket", 0) == 0) return parse_matrix_market(in, first, path, opts);

    std::vector<Edge> edges;
    int n = 0;
    int line_no = 0;
    std::string line = first;
    do {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto toks = split_ws(t);
        if (toks.size() != 2 && toks.size() != 3)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'u<TAB>v[<TAB>w]'");
        try {
            Edge e;
            e.u = std::stoi(toks[0]);
            e.v = std::stoi(toks[1]);
            e.w = toks.size() == 3 ? std::stod(toks[2]) : 1.0;
            n = std::max({n, e.u, e.v});
            edges.push_back(e);
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed edge line");
        }
    } while (std::getline(in, line));

    if (edges.empty()) throw std::runtime_error("empty graph: " + path.string());
    return build_graph(edges, n, opts);
}

void write_edgelist(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# " << g.size() << " vertices\n";
    char buf[64];
    g.for_each_nonzero([&](int x, int y, double w) {
        if (x > y) return;  // one orientation per edge
        std::snprintf(buf, sizeof buf, "%.17g", w);
        out << (x + 1) << '\t' << (y + 1) << '\t' << buf << '\n';
    });
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

EventMatrix parse_event_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    auto split_csv = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream s(line);
        while (std::getline(s, cell, ',')) out.push_back(trim(cell));
        return out;
    };

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty event matrix: " + path.string());
    const auto header = split_csv(line);
    if (header.size() < 2)
        throw std::runtime_error(path.string() + ": need a timestamp column plus features");
    const int d = static_cast<int>(header.size()) - 1;

    std::vector<std::string> stamps;
    std::vector<std::vector<bool>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != d + 1)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(d + 1) + " columns");
        stamps.push_back(cells[0]);
        std::vector<bool> row(d);
        for (int f = 0; f < d; ++f) {
            const std::string& c = cells[f + 1];
            if (c == "0")
                row[f] = false;
            else if (c == "1")
                row[f] = true;
            else
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": non-binary cell '" + c + "' in column " +
                                         std::to_string(f + 2));
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::runtime_error(path.string() + ": need at least two rows");

    EventMatrix z(static_cast<int>(rows.size()), d);
    for (int t = 0; t < z.rows(); ++t)
        for (int f = 0; f < d; ++f) z.set(t, f, rows[t][f]);
    z.timestamps() = std::move(stamps);
    return z;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_embedding_csv(const Eigen::MatrixXd& coordinates, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "vertex";
    for (int j = 0; j < coordinates.cols(); ++j) out << ",phi_" << (j + 1);
    out << '\n';
    for (int x = 0; x < coordinates.rows(); ++x) {
        out << (x + 1);
        for (int j = 0; j < coordinates.cols(); ++j) out << ',' << format_number(coordinates(x, j));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_spectrum_csv(const Eigen::VectorXd& eigenvalues, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "k,lambda\n";
    for (int j = 0; j < eigenvalues.size(); ++j)
        out << (j + 1) << ',' << format_number(eigenvalues(j)) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_changepoint_report(const ChangePointReport& report, int m, int k, uint64_t seed,
                              const std::filesystem::path& path) {
    nlohmann::json j;
    j["boundaries"] = report.boundaries;
    j["impurity"] = report.impurity;
    j["unstable"] = report.unstable;
    j["labels"] = report.labels;
    j["constant_rows"] = report.constant_rows;
    j["compression_ratio"] = report.compression_ratio;
    j["parameters"] = {{"m", m}, {"k", k}, {"seed", seed}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_plot_svg(const Eigen::VectorXd& series, const std::vector<int>& boundaries,
                    const std::string& title, const std::filesystem::path& path) {
    const int n = static_cast<int>(series.size());
    const double width = 900.0, height = 320.0, margin = 40.0;
    const double lo = series.minCoeff(), hi = series.maxCoeff();
    const double span = hi - lo > 0.0 ? hi - lo : 1.0;
    auto sx = [&](int i) { return margin + (width - 2 * margin) * (n > 1 ? double(i) / (n - 1) : 0.5); };
    auto sy = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / span; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << margin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    for (int b : boundaries) {
        const double x = 0.5 * (sx(std::min(b - 1, n - 1)) + sx(std::min(b, n - 1)));
        out << "<line x1=\"" << x << "\" y1=\"" << margin << "\" x2=\"" << x << "\" y2=\""
            << height - margin << "\" stroke=\"blue\" stroke-dasharray=\"6,4\"/>\n";
    }
    out << "<path fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" d=\"";
    for (int i = 0; i < n; ++i)
        out << (i == 0 ? 'M' : 'L') << format_number(sx(i)) << ' ' << format_number(sy(series(i)));
    out << "\"/>\n</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace grafield::io
