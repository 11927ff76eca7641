#include "grafield/cli.hpp"

#include "grafield/changepoint.hpp"
#include "grafield/io.hpp"
#include "grafield/operators.hpp"
#include "grafield/smoothing.hpp"
#include "grafield/spectral.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace grafield::cli {

namespace fs = std::filesystem;

namespace {

TauChoice parse_tau_spec(const std::string& spec, const Graph& g) {
    try {
        const TauKind kind = parse_tau_kind(spec);
        return resolve_tau(kind, g.size(), g.volume(), g.degrees());
    } catch (const std::runtime_error&) {
        // fall through to a numeric literal
    }
    try {
        size_t pos = 0;
        const double tau = std::stod(spec, &pos);
        if (pos != spec.size() || tau < 0.0) throw std::invalid_argument(spec);
        return TauChoice::fixed(tau);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad --tau value '" + spec +
                                    "' (expected laplace|kt|perks|minimax|stein|<float>)");
    }
}

int resolve_k(int requested, int nontrivial_max) {
    const int k = requested == 0 ? nontrivial_max : requested;
    if (k < 1 || k > nontrivial_max)
        throw std::invalid_argument("--k must lie in 1.." + std::to_string(nontrivial_max));
    return k;
}

/// Drops the deflated trivial pair from an embedding's outputs.
void nontrivial_outputs(const GraphEmbedding& emb, int k, Eigen::VectorXd& lambda,
                        Eigen::MatrixXd& coords) {
    const auto trivial = emb.trivial_index();
    lambda.resize(k);
    coords.resize(emb.n(), k);
    int col = 0;
    for (int j = 0; j < emb.k() && col < k; ++j) {
        if (trivial && *trivial == j) continue;
        lambda(col) = emb.eigenvalues()(j);
        coords.col(col) = emb.coordinates().col(j);
        ++col;
    }
    lambda.conservativeResize(col);
    coords.conservativeResize(Eigen::NoChange, col);
}

void write_embedding_outputs(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& coords,
                             const std::string& title, const fs::path& out) {
    io::write_embedding_csv(coords, out / "embedding.csv");
    io::write_spectrum_csv(lambda, out / "spectrum.csv");
    io::write_plot_svg(coords.col(0), {}, title, out / "plot.svg");
}

int cmd_analyze(const RunConfig& cfg) {
    const Graph g = io::parse_edgelist(cfg.input);
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);

    SpectralOptions opts;
    opts.seed = cfg.seed;

    if (cfg.operator_name == "laplacian" || cfg.operator_name == "modularity") {
        opts.basis = cfg.operator_name == "laplacian" ? BasisKind::BlockPulse
                                                      : BasisKind::Characteristic;
        const int k = resolve_k(cfg.k, g.size() - 1);
        const GraphEmbedding emb = unified_spectral(g, std::min(g.size(), k + 1), opts);
        Eigen::VectorXd lambda;
        Eigen::MatrixXd coords;
        nontrivial_outputs(emb, k, lambda, coords);
        write_embedding_outputs(lambda, coords, cfg.operator_name + " embedding", out);
    } else if (cfg.operator_name == "diffusion") {
        const int k = resolve_k(cfg.k, g.size() - 1);
        const DiffusionCoordinates dc = diffusion_map(g, cfg.t, k, opts);
        io::write_embedding_csv(dc.coords, out / "embedding.csv");
        io::write_spectrum_csv(dc.eigenvalues, out / "spectrum.csv");
        io::write_plot_svg(dc.coords.col(0), {}, "diffusion coordinates t=" + std::to_string(cfg.t),
                           out / "plot.svg");
    } else if (cfg.operator_name == "type1") {
        const TauChoice tau = parse_tau_spec(cfg.tau_spec.empty() ? "laplace" : cfg.tau_spec, g);
        const GMatrix gm = type1_gmatrix(g, tau.resolved_value);
        const int k = resolve_k(cfg.k, g.size());
        const EigenPairs pairs = solve_generalized(gm, k);
        const Eigen::MatrixXd coords = gm.basis().amplitudes().asDiagonal() * pairs.theta;
        write_embedding_outputs(pairs.lambda, coords, "type1 embedding", out);
    } else if (cfg.operator_name == "type2") {
        opts.basis = BasisKind::BlockPulse;
        opts.smoothing = parse_tau_spec(cfg.tau_spec.empty() ? "laplace" : cfg.tau_spec, g);
        const int k = resolve_k(cfg.k, g.size() - 1);
        const GraphEmbedding emb = unified_spectral(g, std::min(g.size(), k + 1), opts);
        Eigen::VectorXd lambda;
        Eigen::MatrixXd coords;
        nontrivial_outputs(emb, k, lambda, coords);
        write_embedding_outputs(lambda, coords, "type2 embedding", out);
    } else if (cfg.operator_name == "pagerank") {
        const VertexDistribution scores = pagerank_scores(g, cfg.alpha);
        std::ofstream f(out / "pagerank.csv");
        if (!f) throw std::runtime_error("cannot write pagerank.csv");
        f << "vertex,score\n";
        for (int x = 0; x < scores.size(); ++x)
            f << (x + 1) << ',' << io::format_number(scores.prob(x)) << '\n';
    } else {
        throw std::invalid_argument("unknown --operator '" + cfg.operator_name + "'");
    }
    return 0;
}

int cmd_embed(const RunConfig& cfg) {
    const Graph g = io::parse_edgelist(cfg.input);
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    if (cfg.m < 1) throw std::invalid_argument("--m is required for embed");

    SpectralOptions opts;
    opts.seed = cfg.seed;
    const int k0 = cfg.k == 0 ? std::min(cfg.m, 2) : cfg.k;
    const GraphEmbedding emb = lp_spectral(g, cfg.m, k0, opts);

    const auto order = emb.singular_order();
    Eigen::MatrixXd coords(emb.n(), emb.k());
    Eigen::VectorXd lambda(emb.k());
    for (int j = 0; j < emb.k(); ++j) {
        coords.col(j) = emb.coordinates().col(order[j]);
        lambda(j) = emb.eigenvalues()(order[j]);
    }
    write_embedding_outputs(lambda, coords, "LP embedding m=" + std::to_string(cfg.m), out);
    std::cout << "compression_ratio," << io::format_number(emb.compression_ratio()) << '\n';
    return 0;
}

int cmd_changepoint(const RunConfig& cfg) {
    const EventMatrix z = io::parse_event_matrix(cfg.input);
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    if (cfg.m < 1) throw std::invalid_argument("--m is required for changepoint");
    const int k = cfg.k == 0 ? 2 : cfg.k;

    SpectralOptions opts;
    opts.seed = cfg.seed;
    const ChangePointReport report = detect_changepoints(z, cfg.m, k, opts);

    io::write_changepoint_report(report, cfg.m, k, cfg.seed, out / "report.json");
    io::write_plot_svg(report.phi1, report.boundaries, "change-point embedding",
                       out / "plot.svg");
    for (int b : report.boundaries) std::cout << "boundary," << b << '\n';
    std::cout << "impurity," << io::format_number(report.impurity) << '\n';
    if (report.unstable) std::cerr << "warning: segmentation unstable (impurity > 0.2)\n";
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    const Graph g = io::parse_edgelist(cfg.input);
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    const int n = g.size();
    const double N = g.volume();
    const TauChoice tau_choice = parse_tau_spec(cfg.tau_spec.empty() ? "laplace" : cfg.tau_spec, g);
    const double tau = tau_choice.resolved_value;

    std::vector<std::pair<std::string, double>> rows;

    // Block-pulse engine vs deflated Laplacian spectrum.
    SpectralOptions opts;
    opts.seed = cfg.seed;
    const GraphEmbedding bpf_emb = unified_spectral(g, n, opts);
    {
        const Eigen::VectorXd sqrt_p = (g.degrees() / N).array().sqrt();
        const Eigen::VectorXd inv_sqrt_d = g.degrees().array().rsqrt();
        Eigen::MatrixXd lstar =
            inv_sqrt_d.asDiagonal() * g.dense_adjacency() * inv_sqrt_d.asDiagonal();
        lstar -= sqrt_p * sqrt_p.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lstar);
        Eigen::VectorXd oracle = es.eigenvalues().reverse();
        rows.emplace_back("bpf_vs_laplacian_star_spectrum",
                          (bpf_emb.eigenvalues() - oracle).cwiseAbs().maxCoeff());
    }

    // Characteristic engine solves the generalized modularity problem.
    {
        SpectralOptions copts = opts;
        copts.basis = BasisKind::Characteristic;
        const GraphEmbedding ch = unified_spectral(g, n, copts);
        const Eigen::MatrixXd b =
            g.dense_adjacency() - g.degrees() * g.degrees().transpose() / N;
        const Eigen::MatrixXd d = g.degrees().asDiagonal();
        const Eigen::MatrixXd resid = b * ch.coefficients() -
                                      d * ch.coefficients() * ch.eigenvalues().asDiagonal();
        rows.emplace_back("char_generalized_modularity_residual", resid.cwiseAbs().maxCoeff());
    }

    // Diffusion identity at t = 1 .. cfg.t.
    {
        const Eigen::VectorXd inv_d = g.degrees().cwiseInverse();
        const Eigen::MatrixXd walk = inv_d.asDiagonal() * g.dense_adjacency();
        Eigen::MatrixXd walk_t = walk;
        const Eigen::MatrixXd phi = bpf_emb.coordinates();
        for (int t = 1; t <= std::max(1, cfg.t); ++t) {
            Eigen::MatrixXd recon = Eigen::MatrixXd::Ones(n, n);
            for (int j = 0; j < bpf_emb.k(); ++j)
                recon += std::pow(bpf_emb.eigenvalues()(j), t) * phi.col(j) * phi.col(j).transpose();
            const Eigen::MatrixXd lhs = N * walk_t * inv_d.asDiagonal();
            rows.emplace_back("diffusion_identity_t" + std::to_string(t),
                              (lhs - recon).cwiseAbs().maxCoeff());
            walk_t = walk_t * walk;
        }
    }

    // Type-I: M_I = ((N + n tau)/N) L_I - v v^T.
    {
        const GMatrix gm = type1_gmatrix(g, tau);
        const OperatorMatrix l1 = reg_laplacian_type1(g, tau);
        const Eigen::VectorXd v = gm.basis().measure().probs().array().sqrt();
        const Eigen::MatrixXd expected = ((N + n * tau) / N) * l1.matrix - v * v.transpose();
        rows.emplace_back("type1_identity", (gm.m() - expected).cwiseAbs().maxCoeff());
    }

    // Type-II: engine G-matrix with full smoothing = L_II - v v^T.
    {
        SpectralOptions sopts = opts;
        sopts.smoothing = TauChoice::fixed(tau);
        const VertexDistribution vd = laplace_smooth_vertex(g.degrees(), N, tau);
        const GraField gf = build_grafield(vd, laplace_smooth_network(g, tau));
        const GMatrix gm = gmatrix(gf, bpf_basis(vd));
        const OperatorMatrix l2 = reg_laplacian_type2(g, tau);
        const Eigen::VectorXd v = vd.probs().array().sqrt();
        const Eigen::MatrixXd expected = l2.matrix - v * v.transpose();
        rows.emplace_back("type2_identity", (gm.m() - expected).cwiseAbs().maxCoeff());
    }

    // Transition smoothing equals D_tau^{-1} A_tau.
    {
        const Eigen::MatrixXd t_tau = smooth_transition(g, tau);
        Eigen::MatrixXd a_tau = g.dense_adjacency();
        a_tau.array() += tau / n;
        const Eigen::VectorXd inv_d_tau = (g.degrees().array() + tau).inverse();
        rows.emplace_back("transition_smoothing_identity",
                          (t_tau - inv_d_tau.asDiagonal() * a_tau).cwiseAbs().maxCoeff());
    }

    // PageRank matrix rows are stochastic.
    {
        const OperatorMatrix pr = pagerank_matrix(g, cfg.alpha);
        rows.emplace_back("pagerank_row_stochastic",
                          (pr.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff());
    }

    std::ofstream f(out / "identities.csv");
    if (!f) throw std::runtime_error("cannot write identities.csv");
    f << "identity,max_abs_residual\n";
    for (const auto& [name, resid] : rows) {
        f << name << ',' << io::format_number(resid) << '\n';
        std::cout << name << ',' << io::format_number(resid) << '\n';
    }
    return 0;
}

int cmd_pagerank(const RunConfig& cfg) {
    RunConfig c = cfg;
    c.operator_name = "pagerank";
    return cmd_analyze(c);
}

}  // namespace

int dispatch(const RunConfig& cfg) {
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "embed") return cmd_embed(cfg);
    if (cfg.command == "changepoint") return cmd_changepoint(cfg);
    if (cfg.command == "compare") return cmd_compare(cfg);
    if (cfg.command == "pagerank") return cmd_pagerank(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

int run(int argc, const char* const* argv) {
    CLI::App app{"spectral graph analysis engine"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool needs_input = true) {
        if (needs_input) sub->add_option("input", cfg.input, "input file")->required();
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "random seed");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "spectral analysis of an edge list");
    add_common(analyze);
    analyze->add_option("--operator", cfg.operator_name,
                        "laplacian|modularity|diffusion|type1|type2|pagerank");
    analyze->add_option("--tau", cfg.tau_spec, "laplace|kt|perks|minimax|stein|<float>");
    analyze->add_option("--alpha", cfg.alpha, "teleportation mass");
    analyze->add_option("--k", cfg.k, "number of eigenpairs (0 = all nontrivial)");
    analyze->add_option("--t", cfg.t, "diffusion time");

    CLI::App* embed = app.add_subcommand("embed", "LP-compressed spectral embedding");
    add_common(embed);
    embed->add_option("--m", cfg.m, "LP basis size")->required();
    embed->add_option("--k", cfg.k, "coordinates to keep");

    CLI::App* changepoint = app.add_subcommand("changepoint", "binary time-series segmentation");
    add_common(changepoint);
    changepoint->add_option("--m", cfg.m, "LP basis size")->required();
    changepoint->add_option("--k", cfg.k, "number of segments");

    CLI::App* compare = app.add_subcommand("compare", "operator identity residuals");
    add_common(compare);
    compare->add_option("--tau", cfg.tau_spec, "laplace|kt|perks|minimax|stein|<float>");
    compare->add_option("--alpha", cfg.alpha, "teleportation mass");
    compare->add_option("--t", cfg.t, "diffusion horizon");

    CLI::App* pagerank = app.add_subcommand("pagerank", "PageRank scores");
    add_common(pagerank);
    pagerank->add_option("--alpha", cfg.alpha, "teleportation mass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (CLI::App* sub : {analyze, embed, changepoint, compare, pagerank})
        if (sub->parsed()) cfg.command = sub->get_name();

    try {
        return dispatch(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace grafield::cli
