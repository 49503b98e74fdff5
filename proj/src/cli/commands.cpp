#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <thread>

#include <json.hpp>

#include "pnodal/cli.hpp"
#include "pnodal/error.hpp"
#include "pnodal/reconstruct.hpp"
#include "pnodal/spectrum.hpp"

namespace pnodal {

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

int worker_count(int tasks)
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PNODAL_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) n = v;
    }
    return std::clamp(n, 1, std::max(tasks, 1));
}

namespace {

// Runs job(i) for i in [0, count) on a small pool; results are written by
// index so the output order never depends on scheduling.
void parallel_for(int count, const std::function<void(int)>& job)
{
    const int workers = worker_count(count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) job(i);
        });
    for (auto& t : pool) t.join();
}

struct Outcome {
    std::optional<Mode> mode;
    std::string status = "ok";
};

struct Setup {
    SpTable table;
    CoefficientPair pair;
    SpectrumOptions opts;
};

Setup make_setup(const ExperimentConfig& cfg)
{
    Setup s{build_table(make_parameters(cfg.p, cfg.table_size)), make_pair(cfg.q, cfg.r), {}};
    s.opts.phase.ode_tol = cfg.ode_tol;
    s.opts.root_tol = cfg.root_tol;
    s.opts.seed_variant = cfg.seed_formula_variant;
    return s;
}

std::vector<Outcome> solve_all(const Setup& s, const std::vector<int>& ns)
{
    std::vector<Outcome> out(ns.size());
    parallel_for(static_cast<int>(ns.size()), [&](int i) {
        try {
            out[i].mode = solve_mode(s.table, s.pair, ns[i], s.opts);
        } catch (const Error& e) {
            out[i].status = to_string(e.kind());
            std::replace(out[i].status.begin(), out[i].status.end(), ' ', '_');
            std::cerr << "n = " << ns[i] << ": " << e.what() << "\n";
        }
    });
    return out;
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot write " + (dir / name).string());
    return f;
}

int exit_code(const std::vector<Outcome>& v)
{
    const bool all = std::all_of(v.begin(), v.end(), [](const Outcome& o) { return o.mode.has_value(); });
    return all ? exit_ok : exit_partial;
}

const double nan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

int cmd_eig(const ExperimentConfig& cfg)
{
    const Setup s = make_setup(cfg);
    const auto results = solve_all(s, cfg.n_list);
    const double p = cfg.p;
    auto f = open_out(cfg.output_dir, "eig.csv");
    f << "n,lambda_n,lambda_n_pow_2_over_p,predicted,residual,residual_scaled,status\n";
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        const int n = cfg.n_list[i];
        const double pred = eigenvalue_expansion(s.table.params(), s.pair, n, cfg.seed_formula_variant);
        double lam = nan, k = nan, res = nan, scaled = nan;
        if (results[i].mode) {
            lam = results[i].mode->nodal.lambda_n;
            k = std::pow(lam, 2.0 / p);
            res = k - pred;
            scaled = res * std::pow(static_cast<double>(n), (p + 2.0) / p);
        }
        f << n << "," << format_number(lam) << "," << format_number(k) << "," << format_number(pred) << ","
          << format_number(res) << "," << format_number(scaled) << "," << results[i].status << "\n";
    }
    return exit_code(results);
}

int cmd_nodes(const ExperimentConfig& cfg)
{
    const Setup s = make_setup(cfg);
    const auto results = solve_all(s, cfg.n_list);
    const PParameters& pp = s.table.params();
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        const int n = cfg.n_list[i];
        auto f = open_out(cfg.output_dir, "nodes_n" + std::to_string(n) + ".csv");
        f << "j,x_j_numeric,x_j_predicted,l_j_numeric,l_j_predicted\n";
        if (!results[i].mode) {
            f << "# " << results[i].status << "\n";
            continue;
        }
        const NodalData& nd = results[i].mode->nodal;
        for (int j = 0; j < n; ++j) {
            const double xp = j == 0 ? 0.0 : nodal_point_expansion(pp, s.pair, n, j, cfg.seed_formula_variant);
            const double lp = nodal_length_expansion(pp, s.pair, nd, j, LambdaSource::numeric, cfg.seed_formula_variant);
            f << j << "," << format_number(nd.point(j)) << "," << format_number(xp) << ","
              << format_number(nd.nodal_lengths[j]) << "," << format_number(lp) << "\n";
        }
    }
    return exit_code(results);
}

int cmd_reconstruct(const ExperimentConfig& cfg)
{
    const Setup s = make_setup(cfg);
    const auto results = solve_all(s, cfg.n_list);
    const Eigen::VectorXd grid = midpoint_grid(cfg.grid_size);

    std::vector<std::optional<ReconstructionResult>> recon(cfg.n_list.size());
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (!results[i].mode) continue;
        ReconstructionResult rr = reconstruct_q(s.table.params(), results[i].mode->nodal, cfg.r, grid,
                                                cfg.seed_formula_variant, cfg.root_tol);
        error_metrics(rr, cfg.q);
        recon[i] = std::move(rr);
    }

    nlohmann::json summary;
    summary["p"] = cfg.p;
    summary["q"] = cfg.q.describe();
    summary["r"] = cfg.r.describe();
    summary["variant"] = to_string(cfg.seed_formula_variant);
    summary["runs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        const int n = cfg.n_list[i];
        nlohmann::json run;
        run["n"] = n;
        run["status"] = results[i].status;
        auto f = open_out(cfg.output_dir, "reconstruct_n" + std::to_string(n) + ".csv");
        f << "x,q_hat,q_true,abs_err" << (cfg.ladder ? ",q_extrapolated" : "") << "\n";
        if (!recon[i]) {
            summary["runs"].push_back(run);
            continue;
        }
        const ReconstructionResult& rr = *recon[i];
        std::optional<Eigen::VectorXd> extra;
        if (cfg.ladder && i > 0 && recon[i - 1] && cfg.n_list[i - 1] * 2 == n)
            extra = extrapolate_ladder({*recon[i - 1], rr}).front();
        for (Eigen::Index g = 0; g < grid.size(); ++g) {
            f << format_number(grid[g]) << "," << format_number(rr.q_hat[g]) << "," << format_number(rr.q_true[g])
              << "," << format_number(std::abs(rr.q_hat[g] - rr.q_true[g]));
            if (cfg.ladder) f << "," << format_number(extra ? (*extra)[g] : nan);
            f << "\n";
        }
        run["lambda_n"] = rr.lambda_n;
        run["sup_error"] = rr.sup_error;
        run["l2_error"] = rr.l2_error;
        run["noise_floor"] = rr.noise_floor;
        if (extra) run["extrapolated_sup_error"] = (*extra - rr.q_true).cwiseAbs().maxCoeff();
        summary["runs"].push_back(run);
    }
    auto js = open_out(cfg.output_dir, "reconstruct_summary.json");
    js << summary.dump(2) << "\n";
    return exit_code(results);
}

int cmd_sp_table(const ExperimentConfig& cfg)
{
    const SpTable table = build_table(make_parameters(cfg.p, cfg.table_size));
    const double p = cfg.p;
    const double period = 2.0 * table.params().pi_p;
    auto f = open_out(cfg.output_dir, "sp_table.csv");
    f << "phase,S_p,S_p_prime,identity_residual\n";
    for (int i = 0; i <= cfg.grid_size; ++i) {
        const double phase = period * i / cfg.grid_size;
        const SpPair sv = sp_pair(table, phase);
        const double res = std::pow(std::abs(sv.s), p) + std::pow(std::abs(sv.ds), p) - 1.0;
        f << format_number(phase) << "," << format_number(sv.s) << "," << format_number(sv.ds) << ","
          << format_number(res) << "\n";
    }
    return exit_ok;
}

}  // namespace pnodal
