#include <iostream>

#include <CLI11.hpp>

#include "pnodal/cli.hpp"
#include "pnodal/error.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Nodal data and potential reconstruction for the p-Laplacian differential pencil"};
    app.require_subcommand(1);

    std::string config_path, out_dir, variant;
    bool ladder = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--variant", variant, "expansion variant")
            ->check(CLI::IsMember({"printed", "proof-consistent", "proof_consistent"}));
    };
    auto* eig = app.add_subcommand("eig", "eigenvalues and their expansion residuals");
    auto* nodes = app.add_subcommand("nodes", "nodal points and lengths");
    auto* rec = app.add_subcommand("reconstruct", "reconstruct q from nodal lengths");
    auto* spt = app.add_subcommand("sp-table", "generalized sine and cosine over one period");
    for (auto* sub : {eig, nodes, rec, spt}) add_common(sub);
    rec->add_flag("--ladder", ladder, "add first-order extrapolation over doubling n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pnodal::exit_config;
    }

    pnodal::ExperimentConfig cfg;
    try {
        cfg = pnodal::load_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!variant.empty()) cfg.seed_formula_variant = pnodal::variant_from_string(variant);
        if (ladder) cfg.ladder = true;
    } catch (const pnodal::Error& e) {
        std::cerr << e.what() << "\n";
        return pnodal::exit_config;
    }

    try {
        if (*eig) return pnodal::cmd_eig(cfg);
        if (*nodes) return pnodal::cmd_nodes(cfg);
        if (*rec) return pnodal::cmd_reconstruct(cfg);
        return pnodal::cmd_sp_table(cfg);
    } catch (const pnodal::Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == pnodal::ErrorKind::config ? pnodal::exit_config : pnodal::exit_partial;
    }
}
