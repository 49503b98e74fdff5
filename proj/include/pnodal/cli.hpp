#ifndef PNODAL_CLI_HPP
#define PNODAL_CLI_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pnodal/asymptotics.hpp"
#include "pnodal/potentials.hpp"

namespace pnodal {

struct ExperimentConfig {
    double p = 2.0;
    Potential q;
    Potential r;
    std::vector<int> n_list;
    int grid_size = 256;
    double ode_tol = 1e-12;
    double root_tol = 1e-10;
    Variant seed_formula_variant = Variant::printed;
    std::filesystem::path output_dir = "out";
    int table_size = 4096;
    bool ladder = false;
};

// YAML text; `where` names the source in diagnostics and relative CSV paths
// are resolved against `base_dir`. Throws Error(config) with line:column
// and the offending field.
ExperimentConfig parse_config(const std::string& text, const std::string& where = "<config>",
                              const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

// Potential descriptor, e.g. {type: cosine, amplitude: 1, k: 1}; exposed for
// tests.
std::string describe_config(const ExperimentConfig& cfg);

enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_config = 2 };

// Each command writes its files into cfg.output_dir and returns an exit
// code; per-n solver failures are reported in the output and do not abort
// the other indices.
int cmd_eig(const ExperimentConfig& cfg);
int cmd_nodes(const ExperimentConfig& cfg);
int cmd_reconstruct(const ExperimentConfig& cfg);
int cmd_sp_table(const ExperimentConfig& cfg);

// Worker count: PNODAL_THREADS when set (>= 1), otherwise the hardware
// concurrency, never more than `tasks`.
int worker_count(int tasks);

// "%.11e", the fixed CSV number format.
std::string format_number(double v);

}  // namespace pnodal

#endif
