// steerlab: simulator and analytics for incoherent adiabatic steering of a
// multilevel atom by a cyclically modulated squeezed-vacuum reservoir.
//
//   steerlab run    --experiment loop --r 0.5 --xi 1e-3 --out out/
//   steerlab run    --config sweep.json
//   steerlab verify --out out/verify
//
// Outputs <out>/results.csv and <out>/report.json. `verify` runs the full
// acceptance grid and exits nonzero on any failed criterion.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "steerlab/cli.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string experiment;
    std::optional<double> r;
    std::optional<double> r2;
    std::optional<double> xi;
    std::string xi_range;
    std::optional<double> phi0;
    std::string frame;
    std::optional<std::int64_t> stride;
    std::optional<std::int64_t> steps_per_period;
    std::optional<std::int64_t> berry_steps;
    std::string out_dir;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (flags override it)");
    cmd->add_option("--out", f.out_dir, "output directory (default: out)");
    cmd->add_option("--steps-per-period", f.steps_per_period,
                    "override the integration step count per drive period");
}

void add_run_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--experiment", f.experiment,
                    "loop | sweep | berry | fivelevel | polarization | verify");
    cmd->add_option("--r", f.r, "squeezing amplitude (r1 for fivelevel/polarization)");
    cmd->add_option("--r2", f.r2, "second squeezing amplitude");
    cmd->add_option("--xi", f.xi, "adiabatic parameter phi_rate/Gamma");
    cmd->add_option("--xi-range", f.xi_range, "geometric xi range start:stop:factor");
    cmd->add_option("--phi0", f.phi0, "initial squeezing phase (radians)");
    cmd->add_option("--frame", f.frame, "integration frame: lab | rotating");
    cmd->add_option("--stride", f.stride, "integration steps between trajectory records");
    cmd->add_option("--berry-steps", f.berry_steps, "loop discretization for the berry oracle");
}

steerlab::cli::ExperimentConfig assemble(const Flags& f, bool force_verify) {
    using steerlab::cli::ExperimentConfig;
    ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = steerlab::cli::load_config_file(f.config_path);
    if (!f.experiment.empty())
        cfg.experiment = steerlab::cli::experiment_from_string(f.experiment);
    if (force_verify) cfg.experiment = steerlab::cli::ExperimentKind::Verify;
    if (f.r) cfg.r = f.r;
    if (f.r2) cfg.r2 = f.r2;
    if (f.xi) cfg.xi = {*f.xi};
    if (!f.xi_range.empty()) {
        std::vector<double> expanded;
        const std::string err = steerlab::cli::parse_xi_range_spec(f.xi_range, expanded);
        if (!err.empty()) throw std::invalid_argument(err);
        cfg.xi = expanded;
    }
    if (f.phi0) cfg.phi0 = *f.phi0;
    if (!f.frame.empty()) cfg.frame = steerlab::cli::frame_from_string(f.frame);
    if (f.stride) cfg.stride = f.stride;
    if (f.steps_per_period) cfg.steps_per_period = f.steps_per_period;
    if (f.berry_steps) cfg.berry_steps = *f.berry_steps;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    steerlab::cli::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incoherent adiabatic steering simulator"};
    app.require_subcommand(1);

    Flags run_flags;
    auto* run_cmd = app.add_subcommand("run", "run a configured experiment");
    add_common_flags(run_cmd, run_flags);
    add_run_flags(run_cmd, run_flags);

    Flags verify_flags;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    add_common_flags(verify_cmd, verify_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = assemble(run_flags, false);
            return steerlab::cli::run_experiment(cfg, std::cout);
        }
        const auto cfg = assemble(verify_flags, true);
        return steerlab::cli::run_experiment(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "steerlab: " << e.what() << "\n";
        return 2;
    }
}
