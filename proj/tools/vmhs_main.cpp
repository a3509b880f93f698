#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <variant>

#include "vmhs/checkpoint.hpp"
#include "vmhs/config.hpp"
#include "vmhs/diagnostics_csv.hpp"
#include "vmhs/errors.hpp"
#include "vmhs/growth.hpp"
#include "vmhs/relaxation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 2;
constexpr int kExitNumericalFailure = 3;
constexpr int kExitUsage = 64;

vmhs::RelaxationConfig load_relaxation_config(const std::string& path) {
    auto cfg = vmhs::parse_config(path);
    if (!std::holds_alternative<vmhs::RelaxationConfig>(cfg))
        throw vmhs::ConfigError(path + ": expected a relaxation config, found a [growth] campaign");
    return std::get<vmhs::RelaxationConfig>(cfg);
}

int run_campaign(const std::string& config_path, const std::string& resume,
                 vmhs::RunMode mode) {
    const vmhs::RelaxationConfig cfg = load_relaxation_config(config_path);
    const vmhs::RelaxationReport report = vmhs::run_relaxation(cfg, mode, resume);

    std::cout << "termination: " << vmhs::termination_name(report.reason) << "\n"
              << "t_final: " << report.t_final << "\n"
              << "defect_initial: " << report.defect_initial << "\n"
              << "defect_final: " << report.defect_final << "\n"
              << "csv: " << report.csv_path << "\n";
    if (!report.final_state_path.empty())
        std::cout << "final_state: " << report.final_state_path << "\n";
    if (report.equilibrium) {
        std::cout << "equilibrium.mhs_residual: " << report.equilibrium->mhs_residual << "\n"
                  << "equilibrium.helicity: " << report.equilibrium->helicity << "\n"
                  << "equilibrium.b_norm_l2: " << report.equilibrium->b_norm_l2 << "\n"
                  << "equilibrium.trivial: " << (report.equilibrium->trivial ? "true" : "false")
                  << "\n";
    }
    if (!report.failure_message.empty())
        std::cerr << "failure: " << report.failure_message << "\n";

    switch (report.reason) {
        case vmhs::Termination::converged:
            return kExitOk;
        case vmhs::Termination::t_max:
            return mode == vmhs::RunMode::relax ? kExitNoConvergence : kExitOk;
        default:
            return kExitNumericalFailure;
    }
}

int run_growth(vmhs::growth::GrowthConfig cfg, const std::string& output_dir) {
    using vmhs::growth::GrowthConfig;
    std::filesystem::create_directories(output_dir);
    const bool reduced = cfg.model == GrowthConfig::Model::reduced1d;
    const vmhs::growth::GrowthSeries series =
        reduced ? vmhs::growth::run_reduced_1d(cfg) : vmhs::growth::run_cellular_2d(cfg);
    const std::string csv = (std::filesystem::path(output_dir) /
                             (reduced ? "growth_reduced1d.csv" : "growth_cellular2d.csv"))
                                .string();
    vmhs::growth::write_growth_csv(series, csv);
    const vmhs::growth::GrowthFit fit =
        vmhs::growth::fit_growth_rate(series, cfg.fit_lo, cfg.fit_hi);
    std::printf("fit: model=%s rate=%.6f prefactor=%.6f r2=%.8f window=[%g,%g] csv=%s\n",
                reduced ? "reduced1d" : "cellular2d", fit.rate, fit.prefactor, fit.r_squared,
                cfg.fit_lo, cfg.fit_hi, csv.c_str());
    if (series.truncated)
        std::printf("note: series truncated at t=%.6f (resolution horizon)\n",
                    series.truncated_at);
    return kExitOk;
}

int run_diagnose(const std::string& checkpoint) {
    const vmhs::VoigtState state = vmhs::load_checkpoint(checkpoint);
    const vmhs::StateTendency tend = vmhs::voigt_rhs(state);
    // No trajectory history: defect/drift columns are reported as zero.
    const vmhs::DiagnosticsRecord rec = vmhs::compute_record(state, tend, 0.0, 0.0, 0.0);
    std::cout << vmhs::kDiagnosticsCsvHeader << "\n"
              << vmhs::format_diagnostics_row(rec) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Voigt-regularized MHD relaxation toward magnetohydrostatic equilibria"};
    app.require_subcommand(1);

    std::string config_path, resume_path, checkpoint, output_dir = "out";

    auto* relax = app.add_subcommand("relax", "relax toward an equilibrium");
    relax->add_option("--config", config_path, "config file")->required();
    relax->add_option("--resume", resume_path, "checkpoint to resume from");

    auto* simulate = app.add_subcommand("simulate", "fixed-horizon integration");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--resume", resume_path, "checkpoint to resume from");

    auto* growth_cmd = app.add_subcommand("growth", "ideal-MHD gradient-growth example");
    std::string model = "reduced1d", growth_config;
    vmhs::growth::GrowthConfig gcfg;
    growth_cmd->add_option("--config", growth_config, "config file with a [growth] section");
    growth_cmd->add_option("--model", model, "reduced1d | cellular2d");
    growth_cmd->add_option("--n", gcfg.n, "grid resolution");
    growth_cmd->add_option("--t-max", gcfg.t_max, "final time");
    growth_cmd->add_option("--dt", gcfg.dt, "time step");
    growth_cmd->add_option("--fit-lo", gcfg.fit_lo, "fit window start");
    growth_cmd->add_option("--fit-hi", gcfg.fit_hi, "fit window end");
    growth_cmd->add_option("--output", output_dir, "output directory");

    auto* diagnose = app.add_subcommand("diagnose", "print diagnostics of a checkpoint");
    diagnose->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (relax->parsed()) return run_campaign(config_path, resume_path, vmhs::RunMode::relax);
        if (simulate->parsed())
            return run_campaign(config_path, resume_path, vmhs::RunMode::simulate);
        if (growth_cmd->parsed()) {
            if (!growth_config.empty()) {
                auto cfg = vmhs::parse_config(growth_config);
                if (!std::holds_alternative<vmhs::growth::GrowthConfig>(cfg))
                    throw vmhs::ConfigError(growth_config + ": expected a [growth] section");
                gcfg = std::get<vmhs::growth::GrowthConfig>(cfg);
            } else {
                if (model == "reduced1d")
                    gcfg.model = vmhs::growth::GrowthConfig::Model::reduced1d;
                else if (model == "cellular2d")
                    gcfg.model = vmhs::growth::GrowthConfig::Model::cellular2d;
                else
                    throw vmhs::ConfigError("--model must be reduced1d or cellular2d, got '" +
                                            model + "'");
                gcfg.validate();
            }
            return run_growth(gcfg, output_dir);
        }
        if (diagnose->parsed()) return run_diagnose(checkpoint);
    } catch (const vmhs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const vmhs::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const vmhs::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
    return kExitUsage;
}
