#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vmhs/diagnostics.hpp"
#include "vmhs/dynamics.hpp"

namespace vmhs {

struct RelaxationConfig {
    int n = 32;
    VoigtParams params;
    InitialCondition init;
    double t_max = 100.0;
    double sample_interval = 0.05;
    double defect_tolerance = 1e-6;
    double convergence_factor = 100.0;
    std::string output_dir = "out";
    double checkpoint_interval = 0.0;  // 0: final checkpoint only

    void validate() const;
};

enum class Termination { converged, t_max, blowup, numerical_failure };

const char* termination_name(Termination t);

// Defect-minimizing sample of one dyadic window [2^w, 2^{w+1}).
struct DyadicCheckpoint {
    int window = 0;
    double t = 0.0;
    double defect = 0.0;
    DiagnosticsRecord record;
};

struct EquilibriumRecord {
    SpectralVectorField b_infinity;
    SpectralScalarField q_infinity;
    double mhs_residual = 0.0;
    double helicity = 0.0;
    double b_norm_l2 = 0.0;
    double beltrami_alignment = 0.0;
    bool trivial = false;  // vanishing field (and necessarily H = 0)
};

struct RelaxationReport {
    std::vector<DyadicCheckpoint> checkpoints;
    bool converged = false;
    Termination reason = Termination::t_max;
    double t_final = 0.0;
    double defect_initial = 0.0;
    double defect_final = 0.0;
    std::string final_state_path;
    std::string csv_path;
    std::optional<EquilibriumRecord> equilibrium;
    std::string failure_message;
    std::vector<DiagnosticsRecord> series;
};

// ok unless the Voigt energy exceeds (1 + 1e-3) E(0) or any norm is
// non-finite; the energy law forbids genuine growth, so a violation flags
// discrete instability rather than blow-up.
bool blowup_guard_ok(const VoigtState& state, double initial_energy);

// Converged iff the last min(3, count) checkpoint defects are non-increasing
// AND (last <= tolerance OR last <= first / factor). Requires >= 2 checkpoints.
bool detect_convergence(const std::vector<double>& checkpoint_defects, double tolerance,
                        double factor);

// B_infinity = B(final) with its recovered pressure and diagnostic scalars.
// Refuses a non-converged report.
EquilibriumRecord extract_equilibrium(const VoigtState& final_state, bool converged);

enum class RunMode { relax, simulate };

// Long-time integration: steps with stable_dt, samples diagnostics every
// sample_interval, accumulates dissipation by per-step trapezoid, selects the
// defect-minimizing sample of each dyadic window as its checkpoint, and stops
// on convergence / t_max / the blow-up guard / numerical failure. Writes the
// diagnostics CSV, periodic+final state checkpoints, and a key: value report.
// `resume_from` restarts from a saved state; the diagnostics CSV of the
// original run must be present in output_dir.
RelaxationReport run_relaxation(const RelaxationConfig& config, RunMode mode = RunMode::relax,
                                const std::string& resume_from = {});

}  // namespace vmhs
