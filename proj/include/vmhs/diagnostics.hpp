#pragma once

#include <vector>

#include "vmhs/dynamics.hpp"

namespace vmhs {

// One sampled row of every conserved/decaying quantity. Column order of the
// CSV serialization is fixed (see diagnostics_csv.hpp).
struct DiagnosticsRecord {
    double t = 0.0;
    double e_u_alpha = 0.0;         // ||u||_alpha^2
    double e_b_alpha = 0.0;         // ||B||_alpha^2
    double dissipation_cum = 0.0;   // 2 nu int_0^t ||grad u||_0^2 ds
    double energy_defect = 0.0;     // |E + D - E(0)| / E(0)
    double helicity = 0.0;          // int B . L psi dx
    double helicity_drift = 0.0;    // |H - H(0)| / max(|H(0)|, eps)
    double u_h1 = 0.0;              // ||u||_1
    double dtu_alpha = 0.0;         // ||du/dt||_alpha
    double mhs_residual = 0.0;      // ||P(B.grad B)||_0
    double pressure_residual = 0.0;  // ||B.grad B - grad q||_0
    double potential_consistency = 0.0;  // ||curl psi - B||_0 / max(||B||_0, eps)
    double beltrami_alignment = 0.0;     // ||J x B||_0 / ||(|J||B|)||_0, -1 when undefined
    double div_psi_norm = 0.0;           // ||div psi||_0
};

// Guard for normalized quantities; sentinel for undefined alignment.
constexpr double kNormGuard = 1e-300;
constexpr double kAlignmentSentinel = -1.0;

// (||u||_alpha^2, ||B||_alpha^2).
std::pair<double, double> voigt_energy(const VoigtState& state);

// H[B] = (B, L psi) with L = (-Lap)^alpha.
double modified_helicity(const VoigtState& state);

// ||P(B.grad B)||_0 for solenoidal B.
double mhs_residual(const SpectralVectorField& B);

// Solve Lap q = div(B.grad B) spectrally (mean of q pinned to zero) and
// return the defect ||B.grad B - grad q||_0, which equals the projected
// residual by the Helmholtz decomposition.
std::pair<SpectralScalarField, double> pressure_recover(const SpectralVectorField& B);

// ||curl psi - B||_0 / max(||B||_0, guard).
double potential_consistency(const VoigtState& state);

// ||du/dt||_alpha + ||u||_1; the decaying quantity that drives equilibrium
// extraction. The overload taking a tendency reuses a precomputed rhs.
double equilibrium_defect(const VoigtState& state);
double equilibrium_defect(const VoigtState& state, const StateTendency& tendency);

// Pointwise misalignment of J = curl B and B in [0, 1]; 0 means Beltrami-like.
// Returns kAlignmentSentinel for a vanishing field.
double beltrami_alignment(const SpectralVectorField& B);

// Fills every field of a record. `tendency` must be rhs(state);
// `dissipation_cum` is the externally accumulated dissipation integral;
// e0/h0 are the t = 0 references (pass e0 <= 0 to skip defect/drift).
DiagnosticsRecord compute_record(const VoigtState& state, const StateTendency& tendency,
                                 double dissipation_cum, double e0, double h0);

struct EnergyBalance {
    double max_defect = 0.0;           // max_t |E(t) + D(t) - E(0)| / E(0)
    double max_energy_increase = 0.0;  // worst positive jump of E + D between samples, / E(0)
};

// Balance audit over a sampled trajectory. Uses the records' dissipation_cum
// column when populated (>= 0); otherwise rebuilds it by composite trapezoid
// on the sampled u_h1^2 column.
EnergyBalance energy_balance_defect(const std::vector<DiagnosticsRecord>& series, double nu);

}  // namespace vmhs
