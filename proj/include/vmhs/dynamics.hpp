#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "vmhs/field.hpp"
#include "vmhs/spectral_ops.hpp"

namespace vmhs {

struct VoigtParams {
    double alpha = 1.0;      // regularization exponent, >= 1
    double nu = 1.0;         // kinematic viscosity, > 0
    double cfl = 0.4;        // advective Courant factor
    double dt_override = 0.0;  // > 0 forces a fixed step

    void validate() const;
};

// Full simulation state: velocity u, magnetic field B, magnetic potential psi
// with curl(psi) = B, at time t.
struct VoigtState {
    SpectralVectorField u;
    SpectralVectorField B;
    SpectralVectorField psi;
    double t = 0.0;
    VoigtParams params;
};

struct StateTendency {
    SpectralVectorField du;
    SpectralVectorField dB;
    SpectralVectorField dpsi;
};

struct InitialCondition {
    enum class Kind { abc, random_solenoidal };
    Kind kind = Kind::abc;
    double abc_a = 1.0, abc_b = 1.0, abc_c = 1.0;
    int spectrum_peak = 3;   // k0 of the random spectrum
    double amplitude = 1.0;  // ||B0||_0 (and ||u0||_0 for random data)
    std::uint64_t seed = 0;
};

// The curl eigenfield (a sin z + c cos y, b sin x + a cos z, c sin y + b cos x),
// assembled directly in coefficient space.
SpectralVectorField abc_field(GridPtr grid, double a, double b, double c);

// Divergence-free random field with spectrum |Bhat(k)|^2 ~ |k|^4 exp(-|k|^2/k0^2),
// normalized to the requested L2 norm. Bit-reproducible for a fixed seed.
SpectralVectorField random_solenoidal_field(GridPtr grid, std::uint64_t seed, int k0,
                                            double amplitude);

// (u0, B0) from an initial-condition description. ABC data uses u0 = 0;
// random data draws u0 then B0 from one seeded stream.
std::pair<SpectralVectorField, SpectralVectorField> make_initial(const InitialCondition& ic,
                                                                 GridPtr grid);

// The unique mean-free solenoidal potential with curl(psi0) = B0:
// psihat = i k x Bhat / |k|^2.
SpectralVectorField init_potential(const SpectralVectorField& B0);

// Projected advection P(v . grad w), computed pseudo-spectrally: transform,
// multiply pointwise, transform back, dealias, project.
SpectralVectorField convective(const SpectralVectorField& v, const SpectralVectorField& w);

// Caches the |k|^{-2 alpha} and viscous multiplier tables for one (grid, params)
// pair. Immutable after construction; safe to share across threads.
class VoigtIntegrator {
public:
    VoigtIntegrator(GridPtr grid, const VoigtParams& params);

    // du = L^{-1} P(B.grad B - u.grad u) + nu L^{-1} Lap u
    // dB = L^{-1} curl(u x B)
    // dpsi = L^{-1} (u x B - mean)
    StateTendency rhs(const VoigtState& state) const;

    VoigtState step(const VoigtState& state, double dt) const;

    double stable_dt(const VoigtState& state) const;

    const VoigtParams& params() const { return params_; }

private:
    GridPtr grid_;
    VoigtParams params_;
    AlignedArray<double> inv_l_;      // |k|^{-2 alpha}, zero at k = 0
    AlignedArray<double> visc_mult_;  // -nu |k|^{2 - 2 alpha}, zero at k = 0
};

// One-shot conveniences over a transient integrator.
StateTendency voigt_rhs(const VoigtState& state);
VoigtState rk4_step(const VoigtState& state, double dt);
double stable_dt(const VoigtState& state);

// Step-size ceiling applied even when the CFL condition allows more.
constexpr double kDefaultDtCap = 1e-2;
constexpr double kMinStableDt = 1e-6;

}  // namespace vmhs
