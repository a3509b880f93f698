#pragma once

#include <array>

#include "vmhs/field.hpp"

namespace vmhs {

// Transforms. Round trips reproduce the input to ~1e-13 relative.
PhysicalScalarField to_physical(const SpectralScalarField& f);
PhysicalVectorField to_physical(const SpectralVectorField& f);
SpectralScalarField to_spectral(const PhysicalScalarField& f);
SpectralVectorField to_spectral(const PhysicalVectorField& f);

// Exact spectral derivatives (multiplier ik per mode).
SpectralVectorField gradient(const SpectralScalarField& f);
SpectralScalarField divergence(const SpectralVectorField& v);
SpectralVectorField curl(const SpectralVectorField& v);

// Orthogonal projection onto divergence-free, mean-free fields:
// vhat <- (Id - k k^T / |k|^2) vhat for k != 0, vhat(0) <- 0.
SpectralVectorField leray_project(const SpectralVectorField& v);

// (-Laplacian)^s as the per-mode multiplier |k|^{2s}. Negative s requires a
// mean-free field; the k = 0 mode stays pinned to zero.
SpectralScalarField fractional_power(const SpectralScalarField& f, double s);
SpectralVectorField fractional_power(const SpectralVectorField& f, double s);

// Homogeneous Sobolev norm: ||f||_s = sqrt((2pi)^3 sum_k |k|^{2s} |fhat|^2),
// so ||f||_0^2 is the physical-space integral of |f|^2 and ||f||_1 = ||grad f||_0.
double sobolev_norm(const SpectralScalarField& f, double s);
double sobolev_norm(const SpectralVectorField& f, double s);

// L^2 inner product (f, g) = integral of f.g over the box, evaluated by
// Parseval with half-spectrum multiplicities.
double l2_inner(const SpectralScalarField& f, const SpectralScalarField& g);
double l2_inner(const SpectralVectorField& f, const SpectralVectorField& g);

// Zero every coefficient outside the 2/3-rule mask. Idempotent.
SpectralScalarField dealias(const SpectralScalarField& f);
SpectralVectorField dealias(const SpectralVectorField& f);

// In-place helpers used by the hot paths and field builders.
void dealias_inplace(SpectralVectorField& f);
void leray_project_inplace(SpectralVectorField& f);
void pin_mean_inplace(SpectralVectorField& f);

// Hermitian-aware mode access for construction and tests: writes/reads the
// coefficient of e^{ik.x} for a signed wavevector k, maintaining the
// conjugate entry inside the kz = 0 and kz = n/2 planes.
void set_mode(SpectralVectorField& f, std::array<int, 3> k, std::array<Complex, 3> value);
void set_mode(SpectralScalarField& f, std::array<int, 3> k, Complex value);
std::array<Complex, 3> get_mode(const SpectralVectorField& f, std::array<int, 3> k);
Complex get_mode(const SpectralScalarField& f, std::array<int, 3> k);

// Largest |value| over the collocation points of the three components.
double max_abs(const PhysicalVectorField& f);

void require_same_grid(const WavenumberGrid& a, const WavenumberGrid& b);

}  // namespace vmhs
