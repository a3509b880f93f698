#pragma once

#include <array>

#include "vmhs/aligned.hpp"
#include "vmhs/grid.hpp"

namespace vmhs {

// Scalar field as half-spectrum Fourier coefficients.
class SpectralScalarField {
public:
    SpectralScalarField() = default;
    explicit SpectralScalarField(GridPtr grid)
        : grid_(std::move(grid)), data_(grid_->num_modes()) {}

    const WavenumberGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool mean_free = false;

private:
    GridPtr grid_;
    AlignedArray<Complex> data_;
};

// Three-component field as half-spectrum Fourier coefficients, stored
// component-major in one contiguous block.
class SpectralVectorField {
public:
    SpectralVectorField() = default;
    explicit SpectralVectorField(GridPtr grid)
        : grid_(std::move(grid)), data_(3 * grid_->num_modes()) {}

    const WavenumberGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

    Complex* component(int c) { return data_.data() + c * grid_->num_modes(); }
    const Complex* component(int c) const { return data_.data() + c * grid_->num_modes(); }
    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool solenoidal = false;
    bool mean_free = false;

private:
    GridPtr grid_;
    AlignedArray<Complex> data_;
};

// Scalar field as grid-point values on the n^3 collocation lattice.
class PhysicalScalarField {
public:
    PhysicalScalarField() = default;
    explicit PhysicalScalarField(GridPtr grid)
        : grid_(std::move(grid)), data_(grid_->num_points()) {}

    const WavenumberGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

private:
    GridPtr grid_;
    AlignedArray<double> data_;
};

// Three-component field as grid-point values.
class PhysicalVectorField {
public:
    PhysicalVectorField() = default;
    explicit PhysicalVectorField(GridPtr grid)
        : grid_(std::move(grid)), data_(3 * grid_->num_points()) {}

    const WavenumberGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    double* component(int c) { return data_.data() + c * grid_->num_points(); }
    const double* component(int c) const { return data_.data() + c * grid_->num_points(); }
    std::size_t size() const { return data_.size(); }

private:
    GridPtr grid_;
    AlignedArray<double> data_;
};

}  // namespace vmhs
