#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace vmhs {

class FftEngine;

// Fourier lattice for the periodic box [0,2pi]^3 at resolution n per
// dimension. Wavevectors are exact integers. Coefficients live in the
// half-spectrum layout (n, n, n/2+1) with z fastest; Hermitian symmetry
// is implicit, so inverse transforms are real by construction.
class WavenumberGrid {
public:
    explicit WavenumberGrid(int n);
    ~WavenumberGrid();

    WavenumberGrid(const WavenumberGrid&) = delete;
    WavenumberGrid& operator=(const WavenumberGrid&) = delete;

    int n() const { return n_; }
    int nz_half() const { return n_ / 2 + 1; }
    std::size_t num_modes() const { return num_modes_; }
    std::size_t num_points() const { return num_points_; }
    double poincare_lambda() const { return 1.0; }

    // Largest |k_i| kept by the 2/3 rule.
    int dealias_limit() const { return n_ / 3; }

    // Signed wavenumber components from storage indices.
    int kx(int i) const { return signed_k_[i]; }
    int ky(int j) const { return signed_k_[j]; }
    int kz(int k) const { return k; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * nz_half_ + k;
    }

    bool dealias_keep(int i, int j, int k) const {
        return 3 * std::abs(signed_k_[i]) <= n_ && 3 * std::abs(signed_k_[j]) <= n_ &&
               3 * k <= n_;
    }

    // Multiplicity of a stored mode in full-spectrum sums (2 for interior
    // z-planes, 1 for kz = 0 and kz = n/2 which store their own conjugates).
    double hermitian_weight(int k) const { return (k == 0 || 2 * k == n_) ? 1.0 : 2.0; }

    // Storage index of the Hermitian partner (-kx, -ky, kz) within the
    // kz = 0 / kz = n/2 planes.
    std::size_t conjugate_index(int i, int j, int k) const {
        return index(i == 0 ? 0 : n_ - i, j == 0 ? 0 : n_ - j, k);
    }

    const FftEngine& fft() const;

private:
    int n_;
    int nz_half_;
    std::size_t num_modes_;
    std::size_t num_points_;
    std::vector<int> signed_k_;  // index -> signed wavenumber, size n
    mutable std::unique_ptr<FftEngine> fft_;
};

using GridPtr = std::shared_ptr<const WavenumberGrid>;

// Precondition: n even, 8 <= n <= 1024.
GridPtr make_grid(int n);

}  // namespace vmhs
