#include "vmhs/grid.hpp"

#include <string>

#include "vmhs/errors.hpp"
#include "vmhs/fft.hpp"

namespace vmhs {

WavenumberGrid::WavenumberGrid(int n)
    : n_(n),
      nz_half_(n / 2 + 1),
      num_modes_(static_cast<std::size_t>(n) * n * (n / 2 + 1)),
      num_points_(static_cast<std::size_t>(n) * n * n),
      signed_k_(n) {
    for (int i = 0; i < n; ++i) signed_k_[i] = (i <= n / 2) ? i : i - n;
    fft_ = std::make_unique<FftEngine>(n);
}

WavenumberGrid::~WavenumberGrid() = default;

const FftEngine& WavenumberGrid::fft() const { return *fft_; }

GridPtr make_grid(int n) {
    if (n % 2 != 0)
        throw ConfigError("grid.n = " + std::to_string(n) + ": mode count must be even");
    if (n < 8 || n > 1024)
        throw ConfigError("grid.n = " + std::to_string(n) + ": must be in [8, 1024]");
    return std::make_shared<const WavenumberGrid>(n);
}

}  // namespace vmhs
