#pragma once

#include <cstddef>

#include "vmhs/aligned.hpp"

namespace vmhs {

// FFTW plans for one cubic grid. Plans are created once with FFTW_ESTIMATE
// (measured planning picks algorithms non-deterministically between runs,
// which would break byte-identical reruns) and executed through the
// new-array interface, which is safe to call concurrently on distinct
// buffers.
class FftEngine {
public:
    explicit FftEngine(int n);
    ~FftEngine();

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    // Physical values -> Fourier coefficients of f(x) = sum_k fhat(k) e^{ikx};
    // includes the 1/n^3 normalization. Input is preserved.
    void forward(const double* in, Complex* out) const;

    // Coefficients -> physical values. `scratch` must hold num_modes()
    // complex entries; the c2r transform consumes it.
    void inverse(const Complex* in, double* out, Complex* scratch) const;

    // Variant that fills the scratch buffer itself (convenience for cold paths).
    void inverse(const Complex* in, double* out) const;

    std::size_t num_modes() const { return num_modes_; }
    std::size_t num_points() const { return num_points_; }

private:
    int n_;
    std::size_t num_modes_;
    std::size_t num_points_;
    double scale_;
    void* plan_r2c_ = nullptr;
    void* plan_c2r_ = nullptr;
};

}  // namespace vmhs
