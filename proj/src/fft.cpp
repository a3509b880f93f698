#include "vmhs/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "parallel.hpp"

namespace vmhs {

namespace detail {

void* aligned_alloc_bytes(std::size_t bytes) { return fftw_malloc(bytes); }
void aligned_free_bytes(void* p) { fftw_free(p); }

}  // namespace detail

namespace {
// The FFTW planner is not reentrant; plan creation goes through one mutex.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftEngine::FftEngine(int n)
    : n_(n),
      num_modes_(static_cast<std::size_t>(n) * n * (n / 2 + 1)),
      num_points_(static_cast<std::size_t>(n) * n * n),
      scale_(1.0 / (static_cast<double>(n) * n * n)) {
    AlignedArray<double> real_proto(num_points_);
    AlignedArray<Complex> cplx_proto(num_modes_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_r2c_ = fftw_plan_dft_r2c_3d(n, n, n, real_proto.data(),
                                     reinterpret_cast<fftw_complex*>(cplx_proto.data()),
                                     FFTW_ESTIMATE);
    plan_c2r_ = fftw_plan_dft_c2r_3d(n, n, n,
                                     reinterpret_cast<fftw_complex*>(cplx_proto.data()),
                                     real_proto.data(), FFTW_ESTIMATE);
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

void FftEngine::forward(const double* in, Complex* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    const double s = scale_;
    for (std::size_t i = 0; i < num_modes_; ++i) out[i] *= s;
}

void FftEngine::inverse(const Complex* in, double* out, Complex* scratch) const {
    // The multi-dimensional c2r transform consumes its input.
    std::memcpy(scratch, in, num_modes_ * sizeof(Complex));
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                         reinterpret_cast<fftw_complex*>(scratch), out);
}

void FftEngine::inverse(const Complex* in, double* out) const {
    AlignedArray<Complex> scratch(num_modes_);
    inverse(in, out, scratch.data());
}

}  // namespace vmhs
