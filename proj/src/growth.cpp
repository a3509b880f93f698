#include "vmhs/growth.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <vector>

#include "vmhs/aligned.hpp"
#include "vmhs/errors.hpp"

namespace vmhs::growth {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 6.283185307179586;

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

// Cutoff of the linear core: identity up to pi/2, zero from 15 pi/16 on.
double chi_window(double r) {
    constexpr double r0 = kPi / 2.0;
    constexpr double r1 = kPi * 15.0 / 16.0;
    return 1.0 - smooth_step((r - r0) / (r1 - r0));
}

double wrap_to_pi(double y) {
    y = std::remainder(y, kTwoPi);
    return y;
}

}  // namespace

double chi_profile(double y) {
    const double yw = wrap_to_pi(y);
    return yw * chi_window(std::abs(yw));
}

double characteristic_map(double a, double t) {
    if (!(std::abs(a) < kPi))
        throw std::domain_error("characteristic map requires |a| < pi (separatrix at |a| = pi)");
    return 2.0 * std::atan(std::tan(0.5 * a) * std::exp(-t));
}

double characteristic_label(double y, double t) {
    if (!(std::abs(y) < kPi))
        throw std::domain_error("characteristic label requires |y| < pi");
    return 2.0 * std::atan(std::tan(0.5 * y) * std::exp(t));
}

void GrowthConfig::validate() const {
    if (n < 64) throw ConfigError("growth.n must be >= 64");
    if (n % 2 != 0) throw ConfigError("growth.n must be even");
    if (!(t_max > 0.0)) throw ConfigError("growth.t_max must be positive");
    if (!(dt > 0.0)) throw ConfigError("growth.dt must be positive");
    if (!(fit_lo > 0.0 && fit_lo < fit_hi && fit_hi <= t_max))
        throw ConfigError("growth fit window must satisfy 0 < fit_lo < fit_hi <= t_max");
}

// ---------------------------------------------------------------------------
// 1-D pseudo-spectral transport on [0, 2pi)

namespace {

class Fft1D {
public:
    explicit Fft1D(int n) : n_(n), nh_(n / 2 + 1), scale_(1.0 / n) {
        AlignedArray<double> rp(n_);
        AlignedArray<Complex> cp(nh_);
        r2c_ = fftw_plan_dft_r2c_1d(n_, rp.data(), reinterpret_cast<fftw_complex*>(cp.data()),
                                    FFTW_ESTIMATE);
        c2r_ = fftw_plan_dft_c2r_1d(n_, reinterpret_cast<fftw_complex*>(cp.data()), rp.data(),
                                    FFTW_ESTIMATE);
    }
    ~Fft1D() {
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
    }
    void forward(const double* in, Complex* out) const {
        fftw_execute_dft_r2c(r2c_, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
        for (int k = 0; k < nh_; ++k) out[k] *= scale_;
    }
    void inverse(const Complex* in, double* out, Complex* scratch) const {
        std::copy(in, in + nh_, scratch);
        fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(scratch), out);
    }

private:
    int n_, nh_;
    double scale_;
    fftw_plan r2c_, c2r_;
};

struct Series1DState {
    int n;
    Fft1D fft;
    std::vector<double> sin_y;
    AlignedArray<double> work_d;   // derivative values
    AlignedArray<double> work_r;   // rhs values
    AlignedArray<Complex> scratch;

    explicit Series1DState(int n_) : n(n_), fft(n_), sin_y(n_), work_d(n_), work_r(n_),
                                     scratch(n_ / 2 + 1) {
        for (int j = 0; j < n; ++j) sin_y[j] = std::sin(kTwoPi * j / n);
    }

    // dB/dt = sin(y) dB/dy, dealiased
    void rhs(const Complex* bhat, Complex* out) {
        const int nh = n / 2 + 1;
        for (int k = 0; k < nh; ++k) scratch[k] = Complex(0.0, k) * bhat[k];
        fft.inverse(scratch.data(), work_d.data(), scratch.data());
        for (int j = 0; j < n; ++j) work_r[j] = sin_y[j] * work_d[j];
        fft.forward(work_r.data(), out);
        for (int k = 0; k < nh; ++k)
            if (3 * k > n) out[k] = 0.0;
    }

    void gradient(const Complex* bhat, double* out) {
        const int nh = n / 2 + 1;
        for (int k = 0; k < nh; ++k) scratch[k] = Complex(0.0, k) * bhat[k];
        fft.inverse(scratch.data(), out, scratch.data());
    }
};

GrowthSample sample_1d(Series1DState& s, const Complex* bhat, double t, double chi_max_now) {
    s.gradient(bhat, s.work_d.data());
    double gmax = 0.0;
    for (int j = 0; j < s.n; ++j) gmax = std::max(gmax, std::abs(s.work_d[j]));
    const double axis = std::abs(s.work_d[0]);
    GrowthSample sample;
    sample.t = t;
    sample.axis_gradient = axis;
    sample.global_gradient = gmax;
    // Effective wavenumber of the sharpest feature; past n/4 the grid can no
    // longer represent it faithfully.
    sample.aliased = gmax > 0.25 * s.n * std::max(chi_max_now, 1e-30);
    return sample;
}

}  // namespace

GrowthSeries run_reduced_1d(const GrowthConfig& config) {
    config.validate();
    const int n = config.n;
    const int nh = n / 2 + 1;
    Series1DState s(n);

    AlignedArray<double> b0(n);
    double chi_max = 0.0;
    for (int j = 0; j < n; ++j) {
        b0[j] = chi_profile(kTwoPi * j / n);
        chi_max = std::max(chi_max, std::abs(b0[j]));
    }
    AlignedArray<Complex> bhat(nh);
    s.fft.forward(b0.data(), bhat.data());
    for (int k = 0; k < nh; ++k)
        if (3 * k > n) bhat[k] = 0.0;

    GrowthSeries series;
    series.chi_max = chi_max;
    AlignedArray<Complex> k1(nh), k2(nh), k3(nh), k4(nh), stage(nh);
    const double dt = config.dt;
    const long long steps = std::llround(config.t_max / dt);

    for (long long step = 0; step <= steps; ++step) {
        const double t = step * dt;
        GrowthSample sample = sample_1d(s, bhat.data(), t, chi_max);
        series.samples.push_back(sample);
        if (sample.aliased) {
            series.truncated = true;
            series.truncated_at = t;
            break;
        }
        if (step == steps) break;

        s.rhs(bhat.data(), k1.data());
        for (int k = 0; k < nh; ++k) stage[k] = bhat[k] + 0.5 * dt * k1[k];
        s.rhs(stage.data(), k2.data());
        for (int k = 0; k < nh; ++k) stage[k] = bhat[k] + 0.5 * dt * k2[k];
        s.rhs(stage.data(), k3.data());
        for (int k = 0; k < nh; ++k) stage[k] = bhat[k] + dt * k3[k];
        s.rhs(stage.data(), k4.data());
        for (int k = 0; k < nh; ++k)
            bhat[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    return series;
}

// ---------------------------------------------------------------------------
// 2-D cellular transport on [0, 2pi)^2

namespace {

class Fft2D {
public:
    explicit Fft2D(int n) : n_(n), nh_(n / 2 + 1), scale_(1.0 / (static_cast<double>(n) * n)) {
        AlignedArray<double> rp(static_cast<std::size_t>(n_) * n_);
        AlignedArray<Complex> cp(static_cast<std::size_t>(n_) * nh_);
        r2c_ = fftw_plan_dft_r2c_2d(n_, n_, rp.data(),
                                    reinterpret_cast<fftw_complex*>(cp.data()), FFTW_ESTIMATE);
        c2r_ = fftw_plan_dft_c2r_2d(n_, n_, reinterpret_cast<fftw_complex*>(cp.data()),
                                    rp.data(), FFTW_ESTIMATE);
    }
    ~Fft2D() {
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
    }
    std::size_t modes() const { return static_cast<std::size_t>(n_) * nh_; }
    std::size_t points() const { return static_cast<std::size_t>(n_) * n_; }
    void forward(const double* in, Complex* out) const {
        fftw_execute_dft_r2c(r2c_, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
        const std::size_t m = modes();
        for (std::size_t k = 0; k < m; ++k) out[k] *= scale_;
    }
    void inverse(const Complex* in, double* out, Complex* scratch) const {
        std::copy(in, in + modes(), scratch);
        fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(scratch), out);
    }
    int signed_kx(int i) const { return i <= n_ / 2 ? i : i - n_; }

private:
    int n_, nh_;
    double scale_;
    fftw_plan r2c_, c2r_;
};

// Stream function sin(x) sin(y): velocity (sin x cos y, -cos x sin y), steady
// and divergence-free; the axis x = 0 is invariant and reduces to the 1-D model.
struct Cellular2D {
    int n, nh;
    Fft2D fft;
    std::vector<double> u1, u2;
    AlignedArray<double> dx_phys, dy_phys, rhs_phys;
    AlignedArray<Complex> scratch;

    explicit Cellular2D(int n_)
        : n(n_), nh(n_ / 2 + 1), fft(n_), u1(fft.points()), u2(fft.points()),
          dx_phys(fft.points()), dy_phys(fft.points()), rhs_phys(fft.points()),
          scratch(fft.modes()) {
        for (int i = 0; i < n; ++i) {
            const double x = kTwoPi * i / n;
            for (int j = 0; j < n; ++j) {
                const double y = kTwoPi * j / n;
                u1[static_cast<std::size_t>(i) * n + j] = std::sin(x) * std::cos(y);
                u2[static_cast<std::size_t>(i) * n + j] = -std::cos(x) * std::sin(y);
            }
        }
    }

    void derivatives(const Complex* bhat) {
        for (int i = 0; i < n; ++i) {
            const double kx = fft.signed_kx(i);
            for (int k = 0; k < nh; ++k)
                scratch[static_cast<std::size_t>(i) * nh + k] =
                    Complex(0.0, kx) * bhat[static_cast<std::size_t>(i) * nh + k];
        }
        fft.inverse(scratch.data(), dx_phys.data(), scratch.data());
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < nh; ++k)
                scratch[static_cast<std::size_t>(i) * nh + k] =
                    Complex(0.0, k) * bhat[static_cast<std::size_t>(i) * nh + k];
        fft.inverse(scratch.data(), dy_phys.data(), scratch.data());
    }

    // dB/dt = -(u . grad B), dealiased
    void rhs(const Complex* bhat, Complex* out) {
        derivatives(bhat);
        const std::size_t npts = fft.points();
        for (std::size_t p = 0; p < npts; ++p)
            rhs_phys[p] = -(u1[p] * dx_phys[p] + u2[p] * dy_phys[p]);
        fft.forward(rhs_phys.data(), out);
        for (int i = 0; i < n; ++i) {
            const int kx = fft.signed_kx(i);
            for (int k = 0; k < nh; ++k)
                if (3 * std::abs(kx) > n || 3 * k > n)
                    out[static_cast<std::size_t>(i) * nh + k] = 0.0;
        }
    }
};

}  // namespace

GrowthSeries run_cellular_2d(const GrowthConfig& config) {
    config.validate();
    const int n = config.n;
    Cellular2D s(n);
    const std::size_t nmodes = s.fft.modes();

    AlignedArray<double> b0(s.fft.points());
    double chi_max = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = chi_profile(kTwoPi * j / n);
            b0[static_cast<std::size_t>(i) * n + j] = v;
            chi_max = std::max(chi_max, std::abs(v));
        }
    AlignedArray<Complex> bhat(nmodes);
    s.fft.forward(b0.data(), bhat.data());
    for (int i = 0; i < n; ++i) {
        const int kx = s.fft.signed_kx(i);
        for (int k = 0; k < s.nh; ++k)
            if (3 * std::abs(kx) > n || 3 * k > n)
                bhat[static_cast<std::size_t>(i) * s.nh + k] = 0.0;
    }

    GrowthSeries series;
    series.chi_max = chi_max;
    AlignedArray<Complex> k1(nmodes), k2(nmodes), k3(nmodes), k4(nmodes), stage(nmodes);
    const double dt = config.dt;
    const long long steps = std::llround(config.t_max / dt);

    for (long long step = 0; step <= steps; ++step) {
        const double t = step * dt;

        s.derivatives(bhat.data());
        double gmax2 = 0.0, bmax = 0.0;
        const std::size_t npts = s.fft.points();
        for (std::size_t p = 0; p < npts; ++p)
            gmax2 = std::max(gmax2,
                             s.dx_phys[p] * s.dx_phys[p] + s.dy_phys[p] * s.dy_phys[p]);
        {
            AlignedArray<double> bnow(npts);
            s.fft.inverse(bhat.data(), bnow.data(), s.scratch.data());
            for (std::size_t p = 0; p < npts; ++p) bmax = std::max(bmax, std::abs(bnow[p]));
        }
        GrowthSample sample;
        sample.t = t;
        sample.axis_gradient = std::abs(s.dy_phys[0]);  // point (x, y) = (0, 0)
        sample.global_gradient = std::sqrt(gmax2);
        sample.aliased = sample.global_gradient > 0.25 * n * std::max(bmax, 1e-30);
        series.samples.push_back(sample);
        if (sample.aliased) {
            series.truncated = true;
            series.truncated_at = t;
            break;
        }
        if (step == steps) break;

        s.rhs(bhat.data(), k1.data());
        for (std::size_t k = 0; k < nmodes; ++k) stage[k] = bhat[k] + 0.5 * dt * k1[k];
        s.rhs(stage.data(), k2.data());
        for (std::size_t k = 0; k < nmodes; ++k) stage[k] = bhat[k] + 0.5 * dt * k2[k];
        s.rhs(stage.data(), k3.data());
        for (std::size_t k = 0; k < nmodes; ++k) stage[k] = bhat[k] + dt * k3[k];
        s.rhs(stage.data(), k4.data());
        for (std::size_t k = 0; k < nmodes; ++k)
            bhat[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    return series;
}

// ---------------------------------------------------------------------------

GrowthFit fit_growth_rate(const GrowthSeries& series, double lo, double hi) {
    std::vector<double> ts, logs;
    for (const auto& s : series.samples) {
        if (s.t < lo || s.t > hi) continue;
        if (s.aliased)
            throw NumericalError("growth fit refused: aliased sample at t = " +
                                 std::to_string(s.t) + " inside the fit window");
        if (!(s.axis_gradient > 0.0))
            throw NumericalError("growth fit refused: non-positive gradient sample");
        ts.push_back(s.t);
        logs.push_back(std::log(s.axis_gradient));
    }
    if (series.truncated && series.truncated_at <= hi)
        throw NumericalError("growth fit refused: series truncated at t = " +
                             std::to_string(series.truncated_at) +
                             " before the fit window ends");
    if (ts.size() < 10)
        throw NumericalError("growth fit refused: fewer than 10 samples in the window");

    const std::size_t m = ts.size();
    double st = 0.0, sl = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        st += ts[i];
        sl += logs[i];
    }
    const double tbar = st / m, lbar = sl / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
        sxy += (ts[i] - tbar) * (logs[i] - lbar);
    }
    const double slope = sxy / sxx;
    const double intercept = lbar - slope * tbar;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double fitv = intercept + slope * ts[i];
        ss_res += (logs[i] - fitv) * (logs[i] - fitv);
        ss_tot += (logs[i] - lbar) * (logs[i] - lbar);
    }
    GrowthFit fit;
    fit.rate = slope;
    fit.prefactor = std::exp(intercept);
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

CellularVelocityCheck verify_cellular_velocity(int n) {
    Cellular2D s(n);
    const int nh = s.nh;
    const std::size_t nmodes = s.fft.modes();
    AlignedArray<Complex> u1hat(nmodes), u2hat(nmodes);
    s.fft.forward(s.u1.data(), u1hat.data());
    s.fft.forward(s.u2.data(), u2hat.data());

    const double box_area = kTwoPi * kTwoPi;
    auto weight = [&](int k) { return (k == 0 || 2 * k == n) ? 1.0 : 2.0; };

    double div2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kx = s.fft.signed_kx(i);
        for (int k = 0; k < nh; ++k) {
            const Complex d = Complex(0.0, 1.0) * (kx * u1hat[static_cast<std::size_t>(i) * nh + k] +
                                                   static_cast<double>(k) *
                                                       u2hat[static_cast<std::size_t>(i) * nh + k]);
            div2 += weight(k) * std::norm(d);
        }
    }

    // Projected self-advection of the steady velocity.
    AlignedArray<double> a1(s.fft.points()), a2(s.fft.points());
    {
        AlignedArray<double> d1x(s.fft.points()), d1y(s.fft.points());
        s.derivatives(u1hat.data());
        std::copy(s.dx_phys.data(), s.dx_phys.data() + s.fft.points(), d1x.data());
        std::copy(s.dy_phys.data(), s.dy_phys.data() + s.fft.points(), d1y.data());
        s.derivatives(u2hat.data());
        for (std::size_t p = 0; p < s.fft.points(); ++p) {
            a1[p] = s.u1[p] * d1x[p] + s.u2[p] * d1y[p];
            a2[p] = s.u1[p] * s.dx_phys[p] + s.u2[p] * s.dy_phys[p];
        }
    }
    AlignedArray<Complex> a1hat(nmodes), a2hat(nmodes);
    s.fft.forward(a1.data(), a1hat.data());
    s.fft.forward(a2.data(), a2hat.data());
    double resid2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kx = s.fft.signed_kx(i);
        for (int k = 0; k < nh; ++k) {
            if (3 * std::abs(s.fft.signed_kx(i)) > n || 3 * k > n) continue;
            const double ky = static_cast<double>(k);
            const double k2 = kx * kx + ky * ky;
            Complex v1 = a1hat[static_cast<std::size_t>(i) * nh + k];
            Complex v2 = a2hat[static_cast<std::size_t>(i) * nh + k];
            if (k2 > 0.0) {
                const Complex dot = (kx * v1 + ky * v2) / k2;
                v1 -= kx * dot;
                v2 -= ky * dot;
            } else {
                v1 = 0.0;
                v2 = 0.0;
            }
            resid2 += weight(k) * (std::norm(v1) + std::norm(v2));
        }
    }

    CellularVelocityCheck out;
    out.div_norm = std::sqrt(box_area * div2);
    out.euler_residual = std::sqrt(box_area * resid2);
    return out;
}

void write_growth_csv(const GrowthSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "t,axis_gradient,global_gradient,aliased_flag\n";
    char buf[128];
    for (const auto& s : series.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", s.t, s.axis_gradient,
                      s.global_gradient, s.aliased ? 1 : 0);
        out << buf;
    }
    if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace vmhs::growth
