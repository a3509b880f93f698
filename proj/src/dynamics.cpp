#include "vmhs/dynamics.hpp"

#include <cmath>
#include <random>
#include <string>

#include "parallel.hpp"
#include "vmhs/errors.hpp"
#include "vmhs/fft.hpp"

namespace vmhs {

namespace {

constexpr double kTwoPi = 6.283185307179586;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + " is not finite");
}

}  // namespace

void VoigtParams::validate() const {
    if (!(alpha >= 1.0))
        throw ConfigError("physics.alpha = " + std::to_string(alpha) + ": requires alpha >= 1");
    if (!(nu > 0.0))
        throw ConfigError("physics.nu = " + std::to_string(nu) + ": requires nu > 0");
    if (!(cfl > 0.0)) throw ConfigError("time.cfl must be positive");
    if (dt_override < 0.0) throw ConfigError("time.dt must be nonnegative");
}

// ---------------------------------------------------------------------------
// Initial data

SpectralVectorField abc_field(GridPtr grid, double a, double b, double c) {
    SpectralVectorField f(std::move(grid));
    const Complex half(0.5, 0.0);
    const Complex mihalf(0.0, -0.5);  // coefficient of sin at the +k mode
    // (a sin z + c cos y, b sin x + a cos z, c sin y + b cos x)
    set_mode(f, {0, 0, 1}, {a * mihalf, a * half, 0.0});
    set_mode(f, {0, 1, 0}, {c * half, 0.0, c * mihalf});
    set_mode(f, {1, 0, 0}, {0.0, b * mihalf, b * half});
    f.solenoidal = true;
    f.mean_free = true;
    return f;
}

namespace {

// Explicit Box-Muller on top of mt19937_64: std::normal_distribution's
// algorithm is implementation-defined, this is not.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;          // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

SpectralVectorField draw_solenoidal(GridPtr grid, GaussianStream& gauss, int k0,
                                    double amplitude) {
    if (k0 < 1) throw ConfigError("init.k0 must be >= 1");
    if (3 * k0 >= grid->n())
        throw ConfigError("init.k0 = " + std::to_string(k0) +
                          ": spectrum peak must resolve inside the dealias band (k0 < n/3)");
    SpectralVectorField f(grid);
    const WavenumberGrid& g = *grid;
    const int n = g.n(), nzh = g.nz_half();
    const double inv_k02 = 1.0 / (static_cast<double>(k0) * k0);
    for (int i = 0; i < n; ++i) {
        const int kxv = g.kx(i);
        for (int j = 0; j < n; ++j) {
            const int kyv = g.ky(j);
            for (int k = 0; k < nzh; ++k) {
                if (!g.dealias_keep(i, j, k)) continue;
                const double k2 = static_cast<double>(kxv) * kxv +
                                  static_cast<double>(kyv) * kyv + static_cast<double>(k) * k;
                if (k2 == 0.0) continue;
                // kz = 0 plane: fill only the canonical half, mirror the rest.
                if (k == 0 && (kyv < 0 || (kyv == 0 && kxv < 0))) continue;
                const double sigma = std::sqrt(k2 * k2 * std::exp(-k2 * inv_k02));
                std::array<Complex, 3> v;
                for (int c = 0; c < 3; ++c) {
                    const double re = gauss.next();
                    const double im = gauss.next();
                    v[c] = sigma * Complex(re, im);
                }
                set_mode(f, {kxv, kyv, k}, v);
            }
        }
    }
    leray_project_inplace(f);
    const double norm = sobolev_norm(f, 0.0);
    if (norm == 0.0) throw NumericalError("random field degenerated to zero");
    const double scale = amplitude / norm;
    const std::size_t total = f.size();
    Complex* data = f.data();
    for (std::size_t idx = 0; idx < total; ++idx) data[idx] *= scale;
    return f;
}

}  // namespace

SpectralVectorField random_solenoidal_field(GridPtr grid, std::uint64_t seed, int k0,
                                            double amplitude) {
    GaussianStream gauss(seed);
    return draw_solenoidal(std::move(grid), gauss, k0, amplitude);
}

std::pair<SpectralVectorField, SpectralVectorField> make_initial(const InitialCondition& ic,
                                                                 GridPtr grid) {
    if (ic.kind == InitialCondition::Kind::abc) {
        SpectralVectorField u0(grid);
        u0.solenoidal = true;
        u0.mean_free = true;
        SpectralVectorField B0 = abc_field(grid, ic.amplitude * ic.abc_a,
                                           ic.amplitude * ic.abc_b, ic.amplitude * ic.abc_c);
        return {std::move(u0), std::move(B0)};
    }
    GaussianStream gauss(ic.seed);
    SpectralVectorField u0 = draw_solenoidal(grid, gauss, ic.spectrum_peak, ic.amplitude);
    SpectralVectorField B0 = draw_solenoidal(grid, gauss, ic.spectrum_peak, ic.amplitude);
    return {std::move(u0), std::move(B0)};
}

SpectralVectorField init_potential(const SpectralVectorField& B0) {
    if (!B0.solenoidal)
        throw std::invalid_argument("init_potential requires a solenoidal field");
    SpectralVectorField psi(B0.grid_ptr());
    const WavenumberGrid& g = B0.grid();
    const int n = g.n(), nzh = g.nz_half();
    par::for_each_index(n, [&](std::ptrdiff_t i) {
        const double kxv = g.kx(static_cast<int>(i));
        for (int j = 0; j < n; ++j) {
            const double kyv = g.ky(j);
            std::size_t idx = g.index(static_cast<int>(i), j, 0);
            for (int k = 0; k < nzh; ++k, ++idx) {
                const double kzv = static_cast<double>(k);
                const double k2 = kxv * kxv + kyv * kyv + kzv * kzv;
                if (k2 == 0.0) continue;
                const Complex bx = B0.component(0)[idx];
                const Complex by = B0.component(1)[idx];
                const Complex bz = B0.component(2)[idx];
                const Complex I_over_k2(0.0, 1.0 / k2);
                psi.component(0)[idx] = I_over_k2 * (kyv * bz - kzv * by);
                psi.component(1)[idx] = I_over_k2 * (kzv * bx - kxv * bz);
                psi.component(2)[idx] = I_over_k2 * (kxv * by - kyv * bx);
            }
        }
    });
    psi.solenoidal = true;
    psi.mean_free = true;
    return psi;
}

// ---------------------------------------------------------------------------
// Nonlinear terms

SpectralVectorField convective(const SpectralVectorField& v, const SpectralVectorField& w) {
    require_same_grid(v.grid(), w.grid());
    GridPtr grid = v.grid_ptr();
    const FftEngine& fft = grid->fft();
    const std::size_t npts = grid->num_points();

    PhysicalVectorField v_phys = to_physical(v);

    // All nine partials of w in physical space.
    AlignedArray<double> dw(9 * npts);
    const WavenumberGrid& g = *grid;
    const int n = g.n(), nzh = g.nz_half();
    par::for_each_index(9, [&](std::ptrdiff_t t) {
        const int c = static_cast<int>(t) / 3;  // component of w
        const int d = static_cast<int>(t) % 3;  // derivative direction
        AlignedArray<Complex> scratch(g.num_modes());
        const Complex* src = w.component(c);
        Complex* s = scratch.data();
        for (int i = 0; i < n; ++i) {
            const double kxv = g.kx(i);
            for (int j = 0; j < n; ++j) {
                const double kyv = g.ky(j);
                std::size_t idx = g.index(i, j, 0);
                for (int k = 0; k < nzh; ++k, ++idx) {
                    const double kd = d == 0 ? kxv : (d == 1 ? kyv : static_cast<double>(k));
                    s[idx] = Complex(0.0, kd) * src[idx];
                }
            }
        }
        fft.inverse(s, dw.data() + t * npts, s);
    });

    PhysicalVectorField prod(grid);
    par::for_each_index(3, [&](std::ptrdiff_t c) {
        const double* vx = v_phys.component(0);
        const double* vy = v_phys.component(1);
        const double* vz = v_phys.component(2);
        const double* d0 = dw.data() + (3 * c + 0) * npts;
        const double* d1 = dw.data() + (3 * c + 1) * npts;
        const double* d2 = dw.data() + (3 * c + 2) * npts;
        double* out = prod.component(static_cast<int>(c));
        for (std::size_t p = 0; p < npts; ++p) out[p] = vx[p] * d0[p] + vy[p] * d1[p] + vz[p] * d2[p];
    });

    SpectralVectorField result = to_spectral(prod);
    dealias_inplace(result);
    leray_project_inplace(result);
    return result;
}

// ---------------------------------------------------------------------------
// Voigt integrator

VoigtIntegrator::VoigtIntegrator(GridPtr grid, const VoigtParams& params)
    : grid_(std::move(grid)),
      params_(params),
      inv_l_(grid_->num_modes()),
      visc_mult_(grid_->num_modes()) {
    params_.validate();
    const WavenumberGrid& g = *grid_;
    const int n = g.n(), nzh = g.nz_half();
    const double alpha = params_.alpha;
    const double nu = params_.nu;
    for (int i = 0; i < n; ++i) {
        const double kxv = g.kx(i);
        for (int j = 0; j < n; ++j) {
            const double kyv = g.ky(j);
            std::size_t idx = g.index(i, j, 0);
            for (int k = 0; k < nzh; ++k, ++idx) {
                const double k2 = kxv * kxv + kyv * kyv + static_cast<double>(k) * k;
                if (k2 == 0.0) {
                    inv_l_[idx] = 0.0;
                    visc_mult_[idx] = 0.0;
                } else {
                    inv_l_[idx] = std::pow(k2, -alpha);
                    // nu L^{-1} Lap = -nu |k|^{2-2 alpha}; bounded by nu for alpha >= 1.
                    visc_mult_[idx] = -nu * std::pow(k2, 1.0 - alpha);
                }
            }
        }
    }
}

StateTendency VoigtIntegrator::rhs(const VoigtState& state) const {
    require_same_grid(*grid_, state.u.grid());
    const WavenumberGrid& g = *grid_;
    const FftEngine& fft = g.fft();
    const std::size_t npts = g.num_points();
    const std::size_t nmodes = g.num_modes();
    const int n = g.n(), nzh = g.nz_half();

    // Physical u, B, and their curls: twelve independent inverse transforms.
    AlignedArray<double> phys(12 * npts);
    const SpectralVectorField& u = state.u;
    const SpectralVectorField& B = state.B;
    par::for_each_index(12, [&](std::ptrdiff_t t) {
        AlignedArray<Complex> scratch(nmodes);
        Complex* s = scratch.data();
        if (t < 6) {
            const SpectralVectorField& f = t < 3 ? u : B;
            fft.inverse(f.component(static_cast<int>(t % 3)), phys.data() + t * npts, s);
            return;
        }
        // curl components: 6..8 -> curl u, 9..11 -> curl B
        const SpectralVectorField& f = t < 9 ? u : B;
        const int c = static_cast<int>(t % 3);
        const int ca = (c + 1) % 3, cb = (c + 2) % 3;
        const Complex* fa = f.component(cb);  // (curl f)_c = d_{ca} f_{cb} - d_{cb} f_{ca}
        const Complex* fb = f.component(ca);
        for (int i = 0; i < n; ++i) {
            const double kv[3] = {static_cast<double>(g.kx(i)), 0.0, 0.0};
            for (int j = 0; j < n; ++j) {
                const double kyv = g.ky(j);
                std::size_t idx = g.index(i, j, 0);
                for (int k = 0; k < nzh; ++k, ++idx) {
                    const double kk[3] = {kv[0], kyv, static_cast<double>(k)};
                    s[idx] = Complex(0.0, 1.0) * (kk[ca] * fa[idx] - kk[cb] * fb[idx]);
                }
            }
        }
        fft.inverse(s, phys.data() + t * npts, s);
    });

    const double* up = phys.data();
    const double* bp = phys.data() + 3 * npts;
    const double* wp = phys.data() + 6 * npts;  // curl u
    const double* jp = phys.data() + 9 * npts;  // curl B

    // M = J x B - omega x u (momentum nonlinearity, rotational evaluation;
    // identical to P(B.grad B - u.grad u) after dealiasing and projection),
    // X = u x B.
    AlignedArray<double> mom(3 * npts);
    AlignedArray<double> cross(3 * npts);
    par::for_each_index(3, [&](std::ptrdiff_t c) {
        const int ca = (static_cast<int>(c) + 1) % 3, cb = (static_cast<int>(c) + 2) % 3;
        const double* ja = jp + ca * npts;
        const double* jb = jp + cb * npts;
        const double* ba = bp + ca * npts;
        const double* bb = bp + cb * npts;
        const double* wa = wp + ca * npts;
        const double* wb = wp + cb * npts;
        const double* ua = up + ca * npts;
        const double* ub = up + cb * npts;
        double* m = mom.data() + c * npts;
        double* x = cross.data() + c * npts;
        for (std::size_t p = 0; p < npts; ++p) {
            m[p] = (ja[p] * bb[p] - jb[p] * ba[p]) - (wa[p] * ub[p] - wb[p] * ua[p]);
            x[p] = ua[p] * bb[p] - ub[p] * ba[p];
        }
    });

    SpectralVectorField mom_hat(grid_);
    SpectralVectorField cross_hat(grid_);
    par::for_each_index(6, [&](std::ptrdiff_t t) {
        if (t < 3)
            fft.forward(mom.data() + t * npts, mom_hat.component(static_cast<int>(t)));
        else
            fft.forward(cross.data() + (t - 3) * npts,
                        cross_hat.component(static_cast<int>(t - 3)));
    });

    StateTendency out{SpectralVectorField(grid_), SpectralVectorField(grid_),
                      SpectralVectorField(grid_)};
    double finite_probe[3] = {0.0, 0.0, 0.0};

#pragma omp parallel for schedule(static) reduction(+ : finite_probe[:3])
    for (int i = 0; i < n; ++i) {
        const double kxv = g.kx(i);
        for (int j = 0; j < n; ++j) {
            const double kyv = g.ky(j);
            std::size_t idx = g.index(i, j, 0);
            for (int k = 0; k < nzh; ++k, ++idx) {
                const double kzv = static_cast<double>(k);
                const double k2 = kxv * kxv + kyv * kyv + kzv * kzv;
                const bool keep = g.dealias_keep(i, j, k) && k2 != 0.0;
                const double ilk = inv_l_[idx];

                Complex mx = keep ? mom_hat.component(0)[idx] : Complex(0.0);
                Complex my = keep ? mom_hat.component(1)[idx] : Complex(0.0);
                Complex mz = keep ? mom_hat.component(2)[idx] : Complex(0.0);
                if (keep) {
                    const Complex dot = (kxv * mx + kyv * my + kzv * mz) / k2;
                    mx -= kxv * dot;
                    my -= kyv * dot;
                    mz -= kzv * dot;
                }
                const Complex dux = ilk * mx + visc_mult_[idx] * u.component(0)[idx];
                const Complex duy = ilk * my + visc_mult_[idx] * u.component(1)[idx];
                const Complex duz = ilk * mz + visc_mult_[idx] * u.component(2)[idx];
                out.du.component(0)[idx] = dux;
                out.du.component(1)[idx] = duy;
                out.du.component(2)[idx] = duz;

                const Complex xx = keep ? cross_hat.component(0)[idx] : Complex(0.0);
                const Complex xy = keep ? cross_hat.component(1)[idx] : Complex(0.0);
                const Complex xz = keep ? cross_hat.component(2)[idx] : Complex(0.0);
                const Complex I(0.0, 1.0);
                const Complex dbx = ilk * I * (kyv * xz - kzv * xy);
                const Complex dby = ilk * I * (kzv * xx - kxv * xz);
                const Complex dbz = ilk * I * (kxv * xy - kyv * xx);
                out.dB.component(0)[idx] = dbx;
                out.dB.component(1)[idx] = dby;
                out.dB.component(2)[idx] = dbz;

                out.dpsi.component(0)[idx] = ilk * xx;
                out.dpsi.component(1)[idx] = ilk * xy;
                out.dpsi.component(2)[idx] = ilk * xz;

                finite_probe[0] += std::abs(dux.real()) + std::abs(dux.imag()) +
                                   std::abs(duy.real()) + std::abs(duz.real());
                finite_probe[1] += std::abs(dbx.real()) + std::abs(dby.imag()) +
                                   std::abs(dbz.real());
                finite_probe[2] += std::abs(xx.real()) + std::abs(xy.real()) + std::abs(xz.real());
            }
        }
    }

    if (!std::isfinite(finite_probe[0]))
        throw NumericalError("voigt_rhs: non-finite momentum tendency");
    if (!std::isfinite(finite_probe[1]))
        throw NumericalError("voigt_rhs: non-finite induction tendency");
    if (!std::isfinite(finite_probe[2]))
        throw NumericalError("voigt_rhs: non-finite potential tendency");

    out.du.solenoidal = true;
    out.du.mean_free = true;
    out.dB.solenoidal = true;
    out.dB.mean_free = true;
    out.dpsi.mean_free = true;
    return out;
}

namespace {

// dst = a + c * b over all three fields of a state.
void axpy_state(VoigtState& dst, const VoigtState& a, double c, const StateTendency& b) {
    const std::size_t total = a.u.size();
    par::for_each_index(3, [&](std::ptrdiff_t which) {
        const Complex* pa = which == 0 ? a.u.data() : which == 1 ? a.B.data() : a.psi.data();
        const Complex* pb =
            which == 0 ? b.du.data() : which == 1 ? b.dB.data() : b.dpsi.data();
        Complex* pd =
            which == 0 ? dst.u.data() : which == 1 ? dst.B.data() : dst.psi.data();
        for (std::size_t idx = 0; idx < total; ++idx) pd[idx] = pa[idx] + c * pb[idx];
    });
}

}  // namespace

VoigtState VoigtIntegrator::step(const VoigtState& state, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4 step requires dt > 0");

    VoigtState stage{SpectralVectorField(grid_), SpectralVectorField(grid_),
                     SpectralVectorField(grid_), state.t, state.params};
    stage.u.solenoidal = stage.B.solenoidal = true;

    const StateTendency k1 = rhs(state);
    axpy_state(stage, state, 0.5 * dt, k1);
    const StateTendency k2 = rhs(stage);
    axpy_state(stage, state, 0.5 * dt, k2);
    const StateTendency k3 = rhs(stage);
    axpy_state(stage, state, dt, k3);
    const StateTendency k4 = rhs(stage);

    VoigtState next{SpectralVectorField(grid_), SpectralVectorField(grid_),
                    SpectralVectorField(grid_), state.t + dt, state.params};
    const double w1 = dt / 6.0, w2 = dt / 3.0;
    const std::size_t total = state.u.size();
    par::for_each_index(3, [&](std::ptrdiff_t which) {
        auto pick = [&](const StateTendency& t) {
            return which == 0 ? t.du.data() : which == 1 ? t.dB.data() : t.dpsi.data();
        };
        const Complex* py =
            which == 0 ? state.u.data() : which == 1 ? state.B.data() : state.psi.data();
        const Complex* p1 = pick(k1);
        const Complex* p2 = pick(k2);
        const Complex* p3 = pick(k3);
        const Complex* p4 = pick(k4);
        Complex* pd =
            which == 0 ? next.u.data() : which == 1 ? next.B.data() : next.psi.data();
        for (std::size_t idx = 0; idx < total; ++idx)
            pd[idx] = py[idx] + w1 * (p1[idx] + p4[idx]) + w2 * (p2[idx] + p3[idx]);
    });

    next.u.solenoidal = state.u.solenoidal;
    next.B.solenoidal = state.B.solenoidal;
    next.psi.solenoidal = false;
    pin_mean_inplace(next.u);
    pin_mean_inplace(next.B);
    pin_mean_inplace(next.psi);
    return next;
}

double VoigtIntegrator::stable_dt(const VoigtState& state) const {
    if (params_.dt_override > 0.0) return params_.dt_override;
    const double umax = max_abs(to_physical(state.u));
    require_finite(umax, "max|u|");
    double dt = kDefaultDtCap;
    if (umax > 0.0) {
        const double dx = kTwoPi / state.u.grid().n();
        dt = std::min(dt, params_.cfl * dx / umax);
    }
    if (dt < kMinStableDt)
        throw NumericalError("stable_dt fell below " + std::to_string(kMinStableDt) +
                             " (max|u| = " + std::to_string(umax) + ")");
    return dt;
}

StateTendency voigt_rhs(const VoigtState& state) {
    VoigtIntegrator integ(state.u.grid_ptr(), state.params);
    return integ.rhs(state);
}

VoigtState rk4_step(const VoigtState& state, double dt) {
    VoigtIntegrator integ(state.u.grid_ptr(), state.params);
    return integ.step(state, dt);
}

double stable_dt(const VoigtState& state) {
    VoigtIntegrator integ(state.u.grid_ptr(), state.params);
    return integ.stable_dt(state);
}

}  // namespace vmhs
