#include "vmhs/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "vmhs/errors.hpp"
#include "vmhs/fft.hpp"

namespace vmhs {

std::pair<double, double> voigt_energy(const VoigtState& state) {
    const double eu = sobolev_norm(state.u, state.params.alpha);
    const double eb = sobolev_norm(state.B, state.params.alpha);
    return {eu * eu, eb * eb};
}

double modified_helicity(const VoigtState& state) {
    return l2_inner(state.B, fractional_power(state.psi, state.params.alpha));
}

double mhs_residual(const SpectralVectorField& B) {
    return sobolev_norm(convective(B, B), 0.0);
}

std::pair<SpectralScalarField, double> pressure_recover(const SpectralVectorField& B) {
    // Unprojected, dealiased advection B.grad B, then its Helmholtz split.
    GridPtr grid = B.grid_ptr();
    PhysicalVectorField b_phys = to_physical(B);
    const WavenumberGrid& g = *grid;
    const std::size_t npts = g.num_points();
    const int n = g.n(), nzh = g.nz_half();

    AlignedArray<double> db(9 * npts);
    par::for_each_index(9, [&](std::ptrdiff_t t) {
        const int c = static_cast<int>(t) / 3;
        const int d = static_cast<int>(t) % 3;
        AlignedArray<Complex> scratch(g.num_modes());
        Complex* s = scratch.data();
        const Complex* src = B.component(c);
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
        g.fft().inverse(s, db.data() + t * npts, s);
    });

    PhysicalVectorField adv(grid);
    par::for_each_index(3, [&](std::ptrdiff_t c) {
        const double* bx = b_phys.component(0);
        const double* by = b_phys.component(1);
        const double* bz = b_phys.component(2);
        const double* d0 = db.data() + (3 * c + 0) * npts;
        const double* d1 = db.data() + (3 * c + 1) * npts;
        const double* d2 = db.data() + (3 * c + 2) * npts;
        double* out = adv.component(static_cast<int>(c));
        for (std::size_t p = 0; p < npts; ++p)
            out[p] = bx[p] * d0[p] + by[p] * d1[p] + bz[p] * d2[p];
    });

    SpectralVectorField f_hat = to_spectral(adv);
    dealias_inplace(f_hat);

    SpectralScalarField q(grid);
    SpectralVectorField defect = f_hat;
    const Complex I(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double kxv = g.kx(i);
        for (int j = 0; j < n; ++j) {
            const double kyv = g.ky(j);
            std::size_t idx = g.index(i, j, 0);
            for (int k = 0; k < nzh; ++k, ++idx) {
                const double kzv = static_cast<double>(k);
                const double k2 = kxv * kxv + kyv * kyv + kzv * kzv;
                if (k2 == 0.0) {
                    q.data()[idx] = 0.0;
                    defect.component(0)[idx] = 0.0;
                    defect.component(1)[idx] = 0.0;
                    defect.component(2)[idx] = 0.0;
                    continue;
                }
                // Lap q = div f  =>  qhat = -i (k . fhat) / |k|^2
                const Complex qhat = -I *
                                     (kxv * f_hat.component(0)[idx] +
                                      kyv * f_hat.component(1)[idx] +
                                      kzv * f_hat.component(2)[idx]) /
                                     k2;
                q.data()[idx] = qhat;
                defect.component(0)[idx] -= I * kxv * qhat;
                defect.component(1)[idx] -= I * kyv * qhat;
                defect.component(2)[idx] -= I * kzv * qhat;
            }
        }
    }
    q.mean_free = true;
    return {std::move(q), sobolev_norm(defect, 0.0)};
}

double potential_consistency(const VoigtState& state) {
    SpectralVectorField residual = curl(state.psi);
    const std::size_t total = residual.size();
    const Complex* b = state.B.data();
    Complex* r = residual.data();
    for (std::size_t i = 0; i < total; ++i) r[i] -= b[i];
    return sobolev_norm(residual, 0.0) / std::max(sobolev_norm(state.B, 0.0), kNormGuard);
}

double equilibrium_defect(const VoigtState& state, const StateTendency& tendency) {
    return sobolev_norm(tendency.du, state.params.alpha) + sobolev_norm(state.u, 1.0);
}

double equilibrium_defect(const VoigtState& state) {
    return equilibrium_defect(state, voigt_rhs(state));
}

double beltrami_alignment(const SpectralVectorField& B) {
    PhysicalVectorField b_phys = to_physical(B);
    PhysicalVectorField j_phys = to_physical(curl(B));
    const std::size_t npts = B.grid().num_points();
    double cross2 = 0.0, prod2 = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
        const double bx = b_phys.component(0)[p], by = b_phys.component(1)[p],
                     bz = b_phys.component(2)[p];
        const double jx = j_phys.component(0)[p], jy = j_phys.component(1)[p],
                     jz = j_phys.component(2)[p];
        const double cx = jy * bz - jz * by;
        const double cy = jz * bx - jx * bz;
        const double cz = jx * by - jy * bx;
        cross2 += cx * cx + cy * cy + cz * cz;
        prod2 += (jx * jx + jy * jy + jz * jz) * (bx * bx + by * by + bz * bz);
    }
    if (prod2 <= 0.0) return kAlignmentSentinel;
    return std::sqrt(cross2) / (std::sqrt(prod2) + kNormGuard);
}

DiagnosticsRecord compute_record(const VoigtState& state, const StateTendency& tendency,
                                 double dissipation_cum, double e0, double h0) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    const auto [eu, eb] = voigt_energy(state);
    rec.e_u_alpha = eu;
    rec.e_b_alpha = eb;
    rec.dissipation_cum = dissipation_cum;
    rec.helicity = modified_helicity(state);
    rec.u_h1 = sobolev_norm(state.u, 1.0);
    rec.dtu_alpha = sobolev_norm(tendency.du, state.params.alpha);
    rec.mhs_residual = mhs_residual(state.B);
    rec.pressure_residual = pressure_recover(state.B).second;
    rec.potential_consistency = potential_consistency(state);
    rec.beltrami_alignment = beltrami_alignment(state.B);
    rec.div_psi_norm = sobolev_norm(divergence(state.psi), 0.0);
    if (e0 > 0.0) {
        rec.energy_defect = std::abs(eu + eb + dissipation_cum - e0) / e0;
        rec.helicity_drift = std::abs(rec.helicity - h0) / std::max(std::abs(h0), kNormGuard);
    }
    return rec;
}

EnergyBalance energy_balance_defect(const std::vector<DiagnosticsRecord>& series, double nu) {
    if (series.size() < 2)
        throw std::invalid_argument("energy balance audit needs at least 2 records");

    std::vector<double> dcum(series.size());
    bool have_column = true;
    for (const auto& r : series)
        if (!(r.dissipation_cum >= 0.0)) have_column = false;
    if (have_column) {
        for (std::size_t i = 0; i < series.size(); ++i) dcum[i] = series[i].dissipation_cum;
    } else {
        dcum[0] = 0.0;
        for (std::size_t i = 1; i < series.size(); ++i) {
            const double h = series[i].t - series[i - 1].t;
            const double g0 = series[i - 1].u_h1 * series[i - 1].u_h1;
            const double g1 = series[i].u_h1 * series[i].u_h1;
            dcum[i] = dcum[i - 1] + nu * h * (g0 + g1);  // trapezoid of 2 nu ||grad u||^2
        }
    }

    const double e0 = series.front().e_u_alpha + series.front().e_b_alpha + dcum.front();
    if (!(e0 > 0.0)) throw std::invalid_argument("energy balance audit needs E(0) > 0");

    EnergyBalance out;
    double prev_total = e0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double total = series[i].e_u_alpha + series[i].e_b_alpha + dcum[i];
        out.max_defect = std::max(out.max_defect, std::abs(total - e0) / e0);
        if (i > 0) {
            const double e_prev = prev_total - dcum[i - 1];
            const double e_here = total - dcum[i];
            out.max_energy_increase =
                std::max(out.max_energy_increase, (e_here - e_prev) / e0);
        }
        prev_total = total;
    }
    return out;
}

}  // namespace vmhs
