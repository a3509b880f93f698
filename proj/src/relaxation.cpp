#include "vmhs/relaxation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "vmhs/checkpoint.hpp"
#include "vmhs/diagnostics_csv.hpp"
#include "vmhs/errors.hpp"

namespace vmhs {

void RelaxationConfig::validate() const {
    params.validate();
    if (n % 2 != 0 || n < 8 || n > 1024)
        throw ConfigError("grid.n = " + std::to_string(n) + ": must be even and in [8, 1024]");
    if (!(t_max > 0.0)) throw ConfigError("time.t_max must be positive");
    if (!(sample_interval > 0.0)) throw ConfigError("time.sample_interval must be positive");
    if (params.dt_override > 0.0 && sample_interval < params.dt_override)
        throw ConfigError("time.sample_interval must be >= time.dt");
    if (!(defect_tolerance > 0.0)) throw ConfigError("relax.defect_tolerance must be positive");
    if (!(convergence_factor > 1.0)) throw ConfigError("relax.convergence_factor must exceed 1");
    if (checkpoint_interval < 0.0)
        throw ConfigError("output.checkpoint_interval must be nonnegative");
    if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::t_max: return "t_max";
        case Termination::blowup: return "blowup";
        case Termination::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

bool blowup_guard_ok(const VoigtState& state, double initial_energy) {
    const auto [eu, eb] = voigt_energy(state);
    if (!std::isfinite(eu) || !std::isfinite(eb)) return false;
    return eu + eb <= (1.0 + 1e-3) * initial_energy;
}

bool detect_convergence(const std::vector<double>& checkpoint_defects, double tolerance,
                        double factor) {
    if (checkpoint_defects.size() < 2)
        throw std::invalid_argument("convergence detection needs at least 2 checkpoints");
    const std::size_t tail = std::min<std::size_t>(3, checkpoint_defects.size());
    for (std::size_t i = checkpoint_defects.size() - tail + 1; i < checkpoint_defects.size(); ++i)
        if (checkpoint_defects[i] > checkpoint_defects[i - 1]) return false;
    const double last = checkpoint_defects.back();
    return last <= tolerance || last <= checkpoint_defects.front() / factor;
}

EquilibriumRecord extract_equilibrium(const VoigtState& final_state, bool converged) {
    if (!converged)
        throw std::invalid_argument("equilibrium extraction refused: the run did not converge");
    EquilibriumRecord rec{final_state.B, SpectralScalarField(), 0.0, 0.0, 0.0, 0.0, false};
    auto [q, residual] = pressure_recover(final_state.B);
    rec.q_infinity = std::move(q);
    rec.mhs_residual = residual;
    rec.helicity = modified_helicity(final_state);
    rec.b_norm_l2 = sobolev_norm(final_state.B, 0.0);
    rec.beltrami_alignment = beltrami_alignment(final_state.B);
    rec.trivial = rec.b_norm_l2 <= 1e-10;

    // Cauchy-Schwarz on H = (B, L psi); a violation means a defect upstream.
    const double lpsi_norm =
        sobolev_norm(fractional_power(final_state.psi, final_state.params.alpha), 0.0);
    if (lpsi_norm > 0.0 && rec.b_norm_l2 * lpsi_norm < std::abs(rec.helicity) * (1.0 - 1e-9))
        throw NumericalError("helicity lower bound violated by the extracted equilibrium");
    return rec;
}

namespace {

int window_of(double t) { return static_cast<int>(std::floor(std::log2(t))); }

// Running defect minimum of the open dyadic window [2^w, 2^{w+1}).
class WindowTracker {
public:
    // Returns the checkpoint of a window that the new sample just closed.
    std::optional<DyadicCheckpoint> feed(const DiagnosticsRecord& rec) {
        if (rec.t < 1.0) return std::nullopt;
        const int w = window_of(rec.t);
        std::optional<DyadicCheckpoint> closed;
        if (open_window_ >= 0 && w > open_window_ && has_best_) closed = make_checkpoint();
        if (w != open_window_) {
            open_window_ = w;
            has_best_ = false;
        }
        const double defect = rec.dtu_alpha + rec.u_h1;
        if (!has_best_ || defect < best_defect_) {
            has_best_ = true;
            best_defect_ = defect;
            best_rec_ = rec;
        }
        return closed;
    }

private:
    DyadicCheckpoint make_checkpoint() const {
        DyadicCheckpoint cp;
        cp.window = open_window_;
        cp.t = best_rec_.t;
        cp.defect = best_defect_;
        cp.record = best_rec_;
        return cp;
    }

    int open_window_ = -1;
    bool has_best_ = false;
    double best_defect_ = 0.0;
    DiagnosticsRecord best_rec_;
};

bool near_multiple(double t, double interval) {
    if (interval <= 0.0) return false;
    const double r = std::remainder(t, interval);
    return std::abs(r) <= 1e-9 * std::max(1.0, std::abs(t));
}

std::string checkpoint_path(const std::string& dir, double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "checkpoint_t%.6f.vmhs", t);
    return (std::filesystem::path(dir) / buf).string();
}

void write_report(const std::string& path, const RelaxationReport& report, RunMode mode,
                  double e0, double h0, double wall_seconds) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write report " + path);
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "mode: " << (mode == RunMode::relax ? "relax" : "simulate") << '\n';
    out << "termination_reason: " << termination_name(report.reason) << '\n';
    out << "converged: " << (report.converged ? "true" : "false") << '\n';
    out << "t_final: " << num(report.t_final) << '\n';
    out << "defect_initial: " << num(report.defect_initial) << '\n';
    out << "defect_final: " << num(report.defect_final) << '\n';
    out << "energy_initial: " << num(e0) << '\n';
    out << "helicity_initial: " << num(h0) << '\n';
    out << "checkpoint_count: " << report.checkpoints.size() << '\n';
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
        const auto& cp = report.checkpoints[i];
        out << "checkpoint." << i << ".window: " << cp.window << '\n';
        out << "checkpoint." << i << ".t: " << num(cp.t) << '\n';
        out << "checkpoint." << i << ".defect: " << num(cp.defect) << '\n';
    }
    out << "final_state: " << report.final_state_path << '\n';
    out << "csv: " << report.csv_path << '\n';
    if (report.equilibrium) {
        const auto& eq = *report.equilibrium;
        out << "equilibrium.mhs_residual: " << num(eq.mhs_residual) << '\n';
        out << "equilibrium.helicity: " << num(eq.helicity) << '\n';
        out << "equilibrium.b_norm_l2: " << num(eq.b_norm_l2) << '\n';
        out << "equilibrium.beltrami_alignment: " << num(eq.beltrami_alignment) << '\n';
        out << "equilibrium.trivial: " << (eq.trivial ? "true" : "false") << '\n';
    }
    if (!report.failure_message.empty()) out << "failure: " << report.failure_message << '\n';
    out << "wall_seconds: " << num(wall_seconds) << '\n';
}

}  // namespace

RelaxationReport run_relaxation(const RelaxationConfig& config, RunMode mode,
                                const std::string& resume_from) {
    config.validate();
    const auto wall_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(config.output_dir);
    const std::string csv_path =
        (std::filesystem::path(config.output_dir) / "diagnostics.csv").string();

    GridPtr grid;
    VoigtState state;
    double e0 = 0.0, h0 = 0.0, dissipation = 0.0;
    WindowTracker tracker;
    RelaxationReport report;
    report.csv_path = csv_path;

    VoigtParams params = config.params;

    if (resume_from.empty()) {
        grid = make_grid(config.n);
        auto [u0, B0] = make_initial(config.init, grid);
        state = VoigtState{std::move(u0), std::move(B0), SpectralVectorField(), 0.0, params};
        state.psi = init_potential(state.B);
        std::filesystem::remove(csv_path);

        VoigtIntegrator integ(grid, params);
        const StateTendency tend = integ.rhs(state);
        const auto [eu, eb] = voigt_energy(state);
        e0 = eu + eb;
        h0 = modified_helicity(state);
        DiagnosticsRecord rec0 = compute_record(state, tend, 0.0, e0, h0);
        append_diagnostics(rec0, csv_path);
        report.series.push_back(rec0);
        report.defect_initial = rec0.dtu_alpha + rec0.u_h1;
        tracker.feed(rec0);
    } else {
        state = load_checkpoint(resume_from);
        if (state.u.grid().n() != config.n)
            throw ConfigError("resume: checkpoint resolution n = " +
                              std::to_string(state.u.grid().n()) + " does not match config n = " +
                              std::to_string(config.n));
        if (state.params.alpha != params.alpha || state.params.nu != params.nu)
            throw ConfigError("resume: checkpoint physics parameters do not match the config");
        state.params = params;
        grid = state.u.grid_ptr();

        report.series = read_diagnostics_csv(csv_path);
        if (report.series.empty()) throw IoError("resume: empty diagnostics CSV " + csv_path);
        if (std::abs(report.series.back().t - state.t) > 1e-9)
            throw IoError("resume: diagnostics CSV ends at t = " +
                          std::to_string(report.series.back().t) +
                          " but the checkpoint is at t = " + std::to_string(state.t));
        e0 = report.series.front().e_u_alpha + report.series.front().e_b_alpha;
        h0 = report.series.front().helicity;
        dissipation = report.series.back().dissipation_cum;
        report.defect_initial = report.series.front().dtu_alpha + report.series.front().u_h1;
        for (const auto& rec : report.series)
            if (auto cp = tracker.feed(rec)) report.checkpoints.push_back(*cp);
    }

    VoigtIntegrator integ(grid, params);
    const double si = config.sample_interval;
    long long sample_index = std::llround(state.t / si);
    if (std::abs(sample_index * si - state.t) > 1e-9)
        throw ConfigError("resume: checkpoint time is not on the sampling lattice");

    report.converged = false;
    report.reason = Termination::t_max;
    double g_prev = [&] {
        const double h1 = sobolev_norm(state.u, 1.0);
        return h1 * h1;
    }();

    const double t_end = config.t_max;
    try {
        while (state.t < t_end - 1e-12) {
            const double t_next = std::min(static_cast<double>(++sample_index) * si, t_end);
            while (state.t < t_next - 1e-12) {
                double dt = integ.stable_dt(state);
                if (state.t + dt > t_next - 1e-12) dt = t_next - state.t;
                state = integ.step(state, dt);
                const double h1 = sobolev_norm(state.u, 1.0);
                const double g_new = h1 * h1;
                dissipation += params.nu * dt * (g_prev + g_new);
                g_prev = g_new;
            }
            state.t = t_next;

            const StateTendency tend = integ.rhs(state);
            DiagnosticsRecord rec = compute_record(state, tend, dissipation, e0, h0);
            if (!std::isfinite(rec.e_u_alpha + rec.e_b_alpha + rec.helicity)) {
                report.reason = Termination::blowup;
                report.failure_message = "non-finite diagnostics at t = " + std::to_string(state.t);
                break;
            }
            append_diagnostics(rec, csv_path);
            report.series.push_back(rec);

            if (!blowup_guard_ok(state, e0)) {
                report.reason = Termination::blowup;
                report.failure_message =
                    "energy guard violated at t = " + std::to_string(state.t) +
                    " (discrete instability)";
                break;
            }

            if (auto closed = tracker.feed(rec)) {
                report.checkpoints.push_back(*closed);
                if (mode == RunMode::relax) {
                    std::vector<double> defects;
                    defects.reserve(report.checkpoints.size());
                    for (const auto& cp : report.checkpoints) defects.push_back(cp.defect);
                    const bool ok = defects.size() == 1
                                        ? defects[0] <= config.defect_tolerance
                                        : detect_convergence(defects, config.defect_tolerance,
                                                             config.convergence_factor);
                    if (ok) {
                        report.converged = true;
                        report.reason = Termination::converged;
                    }
                }
            }

            if (near_multiple(state.t, config.checkpoint_interval))
                save_checkpoint(state, checkpoint_path(config.output_dir, state.t));

            if (report.converged) break;
        }
    } catch (const NumericalError& err) {
        report.reason = Termination::numerical_failure;
        report.failure_message = err.what();
    }

    report.t_final = state.t;
    if (!report.series.empty())
        report.defect_final = report.series.back().dtu_alpha + report.series.back().u_h1;

    if (report.reason == Termination::converged || report.reason == Termination::t_max) {
        report.final_state_path =
            (std::filesystem::path(config.output_dir) / "final.vmhs").string();
        save_checkpoint(state, report.final_state_path);
        if (report.converged) report.equilibrium = extract_equilibrium(state, true);
    }

    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    write_report((std::filesystem::path(config.output_dir) / "report.txt").string(), report,
                 mode, e0, h0, wall_seconds);
    return report;
}

}  // namespace vmhs
