#pragma once

#include <string>
#include <vector>

namespace vmhs::growth {

// Decoupled ideal-MHD gradient-growth example: a steady cellular flow
// transports a vertical magnetic component whose gradient grows like e^t at
// the hyperbolic stagnation point. The 1-D model evolves
//   dB/dt = sin(y) dB/dy on [0, 2pi),
// which is the cellular model restricted to the axis x = 0.

struct GrowthConfig {
    enum class Model { reduced1d, cellular2d };
    Model model = Model::reduced1d;
    int n = 512;
    double t_max = 5.0;
    double dt = 2e-3;
    double fit_lo = 1.0;
    double fit_hi = 4.0;

    void validate() const;
};

struct GrowthSample {
    double t = 0.0;
    double axis_gradient = 0.0;    // |dB/dy| at the stagnation point y = 0 (x = 0)
    double global_gradient = 0.0;  // max |grad B| over the grid
    bool aliased = false;
};

struct GrowthSeries {
    std::vector<GrowthSample> samples;
    double chi_max = 0.0;   // max |initial profile|
    bool truncated = false;  // stopped at the resolution horizon
    double truncated_at = 0.0;
};

struct GrowthFit {
    double rate = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
};

// Lagrangian flow of y' = -sin y: y(t, a) = 2 atan(tan(a/2) e^{-t}).
// Requires |a| < pi.
double characteristic_map(double a, double t);

// Inverse map a(t, y) = 2 atan(tan(y/2) e^{t}); requires |y| < pi.
double characteristic_label(double y, double t);

// Smooth periodic odd initial profile: chi(y) = y on |y| <= pi/2, blended to
// zero before the wrap-around so the periodic extension is C-infinity.
double chi_profile(double y);

GrowthSeries run_reduced_1d(const GrowthConfig& config);
GrowthSeries run_cellular_2d(const GrowthConfig& config);

// Least-squares line on (t, log g) over samples with t in [lo, hi]. Needs at
// least 10 samples in the window, none aliased/truncated.
GrowthFit fit_growth_rate(const GrowthSeries& series, double lo, double hi);

// Diagnostics of the steady cellular velocity u = (sin x cos y, -cos x sin y):
// spectral divergence norm and the projected self-advection residual.
struct CellularVelocityCheck {
    double div_norm = 0.0;
    double euler_residual = 0.0;
};
CellularVelocityCheck verify_cellular_velocity(int n);

// CSV emission: "t,axis_gradient,global_gradient,aliased_flag" rows.
void write_growth_csv(const GrowthSeries& series, const std::string& path);

}  // namespace vmhs::growth
