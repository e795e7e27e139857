#pragma once

#include <utility>
#include <vector>

#include "anticheckers/propagator.hpp"

namespace anticheckers {

// Point in continuum spacetime with mass; light cone |x| = |t| excluded for
// propagator evaluation.
struct ContinuumPoint {
    double x = 0;
    double t = 0;
    double m = 1;
};

struct Matrix2c {
    Complex g11, g12, g21, g22;
};

// Continuum spin-1/2 propagator: Bessel J/Y inside the light cone, K outside,
// the massless closed form for m = 0.
Matrix2c feynman_continuum(const ContinuumPoint& pt);

// Nearest lattice approximation (2*eps ceiling componentwise).
std::pair<double, double> lattice_point_of(double x, double t, double eps);

// One refinement step of the lattice-to-continuum comparison at a fixed point:
// the four normalized lattice values, their continuum targets (evaluated at the
// snapped lattice point), and the charge density, with the per-row maximum
// absolute error and the ratio of successive charge-density errors (expected ~2
// when eps halves, away from the light cone; the component errors can decay
// faster than first order because the dispersion phase error is second order).
struct ConvergenceRow {
    double eps = 0;
    double re_g11_lattice = 0, re_g11_target = 0;
    double im_g11_lattice = 0, im_g11_target = 0;
    double im_g12_lattice = 0, im_g12_target = 0;
    double re_g12_lattice = 0, re_g12_target = 0;
    double charge_lattice = 0, charge_target = 0;
    double max_abs_error = 0;
    double error_ratio = 0;  // err(previous row)/err(this row); 0 on the first row
};
std::vector<ConvergenceRow> convergence_experiment(double x, double t, double m,
                                                   const std::vector<double>& eps_list);

// Asymptotic zone gating.
enum class ZoneTag { between_peaks, airy, forbidden };
struct AsymptoticZone {
    ZoneTag zone = ZoneTag::forbidden;
    double theta = 0;  // phase of the active evaluator (two distinct definitions)
};
struct AsymptoticOptions {
    double delta_margin = 0.05;  // margin below the peak velocity 1/sqrt(1+m^2 eps^2)
    double min_mt = 10;          // require t > min_mt / m
};
AsymptoticZone classify_zone(int x_steps, int t_steps, const LatticeParams& params,
                             const AsymptoticOptions& options = {});

// Oscillatory large-time approximation well inside the propagation cone
// (absolute error O(eps / (sqrt(m) t^{3/2}))).
PropagatorPair asymptotic_between_peaks(int x_steps, int t_steps, const LatticeParams& params,
                                        const AsymptoticOptions& options = {});

// Airy-type approximation valid up to the peaks, 0 < |x/t| < 1/sqrt(1+m^2 eps^2)
// (additive error O(1/t)); requires t > 0.
PropagatorPair asymptotic_airy(int x_steps, int t_steps, const LatticeParams& params);

// EXPERIMENTAL: conjectured decaying approximation in the classically forbidden
// strip 1/sqrt(1+m^2 eps^2) < |x/t| < 1 (modified-Bessel K_{1/3} profile).
// Not covered by any exactness guarantee.
PropagatorPair asymptotic_forbidden_experimental(int x_steps, int t_steps,
                                                 const LatticeParams& params);

// Profiles backing the two standard pictures; asymptotic_value is NaN where the
// between-peaks zone condition fails.
struct FigurePoint {
    double x = 0;
    double lattice_value = 0;
    double continuum_value = 0;
    double asymptotic_value = 0;
};
// Charge density (1/8 eps^2)(Q(x_eps) + Q(x_eps+eps)) vs |G11|^2 + |G12|^2,
// sampled at even lattice multiples |x| <= x_max.
std::vector<FigurePoint> charge_density_profile(double m, double t, double eps, double x_max);
// Normalized Im A_k/(4 eps) vs Im G^F_{1k}; k = 1 samples even lattice
// multiples, k = 2 odd ones.
std::vector<FigurePoint> wave_profile(int k, double m, double t, double eps, double x_max);

}  // namespace anticheckers
