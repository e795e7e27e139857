#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anticheckers/checkers.hpp"

namespace anticheckers {

// Two-component lattice propagator at a point, in lattice units:
// x_steps = x/eps, t_steps = t/eps.
struct PropagatorPair {
    Complex A1{0.0, 0.0};
    Complex A2{0.0, 0.0};
};

enum class Method { quadrature, hypergeometric, dp };

struct GridRequest {
    int x_min = 0;  // lattice units, inclusive
    int x_max = 0;
    int t = 0;
    LatticeParams params;
    Method method = Method::dp;
};

// Lattice dispersion relation: omega_p = (1/eps) * acos(cos(p eps)/sqrt(1+m^2 eps^2)).
double dispersion(double p, const LatticeParams& params);

// Momentum-integral evaluation.  The value's known reality class (see
// `reality_class`) is enforced exactly by projection; negative times are mapped
// to positive ones through the skew symmetries A1(x,-t)=A1(x,t),
// A2(x,t)=-A2(-x,-t).
PropagatorPair propagate_quadrature(int x_steps, int t_steps, const LatticeParams& params,
                                    const QuadratureSpec& spec = {});

// Direct signed evaluation of the same integrals for any sign of t (the minus
// sign applies for t<0 when (x+t)/eps+k is even); no reality projection.
// Used to cross-check the canonical path above.
PropagatorPair propagate_quadrature_signed(int x_steps, int t_steps, const LatticeParams& params,
                                           const QuadratureSpec& spec = {});

// Closed form: phase * (1+m^2 eps^2)^{-t/2eps} * gen_binomial * 2F1 at z = -1/(m eps)^2.
PropagatorPair propagate_hypergeometric(int x_steps, int t_steps, const LatticeParams& params);

// Grid evaluation.  Method::dp seeds the t=0 row from quadrature over a window
// widened by t on each side and marches the one-step evolution
//   A1(x,t) = (A1(x+eps,t-eps) + m eps A2(x,t-eps)) / sqrt(1+m^2 eps^2)
//   A2(x,t) = (A2(x-eps,t-eps) - m eps A1(x,t-eps)) / sqrt(1+m^2 eps^2)
// (t >= 0 required for dp); other methods evaluate pointwise.
std::vector<PropagatorPair> propagate_dp(const GridRequest& request);

// Zero-mass and infinite-mass closed forms.
enum class LimitKind { massless, heavy };
PropagatorPair massless_heavy(int x_steps, int t_steps, LimitKind which, double eps);

// Expected charge Q = (|A1|^2 + |A2|^2)/2 at a point.
double expected_charge(int x_steps, int t_steps, const LatticeParams& params);

// Sum of Q over |x| <= |t| + cutoff where cutoff = ceil(40/(m eps)) + extra_margin
// lattice steps (the propagator decays exponentially outside the light cone).
double total_charge(int t_steps, const LatticeParams& params, int extra_margin = 0);

// True when component k at (x,t) is real; false when purely imaginary.
inline bool reality_class_real(int x_steps, int t_steps, int k) {
    return ((x_steps + t_steps + k) % 2 + 2) % 2 == 0;
}

struct IdentityResult {
    std::string name;
    double max_residual = 0.0;
    int points = 0;  // lattice points (or sums) checked
};

struct IdentityReport {
    std::vector<IdentityResult> entries;
    double tol = 0.0;
    bool pass = false;
};

// Residual evaluation of the exact lattice identities (one-step evolution with
// its source term, second-order wave recurrence, skew symmetries, charge
// conservation, both composition/"Huygens" forms, and the equal-time two- and
// three-term recurrences) over |x|,|t| <= window lattice steps.
IdentityReport identity_suite(const LatticeParams& params, int window, double tol);

// Representation of v as alpha*G + beta*L with small-denominator rationals,
// where G = gauss_constant() and L = lemniscate_reciprocal().
struct RationalCombination {
    long alpha_num = 0, alpha_den = 1;
    long beta_num = 0, beta_den = 1;
    double residual = 0.0;
};
std::optional<RationalCombination> rational_combination(double value, double tol = 1e-8,
                                                        long max_den = 24);

}  // namespace anticheckers
