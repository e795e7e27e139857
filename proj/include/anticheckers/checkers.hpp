#pragma once

#include <vector>

#include "anticheckers/numerics.hpp"

namespace anticheckers {

// Lattice parameters shared across modules.  delta is the regulator used by the
// torus model only; infinite-lattice code ignores it.
struct LatticeParams {
    double m = 1.0;
    double eps = 1.0;
    double delta = 0.0;
};

// One-particle amplitude of the original checkers model, a = a1 + i*a2.
// a2 collects the paths whose final move is up-right, a1 those ending up-left.
struct CheckerAmplitude {
    double a1 = 0.0;
    double a2 = 0.0;
};

// Sum over all upward lattice paths from (0,0) to (x_steps*eps, t_steps*eps)
// whose first move goes to (eps,eps); each path with n points and T turns
// contributes i * (-i*m*eps)^T * (1+m^2 eps^2)^{(2-n)/2}.
// Requires 1 <= t_steps <= 22 (exhaustive enumeration of 2^{t_steps-1} paths).
CheckerAmplitude a_bruteforce(int x_steps, int t_steps, const LatticeParams& params);

// Same amplitude in O(t^2) via the two-component evolution
//   a1(x,t) = (a1(x+eps,t-eps) + m*eps*a2(x+eps,t-eps)) / sqrt(1+m^2 eps^2)
//   a2(x,t) = (a2(x-eps,t-eps) - m*eps*a1(x-eps,t-eps)) / sqrt(1+m^2 eps^2)
// seeded with a(eps,eps) = i.  Requires t_steps >= 1.
CheckerAmplitude a_dp(int x_steps, int t_steps, const LatticeParams& params);

// Whole row at time t_steps*eps: entry j holds x_steps = j - t_steps,
// so the row spans x in [-t, t].
std::vector<CheckerAmplitude> a_dp_row(int t_steps, const LatticeParams& params);

}  // namespace anticheckers
