#pragma once

#include <utility>
#include <vector>

#include "anticheckers/checkers.hpp"
#include "anticheckers/torus.hpp"

namespace anticheckers {

// Final state of one electron on the line t: position x (in lattice steps) and
// the direction k of its final move, k = 2 up-right (arriving from x-1), k = 1
// up-left (arriving from x+1).
struct TwoElectronQuery {
    int x0 = 1;      // offset of the second source (nonzero)
    int x = 0;       // final position of the first electron
    int x_prime = 0; // final position of the second electron
    int t = 1;       // common final time, 1 <= t <= 12
    int k = 2;       // final-move direction of the first electron (1 or 2)
    int k_prime = 2; // final-move direction of the second electron (1 or 2)
};

// Antisymmetrized two-electron amplitude of the original checkers model with
// m = eps = 1: both electrons start with an up-right move, from (0,0) and
// (x0, 0); the direct and exchanged products of constrained single-particle
// path sums are subtracted.  The probability of the final state is the squared
// magnitude.  States with both final directions equal are physically unordered;
// the x_prime >= x representative is conventional (the amplitude is
// antisymmetric under swapping the two final states).
Complex two_electron_amplitude(const TwoElectronQuery& q);
double two_electron_probability(const TwoElectronQuery& q);

// Sum of two_electron_probability over all distinct final states at time t
// (equal directions with x_prime >= x, opposite directions counted for one
// labeling only); equals 1 for every t >= 1 and x0 != 0.
double two_electron_total_probability(int x0, int t);

// n-source/n-sink arrow det(A(a_k -> f_l)); 0 when sources or sinks repeat.
Complex det_arrow(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                  const std::vector<EdgeId>& sinks);
Complex det_arrow(const ArrowTable& table, const std::vector<EdgeId>& sources,
                  const std::vector<EdgeId>& sinks);

// Arrow restricted to configurations containing the edge e:
// A(a -> f pass e) = (1/2) A(a -> f) + A(a -> e) A(e -> f).
Complex pass_arrow(const TorusLattice& lat, const EdgeId& a, const EdgeId& e, const EdgeId& f);
Complex pass_arrow(const ArrowTable& table, const EdgeId& a, const EdgeId& e, const EdgeId& f);

// Two coupled species ("electron" and "muon") on the same torus: every edge
// shared by the two loop configurations carries a factor (1+g).
struct FermiParams {
    double g = 0.0;
    double m_e = 1.0;
    double m_mu = 2.0;
    double eps = 1.0;
    double delta = 0.3;
    int T = 1;  // exact double enumeration, T <= 2
};

struct FermiResult {
    Complex value{0.0, 0.0};        // numerator / denominator
    Complex numerator{0.0, 0.0};
    Complex denominator{0.0, 0.0};  // the coupled vacuum sum
};

// Exact coupled arrow by double enumeration of loop configurations; the shared
// edges are counted through the configuration bitmasks.  A (numerically)
// vanishing denominator raises DegenerateLatticeError.
FermiResult fermi_arrow(const FermiParams& fp, const EdgeId& a_e, const EdgeId& a_mu,
                        const EdgeId& f_e, const EdgeId& f_mu);

// First-order expansion of the coupled arrow at the same g:
//   A_e(a_e->f_e) A_mu(a_mu->f_mu)
//   + g sum_e [ A_e(a_e->e) A_e(e->f_e) A_mu(a_mu->e) A_mu(e->f_mu)
//             + A_e(a_e->f_e) (1/2) A_mu(a_mu->e) A_mu(e->f_mu)
//             + A_e(a_e->e) A_e(e->f_e) A_mu(a_mu->f_mu) (1/2) ],
// using A(e->e) = 1/2 for the loop-closure factors.
Complex fermi_first_order(const FermiParams& fp, const EdgeId& a_e, const EdgeId& a_mu,
                          const EdgeId& f_e, const EdgeId& f_mu);

// Remainder study |fermi_arrow(g) - fermi_first_order(g)| on a geometric grid
// of couplings; the fitted slope of log residual vs log g certifies the o(g)
// remainder (slope ~2, pass when >= 1.8).
struct PerturbationReport {
    std::vector<double> g_values;
    std::vector<double> residuals;
    double slope = 0;
    bool pass = false;
};
PerturbationReport perturbation_check(const FermiParams& base, const EdgeId& a_e,
                                      const EdgeId& a_mu, const EdgeId& f_e, const EdgeId& f_mu,
                                      const std::vector<double>& g_values = {1e-2, 1e-3, 1e-4});

}  // namespace anticheckers
