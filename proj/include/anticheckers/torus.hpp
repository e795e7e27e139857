#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "anticheckers/propagator.hpp"

namespace anticheckers {

// Raised when a finite-lattice computation needs Z != 0 but the partition
// function (numerically) vanishes, e.g. T divisible by 4 with delta -> 0.
class DegenerateLatticeError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class EdgeDir { up_right = 0, up_left = 1 };

// Directed edge of the torus lattice: starts at the point (u*eps/2, v*eps/2)
// and ends one half-step up, half-step right or left.  u, v are half-step
// coordinates modulo 2T with u + v even; the point is "even" when u is even.
struct EdgeId {
    int u = 0;
    int v = 0;
    EdgeDir dir = EdgeDir::up_right;
};

// T x T torus: 2T^2 lattice points (x, t) with 2x/eps, 2t/eps, (x+t)/eps
// integers, opposite sides identified; 4T^2 directed edges.
class TorusLattice {
   public:
    TorusLattice(int T, const LatticeParams& params);

    int size() const { return T_; }
    const LatticeParams& params() const { return params_; }
    int num_points() const { return 2 * T_ * T_; }
    int num_edges() const { return 4 * T_ * T_; }

    // Lexicographic edge index (t-row, x-column, direction bit); stable across
    // runs so transfer matrices are reproducible bit-for-bit.
    int edge_index(const EdgeId& e) const;
    EdgeId edge_of(int index) const;
    EdgeId normalize(EdgeId e) const;  // reduce u, v modulo 2T
    bool same_edge(const EdgeId& a, const EdgeId& b) const;

    // Endpoint of an edge (a lattice point, half-step coordinates mod 2T).
    std::pair<int, int> endpoint(const EdgeId& e) const;
    // The two edges starting at the endpoint of e / ending at the start of e.
    std::array<EdgeId, 2> successors(const EdgeId& e) const;
    std::array<EdgeId, 2> predecessors(const EdgeId& e) const;

    // Distinguished edges.  a0 starts at the origin and goes up-right;
    // f_k(x, t) starts at (x, t) mod T*eps and goes up-left (k=1) or up-right
    // (k=2); e_k(x, t) are the two edges ending at (x, t), e_2 parallel to
    // (1,1) and e_1 orthogonal to it; b_k := e_k(0, 0).
    EdgeId a0() const;
    EdgeId f_edge(int k, int x_steps, int t_steps) const;
    EdgeId e_edge(int k, int u, int v) const;
    EdgeId b_edge(int k) const;

   private:
    int T_;
    LatticeParams params_;
};

namespace detail {
// Fault-injection hook for the verification suite's self-test: when set, the
// sign of every turn weight is flipped so a correct suite must fail.  Never
// set outside that self-test.
extern bool node_weight_sign_flip;
}  // namespace detail

// Per-node transfer weight A(ef) where the endpoint of e is the starting point
// of f: straight through an even node 1/sqrt(1-delta^2), turn -delta/...;
// straight through an odd node 1/sqrt(1+m^2 eps^2), turn -i m eps/...
// (mass sits on odd nodes).  Non-adjacent pair -> DomainError.
Complex node_weight(const TorusLattice& lat, const EdgeId& e, const EdgeId& f);

// Z = det(I - U) over the 4T^2-dimensional edge space.
Complex partition_function(const TorusLattice& lat);
// Cross-check: Z = 2^{T^2} prod_{p,omega} (cos(omega eps) -
// (cos(p eps) + i m eps delta)/(sqrt(1-delta^2) sqrt(1+m^2 eps^2))).
Complex partition_function_product(const TorusLattice& lat);

// Full finite-lattice propagator matrix A = (I - U)^{-1}, A[f][a] = A(a -> f);
// dense LU, intended for T <= 8.  Degenerate Z -> DegenerateLatticeError.
class ArrowTable {
   public:
    explicit ArrowTable(const TorusLattice& lat);
    Complex arrow(const EdgeId& a, const EdgeId& f) const;
    const TorusLattice& lattice() const { return lat_; }

   private:
    TorusLattice lat_;
    std::vector<Complex> entries_;  // row f, column a
};

// Single arrow via a one-off dense solve.
Complex arrow(const TorusLattice& lat, const EdgeId& a, const EdgeId& f);

// Closed-form discrete-Fourier evaluation of A(b_2 -> e_k(x, t)) at the point
// with half-step coordinates (u, v); O(T^2) per call, scalable in T.
Complex arrow_dft(const TorusLattice& lat, int k, int u, int v);

// One enumerated loop configuration: optional source->sink paths (in source
// order, each a sequence of edge indices) plus loops (starting-edge minimal),
// its weight, and the bitmask of used edges (lattice must have <= 64 edges).
struct LoopConfigEntry {
    std::vector<std::vector<int>> paths;
    std::vector<std::vector<int>> loops;
    int sink_of_path(int i) const;  // edge index of the last edge of path i
    Complex weight{0.0, 0.0};
    unsigned long long mask = 0;
};

// All loop configurations with the given sources/sinks (empty lists: vacuum
// configurations).  T <= 2 only.
std::vector<LoopConfigEntry> enumerate_loop_configs(const TorusLattice& lat,
                                                    const std::vector<EdgeId>& sources,
                                                    const std::vector<EdgeId>& sinks);

struct BruteforceSum {
    Complex numerator{0.0, 0.0};    // sum over configurations with sources/sinks
    Complex denominator{0.0, 0.0};  // sum over vacuum configurations
};

// Exact sums over loop configurations (numerator with sources/sinks, vacuum
// denominator); their ratio equals the determinant arrows.  T <= 2.
BruteforceSum bruteforce_loop_configs(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                                      const std::vector<EdgeId>& sinks);

// The same sums over currents (edge subsets with in/out balance), evaluated
// through the loop decomposition with no turns at singularities.  T <= 2.
BruteforceSum bruteforce_currents(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                                  const std::vector<EdgeId>& sinks);

// Residuals of the finite-lattice identities: initial value A(a->a)=1/2, skew
// symmetry, the one-step (Dirac) equation with parity-dependent weights, its
// adjoint, the n-step composition for n <= 2T, and det(I-U) det(A) = 1.
IdentityReport finite_identity_suite(const TorusLattice& lat, double tol);

// delta -> 0 after T -> infinity extrapolation schedule.  The T sum converges
// exponentially in delta*T (the momentum denominator is near-singular within
// ~1/T of the zero curve), so each delta needs T well above 1/delta; the
// delta -> 0 error is not polynomial (it picks up delta^{3/2}/log terms from
// the emerging singularity), so several nodes feed one Lagrange extrapolation.
struct LimitSchedule {
    std::vector<int> T_values{1601, 3203};                     // increasing, none divisible by 4
    std::vector<double> deltas{0.1, 0.075, 0.05, 0.025, 0.0125};  // decreasing
    double saturation_tol = 1e-6;                              // |A(T_max) - A(T_prev)| bound
};

struct LimitTraceRow {
    int T = 0;
    double delta = 0;
    Complex raw1{0.0, 0.0}, raw2{0.0, 0.0};  // A(a0 -> f_k) before normalization
};

struct LimitTrace {
    std::vector<LimitTraceRow> rows;
    double saturation1 = 0, saturation2 = 0;  // worst |A(T_max) - A(T_prev)| over deltas
};

// The infinite-lattice propagator recovered from the torus:
// A~_k = -2 (-i)^k lim_{delta->0} lim_{T->inf} A(a0 -> f_k(x,t)), evaluated on
// the schedule with polynomial extrapolation to delta = 0.  T divisible by 4 is
// rejected (the limits do not commute there); failed saturation -> NumericError.
PropagatorPair infinite_limit(int x_steps, int t_steps, const LatticeParams& params,
                              const LimitSchedule& schedule = {}, LimitTrace* trace = nullptr);

// Batch version: evaluates many (x_steps, t_steps) points while sharing the
// momentum-space tables across points (the dominant cost), plus one cached
// O(T^2) pass per distinct t value; use this for grids.
std::vector<PropagatorPair> infinite_limit_grid(const std::vector<std::pair<int, int>>& points,
                                                const LatticeParams& params,
                                                const LimitSchedule& schedule = {},
                                                std::vector<LimitTrace>* traces = nullptr);

}  // namespace anticheckers
