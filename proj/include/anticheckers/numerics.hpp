#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace anticheckers {

using Complex = std::complex<double>;

// Thrown when an input lies outside an operation's domain (poles, wrong sign, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative computation fails to converge; carries the last estimate.
struct NumericError : std::runtime_error {
    Complex partial;
    NumericError(const std::string& msg, Complex last) : std::runtime_error(msg), partial(last) {}
};

// Gamma function for real z (z not a nonpositive integer), Lanczos approximation
// with reflection for z < 0.5.  Relative error <= 1e-12 for |z| <= 30.
double gamma_fn(double z);

// Generalized binomial coefficient: binom(z, n) = (1/n!) * prod_{j=1..n} (z - j + 1).
double gen_binomial(double z, int n);

// Gauss hypergeometric function 2F1(a,b;c;z) for real arguments, z < 1.
// For z < 0 the Pfaff transformation maps the argument into [0,1).
// Terminating series (a or b a nonpositive integer) are evaluated directly.
double hyp2f1(double a, double b, double c, double z);

// Complete elliptic integrals at imaginary modulus: K(i) and E(i), via AGM.
double elliptic_K_imag();
double elliptic_E_imag();

// The two transcendentals spanning the unit-parameter propagator values:
// gauss_constant = (2/pi) K(i), lemniscate_reciprocal = (2/pi)(E(i) - K(i)).
double gauss_constant();
double lemniscate_reciprocal();

enum class BesselKind { J, Y, K };

// Bessel functions J_nu, Y_nu and modified K_nu for nu in {0, 1, 1/3, -1/3}
// (Y restricted to integer order) and z in (0, 500].  Power series below z = 12,
// large-argument asymptotic expansion above.
double bessel(BesselKind kind, double order, double z);

struct QuadratureSpec {
    int initial_nodes = 64;
    double rel_tol = 1e-11;
    int max_doublings = 18;
};

// Trapezoid rule for a smooth (2*pi/eps)-periodic integrand over [-pi/eps, pi/eps].
// Node count doubles until successive estimates agree to rel_tol (spectral accuracy);
// throws NumericError with the last estimate if max_doublings is exceeded.
Complex periodic_trapezoid(const std::function<Complex(double)>& f, double eps,
                           const QuadratureSpec& spec = {});

}  // namespace anticheckers
