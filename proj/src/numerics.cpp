#include "anticheckers/numerics.hpp"

#include <cmath>
#include <vector>

namespace anticheckers {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

bool is_nonpositive_integer(double z) {
    return z <= 1e-12 && std::abs(z - std::round(z)) < 1e-12;
}

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7,
};

double gamma_positive(double z) {
    // valid for z >= 0.5
    double x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z - 1 + i);
    double t = z + 6.5;
    return std::sqrt(2 * kPi) * std::pow(t, z - 0.5) * std::exp(-t) * x;
}

}  // namespace

double gamma_fn(double z) {
    if (is_nonpositive_integer(z)) throw DomainError("gamma: nonpositive integer argument");
    if (z < 0.5) return kPi / (std::sin(kPi * z) * gamma_positive(1 - z));
    return gamma_positive(z);
}

double gen_binomial(double z, int n) {
    if (n < 0) throw DomainError("gen_binomial: negative n");
    double num = 1, den = 1;
    for (int j = 1; j <= n; ++j) {
        num *= z - j + 1;
        den *= j;
    }
    return num / den;
}

namespace {

// Plain Gauss series at 0 <= z < 1 (or a terminating sum valid for any z).
double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1, sum = 1;
    const int cap = 200000;
    for (int k = 0; k < cap; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * (std::abs(sum) + 1e-300)) return sum;
    }
    throw NumericError("hyp2f1: series did not converge", Complex(sum, 0));
}

double hyp2f1_terminating(double a, double b, double c, double z) {
    // a is a nonpositive integer: finite sum of -a + 1 terms, valid for all z.
    int n = static_cast<int>(std::lround(-a));
    double term = 1, sum = 1;
    for (int k = 0; k < n; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
        sum += term;
    }
    return sum;
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a nonpositive integer");
    if (is_nonpositive_integer(a)) return hyp2f1_terminating(a, b, c, z);
    if (is_nonpositive_integer(b)) return hyp2f1_terminating(b, a, c, z);
    if (z >= 1) throw DomainError("hyp2f1: z >= 1");
    if (z < 0) {
        // Pfaff transformation: argument z/(z-1) lies in (0,1).
        double w = z / (z - 1);
        return std::pow(1 - z, -a) * hyp2f1(a, c - b, c, w);
    }
    return hyp2f1_series(a, b, c, z);
}

namespace {

// AGM evaluation of K and E at real modulus k (0 < k < 1).
void elliptic_agm(double k, double& K, double& E) {
    double a = 1, b = std::sqrt(1 - k * k), c = k;
    double csum = 0.5 * c * c;  // 2^{n-1} c_n^2 at n = 0
    double pow2 = 0.5;
    for (int n = 0; n < 60 && std::abs(c) > 1e-18; ++n) {
        double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2;
        csum += pow2 * c * c;
    }
    K = kPi / (2 * a);
    E = K * (1 - csum);
}

}  // namespace

double elliptic_K_imag() {
    // K(ik) = K(k/sqrt(1+k^2)) / sqrt(1+k^2) at k = 1.
    double K, E;
    elliptic_agm(1 / std::sqrt(2.0), K, E);
    return K / std::sqrt(2.0);
}

double elliptic_E_imag() {
    // E(ik) = sqrt(1+k^2) E(k/sqrt(1+k^2)) at k = 1.
    double K, E;
    elliptic_agm(1 / std::sqrt(2.0), K, E);
    return std::sqrt(2.0) * E;
}

double gauss_constant() { return 2 / kPi * elliptic_K_imag(); }

double lemniscate_reciprocal() { return 2 / kPi * (elliptic_E_imag() - elliptic_K_imag()); }

namespace {

constexpr double kBesselCrossover = 12.0;

// Power series for J_nu (sign = -1) and I_nu (sign = +1), nu > -1.
// long double accumulation keeps the alternating J series accurate near the crossover.
long double bessel_ji_series(double nu, double z, int sign) {
    long double q = (long double)z / 2;
    long double term = std::pow(q, (long double)nu) / (long double)gamma_fn(nu + 1);
    long double sum = term;
    long double zz = q * q;
    for (int k = 0; k < 400; ++k) {
        term *= sign * zz / ((k + 1) * (nu + k + 1));
        sum += term;
        if (std::abs((double)term) < 1e-19 * (std::abs((double)sum) + 1e-300)) break;
    }
    return sum;
}

double harmonic(int n) {
    double h = 0;
    for (int j = 1; j <= n; ++j) h += 1.0 / j;
    return h;
}

// Y_n for n in {0,1} by the classical logarithmic series.
double bessel_y_series(int n, double z) {
    double jn = (double)bessel_ji_series(n, z, -1);
    double lg = std::log(z / 2);
    double q2 = z * z / 4;
    double sum = 0;
    if (n == 0) {
        // (2/pi)[(ln(z/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k (z^2/4)^k / (k!)^2]
        double term = 1;
        for (int k = 1; k <= 60; ++k) {
            term *= q2 / (k * k);
            double contrib = ((k % 2) ? 1.0 : -1.0) * harmonic(k) * term;
            sum += contrib;
            if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1)) break;
        }
        return 2 / kPi * ((lg + kEulerGamma) * jn + sum);
    }
    // Y1 = (2/pi) ln(z/2) J1 - 2/(pi z)
    //      - (z/(2 pi)) sum_k (psi(k+1)+psi(k+2)) (-z^2/4)^k / (k!(k+1)!)
    double term = 1;  // (-z^2/4)^k / (k!(k+1)!) at k = 0
    for (int k = 0; k <= 60; ++k) {
        double psi_sum = -2 * kEulerGamma + harmonic(k) + harmonic(k + 1);
        double contrib = psi_sum * term;
        sum += contrib;
        term *= -q2 / ((k + 1) * (k + 2));
        if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1) && k > 2) break;
    }
    return 2 / kPi * lg * jn - 2 / (kPi * z) - z / (2 * kPi) * sum;
}

// K_n for n in {0,1} by the logarithmic series.  The e^z-sized terms cancel down
// to an e^{-z} result, so everything is accumulated in long double.
double bessel_k_series_int(int n, double z) {
    long double in = bessel_ji_series(n, z, +1);
    long double lg = std::log((long double)z / 2);
    long double q2 = (long double)z * z / 4;
    long double sum = 0;
    if (n == 0) {
        // K0 = -(ln(z/2)) I0 + sum_{k>=0} psi(k+1) (z^2/4)^k / (k!)^2
        long double term = 1;
        for (int k = 0; k <= 120; ++k) {
            sum += (long double)(-kEulerGamma + harmonic(k)) * term;
            term *= q2 / ((k + 1.0L) * (k + 1.0L));
            if (k > 2 && term < 1e-22L * (std::abs((double)sum) + 1)) break;
        }
        return (double)(-lg * in + sum);
    }
    // K1 = 1/z + ln(z/2) I1 - (z/4) sum_k (psi(k+1)+psi(k+2)) (z^2/4)^k / (k!(k+1)!)
    long double term = 1;
    for (int k = 0; k <= 120; ++k) {
        sum += (long double)(-2 * kEulerGamma + harmonic(k) + harmonic(k + 1)) * term;
        term *= q2 / ((k + 1.0L) * (k + 2.0L));
        if (k > 2 && term < 1e-22L * (std::abs((double)sum) + 1)) break;
    }
    return (double)(1 / (long double)z + lg * in - z / 4 * sum);
}

// K_nu for fractional nu via K_nu = (pi/2)(I_{-nu} - I_nu)/sin(nu pi).
double bessel_k_series_frac(double nu, double z) {
    long double diff = bessel_ji_series(-nu, z, +1) - bessel_ji_series(nu, z, +1);
    return (double)(kPi / 2 * diff / std::sin(nu * kPi));
}

// Large-argument Hankel asymptotics: P and Q series.
void bessel_pq(double nu, double z, double& P, double& Q) {
    double mu = 4 * nu * nu;
    P = 1;
    Q = 0;
    double a = 1;  // a_k
    double prev = 1e300;
    for (int k = 1; k <= 40; ++k) {
        a *= (mu - (2 * k - 1) * (2 * k - 1)) / (8 * z * k);
        if (std::abs(a) > prev) break;  // divergent tail reached
        prev = std::abs(a);
        int m = k / 2;
        double s = (m % 2) ? -1.0 : 1.0;
        if (k % 2 == 0)
            P += s * a;
        else
            Q += s * a;
        if (std::abs(a) < 1e-18) break;
    }
}

double bessel_jy_asymptotic(BesselKind kind, double nu, double z) {
    double P, Q;
    bessel_pq(nu, z, P, Q);
    double chi = z - (nu / 2 + 0.25) * kPi;
    double amp = std::sqrt(2 / (kPi * z));
    if (kind == BesselKind::J) return amp * (P * std::cos(chi) - Q * std::sin(chi));
    return amp * (P * std::sin(chi) + Q * std::cos(chi));
}

double bessel_k_asymptotic(double nu, double z) {
    double mu = 4 * nu * nu;
    double sum = 1, b = 1, prev = 1e300;
    for (int k = 1; k <= 40; ++k) {
        b *= (mu - (2 * k - 1) * (2 * k - 1)) / (8 * z * k);
        if (std::abs(b) > prev) break;
        prev = std::abs(b);
        sum += b;
        if (std::abs(b) < 1e-18) break;
    }
    return std::sqrt(kPi / (2 * z)) * std::exp(-z) * sum;
}

bool order_allowed(double nu) {
    return nu == 0.0 || nu == 1.0 || std::abs(nu - 1.0 / 3) < 1e-15 ||
           std::abs(nu + 1.0 / 3) < 1e-15;
}

}  // namespace

double bessel(BesselKind kind, double order, double z) {
    if (!order_allowed(order)) throw DomainError("bessel: unsupported order");
    bool integer_order = (order == 0.0 || order == 1.0);
    if (kind != BesselKind::J && z <= 0) throw DomainError("bessel: z must be positive");
    if (kind == BesselKind::J && z < 0) throw DomainError("bessel: z must be nonnegative");
    switch (kind) {
        case BesselKind::J:
            if (z <= kBesselCrossover) return (double)bessel_ji_series(order, z, -1);
            return bessel_jy_asymptotic(BesselKind::J, order, z);
        case BesselKind::Y:
            if (!integer_order) throw DomainError("bessel: Y implemented for integer order only");
            if (z <= kBesselCrossover) return bessel_y_series((int)order, z);
            return bessel_jy_asymptotic(BesselKind::Y, order, z);
        case BesselKind::K:
            if (z > kBesselCrossover) return bessel_k_asymptotic(order, z);
            if (integer_order) return bessel_k_series_int((int)order, z);
            return bessel_k_series_frac(order, z);
    }
    throw DomainError("bessel: unknown kind");
}

Complex periodic_trapezoid(const std::function<Complex(double)>& f, double eps,
                           const QuadratureSpec& spec) {
    const double lo = -kPi / eps;
    const double width = 2 * kPi / eps;
    int n = spec.initial_nodes;
    double h = width / n;
    Complex sum = 0;
    double abs_sum = 0;
    for (int j = 0; j < n; ++j) {
        Complex v = f(lo + j * h);
        sum += v;
        abs_sum += std::abs(v);
    }
    Complex estimate = sum * h;
    double l1 = abs_sum * h;
    for (int d = 0; d < spec.max_doublings; ++d) {
        // refine with the midpoints of the current grid
        Complex mid_sum = 0;
        double mid_abs = 0;
        for (int j = 0; j < n; ++j) {
            Complex v = f(lo + (j + 0.5) * h);
            mid_sum += v;
            mid_abs += std::abs(v);
        }
        sum += mid_sum;
        abs_sum += mid_abs;
        n *= 2;
        h *= 0.5;
        Complex next = sum * h;
        l1 = abs_sum * h;
        double delta = std::abs(next - estimate);
        estimate = next;
        if (delta <= spec.rel_tol * std::abs(estimate) + 1e-14 * l1) return estimate;
    }
    throw NumericError("periodic_trapezoid: max_doublings exceeded", estimate);
}

}  // namespace anticheckers
