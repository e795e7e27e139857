#include "anticheckers/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace anticheckers {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// (-i)^n for any integer n.
Complex neg_i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, -1};
        case 2: return {-1, 0};
        default: return {0, 1};
    }
}

Complex project_reality(Complex v, int x, int t, int k) {
    if (reality_class_real(x, t, k)) return {v.real(), 0.0};
    return {0.0, v.imag()};
}

int light_cone_margin(const LatticeParams& params) {
    double mu = params.m * params.eps;
    return static_cast<int>(std::ceil(40.0 / mu));
}

}  // namespace

double dispersion(double p, const LatticeParams& params) {
    double mu = params.m * params.eps;
    return std::acos(std::cos(p * params.eps) / std::sqrt(1 + mu * mu)) / params.eps;
}

PropagatorPair propagate_quadrature_signed(int x_steps, int t_steps, const LatticeParams& params,
                                           const QuadratureSpec& spec) {
    if (params.m <= 0) throw DomainError("propagate_quadrature: requires m > 0");
    const double eps = params.eps;
    const double mu = params.m * eps;
    const double x = x_steps * eps, t = t_steps * eps;
    // Resolve every oscillation of e^{i(px - omega t)} before the convergence
    // check may fire: with too few nodes a pure phase aliases to a constant.
    QuadratureSpec spec_local = spec;
    int oscillations = 2 * (std::abs(x_steps) + std::abs(t_steps)) + 16;
    while (spec_local.initial_nodes < oscillations) spec_local.initial_nodes *= 2;
    Complex i1 = periodic_trapezoid(
        [&](double p) {
            double s = std::sin(p * eps);
            return std::exp(Complex(0, 1) * (p * x - dispersion(p, params) * t)) /
                   std::sqrt(mu * mu + s * s);
        },
        eps, spec_local);
    Complex A1 = Complex(0, params.m * eps * eps / (2 * kPi)) * i1;
    Complex i2 = periodic_trapezoid(
        [&](double p) {
            double s = std::sin(p * eps);
            return (1 + s / std::sqrt(mu * mu + s * s)) *
                   std::exp(Complex(0, 1) * (p * x - dispersion(p, params) * t));
        },
        eps, spec_local);
    Complex A2 = eps / (2 * kPi) * i2;
    if (t_steps < 0) {
        if (reality_class_real(x_steps, t_steps, 1)) A1 = -A1;
        if (reality_class_real(x_steps, t_steps, 2)) A2 = -A2;
    }
    return {A1, A2};
}

PropagatorPair propagate_quadrature(int x_steps, int t_steps, const LatticeParams& params,
                                    const QuadratureSpec& spec) {
    if (t_steps < 0) {
        PropagatorPair same_x = propagate_quadrature(x_steps, -t_steps, params, spec);
        PropagatorPair opp_x = propagate_quadrature(-x_steps, -t_steps, params, spec);
        return {same_x.A1, -opp_x.A2};
    }
    PropagatorPair raw = propagate_quadrature_signed(x_steps, t_steps, params, spec);
    return {project_reality(raw.A1, x_steps, t_steps, 1),
            project_reality(raw.A2, x_steps, t_steps, 2)};
}

PropagatorPair propagate_hypergeometric(int x_steps, int t_steps, const LatticeParams& params) {
    if (params.m <= 0) throw DomainError("propagate_hypergeometric: requires m > 0");
    const double mu = params.m * params.eps;
    const int T = t_steps, X = std::abs(x_steps);
    const double z = -1.0 / (mu * mu);
    const double decay = std::pow(1 + mu * mu, -0.5 * T);
    // phase (-i mu)^{T-X} = mu^{T-X} (-i)^{T-X}, integer exponent of either sign
    const Complex phase = std::pow(mu, T - X) * neg_i_pow(T - X);

    Complex A1 = Complex(0, 1) * phase * decay * gen_binomial(0.5 * (T + X) - 0.5, X) *
                 hyp2f1(0.5 + 0.5 * (X - T), 0.5 + 0.5 * (X - T), 1.0 + X, z);
    const double theta = (x_steps >= 0) ? 1.0 : 0.0;
    Complex A2 = phase * decay * gen_binomial(0.5 * (T + X) - 1 + theta, X) *
                 hyp2f1(0.5 * (X - T), 1 + 0.5 * (X - T), 1.0 + X, z);
    if (t_steps < 0) {
        if (reality_class_real(x_steps, t_steps, 1)) A1 = -A1;
        if (reality_class_real(x_steps, t_steps, 2)) A2 = -A2;
    }
    return {A1, A2};
}

namespace {

// Cached rectangle of values for t >= 0 built by the dp march; row t is valid
// for |x| <= radius + t_max - t.  Negative times resolved by skew symmetry.
class Table {
  public:
    Table(const LatticeParams& params, int radius, int t_max)
        : params_(params), half_width_(radius + t_max), t_max_(t_max) {
        const double mu = params.m * params.eps;
        const double norm = 1 / std::sqrt(1 + mu * mu);
        rows_.resize(t_max + 1);
        rows_[0].resize(2 * half_width_ + 1);
        for (int x = -half_width_; x <= half_width_; ++x)
            rows_[0][x + half_width_] = propagate_quadrature(x, 0, params);
        for (int t = 1; t <= t_max; ++t) {
            rows_[t].resize(2 * half_width_ + 1);
            int lim = half_width_ - t;
            for (int x = -lim; x <= lim; ++x) {
                const PropagatorPair& right = rows_[t - 1][x + 1 + half_width_];
                const PropagatorPair& left = rows_[t - 1][x - 1 + half_width_];
                const PropagatorPair& mid = rows_[t - 1][x + half_width_];
                rows_[t][x + half_width_] = {(right.A1 + mu * mid.A2) * norm,
                                             (left.A2 - mu * mid.A1) * norm};
            }
        }
    }

    PropagatorPair at(int x, int t) const {
        if (t < 0) return {at(x, -t).A1, -at(-x, -t).A2};
        if (t > t_max_ || std::abs(x) > half_width_ - t)
            throw DomainError("propagator table: point outside the computed window");
        return rows_[t][x + half_width_];
    }

  private:
    LatticeParams params_;
    int half_width_;
    int t_max_;
    std::vector<std::vector<PropagatorPair>> rows_;
};

}  // namespace

std::vector<PropagatorPair> propagate_dp(const GridRequest& request) {
    if (request.x_min > request.x_max) throw DomainError("propagate_dp: empty x range");
    std::vector<PropagatorPair> out;
    out.reserve(request.x_max - request.x_min + 1);
    if (request.method == Method::dp) {
        if (request.t < 0) throw DomainError("propagate_dp: dp method requires t >= 0");
        int radius = std::max(std::abs(request.x_min), std::abs(request.x_max));
        Table table(request.params, radius, request.t);
        for (int x = request.x_min; x <= request.x_max; ++x)
            out.push_back(table.at(x, request.t));
        return out;
    }
    for (int x = request.x_min; x <= request.x_max; ++x) {
        out.push_back(request.method == Method::quadrature
                          ? propagate_quadrature(x, request.t, request.params)
                          : propagate_hypergeometric(x, request.t, request.params));
    }
    return out;
}

PropagatorPair massless_heavy(int x_steps, int t_steps, LimitKind which, double eps) {
    if (which == LimitKind::heavy) {
        if (x_steps != 0) return {};
        return {neg_i_pow(std::abs(t_steps) - 1), neg_i_pow(std::abs(t_steps + 1) - 1)};
    }
    PropagatorPair out;  // A1 identically zero
    if (x_steps == t_steps) {
        out.A2 = (t_steps >= 0) ? Complex(1, 0) : Complex(-1, 0);
    } else if (((x_steps + t_steps) % 2 + 2) % 2 != 0) {
        out.A2 = Complex(0, 2.0 / (kPi * (x_steps - t_steps)));
    }
    (void)eps;  // the nonzero values are scale-free
    return out;
}

double expected_charge(int x_steps, int t_steps, const LatticeParams& params) {
    PropagatorPair v = propagate_quadrature(x_steps, t_steps, params);
    return 0.5 * (std::norm(v.A1) + std::norm(v.A2));
}

double total_charge(int t_steps, const LatticeParams& params, int extra_margin) {
    int t = std::abs(t_steps);
    int cut = t + light_cone_margin(params) + extra_margin;
    Table table(params, cut, t);
    double sum = 0;
    for (int x = -cut; x <= cut; ++x) {
        PropagatorPair v = table.at(x, t);
        sum += 0.5 * (std::norm(v.A1) + std::norm(v.A2));
    }
    return sum;
}

namespace {

double cmax(double acc, Complex r) { return std::max(acc, std::abs(r)); }

}  // namespace

IdentityReport identity_suite(const LatticeParams& params, int window, double tol) {
    const int W = window;
    const double mu = params.m * params.eps;
    const double root = std::sqrt(1 + mu * mu);
    const int cut = light_cone_margin(params);
    // Huygens sums range over |x'| <= t' + cut and look up (x - x', t - t').
    Table table(params, 2 * W + cut + 2, W + 1);
    auto at = [&](int x, int t) { return table.at(x, t); };

    IdentityReport report;
    report.tol = tol;

    {
        IdentityResult r{"dirac_evolution", 0, 0};
        for (int t = -W; t <= W; ++t) {
            for (int x = -W; x <= W; ++x) {
                Complex r1 = at(x, t).A1 - (at(x + 1, t - 1).A1 + mu * at(x, t - 1).A2) / root;
                Complex r2 = at(x, t).A2 - (at(x - 1, t - 1).A2 - mu * at(x, t - 1).A1) / root;
                if (x == 0 && t == 0) r2 -= 2;  // point source
                r.max_residual = cmax(cmax(r.max_residual, r1), r2);
                r.points++;
            }
        }
        report.entries.push_back(r);
    }
    {
        IdentityResult r{"wave_recurrence", 0, 0};
        for (int t = -W; t <= W; ++t) {
            for (int x = -W; x <= W; ++x) {
                if (!(x == 0 && t == 0)) {
                    Complex r1 = root * (at(x, t + 1).A1 + at(x, t - 1).A1) - at(x + 1, t).A1 -
                                 at(x - 1, t).A1;
                    r.max_residual = cmax(r.max_residual, r1);
                }
                if (!((x == -1 && t == 0) || (x == 0 && t == -1))) {
                    Complex r2 = root * (at(x, t + 1).A2 + at(x, t - 1).A2) - at(x + 1, t).A2 -
                                 at(x - 1, t).A2;
                    r.max_residual = cmax(r.max_residual, r2);
                }
                r.points++;
            }
        }
        report.entries.push_back(r);
    }
    {
        IdentityResult r{"skew_symmetry", 0, 0};
        for (int t = -W; t <= W; ++t) {
            for (int x = -W; x <= W; ++x) {
                if (!(x == 0 && t == 0)) {
                    r.max_residual = cmax(r.max_residual, at(x, t).A1 - at(-x, t).A1);
                    r.max_residual = cmax(r.max_residual, at(x, t).A1 - at(x, -t).A1);
                    r.max_residual = cmax(r.max_residual, at(x, t).A2 + at(-x, -t).A2);
                }
                // holds everywhere, including the origin
                r.max_residual = cmax(
                    r.max_residual,
                    (double)(t - x) * at(x, t).A2 - (double)(t + x) * at(-x, t).A2);
                r.points++;
            }
        }
        report.entries.push_back(r);
    }
    {
        IdentityResult r{"charge_conservation", 0, 0};
        for (int t = 0; t <= W; ++t) {
            double sum = 0;
            for (int x = -(t + cut); x <= t + cut; ++x) {
                PropagatorPair v = at(x, t);
                sum += 0.5 * (std::norm(v.A1) + std::norm(v.A2));
            }
            r.max_residual = std::max(r.max_residual, std::abs(sum - 1));
            r.points++;
        }
        report.entries.push_back(r);
    }
    {
        IdentityResult half{"composition_halved", 0, 0};
        IdentityResult parity{"composition_parity", 0, 0};
        for (int t = 1; t <= W; ++t) {
            for (int tp = 0; tp < t; ++tp) {
                for (int x = -W; x <= W; ++x) {
                    Complex h1 = 0, h2 = 0;        // halved double-counting form
                    Complex p1 = 0, p2 = 0;        // parity-restricted form
                    for (int xp = -(tp + cut); xp <= tp + cut; ++xp) {
                        const PropagatorPair lower = at(xp, tp);
                        const PropagatorPair upper = at(x - xp, t - tp);
                        const PropagatorPair upper_m = at(xp - x, t - tp);
                        Complex s1a = lower.A2 * upper.A1;
                        Complex s1b = lower.A1 * upper_m.A2;
                        Complex s2a = lower.A2 * upper.A2;
                        Complex s2b = lower.A1 * upper_m.A1;
                        h1 += s1a + s1b;
                        h2 += s2a - s2b;
                        bool odd = ((x + xp + t + tp) % 2 + 2) % 2 != 0;
                        if (odd) {
                            p1 += s1a;
                            p2 -= s2b;
                        } else {
                            p1 += s1b;
                            p2 += s2a;
                        }
                    }
                    half.max_residual = cmax(half.max_residual, at(x, t).A1 - 0.5 * h1);
                    half.max_residual = cmax(half.max_residual, at(x, t).A2 - 0.5 * h2);
                    parity.max_residual = cmax(parity.max_residual, at(x, t).A1 - p1);
                    parity.max_residual = cmax(parity.max_residual, at(x, t).A2 - p2);
                    half.points++;
                    parity.points++;
                }
            }
        }
        report.entries.push_back(half);
        report.entries.push_back(parity);
    }
    {
        IdentityResult r{"equal_time_mixed", 0, 0};
        for (int t = -W; t <= W; ++t) {
            for (int x = -W; x <= W; ++x) {
                Complex r1 = 2 * mu * (double)x * at(x, t).A1 -
                             (double)(x - t - 1) * at(x - 1, t).A2 +
                             (double)(x - t + 1) * at(x + 1, t).A2;
                Complex r2 = 2 * mu * (double)x * at(x, t).A2 -
                             (double)(x + t) * (at(x - 1, t).A1 - at(x + 1, t).A1);
                r.max_residual = cmax(cmax(r.max_residual, r1), r2);
                r.points++;
            }
        }
        report.entries.push_back(r);
    }
    {
        IdentityResult r{"equal_time_triple", 0, 0};
        for (int t = -W; t <= W; ++t) {
            for (int x = -W; x <= W; ++x) {
                double xm = x - 1.0, xp = x + 1.0;
                Complex r1 = xp * (xm * xm - (double)t * t) * at(x - 2, t).A1 +
                             xm * (xp * xp - (double)t * t) * at(x + 2, t).A1 -
                             2.0 * x * ((1 + 2 * mu * mu) * (x * x - 1.0) - (double)t * t) *
                                 at(x, t).A1;
                Complex r2 = xp * (xm * xm - (t + 1.0) * (t + 1.0)) * at(x - 2, t).A2 +
                             xm * (xp * xp - (t - 1.0) * (t - 1.0)) * at(x + 2, t).A2 -
                             2.0 * x * ((1 + 2 * mu * mu) * (x * x - 1.0) - (double)t * t + 1.0) *
                                 at(x, t).A2;
                r.max_residual = cmax(cmax(r.max_residual, r1), r2);
                r.points++;
            }
        }
        report.entries.push_back(r);
    }

    report.pass = std::all_of(report.entries.begin(), report.entries.end(),
                              [&](const IdentityResult& e) { return e.max_residual <= tol; });
    return report;
}

std::optional<RationalCombination> rational_combination(double value, double tol, long max_den) {
    const double G = gauss_constant();
    const double L = lemniscate_reciprocal();
    const long p_max = static_cast<long>(std::ceil((std::abs(value) + 10) / G));
    std::optional<RationalCombination> best;
    for (long q = 1; q <= max_den; ++q) {
        for (long p = -p_max * q; p <= p_max * q; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            double alpha = static_cast<double>(p) / q;
            double beta = (value - alpha * G) / L;
            // best rational approximation of beta with denominator <= max_den
            long bn = 0, bd = 1;
            double err = std::abs(beta);
            for (long d = 1; d <= max_den; ++d) {
                long n = std::lround(beta * d);
                if (std::gcd(std::abs(n), d) != 1 && !(n == 0 && d == 1)) continue;
                double e = std::abs(beta - static_cast<double>(n) / d);
                if (e < err) {
                    err = e;
                    bn = n;
                    bd = d;
                }
            }
            double residual =
                std::abs(alpha * G + static_cast<double>(bn) / bd * L - value);
            if (residual > tol) continue;
            RationalCombination cand{p, q, bn, bd, residual};
            auto score = [](const RationalCombination& c) {
                return std::make_tuple(c.alpha_den + c.beta_den,
                                       std::abs(c.alpha_num) + std::abs(c.beta_num));
            };
            if (!best || score(cand) < score(*best)) best = cand;
        }
    }
    return best;
}

}  // namespace anticheckers
