#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anticheckers/continuum.hpp"

using namespace anticheckers;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double fit_slope(const std::vector<double>& logx, const std::vector<double>& logy) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = logx.size();
    for (int i = 0; i < n; ++i) {
        sx += logx[i];
        sy += logy[i];
        sxx += logx[i] * logx[i];
        sxy += logx[i] * logy[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("continuum propagator closed forms") {
    Matrix2c m0 = feynman_continuum({3, 0, 0});
    CHECK(m0.g12 == Complex(0, 1 / (6 * kPi)));
    CHECK(m0.g21 == Complex(0, 1 / (6 * kPi)));
    CHECK(m0.g11 == Complex(0, 0));

    double m = 1.3, x = 0.4, t = 2.0;
    double s = std::sqrt(t * t - x * x);
    Matrix2c in = feynman_continuum({x, t, m});
    CHECK(in.g11.real() == doctest::Approx(m / 4 * bessel(BesselKind::J, 0, m * s)).epsilon(1e-13));
    CHECK(in.g11.imag() == doctest::Approx(-m / 4 * bessel(BesselKind::Y, 0, m * s)).epsilon(1e-13));
    CHECK(in.g22 == in.g11);
    Matrix2c mirror = feynman_continuum({-x, t, m});
    CHECK(mirror.g11 == in.g11);

    double xo = 2.5, to = 1.0, so = std::sqrt(xo * xo - to * to);
    Matrix2c outb = feynman_continuum({xo, to, m});
    CHECK(outb.g11.real() == 0);
    CHECK(outb.g11.imag() ==
          doctest::Approx(m / (2 * kPi) * bessel(BesselKind::K, 0, m * so)).epsilon(1e-12));
    CHECK(outb.g12.imag() ==
          doctest::Approx((to + xo) / so * m / (2 * kPi) * bessel(BesselKind::K, 1, m * so))
              .epsilon(1e-12));

    CHECK_THROWS_AS(feynman_continuum({1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(feynman_continuum({1.0, -1.0, 0.0}), DomainError);
}

TEST_CASE("continuum propagator solves the free-field equations") {
    double m = 1.1, h = 1e-4;
    auto g = [&](double x, double t) { return feynman_continuum({x, t, m}); };
    for (auto [x, t] : {std::pair{0.4, 1.7}, {2.3, 0.9}, {-1.2, 2.6}}) {
        // first-order system: m G12 + (dx - dt) G11 = 0, (dx + dt) G12 + m G11 = 0
        auto dx11 = (g(x + h, t).g11 - g(x - h, t).g11) / (2 * h);
        auto dt11 = (g(x, t + h).g11 - g(x, t - h).g11) / (2 * h);
        auto dx12 = (g(x + h, t).g12 - g(x - h, t).g12) / (2 * h);
        auto dt12 = (g(x, t + h).g12 - g(x, t - h).g12) / (2 * h);
        CHECK(std::abs(m * g(x, t).g12 + dx11 - dt11) < 1e-4);
        CHECK(std::abs(dx12 + dt12 + m * g(x, t).g11) < 1e-4);
        // second order: (dtt - dxx + m^2) G1k = 0
        double h2 = 1e-3;
        for (int k : {1, 2}) {
            auto pick = [&](double xx, double tt) {
                Matrix2c mat = g(xx, tt);
                return k == 1 ? mat.g11 : mat.g12;
            };
            Complex dtt = (pick(x, t + h2) - 2.0 * pick(x, t) + pick(x, t - h2)) / (h2 * h2);
            Complex dxx = (pick(x + h2, t) - 2.0 * pick(x, t) + pick(x - h2, t)) / (h2 * h2);
            CHECK(std::abs(dtt - dxx + m * m * pick(x, t)) < 1e-3);
        }
    }
}

TEST_CASE("lattice point snapping") {
    auto [x1, t1] = lattice_point_of(0.50, 6.0, 0.03);
    CHECK(x1 == doctest::Approx(0.54).epsilon(1e-12));
    CHECK(t1 == doctest::Approx(6.00).epsilon(1e-12));
    auto [x2, t2] = lattice_point_of(-0.01, 0.01, 0.03);
    CHECK(x2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t2 == doctest::Approx(0.06).epsilon(1e-12));
    auto [x3, t3] = lattice_point_of(0.54, 6.0, 0.03);
    CHECK(x3 == doctest::Approx(0.54).epsilon(1e-12));
    CHECK(t3 == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("halving eps roughly halves the error at the standard probe") {
    std::vector<ConvergenceRow> rows = convergence_experiment(0.5, 6.0, 4.0, {0.03, 0.015});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].error_ratio > 1.5);
    CHECK(rows[1].error_ratio < 3.0);
}

TEST_CASE("first-order convergence at generic probe points") {
    int within = 0, total = 0;
    for (int j = 0; j < 20; ++j) {
        double x = 0.17 + 0.093 * j;
        double t = (j % 2 == 0) ? x + 0.6 + 0.05 * j : std::max(0.3, x - 0.55 - 0.02 * j);
        if (std::abs(x - t) < 0.15) t = x + 0.45;  // first-order rate holds away from the cone
        std::vector<ConvergenceRow> rows = convergence_experiment(x, t, 1.0, {0.02, 0.01});
        double order = std::log2(rows[1].error_ratio);
        CAPTURE(x);
        CAPTURE(t);
        CAPTURE(order);
        total++;
        if (order >= 0.7 && order <= 1.3) within++;
    }
    CHECK(total == 20);
    CHECK(within == 20);
}

TEST_CASE("massless lattice values equal the continuum propagator at lattice points") {
    double eps = 0.05;
    for (int ti : {40, 80}) {
        for (int xi = -ti + 1; xi < ti; xi += 2) {  // odd offsets: imaginary class
            PropagatorPair v = massless_heavy(xi, ti, LimitKind::massless, eps);
            Matrix2c g = feynman_continuum({xi * eps, ti * eps, 0});
            CHECK(std::abs(v.A2 / (4 * eps) - Complex(0, g.g12.imag())) < 1e-13);
        }
    }
}

TEST_CASE("between-peaks evaluator: zone, phase, and error decay") {
    LatticeParams p{1, 1, 0};
    // theta at x=0 reduces to t*asin(mu/sqrt(1+mu^2))
    AsymptoticZone z = classify_zone(0, 64, p);
    REQUIRE(z.zone == ZoneTag::between_peaks);
    CHECK(z.theta == doctest::Approx(64 * std::asin(1 / std::sqrt(2.0))).epsilon(1e-13));

    std::vector<double> logt, logerr;
    for (int t : {64, 128, 256, 512}) {
        PropagatorPair approx = asymptotic_between_peaks(0, t, p);
        PropagatorPair exact = propagate_quadrature(0, t, p);
        double err = std::max(std::abs(approx.A1 - exact.A1), std::abs(approx.A2 - exact.A2));
        logt.push_back(std::log(static_cast<double>(t)));
        logerr.push_back(std::log(err));
        // parity branch: even (x+t) puts A1 on the imaginary axis
        CHECK(approx.A1.real() == 0);
        CHECK(approx.A2.imag() == 0);
    }
    double slope = fit_slope(logt, logerr);
    CHECK(slope >= -1.8);
    CHECK(slope <= -1.2);

    PropagatorPair odd = asymptotic_between_peaks(1, 64, p);
    CHECK(odd.A1.imag() == 0);  // odd (x+t) puts A1 on the real axis

    CHECK_THROWS_AS(asymptotic_between_peaks(60, 64, p), DomainError);
    CHECK_THROWS_AS(asymptotic_between_peaks(0, 5, p), DomainError);
}

TEST_CASE("airy evaluator: structure and error decay") {
    LatticeParams p{1, 1, 0};
    std::vector<double> logt, logerr;
    for (int t : {64, 128, 256, 512}) {
        // Probe near the peak velocity, where the 1/t error envelope is tight;
        // deeper inside the cone the formula over-performs (error ~ t^{-3/2}).
        int x = static_cast<int>(std::lround(0.9 * t / std::sqrt(2.0)));
        PropagatorPair approx = asymptotic_airy(x, t, p);
        PropagatorPair exact = propagate_quadrature(x, t, p);
        double err = std::max(std::abs(approx.A1 - exact.A1), std::abs(approx.A2 - exact.A2));
        logt.push_back(std::log(static_cast<double>(t)));
        logerr.push_back(std::log(err));
        // the two components differ by the sqrt((t+x)/(t-x)) factor and one
        // factor of i
        double ratio = std::sqrt((t + x) / static_cast<double>(t - x));
        CHECK(std::abs(approx.A2 * Complex(0, 1) - ratio * approx.A1) < 1e-13);
        // prefactor phase is a 4th root of unity: one component real, one
        // imaginary
        bool a1_real = std::abs(approx.A1.imag()) < 1e-15 * (1 + std::abs(approx.A1));
        bool a1_imag = std::abs(approx.A1.real()) < 1e-15 * (1 + std::abs(approx.A1));
        CHECK((a1_real || a1_imag));
    }
    double slope = fit_slope(logt, logerr);
    CHECK(slope >= -1.4);
    CHECK(slope <= -0.7);

    CHECK_THROWS_AS(asymptotic_airy(0, 64, p), DomainError);
    CHECK_THROWS_AS(asymptotic_airy(64, 64, p), DomainError);
}

TEST_CASE("the two asymptotic evaluators agree in the shared zone") {
    LatticeParams p{1, 1, 0};
    for (int t : {128, 256}) {
        for (int x : {8, 24, 40}) {
            PropagatorPair bp = asymptotic_between_peaks(x, t, p);
            PropagatorPair airy = asymptotic_airy(x, t, p);
            double envelope = 10.0 * (p.eps / std::pow(static_cast<double>(t), 1.5) +
                                      1.0 / static_cast<double>(t));
            CHECK(std::abs(bp.A1 - airy.A1) < envelope);
            CHECK(std::abs(bp.A2 - airy.A2) < envelope);
        }
    }
}

TEST_CASE("experimental forbidden-zone formula tracks the exact values") {
    LatticeParams p{1, 1, 0};
    int t = 64, x = 50;  // 1/sqrt(2) < x/t < 1
    PropagatorPair approx = asymptotic_forbidden_experimental(x, t, p);
    PropagatorPair exact = propagate_quadrature(x, t, p);
    CHECK(std::abs(approx.A1 - exact.A1) < 0.3 * std::abs(exact.A1));
    CHECK(std::abs(approx.A2 - exact.A2) < 0.3 * std::abs(exact.A2));
    CHECK_THROWS_AS(asymptotic_forbidden_experimental(20, 64, p), DomainError);
    CHECK_THROWS_AS(asymptotic_forbidden_experimental(70, 64, p), DomainError);
}

TEST_CASE("figure profiles: shape agreement and first-order density error") {
    double m = 4, t = 6, eps = 0.03;
    // The discretization error of the density is genuinely first order with a
    // sizeable constant toward the peaks: at x = 4.8 it is ~19% of the local
    // value at this eps and halves with eps, so the gates below pin the
    // absolute error level and its decay rather than a pointwise percentage.
    double max_err[2];
    int pass = 0;
    for (double e : {eps, eps / 2}) {
        std::vector<FigurePoint> density = charge_density_profile(m, t, e, 4.8);
        int checked = 0;
        double worst = 0;
        for (const FigurePoint& fp : density) {
            CHECK(fp.lattice_value >= 0);
            if (std::abs(std::abs(fp.x) - t) < 4 * e) continue;  // light-cone band excluded
            worst = std::max(worst, std::abs(fp.lattice_value - fp.continuum_value));
            // away from the peaks the match is pointwise-tight
            if (std::abs(fp.x) <= 2.0)
                CHECK(std::abs(fp.lattice_value - fp.continuum_value) <=
                      0.05 * std::abs(fp.continuum_value));
            checked++;
        }
        CHECK(checked > 100);
        max_err[pass++] = worst;
    }
    CHECK(max_err[0] < 0.12);
    CHECK(max_err[0] / max_err[1] > 1.5);  // halving eps roughly halves the worst error
    CHECK(max_err[0] / max_err[1] < 3.0);

    std::vector<FigurePoint> wave = wave_profile(1, m, t, eps, 4.8);
    for (const FigurePoint& fp : wave) {
        if (std::abs(std::abs(fp.x) - t) < 4 * eps) continue;
        CHECK(std::abs(fp.lattice_value - fp.continuum_value) <= 0.04);
        if (!std::isnan(fp.asymptotic_value))
            CHECK(std::abs(fp.asymptotic_value - fp.continuum_value) <= 0.04);
    }
    std::vector<FigurePoint> wave2 = wave_profile(2, m, t, eps, 4.8);
    for (const FigurePoint& fp : wave2) {
        // odd sublattice: x is an odd multiple of eps
        long q = std::lround(fp.x / eps);
        CHECK(((q % 2 + 2) % 2) == 1);
        if (std::abs(std::abs(fp.x) - t) < 4 * eps) continue;
        CHECK(std::abs(fp.lattice_value - fp.continuum_value) <= 0.12);
    }
}
