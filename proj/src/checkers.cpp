#include "anticheckers/checkers.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace anticheckers {

CheckerAmplitude a_bruteforce(int x_steps, int t_steps, const LatticeParams& params) {
    if (t_steps < 1) throw DomainError("a_bruteforce: t must be positive");
    if (t_steps > 22) throw DomainError("a_bruteforce: t too large for enumeration");
    const int t = t_steps;
    const double mu = params.m * params.eps;
    // (1+m^2 eps^2)^{(2-n)/2} with n = t+1 points
    const double prefactor = std::pow(1 + mu * mu, 0.5 * (1 - t));
    // mu^T for T = 0..t-1 turns
    std::vector<double> mu_pow(t, 1.0);
    for (int k = 1; k < t; ++k) mu_pow[k] = mu_pow[k - 1] * mu;

    double re = 0, im = 0;  // accumulates sum of (-i mu)^T; overall i applied at the end
    const std::uint32_t nmask = (t >= 2) ? ((1u << (t - 1)) - 1) : 0u;
    for (std::uint32_t mask = 0; mask < (1u << (t - 1)); ++mask) {
        // move sequence: bit j of seq is move j (1 = right); move 0 forced right
        std::uint32_t seq = (mask << 1) | 1u;
        int rights = std::popcount(seq);
        int x = 2 * rights - t;
        if (x != x_steps) continue;
        int turns = std::popcount((seq ^ (seq >> 1)) & nmask);
        double w = mu_pow[turns];
        switch (turns & 3) {  // (-i)^T
            case 0: re += w; break;
            case 1: im -= w; break;
            case 2: re -= w; break;
            case 3: im += w; break;
        }
    }
    // multiply by i: (re + i im) * i = -im + i re
    return {-im * prefactor, re * prefactor};
}

std::vector<CheckerAmplitude> a_dp_row(int t_steps, const LatticeParams& params) {
    if (t_steps < 1) throw DomainError("a_dp_row: t must be positive");
    const double mu = params.m * params.eps;
    const double norm = 1 / std::sqrt(1 + mu * mu);
    const int t = t_steps;
    // row at time s spans x = -s..s; index j = x + s
    std::vector<CheckerAmplitude> row(3);
    row[2] = {0.0, 1.0};  // a(eps,eps) = i
    for (int s = 2; s <= t; ++s) {
        std::vector<CheckerAmplitude> next(2 * s + 1);
        for (int j = 0; j <= 2 * s; ++j) {
            int x = j - s;
            double a1 = 0, a2 = 0;
            if (x + 1 + (s - 1) >= 0 && x + 1 <= s - 1) {
                const CheckerAmplitude& up = row[x + 1 + (s - 1)];
                a1 = (up.a1 + mu * up.a2) * norm;
            }
            if (x - 1 + (s - 1) >= 0 && x - 1 >= -(s - 1)) {
                const CheckerAmplitude& dn = row[x - 1 + (s - 1)];
                a2 = (dn.a2 - mu * dn.a1) * norm;
            }
            next[j] = {a1, a2};
        }
        row = std::move(next);
    }
    return row;
}

CheckerAmplitude a_dp(int x_steps, int t_steps, const LatticeParams& params) {
    if (t_steps < 1) throw DomainError("a_dp: t must be positive");
    if (x_steps < -t_steps || x_steps > t_steps) return {0.0, 0.0};
    return a_dp_row(t_steps, params)[x_steps + t_steps];
}

}  // namespace anticheckers
