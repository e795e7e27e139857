#include "anticheckers/multiparticle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>

namespace anticheckers {

namespace {

// Sum of path amplitudes over checker paths from (0,0) (first move up-right)
// to (x, t) with final-move direction k; zero outside the reachable cone.
// With a = a1 + i*a2, the up-left paths sum to a1 and the up-right ones to
// i*a2.
Complex constrained_path_sum(int k, int x, int t, const std::vector<CheckerAmplitude>& row) {
    if (x < -t || x > t || (x + t) % 2 != 0) return {0.0, 0.0};
    const CheckerAmplitude& a = row[static_cast<size_t>(x + t)];
    return k == 1 ? Complex(a.a1, 0) : Complex(0, a.a2);
}

void validate_query(const TwoElectronQuery& q) {
    if (q.x0 == 0) throw DomainError("two_electron: source offset must be nonzero");
    if (q.t < 1 || q.t > 12) throw DomainError("two_electron: time must be in [1, 12]");
    if ((q.k != 1 && q.k != 2) || (q.k_prime != 1 && q.k_prime != 2))
        throw DomainError("two_electron: final-move directions must be 1 or 2");
}

Complex amplitude_from_row(const TwoElectronQuery& q, const std::vector<CheckerAmplitude>& row) {
    // direct product minus the product with interchanged final moves; the
    // second electron's path sums are translates by x0
    Complex direct = constrained_path_sum(q.k, q.x, q.t, row) *
                     constrained_path_sum(q.k_prime, q.x_prime - q.x0, q.t, row);
    Complex exchanged = constrained_path_sum(q.k_prime, q.x_prime, q.t, row) *
                        constrained_path_sum(q.k, q.x - q.x0, q.t, row);
    return direct - exchanged;
}

}  // namespace

Complex two_electron_amplitude(const TwoElectronQuery& q) {
    validate_query(q);
    LatticeParams p;  // m = eps = 1
    return amplitude_from_row(q, a_dp_row(q.t, p));
}

double two_electron_probability(const TwoElectronQuery& q) {
    return std::norm(two_electron_amplitude(q));
}

double two_electron_total_probability(int x0, int t) {
    TwoElectronQuery probe;
    probe.x0 = x0;
    probe.t = t;
    validate_query(probe);
    LatticeParams p;
    std::vector<CheckerAmplitude> row = a_dp_row(t, p);
    int lo = std::min(-t, x0 - t), hi = std::max(t, x0 + t);
    double total = 0;
    TwoElectronQuery q;
    q.x0 = x0;
    q.t = t;
    for (int x = lo; x <= hi; ++x) {
        for (int xp = lo; xp <= hi; ++xp) {
            q.x = x;
            q.x_prime = xp;
            // equal final directions: x' >= x picks one representative of the
            // unordered state; opposite directions: the (k, k') = (1, 2)
            // labeling alone covers each state once
            if (xp >= x) {
                q.k = q.k_prime = 1;
                total += std::norm(amplitude_from_row(q, row));
                q.k = q.k_prime = 2;
                total += std::norm(amplitude_from_row(q, row));
            }
            q.k = 1;
            q.k_prime = 2;
            total += std::norm(amplitude_from_row(q, row));
        }
    }
    return total;
}

Complex det_arrow(const ArrowTable& table, const std::vector<EdgeId>& sources,
                  const std::vector<EdgeId>& sinks) {
    const TorusLattice& lat = table.lattice();
    if (sources.size() != sinks.size())
        throw DomainError("det_arrow: source and sink counts must match");
    const size_t n = sources.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (lat.same_edge(sources[i], sources[j]) || lat.same_edge(sinks[i], sinks[j]))
                return {0.0, 0.0};
        }
    }
    // Leibniz expansion over permutations; n is tiny here
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    Complex det(0, 0);
    do {
        // parity of the current permutation
        int inversions = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        Complex term(inversions % 2 == 0 ? 1.0 : -1.0, 0.0);
        for (size_t kk = 0; kk < n; ++kk) term *= table.arrow(sources[kk], sinks[perm[kk]]);
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

Complex det_arrow(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                  const std::vector<EdgeId>& sinks) {
    return det_arrow(ArrowTable(lat), sources, sinks);
}

Complex pass_arrow(const ArrowTable& table, const EdgeId& a, const EdgeId& e, const EdgeId& f) {
    return 0.5 * table.arrow(a, f) + table.arrow(a, e) * table.arrow(e, f);
}

Complex pass_arrow(const TorusLattice& lat, const EdgeId& a, const EdgeId& e, const EdgeId& f) {
    return pass_arrow(ArrowTable(lat), a, e, f);
}

namespace {

struct SpeciesConfigs {
    std::vector<Complex> weights;
    std::vector<unsigned long long> masks;
};

SpeciesConfigs collect(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                       const std::vector<EdgeId>& sinks) {
    SpeciesConfigs out;
    for (const LoopConfigEntry& entry : enumerate_loop_configs(lat, sources, sinks)) {
        out.weights.push_back(entry.weight);
        out.masks.push_back(entry.mask);
    }
    return out;
}

Complex coupled_sum(const SpeciesConfigs& e, const SpeciesConfigs& mu, double g) {
    // (1+g)^{commonedges}; exponents are bounded by the edge count, so the
    // powers are tabulated once
    std::vector<double> pow_table(65, 1.0);
    for (int i = 1; i <= 64; ++i) pow_table[static_cast<size_t>(i)] = pow_table[i - 1] * (1 + g);
    Complex total(0, 0);
    for (size_t i = 0; i < e.weights.size(); ++i) {
        Complex partial(0, 0);
        for (size_t j = 0; j < mu.weights.size(); ++j) {
            int common = std::popcount(e.masks[i] & mu.masks[j]);
            partial += mu.weights[j] * pow_table[static_cast<size_t>(common)];
        }
        total += e.weights[i] * partial;
    }
    return total;
}

TorusLattice species_lattice(const FermiParams& fp, double mass) {
    LatticeParams p;
    p.m = mass;
    p.eps = fp.eps;
    p.delta = fp.delta;
    return TorusLattice(fp.T, p);
}

}  // namespace

FermiResult fermi_arrow(const FermiParams& fp, const EdgeId& a_e, const EdgeId& a_mu,
                        const EdgeId& f_e, const EdgeId& f_mu) {
    TorusLattice lat_e = species_lattice(fp, fp.m_e);
    TorusLattice lat_mu = species_lattice(fp, fp.m_mu);
    SpeciesConfigs num_e = collect(lat_e, {a_e}, {f_e});
    SpeciesConfigs num_mu = collect(lat_mu, {a_mu}, {f_mu});
    SpeciesConfigs vac_e = collect(lat_e, {}, {});
    SpeciesConfigs vac_mu = collect(lat_mu, {}, {});
    FermiResult result;
    result.numerator = coupled_sum(num_e, num_mu, fp.g);
    result.denominator = coupled_sum(vac_e, vac_mu, fp.g);
    if (std::abs(result.denominator) < 1e-12)
        throw DegenerateLatticeError("fermi_arrow: coupled vacuum sum vanishes");
    result.value = result.numerator / result.denominator;
    return result;
}

Complex fermi_first_order(const FermiParams& fp, const EdgeId& a_e, const EdgeId& a_mu,
                          const EdgeId& f_e, const EdgeId& f_mu) {
    TorusLattice lat_e = species_lattice(fp, fp.m_e);
    TorusLattice lat_mu = species_lattice(fp, fp.m_mu);
    ArrowTable A_e(lat_e), A_mu(lat_mu);
    Complex zeroth = A_e.arrow(a_e, f_e) * A_mu.arrow(a_mu, f_mu);
    Complex first(0, 0);
    for (int i = 0; i < lat_e.num_edges(); ++i) {
        EdgeId e = lat_e.edge_of(i);
        Complex hop_e = A_e.arrow(a_e, e) * A_e.arrow(e, f_e);
        Complex hop_mu = A_mu.arrow(a_mu, e) * A_mu.arrow(e, f_mu);
        first += hop_e * hop_mu;                         // both species pass e
        first += A_e.arrow(a_e, f_e) * 0.5 * hop_mu;     // electron loops, A(e->e) = 1/2
        first += hop_e * A_mu.arrow(a_mu, f_mu) * 0.5;   // muon loops
    }
    return zeroth + fp.g * first;
}

PerturbationReport perturbation_check(const FermiParams& base, const EdgeId& a_e,
                                      const EdgeId& a_mu, const EdgeId& f_e, const EdgeId& f_mu,
                                      const std::vector<double>& g_values) {
    PerturbationReport report;
    for (double g : g_values) {
        FermiParams fp = base;
        fp.g = g;
        Complex exact = fermi_arrow(fp, a_e, a_mu, f_e, f_mu).value;
        Complex approx = fermi_first_order(fp, a_e, a_mu, f_e, f_mu);
        report.g_values.push_back(g);
        report.residuals.push_back(std::abs(exact - approx));
    }
    // least-squares slope of log residual vs log g
    const size_t n = report.g_values.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double lx = std::log(report.g_values[i]);
        double ly = std::log(std::max(report.residuals[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    report.slope = denom == 0 ? 0 : (static_cast<double>(n) * sxy - sx * sy) / denom;
    report.pass = report.slope >= 1.8;
    return report;
}

}  // namespace anticheckers
