#include "anticheckers/torus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace anticheckers {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

int floor_mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

TorusLattice::TorusLattice(int T, const LatticeParams& params) : T_(T), params_(params) {
    if (T <= 0) throw DomainError("torus: lattice size must be positive");
    if (params.m < 0 || params.eps <= 0) throw DomainError("torus: invalid mass or step");
    if (params.delta < 0 || params.delta >= 1) throw DomainError("torus: delta must be in [0,1)");
}

EdgeId TorusLattice::normalize(EdgeId e) const {
    e.u = floor_mod(e.u, 2 * T_);
    e.v = floor_mod(e.v, 2 * T_);
    if ((e.u + e.v) % 2 != 0) throw DomainError("torus: (u+v) must be even for a lattice point");
    return e;
}

int TorusLattice::edge_index(const EdgeId& edge) const {
    EdgeId e = normalize(edge);
    int point = e.v * T_ + e.u / 2;
    return 2 * point + static_cast<int>(e.dir);
}

EdgeId TorusLattice::edge_of(int index) const {
    int point = index / 2;
    EdgeId e;
    e.dir = static_cast<EdgeDir>(index % 2);
    e.v = point / T_;
    e.u = 2 * (point % T_) + (e.v % 2);
    return e;
}

bool TorusLattice::same_edge(const EdgeId& a, const EdgeId& b) const {
    return edge_index(a) == edge_index(b);
}

std::pair<int, int> TorusLattice::endpoint(const EdgeId& edge) const {
    EdgeId e = normalize(edge);
    int du = e.dir == EdgeDir::up_right ? 1 : -1;
    return {floor_mod(e.u + du, 2 * T_), floor_mod(e.v + 1, 2 * T_)};
}

std::array<EdgeId, 2> TorusLattice::successors(const EdgeId& e) const {
    auto [u, v] = endpoint(e);
    return {EdgeId{u, v, EdgeDir::up_right}, EdgeId{u, v, EdgeDir::up_left}};
}

std::array<EdgeId, 2> TorusLattice::predecessors(const EdgeId& edge) const {
    EdgeId e = normalize(edge);
    return {normalize(EdgeId{e.u - 1, e.v - 1, EdgeDir::up_right}),
            normalize(EdgeId{e.u + 1, e.v - 1, EdgeDir::up_left})};
}

EdgeId TorusLattice::a0() const { return EdgeId{0, 0, EdgeDir::up_right}; }

EdgeId TorusLattice::f_edge(int k, int x_steps, int t_steps) const {
    if (k != 1 && k != 2) throw DomainError("torus: component index must be 1 or 2");
    return normalize(
        EdgeId{2 * x_steps, 2 * t_steps, k == 1 ? EdgeDir::up_left : EdgeDir::up_right});
}

EdgeId TorusLattice::e_edge(int k, int u, int v) const {
    if (k != 1 && k != 2) throw DomainError("torus: component index must be 1 or 2");
    if (k == 2) return normalize(EdgeId{u - 1, v - 1, EdgeDir::up_right});
    return normalize(EdgeId{u + 1, v - 1, EdgeDir::up_left});
}

EdgeId TorusLattice::b_edge(int k) const { return e_edge(k, 0, 0); }

namespace detail {
bool node_weight_sign_flip = false;
}

Complex node_weight(const TorusLattice& lat, const EdgeId& e, const EdgeId& f) {
    auto [u, v] = lat.endpoint(e);
    EdgeId fn = lat.normalize(f);
    if (fn.u != u || fn.v != v) throw DomainError("node_weight: edges are not adjacent");
    const double mu = lat.params().m * lat.params().eps;
    const double delta = lat.params().delta;
    bool even_node = u % 2 == 0;
    bool straight = e.dir == fn.dir;
    double flip = detail::node_weight_sign_flip ? -1.0 : 1.0;
    if (even_node) {
        double norm = std::sqrt(1 - delta * delta);
        return straight ? Complex(1 / norm, 0) : Complex(flip * -delta / norm, 0);
    }
    double norm = std::sqrt(1 + mu * mu);
    return straight ? Complex(1 / norm, 0) : Complex(0, flip * -mu / norm);
}

namespace {

Eigen::MatrixXcd transfer_matrix(const TorusLattice& lat) {
    const int n = lat.num_edges();
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    for (int ei = 0; ei < n; ++ei) {
        EdgeId e = lat.edge_of(ei);
        for (const EdgeId& f : lat.successors(e)) {
            U(lat.edge_index(f), ei) = node_weight(lat, e, f);
        }
    }
    return U;
}

double degeneracy_scale(const TorusLattice& lat) {
    // |Z| is compared against the natural 2^{T^2} scale of the product formula.
    return 1e-9 * std::pow(2.0, lat.size() * lat.size());
}

}  // namespace

Complex partition_function(const TorusLattice& lat) {
    Eigen::MatrixXcd U = transfer_matrix(lat);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(U.rows(), U.cols()) - U;
    return M.determinant();
}

Complex partition_function_product(const TorusLattice& lat) {
    const int T = lat.size();
    const double mu = lat.params().m * lat.params().eps;
    const double delta = lat.params().delta;
    const double n = std::sqrt(1 - delta * delta) * std::sqrt(1 + mu * mu);
    Complex z = std::pow(2.0, T * T);
    for (int q = 0; q < T; ++q) {
        for (int r = 0; r < T; ++r) {
            double pe = 2 * kPi * q / T;
            double we = 2 * kPi * r / T;
            z *= std::cos(we) - (std::cos(pe) + Complex(0, mu * delta)) / n;
        }
    }
    return z;
}

ArrowTable::ArrowTable(const TorusLattice& lat) : lat_(lat) {
    const int n = lat.num_edges();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n) - transfer_matrix(lat);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    Complex z = lu.determinant();
    if (std::abs(z) < degeneracy_scale(lat))
        throw DegenerateLatticeError("torus: partition function vanishes (degenerate lattice)");
    Eigen::MatrixXcd A = lu.inverse();
    entries_.assign(static_cast<size_t>(n) * n, Complex(0, 0));
    for (int f = 0; f < n; ++f)
        for (int a = 0; a < n; ++a) entries_[static_cast<size_t>(f) * n + a] = A(f, a);
}

Complex ArrowTable::arrow(const EdgeId& a, const EdgeId& f) const {
    const int n = lat_.num_edges();
    return entries_[static_cast<size_t>(lat_.edge_index(f)) * n + lat_.edge_index(a)];
}

Complex arrow(const TorusLattice& lat, const EdgeId& a, const EdgeId& f) {
    return ArrowTable(lat).arrow(a, f);
}

Complex arrow_dft(const TorusLattice& lat, int k, int u, int v) {
    if (k != 1 && k != 2) throw DomainError("arrow_dft: component index must be 1 or 2");
    const int T = lat.size();
    u = floor_mod(u, 2 * T);
    v = floor_mod(v, 2 * T);
    if ((u + v) % 2 != 0) throw DomainError("arrow_dft: (u+v) must be even");
    const double mu = lat.params().m * lat.params().eps;
    const double delta = lat.params().delta;
    const double sd = std::sqrt(1 - delta * delta);
    const double sm = std::sqrt(1 + mu * mu);
    const bool even_point = u % 2 == 0;
    // For even points the phase carries (x/eps, t/eps) = (u/2, v/2); for odd
    // points the shifted (x*/eps, t*/eps) = ((u+1)/2, (v+1)/2).
    const int xs = even_point ? u / 2 : (u + 1) / 2;
    const int ts = even_point ? v / 2 : (v + 1) / 2;
    Complex sum(0, 0);
    for (int q = 0; q < T; ++q) {
        for (int r = 0; r < T; ++r) {
            double pe = 2 * kPi * q / T;
            double we = 2 * kPi * r / T;
            Complex D = sd * sm * std::cos(we) - std::cos(pe) - Complex(0, mu * delta);
            Complex numer;
            if (even_point) {
                numer = k == 1 ? Complex(mu, 0) - Complex(0, delta) * std::polar(1.0, pe)
                               : Complex(sd * sm * std::sin(we) + std::sin(pe), 0);
            } else {
                numer = k == 1 ? mu * sd * std::polar(1.0, we) - Complex(0, delta * sm)
                               : sm * std::polar(1.0, -pe) - sd * std::polar(1.0, we);
            }
            sum += numer / D * std::polar(1.0, pe * xs - we * ts);
        }
    }
    Complex prefactor = (even_point || k == 1) ? Complex(0, -1) : Complex(1, 0);
    if (!even_point && k == 1) prefactor = Complex(0, -1);
    Complex value = prefactor * sum / (2.0 * T * T);
    if (even_point && k == 2 && u == 0 && v == 0) value += 0.5;
    return value;
}

// ---------------------------------------------------------------------------
// Brute-force enumerations (T <= 2).

namespace {

struct EnumContext {
    const TorusLattice* lat = nullptr;
    int n = 0;
    std::vector<int> sources, sinks;                   // edge indices
    std::vector<std::array<int, 2>> succ;              // successor edge indices
    std::vector<std::array<Complex, 2>> succ_weight;   // matching node weights
    std::vector<LoopConfigEntry>* out = nullptr;

    LoopConfigEntry current;
    unsigned long long used = 0;
    std::vector<int> path_sink;  // sink edge index reached by each finished path
};

void enumerate_loops_from(EnumContext& ctx, int first_free, unsigned long long skipped);

void emit(EnumContext& ctx) {
    LoopConfigEntry entry = ctx.current;
    entry.mask = ctx.used;
    // permutation sign over sinks
    int n = static_cast<int>(ctx.path_sink.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        auto it = std::find(ctx.sinks.begin(), ctx.sinks.end(), ctx.path_sink[i]);
        perm[i] = static_cast<int>(it - ctx.sinks.begin());
    }
    int sign = 1;
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = perm[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    entry.weight *= sign;
    ctx.out->push_back(std::move(entry));
}

// Loops on the edges not yet used: process edge indices in increasing order;
// each is either left out permanently or becomes the starting (minimal) edge of
// a new loop.
void close_or_extend_loop(EnumContext& ctx, int start, int cur, unsigned long long skipped,
                          std::vector<int>& loop, Complex weight) {
    for (int s = 0; s < 2; ++s) {
        int nxt = ctx.succ[cur][s];
        Complex w = weight * ctx.succ_weight[cur][s];
        if (nxt == start) {
            // close: overall minus sign for a loop
            ctx.current.loops.push_back(loop);
            Complex saved = ctx.current.weight;
            ctx.current.weight *= -w;
            enumerate_loops_from(ctx, start + 1, skipped);
            ctx.current.weight = saved;
            ctx.current.loops.pop_back();
            continue;
        }
        if ((ctx.used >> nxt) & 1) continue;
        if ((skipped >> nxt) & 1) continue;
        ctx.used |= 1ull << nxt;
        loop.push_back(nxt);
        close_or_extend_loop(ctx, start, nxt, skipped, loop, w);
        loop.pop_back();
        ctx.used &= ~(1ull << nxt);
    }
}

void enumerate_loops_from(EnumContext& ctx, int first_free, unsigned long long skipped) {
    int i = first_free;
    while (i < ctx.n && (((ctx.used >> i) & 1) || ((skipped >> i) & 1))) ++i;
    if (i == ctx.n) {
        emit(ctx);
        return;
    }
    // option A: edge i belongs to no loop
    enumerate_loops_from(ctx, i + 1, skipped | (1ull << i));
    // option B: loops starting (minimally) at edge i
    ctx.used |= 1ull << i;
    std::vector<int> loop{i};
    close_or_extend_loop(ctx, i, i, skipped, loop, Complex(1, 0));
    ctx.used &= ~(1ull << i);
}

void enumerate_paths_from(EnumContext& ctx, size_t source_pos);

void extend_path(EnumContext& ctx, size_t source_pos, int cur, std::vector<int>& path,
                 Complex weight) {
    bool is_sink = std::find(ctx.sinks.begin(), ctx.sinks.end(), cur) != ctx.sinks.end() &&
                   std::find(ctx.path_sink.begin(), ctx.path_sink.end(), cur) ==
                       ctx.path_sink.end();
    if (is_sink) {
        // terminate the path here
        ctx.current.paths.push_back(path);
        ctx.path_sink.push_back(cur);
        Complex saved = ctx.current.weight;
        ctx.current.weight *= weight;
        enumerate_paths_from(ctx, source_pos + 1);
        ctx.current.weight = saved;
        ctx.path_sink.pop_back();
        ctx.current.paths.pop_back();
    }
    for (int s = 0; s < 2; ++s) {
        int nxt = ctx.succ[cur][s];
        if ((ctx.used >> nxt) & 1) continue;
        ctx.used |= 1ull << nxt;
        path.push_back(nxt);
        extend_path(ctx, source_pos, nxt, path, weight * ctx.succ_weight[cur][s]);
        path.pop_back();
        ctx.used &= ~(1ull << nxt);
    }
}

void enumerate_paths_from(EnumContext& ctx, size_t source_pos) {
    if (source_pos == ctx.sources.size()) {
        enumerate_loops_from(ctx, 0, 0);
        return;
    }
    int a = ctx.sources[source_pos];
    if ((ctx.used >> a) & 1) return;  // source already consumed: no configuration
    ctx.used |= 1ull << a;
    std::vector<int> path{a};
    extend_path(ctx, source_pos, a, path, Complex(1, 0));
    ctx.used &= ~(1ull << a);
}

EnumContext make_context(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                         const std::vector<EdgeId>& sinks) {
    if (lat.size() > 2) throw DomainError("brute force enumeration supports T <= 2 only");
    if (sources.size() != sinks.size())
        throw DomainError("brute force enumeration needs equal source and sink counts");
    EnumContext ctx;
    ctx.lat = &lat;
    ctx.n = lat.num_edges();
    for (const EdgeId& a : sources) ctx.sources.push_back(lat.edge_index(a));
    for (const EdgeId& f : sinks) ctx.sinks.push_back(lat.edge_index(f));
    ctx.succ.resize(ctx.n);
    ctx.succ_weight.resize(ctx.n);
    for (int ei = 0; ei < ctx.n; ++ei) {
        EdgeId e = lat.edge_of(ei);
        auto succ = lat.successors(e);
        for (int s = 0; s < 2; ++s) {
            ctx.succ[ei][s] = lat.edge_index(succ[s]);
            ctx.succ_weight[ei][s] = node_weight(lat, e, succ[s]);
        }
    }
    return ctx;
}

}  // namespace

int LoopConfigEntry::sink_of_path(int i) const { return paths[i].back(); }

std::vector<LoopConfigEntry> enumerate_loop_configs(const TorusLattice& lat,
                                                    const std::vector<EdgeId>& sources,
                                                    const std::vector<EdgeId>& sinks) {
    EnumContext ctx = make_context(lat, sources, sinks);
    std::vector<LoopConfigEntry> out;
    ctx.out = &out;
    ctx.current.weight = Complex(1, 0);
    // duplicated sources or sinks: the sum vanishes (no valid configuration)
    auto has_dup = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (has_dup(ctx.sources) || has_dup(ctx.sinks)) return out;
    enumerate_paths_from(ctx, 0);
    return out;
}

BruteforceSum bruteforce_loop_configs(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                                      const std::vector<EdgeId>& sinks) {
    BruteforceSum sum;
    for (const LoopConfigEntry& entry : enumerate_loop_configs(lat, sources, sinks))
        sum.numerator += entry.weight;
    for (const LoopConfigEntry& entry : enumerate_loop_configs(lat, {}, {}))
        sum.denominator += entry.weight;
    return sum;
}

// ---------------------------------------------------------------------------
// Currents.

namespace {

struct CurrentEvaluator {
    const TorusLattice* lat;
    int n;
    std::vector<int> sources, sinks;
    std::vector<std::pair<int, int>> start_point, end_point;  // (u, v) per edge
    std::vector<std::array<int, 2>> succ;

    explicit CurrentEvaluator(const TorusLattice& l, const std::vector<EdgeId>& src,
                              const std::vector<EdgeId>& snk)
        : lat(&l), n(l.num_edges()) {
        if (l.size() > 2) throw DomainError("current enumeration supports T <= 2 only");
        for (const EdgeId& a : src) sources.push_back(l.edge_index(a));
        for (const EdgeId& f : snk) sinks.push_back(l.edge_index(f));
        start_point.resize(n);
        end_point.resize(n);
        succ.resize(n);
        for (int ei = 0; ei < n; ++ei) {
            EdgeId e = l.edge_of(ei);
            EdgeId en = l.normalize(e);
            start_point[ei] = {en.u, en.v};
            end_point[ei] = l.endpoint(e);
            auto s = l.successors(e);
            succ[ei] = {l.edge_index(s[0]), l.edge_index(s[1])};
        }
    }

    bool is_source(int e) const {
        return std::find(sources.begin(), sources.end(), e) != sources.end();
    }
    bool is_sink(int e) const { return std::find(sinks.begin(), sinks.end(), e) != sinks.end(); }

    // point key for maps
    static int key(std::pair<int, int> p) { return p.first * 64 + p.second; }

    bool balanced(unsigned long long mask, std::vector<int>& singular_points) const {
        // per point: #starting (non-source) == #ending (non-sink)
        std::array<int, 64 * 64> out_count{}, in_count{};
        std::vector<int> touched;
        for (int e = 0; e < n; ++e) {
            if (!((mask >> e) & 1)) continue;
            if (!is_source(e)) {
                int k = key(start_point[e]);
                if (!out_count[k] && !in_count[k]) touched.push_back(k);
                out_count[k]++;
            }
            if (!is_sink(e)) {
                int k = key(end_point[e]);
                if (!out_count[k] && !in_count[k]) touched.push_back(k);
                in_count[k]++;
            }
        }
        singular_points.clear();
        for (int k : touched) {
            if (out_count[k] != in_count[k]) return false;
            if (out_count[k] == 2) singular_points.push_back(k);
        }
        return true;
    }

    // A(s) for a balanced current; `ok` set to false if the mask misses a
    // source/sink.
    Complex evaluate(unsigned long long mask, const std::vector<int>& singular_points,
                     bool* ok) const {
        *ok = true;
        for (int a : sources)
            if (!((mask >> a) & 1)) {
                *ok = false;
                return Complex(0, 0);
            }
        for (int f : sinks)
            if (!((mask >> f) & 1)) {
                *ok = false;
                return Complex(0, 0);
            }
        auto singular = [&](std::pair<int, int> p) {
            return std::find(singular_points.begin(), singular_points.end(), key(p)) !=
                   singular_points.end();
        };
        // loop decomposition successor map: straight continuation at
        // singularities, the unique continuation elsewhere
        auto next_of = [&](int e) -> int {
            int straight = succ[e][0], turn = succ[e][1];
            if (lat->edge_of(e).dir != lat->edge_of(straight).dir) std::swap(straight, turn);
            bool s_in = ((mask >> straight) & 1) && !is_source(straight);
            bool t_in = ((mask >> turn) & 1) && !is_source(turn);
            if (singular(end_point[e])) return straight;  // no turns at singularities
            if (s_in && t_in) return straight;            // should not happen when balanced
            return s_in ? straight : turn;
        };
        // paths from sources to first sink
        std::vector<bool> visited(n, false);
        std::vector<int> path_sink;
        int turns_in_paths = 0;  // unused except for debugging
        (void)turns_in_paths;
        for (int a : sources) {
            int cur = a;
            visited[cur] = true;
            while (!is_sink(cur) ||
                   std::find(path_sink.begin(), path_sink.end(), cur) != path_sink.end()) {
                int nxt = next_of(cur);
                if (visited[nxt]) return Complex(0, 0);  // malformed; skip defensively
                visited[nxt] = true;
                cur = nxt;
            }
            path_sink.push_back(cur);
        }
        // remaining edges decompose into cycles
        int loops = 0;
        for (int e = 0; e < n; ++e) {
            if (!((mask >> e) & 1) || visited[e]) continue;
            ++loops;
            int cur = e;
            while (!visited[cur]) {
                visited[cur] = true;
                cur = next_of(cur);
            }
        }
        // sgn(sigma) over sinks
        int m = static_cast<int>(path_sink.size());
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i)
            perm[i] = static_cast<int>(std::find(sinks.begin(), sinks.end(), path_sink[i]) -
                                       sinks.begin());
        int sign = (loops % 2 == 0) ? 1 : -1;
        std::vector<bool> seen(m, false);
        for (int i = 0; i < m; ++i) {
            if (seen[i]) continue;
            int len = 0;
            for (int j = i; !seen[j]; j = perm[j]) {
                seen[j] = true;
                ++len;
            }
            if (len % 2 == 0) sign = -sign;
        }
        // nodes of the current itself: adjacent in-mask pairs away from
        // singularities, e not a sink, f not a source
        int even_nodes = 0, odd_nodes = 0, even_turns = 0, odd_turns = 0;
        for (int e = 0; e < n; ++e) {
            if (!((mask >> e) & 1) || is_sink(e)) continue;
            if (singular(end_point[e])) continue;
            for (int s = 0; s < 2; ++s) {
                int f = succ[e][s];
                if (!((mask >> f) & 1) || is_source(f)) continue;
                bool even = end_point[e].first % 2 == 0;
                bool turn = lat->edge_of(e).dir != lat->edge_of(f).dir;
                (even ? even_nodes : odd_nodes)++;
                if (turn) (even ? even_turns : odd_turns)++;
            }
        }
        const double mu = lat->params().m * lat->params().eps;
        const double delta = lat->params().delta;
        Complex value(sign, 0);
        for (int i = 0; i < odd_turns; ++i) value *= Complex(0, -mu);
        for (int i = 0; i < even_turns; ++i) value *= -delta;
        value /= std::pow(1 + mu * mu, odd_nodes / 2.0);
        value /= std::pow(1 - delta * delta, even_nodes / 2.0);
        return value;
    }
};

}  // namespace

BruteforceSum bruteforce_currents(const TorusLattice& lat, const std::vector<EdgeId>& sources,
                                  const std::vector<EdgeId>& sinks) {
    if (sources.size() != sinks.size())
        throw DomainError("current enumeration needs equal source and sink counts");
    CurrentEvaluator with(lat, sources, sinks);
    CurrentEvaluator vacuum(lat, {}, {});
    BruteforceSum sum;
    const unsigned long long total = 1ull << lat.num_edges();
    std::vector<int> singular;
    for (unsigned long long mask = 0; mask < total; ++mask) {
        bool ok;
        if (with.balanced(mask, singular)) {
            Complex v = with.evaluate(mask, singular, &ok);
            if (ok) sum.numerator += v;
        }
        if (vacuum.balanced(mask, singular)) {
            Complex v = vacuum.evaluate(mask, singular, &ok);
            if (ok) sum.denominator += v;
        }
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Finite identities.

IdentityReport finite_identity_suite(const TorusLattice& lat, double tol) {
    const int n = lat.num_edges();
    Eigen::MatrixXcd U = transfer_matrix(lat);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n) - U;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (std::abs(Complex(lu.determinant())) < degeneracy_scale(lat))
        throw DegenerateLatticeError("torus: partition function vanishes (degenerate lattice)");
    Eigen::MatrixXcd A = lu.inverse();

    IdentityReport report;
    report.tol = tol;
    auto add = [&](const std::string& name, double residual, int points) {
        report.entries.push_back({name, residual, points});
    };

    double r_init = 0;
    for (int a = 0; a < n; ++a) r_init = std::max(r_init, std::abs(A(a, a) - 0.5));
    add("initial_value", r_init, n);

    double r_skew = 0;
    int c_skew = 0;
    for (int a = 0; a < n; ++a) {
        for (int f = 0; f < n; ++f) {
            if (a == f) continue;
            bool parallel = lat.edge_of(a).dir == lat.edge_of(f).dir;
            Complex expect = parallel ? -A(a, f) : A(a, f);
            r_skew = std::max(r_skew, std::abs(A(f, a) - expect));
            ++c_skew;
        }
    }
    add("skew_symmetry", r_skew, c_skew);

    const double mu = lat.params().m * lat.params().eps;
    const double delta = lat.params().delta;
    double r_dirac = 0, r_adjoint = 0;
    for (int f = 0; f < n; ++f) {
        EdgeId fe = lat.edge_of(f);
        auto preds = lat.predecessors(fe);
        int e = lat.edge_index(preds[0]), ep = lat.edge_index(preds[1]);
        if (lat.edge_of(e).dir != fe.dir) std::swap(e, ep);  // e parallel to f
        bool even = lat.normalize(fe).u % 2 == 0;
        Complex cnorm = even ? Complex(1 / std::sqrt(1 - delta * delta), 0)
                             : Complex(1 / std::sqrt(1 + mu * mu), 0);
        Complex cturn = even ? Complex(delta, 0) : Complex(0, mu);
        Complex w_e = node_weight(lat, lat.edge_of(e), fe);
        Complex w_ep = node_weight(lat, lat.edge_of(ep), fe);
        for (int a = 0; a < n; ++a) {
            Complex rhs = cnorm * (A(e, a) - cturn * A(ep, a)) + (a == f ? 1.0 : 0.0);
            r_dirac = std::max(r_dirac, std::abs(A(f, a) - rhs));
            Complex adj = w_e * (A(a, e) - (e == a ? 1.0 : 0.0)) -
                          w_ep * (A(a, ep) - (ep == a ? 1.0 : 0.0));
            r_adjoint = std::max(r_adjoint, std::abs(A(a, f) - adj));
        }
    }
    add("dirac_equation", r_dirac, n * n);
    add("adjoint_dirac", r_adjoint, n * n);

    double r_huygens = 0;
    Eigen::MatrixXcd Upow = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd geom = Eigen::MatrixXcd::Zero(n, n);
    for (int step = 1; step <= 2 * lat.size(); ++step) {
        geom += Upow;       // I + U + ... + U^{step-1}
        Upow = U * Upow;    // U^step
        Eigen::MatrixXcd resid = (Eigen::MatrixXcd::Identity(n, n) - Upow) * A - geom;
        r_huygens = std::max(r_huygens, resid.cwiseAbs().maxCoeff());
    }
    add("huygens_composition", r_huygens, 2 * lat.size() * n * n);

    Complex detA = Eigen::FullPivLU<Eigen::MatrixXcd>(A).determinant();
    add("inverse_determinant", std::abs(Complex(lu.determinant()) * detA - 1.0), 1);

    report.pass = true;
    for (const IdentityResult& entry : report.entries)
        if (!(entry.max_residual <= tol)) report.pass = false;
    return report;
}

// ---------------------------------------------------------------------------
// Infinite limit.

namespace {

// Batch evaluator of A(b_2 -> e_k(x, t)) at integer lattice points for fixed
// (T, delta).  Only O(T) trig tables are stored; the O(T^2) momentum sum is
// regenerated from them on demand, once per distinct t value, and cached as a
// length-T row so each point costs O(T).  (Materializing the full T x T
// fraction tables at T ~ 3000 costs hundreds of MB and dominates the runtime
// with page faults.)
class DftBatch {
   public:
    DftBatch(int T, const LatticeParams& params)
        : T_(T),
          mu_(params.m * params.eps),
          delta_(params.delta),
          n_(std::sqrt(1 - params.delta * params.delta) * std::sqrt(1 + mu_ * mu_)) {
        zeta_.resize(T);
        cos_.resize(T);
        sin_.resize(T);
        for (int j = 0; j < T; ++j) {
            zeta_[j] = std::polar(1.0, 2 * kPi * j / T);
            cos_[j] = std::cos(2 * kPi * j / T);
            sin_[j] = std::sin(2 * kPi * j / T);
        }
    }

    // A(b_2 -> e_k(x, t)) at the even point x = xs*eps, t = ts*eps.  The
    // r-sum for each momentum q is cached per distinct t, so a grid of points
    // sharing few t values costs one O(T^2) pass per (k, t) plus O(T) each.
    Complex eval(int k, int xs, int ts) {
        const int T = T_;
        int xm = floor_mod(xs, T), tm = floor_mod(ts, T);
        const std::vector<Complex>& g = row(k, tm);
        Complex sum(0, 0);
        int idx = 0;
        for (int q = 0; q < T; ++q) {
            sum += g[q] * zeta_[idx];
            idx += xm;
            if (idx >= T) idx -= T;
        }
        Complex value = Complex(0, -1) * sum / (2.0 * T * T);
        if (k == 2 && xm == 0 && tm == 0) value += 0.5;
        return value;
    }

   private:
    // g_q(t) = sum_r frac_k[q, r] zeta^{-r t}; one (q, r) pass fills both k
    // rows so the complex reciprocal of the denominator is shared.
    const std::vector<Complex>& row(int k, int tm) {
        auto& cache = k == 1 ? rows1_ : rows2_;
        auto it = cache.find(tm);
        if (it != cache.end()) return it->second;
        const int T = T_;
        std::vector<Complex> g1(T), g2(T);
        for (int q = 0; q < T; ++q) {
            Complex num1 = Complex(mu_, 0) - Complex(0, delta_) * Complex(cos_[q], sin_[q]);
            Complex sum1(0, 0), sum2(0, 0);
            int idx = 0;
            for (int r = 0; r < T; ++r) {
                Complex inv_d = 1.0 / Complex(n_ * cos_[r] - cos_[q], -mu_ * delta_);
                Complex phase = zeta_[idx];
                sum1 += num1 * inv_d * phase;
                sum2 += (n_ * sin_[r] + sin_[q]) * inv_d * phase;
                idx -= tm;
                if (idx < 0) idx += T;
            }
            g1[q] = sum1;
            g2[q] = sum2;
        }
        rows1_.emplace(tm, std::move(g1));
        rows2_.emplace(tm, std::move(g2));
        return cache.at(tm);
    }

    int T_;
    double mu_, delta_, n_;
    std::vector<Complex> zeta_;
    std::vector<double> cos_, sin_;
    std::map<int, std::vector<Complex>> rows1_, rows2_;
};

}  // namespace

std::vector<PropagatorPair> infinite_limit_grid(const std::vector<std::pair<int, int>>& points,
                                                const LatticeParams& params,
                                                const LimitSchedule& schedule,
                                                std::vector<LimitTrace>* traces) {
    if (params.delta != 0)
        throw DomainError("infinite_limit: base parameters must have delta = 0");
    if (schedule.T_values.empty() || schedule.deltas.empty())
        throw DomainError("infinite_limit: empty schedule");
    for (int T : schedule.T_values)
        if (T % 4 == 0)
            throw DomainError(
                "infinite_limit: order of limits: delta -> 0 diverges for T divisible by 4");
    for (size_t i = 1; i < schedule.T_values.size(); ++i)
        if (schedule.T_values[i] <= schedule.T_values[i - 1])
            throw DomainError("infinite_limit: T values must increase");
    for (size_t i = 1; i < schedule.deltas.size(); ++i)
        if (schedule.deltas[i] >= schedule.deltas[i - 1])
            throw DomainError("infinite_limit: delta values must decrease");

    const size_t npts = points.size();
    std::vector<LimitTrace> local;
    std::vector<LimitTrace>& tr = traces ? *traces : local;
    tr.assign(npts, LimitTrace{});

    // limit[1|2][point][delta index] = value at the largest T
    std::vector<std::vector<Complex>> limit1(npts), limit2(npts);
    std::vector<Complex> prev1(npts), prev2(npts), last1(npts), last2(npts);
    for (double delta : schedule.deltas) {
        LatticeParams p = params;
        p.delta = delta;
        bool have_prev = false;
        for (int T : schedule.T_values) {
            DftBatch batch(T, p);
            if (have_prev) {
                prev1 = last1;
                prev2 = last2;
            }
            for (size_t i = 0; i < npts; ++i) {
                auto [x_steps, t_steps] = points[i];
                // reduction of A(a0 -> f_k) to the four DFT values at (+-x, t)
                Complex e1p = batch.eval(1, x_steps, t_steps);
                Complex e2p = batch.eval(2, x_steps, t_steps);
                Complex e1m = batch.eval(1, -x_steps, t_steps);
                Complex e2m = batch.eval(2, -x_steps, t_steps);
                auto reduce = [&](int k) {
                    Complex sum(0, 0);
                    for (int j = 1; j <= 2; ++j) {
                        for (int l = 1; l <= 2; ++l) {
                            int jp = 2 - std::abs(j - l);
                            Complex val;
                            if (l == 2)
                                val = jp == 1 ? e1p : e2p;
                            else
                                val = jp == 1 ? e1m : e2m;
                            double coeff =
                                std::pow(-delta, 2 - l) * std::pow(delta, std::abs(j - k));
                            sum += coeff * val;
                        }
                    }
                    return sum / (1 - delta * delta);
                };
                last1[i] = reduce(1);
                last2[i] = reduce(2);
                tr[i].rows.push_back({T, delta, last1[i], last2[i]});
            }
            if (!have_prev) {
                prev1 = last1;
                prev2 = last2;
                have_prev = schedule.T_values.size() > 1;
            }
        }
        for (size_t i = 0; i < npts; ++i) {
            if (schedule.T_values.size() > 1) {
                tr[i].saturation1 = std::max(tr[i].saturation1, std::abs(last1[i] - prev1[i]));
                tr[i].saturation2 = std::max(tr[i].saturation2, std::abs(last2[i] - prev2[i]));
            }
            limit1[i].push_back(last1[i]);
            limit2[i].push_back(last2[i]);
        }
    }
    for (size_t i = 0; i < npts; ++i)
        if (std::max(tr[i].saturation1, tr[i].saturation2) > schedule.saturation_tol)
            throw NumericError("infinite_limit: T schedule did not saturate", Complex(0, 0));

    // Lagrange extrapolation to delta = 0
    auto extrapolate = [&](const std::vector<Complex>& values) {
        Complex acc(0, 0);
        const std::vector<double>& d = schedule.deltas;
        for (size_t i = 0; i < d.size(); ++i) {
            double coeff = 1;
            for (size_t j = 0; j < d.size(); ++j)
                if (j != i) coeff *= (0 - d[j]) / (d[i] - d[j]);
            acc += coeff * values[i];
        }
        return acc;
    };
    std::vector<PropagatorPair> results(npts);
    for (size_t i = 0; i < npts; ++i) {
        results[i].A1 = -2.0 * Complex(0, -1) * extrapolate(limit1[i]);  // -2 (-i)^1
        results[i].A2 = -2.0 * Complex(-1, 0) * extrapolate(limit2[i]);  // -2 (-i)^2
    }
    return results;
}

PropagatorPair infinite_limit(int x_steps, int t_steps, const LatticeParams& params,
                              const LimitSchedule& schedule, LimitTrace* trace) {
    std::vector<LimitTrace> traces;
    std::vector<PropagatorPair> res =
        infinite_limit_grid({{x_steps, t_steps}}, params, schedule, trace ? &traces : nullptr);
    if (trace) *trace = traces[0];
    return res[0];
}

}  // namespace anticheckers
