// Command-line front end: propagator tables, figure data, verification suite,
// and finite-torus diagnostics, as deterministic CSV or JSON.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anticheckers/continuum.hpp"
#include "anticheckers/multiparticle.hpp"
#include "anticheckers/numerics.hpp"
#include "anticheckers/propagator.hpp"
#include "anticheckers/torus.hpp"

using namespace anticheckers;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t) {
    std::ostringstream out;
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (const auto* n = std::get_if<long long>(&row[i]))
                out << *n;
            else if (const auto* d = std::get_if<double>(&row[i]))
                out << fmt17(*d);
            else
                out << std::get<std::string>(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string render_json(const Table& t) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (size_t i = 0; i < row.size(); ++i) {
            if (const auto* n = std::get_if<long long>(&row[i]))
                obj[t.columns[i]] = *n;
            else if (const auto* d = std::get_if<double>(&row[i]))
                obj[t.columns[i]] = *d;
            else
                obj[t.columns[i]] = std::get<std::string>(row[i]);
        }
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& payload) {
    if (path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path);
    out << payload;
}

void emit(const Table& t, const std::string& format, const std::string& out) {
    write_output(out, format == "json" ? render_json(t) : render_csv(t));
}

// "a..b" or a single integer
std::pair<int, int> parse_range(const std::string& text) {
    size_t dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected an integer or a..b: " + text);
    }
}

double env_tolerance() {
    const char* env = std::getenv("ANTICHECKERS_TOL");
    if (!env) return 1e-9;
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || v <= 0) throw DomainError("ANTICHECKERS_TOL must be a positive number");
    return v;
}

// ---------------------------------------------------------------------------
// propagate

struct PropagateConfig {
    double m = 1, eps = 1;
    std::string x_range = "0", t_range = "0";
    std::string method = "dp";
    std::string format = "csv", out = "-";
};

PropagatorPair eval_method(const std::string& method, int x, int t, const LatticeParams& p) {
    if (method == "quadrature") return propagate_quadrature(x, t, p);
    if (method == "hypergeometric") return propagate_hypergeometric(x, t, p);
    GridRequest req;
    req.x_min = req.x_max = x;
    req.t = t;
    req.params = p;
    req.method = Method::dp;
    return propagate_dp(req)[0];
}

int cmd_propagate(const PropagateConfig& cfg) {
    auto [x_min, x_max] = parse_range(cfg.x_range);
    auto [t_min, t_max] = parse_range(cfg.t_range);
    if (x_min > x_max || t_min > t_max) throw DomainError("empty range");
    LatticeParams p;
    p.m = cfg.m;
    p.eps = cfg.eps;
    Table table;
    table.columns = {"x", "t", "re_A1", "im_A1", "re_A2", "im_A2", "Q", "method"};
    for (int t = t_min; t <= t_max; ++t) {
        std::vector<PropagatorPair> row;
        if (cfg.method == "dp" && t >= 0) {
            GridRequest req;
            req.x_min = x_min;
            req.x_max = x_max;
            req.t = t;
            req.params = p;
            req.method = Method::dp;
            row = propagate_dp(req);
        }
        for (int x = x_min; x <= x_max; ++x) {
            PropagatorPair a = row.empty() ? eval_method(cfg.method, x, t, p)
                                           : row[static_cast<size_t>(x - x_min)];
            double q = (std::norm(a.A1) + std::norm(a.A2)) / 2;
            table.rows.push_back({static_cast<double>(x) * cfg.eps, static_cast<double>(t) * cfg.eps,
                                  a.A1.real(), a.A1.imag(), a.A2.real(), a.A2.imag(), q,
                                  cfg.method});
        }
    }
    emit(table, cfg.format, cfg.out);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// figure

struct FigureConfig {
    std::string which = "fig1";
    double m = 4, eps = 0.03, t = 6, x_max = 4.8;
    std::string format = "csv", out = "-";
};

int cmd_figure(const FigureConfig& cfg) {
    std::vector<FigurePoint> points;
    if (cfg.which == "fig1")
        points = charge_density_profile(cfg.m, cfg.t, cfg.eps, cfg.x_max);
    else
        points = wave_profile(1, cfg.m, cfg.t, cfg.eps, cfg.x_max);
    Table table;
    table.columns = {"x", "lattice_value", "continuum_value", "asymptotic_value"};
    for (const FigurePoint& pt : points)
        table.rows.push_back({pt.x, pt.lattice_value, pt.continuum_value, pt.asymptotic_value});
    emit(table, cfg.format, cfg.out);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// torus

struct TorusConfig {
    int T = 1;
    double m = 1, eps = 1, delta = 0;
    bool enumerate = false, limit = false;
    bool t_given = false;
    int x = 0, t = 0;
    std::string format = "csv", out = "-";
};

std::string edge_sequence(const std::vector<int>& edges) {
    std::string s;
    for (size_t i = 0; i < edges.size(); ++i) {
        if (i) s += ' ';
        s += 'e' + std::to_string(edges[i]);
    }
    return s;
}

int cmd_torus(const TorusConfig& cfg) {
    LatticeParams p;
    p.m = cfg.m;
    p.eps = cfg.eps;
    p.delta = cfg.delta;

    if (cfg.limit) {
        LimitSchedule schedule;
        if (cfg.t_given) schedule.T_values = {cfg.T};
        LimitTrace trace;
        PropagatorPair result = infinite_limit(cfg.x, cfg.t, p, schedule, &trace);
        Table table;
        table.columns = {"kind", "T", "delta", "re_1", "im_1", "re_2", "im_2"};
        for (const LimitTraceRow& row : trace.rows)
            table.rows.push_back({std::string("trace"), static_cast<long long>(row.T), row.delta,
                                  row.raw1.real(), row.raw1.imag(), row.raw2.real(),
                                  row.raw2.imag()});
        table.rows.push_back({std::string("result"), static_cast<long long>(0), 0.0,
                              result.A1.real(), result.A1.imag(), result.A2.real(),
                              result.A2.imag()});
        emit(table, cfg.format, cfg.out);
        return kExitPass;
    }

    TorusLattice lat(cfg.T, p);
    if (cfg.enumerate) {
        Table table;
        table.columns = {"config", "paths", "loops", "re_weight", "im_weight"};
        auto configs = enumerate_loop_configs(lat, {}, {});
        long long index = 0;
        for (const LoopConfigEntry& entry : configs) {
            std::string paths, loops;
            for (size_t i = 0; i < entry.paths.size(); ++i)
                paths += (i ? ";" : "") + edge_sequence(entry.paths[i]);
            for (size_t i = 0; i < entry.loops.size(); ++i)
                loops += (i ? ";" : "") + edge_sequence(entry.loops[i]);
            table.rows.push_back(
                {index++, paths, loops, entry.weight.real(), entry.weight.imag()});
        }
        emit(table, cfg.format, cfg.out);
        return kExitPass;
    }

    Table table;
    table.columns = {"kind", "u", "v", "dir", "re", "im"};
    Complex z = partition_function(lat);
    table.rows.push_back({std::string("partition_function"), static_cast<long long>(0),
                          static_cast<long long>(0), std::string(""), z.real(), z.imag()});
    ArrowTable arrows(lat);
    for (int i = 0; i < lat.num_edges(); ++i) {
        EdgeId f = lat.edge_of(i);
        Complex a = arrows.arrow(lat.a0(), f);
        table.rows.push_back({std::string("arrow_from_a0"), static_cast<long long>(f.u),
                              static_cast<long long>(f.v),
                              std::string(f.dir == EdgeDir::up_right ? "R" : "L"), a.real(),
                              a.imag()});
    }
    emit(table, cfg.format, cfg.out);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyConfig {
    std::vector<std::string> only;
    double tol = 1e-9;
    bool mutate_node_weight = false;
    std::string format = "json", out = "-";
};

struct CheckResult {
    std::string name;
    double residual = 0;
    double tol = 0;
    bool pass = false;
};

CheckResult check_constants() {
    double g_gamma = std::pow(gamma_fn(0.25), 2) / std::pow(2 * M_PI, 1.5);
    double g_elliptic = gauss_constant();
    double lp = lemniscate_reciprocal();
    double residual = std::max(std::abs(g_gamma - g_elliptic),
                               std::abs(g_elliptic * lp - 1.0 / M_PI));
    return {"constants", residual, 1e-12, residual <= 1e-12};
}

CheckResult check_identities(double tol) {
    LatticeParams p;
    IdentityReport report = identity_suite(p, 6, tol);
    double residual = 0;
    for (const IdentityResult& e : report.entries) residual = std::max(residual, e.max_residual);
    return {"identities", residual, tol, report.pass};
}

CheckResult check_charge(double /*tol*/) {
    LatticeParams p;
    double residual = std::abs(total_charge(32, p) - 1.0);
    return {"charge-conservation", residual, 1e-8, residual <= 1e-8};
}

CheckResult check_table2() {
    // all nine vacuum configurations of the 1x1 torus against closed forms
    double m = 1, eps = 1, delta = 0.3;
    LatticeParams p;
    p.m = m;
    p.eps = eps;
    p.delta = delta;
    TorusLattice lat(1, p);
    double mu = m * eps;
    double n = std::sqrt(1 - delta * delta) * std::sqrt(1 + mu * mu);
    std::vector<Complex> expected = {{1, 0},
                                     {0, -mu * delta / n},
                                     {0, -mu * delta / n},
                                     {-1 / n, 0},
                                     {-1 / n, 0},
                                     {mu * mu / (n * n), 0},
                                     {-delta * delta / (n * n), 0},
                                     {-mu * mu * delta * delta / (n * n), 0},
                                     {1 / (n * n), 0}};
    std::vector<Complex> got;
    for (const LoopConfigEntry& entry : enumerate_loop_configs(lat, {}, {}))
        got.push_back(entry.weight);
    double residual = 1e300;
    if (got.size() == expected.size()) {
        auto key = [](const Complex& a, const Complex& b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        };
        std::sort(got.begin(), got.end(), key);
        std::sort(expected.begin(), expected.end(), key);
        residual = 0;
        for (size_t i = 0; i < got.size(); ++i)
            residual = std::max(residual, std::abs(got[i] - expected[i]));
    }
    // source/sink arrows against the 1x1 closed forms; the vacuum weights
    // alone cannot see a global turn-sign flip (every loop turns an even
    // number of times), so the mutation self-test needs these odd-turn paths
    double sd = std::sqrt(1 - delta * delta), sm = std::sqrt(1 + mu * mu);
    Complex D = 2.0 * (sm * sd - 1.0 - Complex(0, mu * delta));
    EdgeId a{0, 0, EdgeDir::up_right}, b{1, 1, EdgeDir::up_left};
    EdgeId c{1, 1, EdgeDir::up_right}, d{0, 0, EdgeDir::up_left};
    BruteforceSum ab = bruteforce_loop_configs(lat, {a}, {b});
    BruteforceSum ac = bruteforce_loop_configs(lat, {a}, {c});
    BruteforceSum ad = bruteforce_loop_configs(lat, {a}, {d});
    residual = std::max(
        {residual,
         std::abs(ab.numerator / ab.denominator - (Complex(0, -mu) * sd - delta * sm) / D),
         std::abs(ac.numerator / ac.denominator - Complex(sd - sm, 0) / D),
         std::abs(ad.numerator / ad.denominator - Complex(-delta, -mu) / D)});
    return {"table2", residual, 1e-12, residual <= 1e-12};
}

CheckResult check_finite_identities(double tol) {
    LatticeParams p;
    p.m = 0.8;
    p.delta = 0.3;
    TorusLattice lat(2, p);
    IdentityReport report = finite_identity_suite(lat, tol);
    double residual = 0;
    for (const IdentityResult& e : report.entries) residual = std::max(residual, e.max_residual);
    return {"finite-identities", residual, tol, report.pass};
}

CheckResult check_cross_method() {
    LatticeParams p;
    double residual = 0;
    for (int t = -3; t <= 3; ++t) {
        for (int x = -3; x <= 3; ++x) {
            if ((x + t) % 2 != 0) continue;
            PropagatorPair q = propagate_quadrature(x, t, p);
            PropagatorPair h = propagate_hypergeometric(x, t, p);
            residual = std::max({residual, std::abs(q.A1 - h.A1), std::abs(q.A2 - h.A2)});
            if (t >= 0) {
                PropagatorPair d = eval_method("dp", x, t, p);
                residual = std::max({residual, std::abs(q.A1 - d.A1), std::abs(q.A2 - d.A2)});
            }
        }
    }
    return {"cross-method", residual, 1e-8, residual <= 1e-8};
}

CheckResult check_perturbation() {
    FermiParams fp;  // T=1, m_e=1, m_mu=2, eps=1, delta=0.3
    LatticeParams p;
    p.delta = fp.delta;
    TorusLattice lat(1, p);
    PerturbationReport report = perturbation_check(fp, lat.edge_of(0), lat.edge_of(1),
                                                   lat.edge_of(2), lat.edge_of(3));
    double residual = 1.8 - report.slope;  // negative when the slope is fine
    return {"perturbation", residual, 0.0, report.pass};
}

int cmd_verify(const VerifyConfig& cfg) {
    detail::node_weight_sign_flip = cfg.mutate_node_weight;
    std::vector<CheckResult> results;
    auto wanted = [&](const std::string& name) {
        return cfg.only.empty() ||
               std::find(cfg.only.begin(), cfg.only.end(), name) != cfg.only.end();
    };
    if (wanted("constants")) results.push_back(check_constants());
    if (wanted("identities")) results.push_back(check_identities(cfg.tol));
    if (wanted("charge-conservation")) results.push_back(check_charge(cfg.tol));
    if (wanted("table2")) results.push_back(check_table2());
    if (wanted("finite-identities")) results.push_back(check_finite_identities(cfg.tol));
    if (wanted("cross-method")) results.push_back(check_cross_method());
    if (wanted("perturbation")) results.push_back(check_perturbation());
    detail::node_weight_sign_flip = false;
    if (results.empty()) throw DomainError("verify: no check matches --only filter");

    bool all_pass = true;
    for (const CheckResult& r : results) all_pass = all_pass && r.pass;

    if (cfg.format == "csv") {
        Table table;
        table.columns = {"name", "residual", "tol", "pass"};
        for (const CheckResult& r : results)
            table.rows.push_back(
                {r.name, r.residual, r.tol, std::string(r.pass ? "true" : "false")});
        emit(table, cfg.format, cfg.out);
    } else {
        json report = json::object();
        report["tolerance"] = cfg.tol;
        report["pass"] = all_pass;
        report["checks"] = json::array();
        for (const CheckResult& r : results)
            report["checks"].push_back(
                {{"name", r.name}, {"residual", r.residual}, {"tol", r.tol}, {"pass", r.pass}});
        write_output(cfg.out, report.dump(2) + "\n");
    }
    return all_pass ? kExitPass : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice propagator toolbox: tables, figures, verification, torus diagnostics"};
    app.require_subcommand(1);

    PropagateConfig pc;
    CLI::App* propagate = app.add_subcommand("propagate", "evaluate the propagator on a grid");
    propagate->add_option("--m", pc.m, "mass");
    propagate->add_option("--eps", pc.eps, "lattice step");
    propagate->add_option("--x", pc.x_range, "x range in lattice steps (a..b or single)");
    propagate->add_option("--t", pc.t_range, "t range in lattice steps (a..b or single)");
    propagate->add_option("--method", pc.method, "dp | quadrature | hypergeometric")
        ->check(CLI::IsMember({"dp", "quadrature", "hypergeometric"}));
    propagate->add_option("--format", pc.format)->check(CLI::IsMember({"csv", "json"}));
    propagate->add_option("--out", pc.out, "output path or - for stdout");

    FigureConfig fc;
    CLI::App* figure = app.add_subcommand("figure", "figure reproduction data");
    figure->add_option("which", fc.which, "fig1 (charge density) | fig4 (wave profile)")
        ->check(CLI::IsMember({"fig1", "fig4"}));
    figure->add_option("--m", fc.m, "mass");
    figure->add_option("--eps", fc.eps, "lattice step");
    figure->add_option("--t", fc.t, "time slice");
    figure->add_option("--x-max", fc.x_max, "maximum |x|");
    figure->add_option("--format", fc.format)->check(CLI::IsMember({"csv", "json"}));
    figure->add_option("--out", fc.out);

    TorusConfig tc;
    CLI::App* torus = app.add_subcommand("torus", "finite-torus diagnostics");
    CLI::Option* t_opt = torus->add_option("--T", tc.T, "torus size");
    torus->add_option("--m", tc.m, "mass");
    torus->add_option("--eps", tc.eps, "lattice step");
    torus->add_option("--delta", tc.delta, "turn regulator in [0,1)");
    torus->add_flag("--enumerate", tc.enumerate, "dump all vacuum loop configurations (T <= 2)");
    torus->add_flag("--limit", tc.limit, "infinite-lattice limit trace at (--x, --t)");
    torus->add_option("--x", tc.x, "x in lattice steps (with --limit)");
    torus->add_option("--t", tc.t, "t in lattice steps (with --limit)");
    torus->add_option("--format", tc.format)->check(CLI::IsMember({"csv", "json"}));
    torus->add_option("--out", tc.out);

    VerifyConfig vc;
    vc.tol = 1e-9;
    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--only", vc.only, "run only the named checks")->take_all();
    CLI::Option* tol_opt = verify->add_option("--tol", vc.tol, "identity-suite tolerance");
    verify->add_flag("--inject-node-weight-sign-flip", vc.mutate_node_weight)
        ->group("");  // hidden: fault-injection self-test
    verify->add_option("--format", vc.format)->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--out", vc.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (!tol_opt->count()) vc.tol = env_tolerance();
        tc.t_given = t_opt->count() > 0;
        if (propagate->parsed()) return cmd_propagate(pc);
        if (figure->parsed()) return cmd_figure(fc);
        if (torus->parsed()) return cmd_torus(tc);
        if (verify->parsed()) return cmd_verify(vc);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DegenerateLatticeError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
