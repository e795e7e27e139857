// Python bindings for the anticheckers core: point/grid propagator
// evaluation, the identity and charge checks, continuum-limit profiles,
// the finite torus model, and the multiparticle operations.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "anticheckers/checkers.hpp"
#include "anticheckers/continuum.hpp"
#include "anticheckers/multiparticle.hpp"
#include "anticheckers/numerics.hpp"
#include "anticheckers/propagator.hpp"
#include "anticheckers/torus.hpp"

namespace py = pybind11;
using namespace anticheckers;

namespace {

LatticeParams make_params(double m, double eps, double delta) {
    LatticeParams p;
    p.m = m;
    p.eps = eps;
    p.delta = delta;
    return p;
}

Method parse_method(const std::string& name) {
    if (name == "quadrature") return Method::quadrature;
    if (name == "hypergeometric") return Method::hypergeometric;
    if (name == "dp") return Method::dp;
    throw DomainError("unknown method: " + name);
}

py::tuple pair_tuple(const PropagatorPair& v) { return py::make_tuple(v.A1, v.A2); }

}  // namespace

PYBIND11_MODULE(_anticheckers, mod) {
    mod.doc() = "Two-component Minkowskian lattice propagator toolkit";

    mod.def("gauss_constant", &gauss_constant,
            "The first transcendental constant spanning the unit-parameter values");
    mod.def("lemniscate_reciprocal", &lemniscate_reciprocal,
            "The second spanning constant");

    mod.def(
        "propagate",
        [](int x, int t, double m, double eps, const std::string& method) {
            Method mth = parse_method(method);
            if (mth == Method::dp) {
                GridRequest req;
                req.x_min = req.x_max = x;
                req.t = t;
                req.params = make_params(m, eps, 0);
                req.method = mth;
                return pair_tuple(propagate_dp(req)[0]);
            }
            LatticeParams p = make_params(m, eps, 0);
            return pair_tuple(mth == Method::quadrature ? propagate_quadrature(x, t, p)
                                                        : propagate_hypergeometric(x, t, p));
        },
        py::arg("x"), py::arg("t"), py::arg("m") = 1.0, py::arg("eps") = 1.0,
        py::arg("method") = "quadrature",
        "Both propagator components at lattice point (x, t), as a pair of complex numbers");

    mod.def(
        "propagate_row",
        [](int x_min, int x_max, int t, double m, double eps, const std::string& method) {
            GridRequest req;
            req.x_min = x_min;
            req.x_max = x_max;
            req.t = t;
            req.params = make_params(m, eps, 0);
            req.method = parse_method(method);
            std::vector<py::tuple> out;
            for (const PropagatorPair& v : propagate_dp(req)) out.push_back(pair_tuple(v));
            return out;
        },
        py::arg("x_min"), py::arg("x_max"), py::arg("t"), py::arg("m") = 1.0,
        py::arg("eps") = 1.0, py::arg("method") = "dp",
        "One equal-time row of the propagator");

    mod.def(
        "massless_heavy",
        [](int x, int t, const std::string& which, double eps) {
            if (which != "massless" && which != "heavy")
                throw DomainError("which must be 'massless' or 'heavy'");
            return pair_tuple(massless_heavy(
                x, t, which == "massless" ? LimitKind::massless : LimitKind::heavy, eps));
        },
        py::arg("x"), py::arg("t"), py::arg("which"), py::arg("eps") = 1.0,
        "Zero-mass / infinite-mass closed forms");

    mod.def(
        "expected_charge",
        [](int x, int t, double m, double eps) {
            return expected_charge(x, t, make_params(m, eps, 0));
        },
        py::arg("x"), py::arg("t"), py::arg("m") = 1.0, py::arg("eps") = 1.0);

    mod.def(
        "total_charge",
        [](int t, double m, double eps) { return total_charge(t, make_params(m, eps, 0)); },
        py::arg("t"), py::arg("m") = 1.0, py::arg("eps") = 1.0,
        "Sum of the expected charge over an exponentially padded light cone");

    mod.def(
        "identity_suite",
        [](double m, double eps, int window, double tol) {
            IdentityReport rep = identity_suite(make_params(m, eps, 0), window, tol);
            py::dict out;
            out["pass"] = rep.pass;
            out["tol"] = rep.tol;
            py::dict entries;
            for (const IdentityResult& e : rep.entries) entries[e.name.c_str()] = e.max_residual;
            out["residuals"] = entries;
            return out;
        },
        py::arg("m") = 1.0, py::arg("eps") = 1.0, py::arg("window") = 6,
        py::arg("tol") = 1e-9, "Residuals of the exact lattice identities");

    mod.def(
        "feynman_continuum",
        [](double x, double t, double m) {
            Matrix2c g = feynman_continuum({x, t, m});
            return py::make_tuple(py::make_tuple(g.g11, g.g12), py::make_tuple(g.g21, g.g22));
        },
        py::arg("x"), py::arg("t"), py::arg("m"),
        "Continuum spin-1/2 propagator matrix ((g11, g12), (g21, g22))");

    auto profile_list = [](const std::vector<FigurePoint>& pts) {
        std::vector<py::tuple> out;
        for (const FigurePoint& p : pts)
            out.push_back(py::make_tuple(p.x, p.lattice_value, p.continuum_value,
                                         p.asymptotic_value));
        return out;
    };
    mod.def(
        "charge_density_profile",
        [profile_list](double m, double t, double eps, double x_max) {
            return profile_list(charge_density_profile(m, t, eps, x_max));
        },
        py::arg("m") = 4.0, py::arg("t") = 6.0, py::arg("eps") = 0.03, py::arg("x_max") = 4.8,
        "(x, lattice, continuum, asymptotic) rows of the charge-density picture");
    mod.def(
        "wave_profile",
        [profile_list](int k, double m, double t, double eps, double x_max) {
            return profile_list(wave_profile(k, m, t, eps, x_max));
        },
        py::arg("k"), py::arg("m") = 4.0, py::arg("t") = 6.0, py::arg("eps") = 0.03,
        py::arg("x_max") = 4.8, "(x, lattice, continuum, asymptotic) rows of a wave picture");

    mod.def(
        "torus_partition_function",
        [](int T, double m, double eps, double delta) {
            return partition_function(TorusLattice(T, make_params(m, eps, delta)));
        },
        py::arg("T"), py::arg("m") = 1.0, py::arg("eps") = 1.0, py::arg("delta") = 0.3,
        "det(I - U) of the T x T torus transfer operator");

    mod.def(
        "torus_arrow",
        [](int T, int k, int x, int t, double m, double eps, double delta) {
            TorusLattice lat(T, make_params(m, eps, delta));
            return arrow(lat, lat.a0(), lat.f_edge(k, x, t));
        },
        py::arg("T"), py::arg("k"), py::arg("x"), py::arg("t"), py::arg("m") = 1.0,
        py::arg("eps") = 1.0, py::arg("delta") = 0.3,
        "Finite-torus arrow from the origin edge to f_k(x, t)");

    mod.def(
        "infinite_limit",
        [](int x, int t, double m, double eps) {
            return pair_tuple(infinite_limit(x, t, make_params(m, eps, 0)));
        },
        py::arg("x"), py::arg("t"), py::arg("m") = 1.0, py::arg("eps") = 1.0,
        "Propagator recovered from the torus by the T -> inf, delta -> 0 limits");

    mod.def(
        "two_electron_probability",
        [](int x0, int x, int x_prime, int t, int k, int k_prime) {
            TwoElectronQuery q;
            q.x0 = x0;
            q.x = x;
            q.x_prime = x_prime;
            q.t = t;
            q.k = k;
            q.k_prime = k_prime;
            return two_electron_probability(q);
        },
        py::arg("x0"), py::arg("x"), py::arg("x_prime"), py::arg("t"), py::arg("k") = 2,
        py::arg("k_prime") = 2,
        "Probability of a two-electron final state (sources at 0 and x0)");

    mod.def("two_electron_total_probability", &two_electron_total_probability, py::arg("x0"),
            py::arg("t"), "Sum over all distinct two-electron final states (equals 1)");

    mod.def(
        "fermi_perturbation_slope",
        [](double m_e, double m_mu, double eps, double delta, int T) {
            FermiParams fp;
            fp.m_e = m_e;
            fp.m_mu = m_mu;
            fp.eps = eps;
            fp.delta = delta;
            fp.T = T;
            TorusLattice lat(T, make_params(m_e, eps, delta));
            PerturbationReport rep = perturbation_check(fp, lat.edge_of(0), lat.edge_of(1),
                                                        lat.edge_of(2), lat.edge_of(3));
            return py::make_tuple(rep.slope, rep.pass);
        },
        py::arg("m_e") = 1.0, py::arg("m_mu") = 2.0, py::arg("eps") = 1.0,
        py::arg("delta") = 0.3, py::arg("T") = 1,
        "Fitted log-log slope of the first-order coupling-expansion remainder");

    py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
    py::register_exception<DegenerateLatticeError>(mod, "DegenerateLatticeError",
                                                   PyExc_ArithmeticError);
    py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);
}
