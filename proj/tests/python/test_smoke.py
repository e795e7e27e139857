"""Smoke tests for the python bindings: one quick call per exposed area."""

import cmath
import math

import pytest

import anticheckers as ac


def test_constants():
    G = ac.gauss_constant()
    L = ac.lemniscate_reciprocal()
    assert round(G, 5) == 0.83463
    assert round(L, 5) == 0.38138
    assert abs(G * L - 1 / math.pi) < 1e-12


def test_propagate_methods_agree():
    a1q, a2q = ac.propagate(1, 2, method="quadrature")
    a1h, a2h = ac.propagate(1, 2, method="hypergeometric")
    a1d, a2d = ac.propagate(1, 2, method="dp")
    assert abs(a1q - a1h) < 1e-10
    assert abs(a1q - a1d) < 1e-10
    assert abs(a2q - a2h) < 1e-10
    assert abs(a2q - a2d) < 1e-10
    # origin values: A1 = i G, A2 = 1
    a1, a2 = ac.propagate(0, 0)
    assert abs(a1 - 1j * ac.gauss_constant()) < 1e-12
    assert abs(a2 - 1) < 1e-12


def test_row_and_charge():
    row = ac.propagate_row(-3, 3, 2)
    assert len(row) == 7
    q = sum(
        (abs(a1) ** 2 + abs(a2) ** 2) / 2 for a1, a2 in ac.propagate_row(-42, 42, 2)
    )
    assert abs(q - 1) < 1e-8
    assert abs(ac.total_charge(7) - 1) < 1e-8


def test_identity_suite():
    report = ac.identity_suite(m=0.8, eps=1.0)
    assert report["pass"]
    assert all(r <= 1e-9 for r in report["residuals"].values())


def test_continuum():
    (g11, g12), (g21, g22) = ac.feynman_continuum(3.0, 0.0, 0.0)
    assert abs(g12 - 1j / (6 * math.pi)) < 1e-14
    with pytest.raises(ValueError):
        ac.feynman_continuum(1.0, 1.0, 1.0)  # light cone excluded
    profile = ac.charge_density_profile(m=4.0, t=6.0, eps=0.06, x_max=2.0)
    assert len(profile) > 30
    x, lattice, continuum, _ = profile[len(profile) // 2]
    assert abs(lattice - continuum) <= 0.05 * abs(continuum)


def test_massless_form():
    a1, a2 = ac.massless_heavy(3, 3, "massless")
    assert a2 == 1


def test_torus():
    z = ac.torus_partition_function(1, m=1.0, eps=1.0, delta=0.3)
    assert abs(z) > 0
    a = ac.torus_arrow(1, 2, 0, 0, m=1.0, eps=1.0, delta=0.3)
    assert abs(a - 0.5) < 1e-12
    with pytest.raises(ArithmeticError):
        ac.torus_partition_function(4, delta=0.0) and ac.torus_arrow(4, 2, 0, 0, delta=0.0)


def test_multiparticle():
    assert abs(ac.two_electron_total_probability(3, 4) - 1) < 1e-12
    assert ac.two_electron_probability(3, 2, 2, 4) == 0  # exclusion principle
    slope, ok = ac.fermi_perturbation_slope()
    assert ok and slope >= 1.8
