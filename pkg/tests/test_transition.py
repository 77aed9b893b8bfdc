import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import MU_LICS, write_curve
from rovib.potential import HarmonicCurve, MorseCurve, effective
from rovib.radial import RovibLevel, solve_level, solve_manifold
from rovib.transition import (
    BranchLine,
    DecayTable,
    DipoleFunction,
    allowed_branches,
    decay_J_values,
    decay_table,
    dipole_matrix_element,
    einstein_A,
    einstein_prefactor,
    fcf_matrix,
    franck_condon,
    honl_london,
    rotational_manifolds,
)

H, C, AMU = 6.62607015e-34, 299792458.0, 1.66053906892e-27
HBAR = H / (2 * math.pi)
MU = 6.6641

UPPER = MorseCurve(4000.0, 0.9, 3.8, Te=12000.0, label="upper")
LOWER = MorseCurve(8000.0, 1.0, 3.6, label="lower")


def omega_angular(k, mu):
    return math.sqrt(k * H * C * 100 * 1e20 / (mu * AMU))


def fake_level(energy, v=0, J=1, shift=0.0):
    R = np.linspace(1.0, 9.0, 4001)
    psi = np.exp(-((R - 4.0 - shift) ** 2) / 0.08)
    psi /= math.sqrt(np.trapezoid(psi**2, R))
    return RovibLevel(v, J, energy, R, psi, 0.0)


@pytest.fixture(scope="module")
def lower_manifolds():
    return rotational_manifolds(LOWER, MU, [1, 2, 3], range(0, 60))


@pytest.fixture(scope="module")
def upper_level():
    return solve_level(UPPER, 2, J=2, mu=MU)


# --- overlaps ---------------------------------------------------------------


def test_identical_curves_give_identity():
    lv = solve_manifold(LOWER, range(8), mu=MU)
    M = fcf_matrix(lv, lv)
    np.testing.assert_allclose(M, np.eye(8), atol=1e-8)


def test_displaced_harmonic_ground_overlap():
    k, d = 2.0e4, 0.05
    a = solve_level(HarmonicCurve(k, 3.0), 0, mu=MU)
    b = solve_level(HarmonicCurve(k, 3.0 + d), 0, mu=MU)
    w = omega_angular(k, MU)
    expect = math.exp(-MU * AMU * w * (d * 1e-10) ** 2 / (2 * HBAR))
    assert franck_condon(a, b) == pytest.approx(expect, abs=1e-5)


def test_fcf_rows_sum_to_one_for_deep_lower_curve():
    up = [solve_level(UPPER, v, J=1, mu=MU) for v in range(3)]
    lo = solve_manifold(LOWER, range(80), J=1, mu=MU)
    M = fcf_matrix(up, [x for x in lo if isinstance(x, RovibLevel)])
    assert np.all(M.sum(axis=1) >= 0.999)
    assert np.all(M.sum(axis=1) <= 1.0 + 1e-6)  # quadrature across separate grids
    assert np.all((M >= 0) & (M <= 1))


def test_disjoint_grids_rejected():
    a = fake_level(10.0)
    b = RovibLevel(0, 1, 0.0, np.linspace(20.0, 30.0, 50), np.ones(50), 0.0)
    with pytest.raises(ValueError, match="overlap"):
        franck_condon(a, b)


def test_constant_dipole_factorizes():
    a = solve_level(LOWER, 0, mu=MU)
    b = solve_level(UPPER, 1, J=1, mu=MU)
    d0 = 2.7
    M = dipole_matrix_element(a, b, DipoleFunction(constant=d0))
    assert M**2 == pytest.approx(d0**2 * franck_condon(a, b), rel=1e-12)


def test_linear_dipole_on_harmonic():
    k, Re = 2.0e4, 3.0
    curve = HarmonicCurve(k, Re)
    g0 = solve_level(curve, 0, mu=MU)
    g1 = solve_level(curve, 1, mu=MU)
    R = np.linspace(1.0, 6.0, 50)
    d = DipoleFunction(R, R)
    assert dipole_matrix_element(g0, g0, d) == pytest.approx(Re, abs=1e-6)
    ladder = math.sqrt(HBAR / (2 * MU * AMU * omega_angular(k, MU))) * 1e10
    assert abs(dipole_matrix_element(g0, g1, d)) == pytest.approx(ladder, rel=1e-5)


def test_dipole_table_and_file(tmp_path):
    R = np.linspace(2.0, 10.0, 20)
    p = write_curve(tmp_path / "d.dat", R, 1.0 + 0.1 * R, unit_R="angstrom", unit_d="debye")
    d = DipoleFunction.load(p)
    assert d(5.0) == pytest.approx(1.5, rel=1e-12)
    assert d(50.0) == pytest.approx(2.0, rel=1e-12)  # held beyond the table
    assert d.scaled(3.0)(5.0) == pytest.approx(4.5, rel=1e-12)
    with pytest.raises(ValueError):
        DipoleFunction([1.0, 0.5], [1.0, 1.0])


# --- rotational line strengths ----------------------------------------------


def test_honl_london_from_J2():
    strengths = {ln.J_lower: ln.honl_london for ln in allowed_branches(2, "both")}
    assert strengths == {1: 1.5, 2: 2.5, 3: 1.0}
    assert sum(strengths.values()) == 5


def test_honl_london_edge_cases():
    assert honl_london("P", 1) == 0.0
    assert honl_london("R", 0) == 1.0
    with pytest.raises(ValueError):
        honl_london("Q", 0)  # no J'=0 in a Pi state
    with pytest.raises(ValueError):
        honl_london("P", 0)
    with pytest.raises(ValueError):
        honl_london("X", 2)
    with pytest.raises(ValueError):
        honl_london("R", 2, transition="Sigma-Sigma")


def test_branch_selection_examples():
    assert [ln.J_lower for ln in allowed_branches(2, "f")] == [2]
    assert [ln.J_lower for ln in allowed_branches(1, "both")] == [0, 1, 2]
    assert [ln.J_lower for ln in allowed_branches(1, "e")] == [0, 2]
    # J''=0 is reached only from J'=1 through an e-parity R line
    for J in range(1, 8):
        for parity in ("e", "f"):
            hits = [ln for ln in allowed_branches(J, parity) if ln.J_lower == 0]
            assert bool(hits) == (J == 1 and parity == "e")


def test_branch_rules_reject():
    with pytest.raises(ValueError):
        allowed_branches(0, "e")
    with pytest.raises(ValueError):
        allowed_branches(2, "x")
    with pytest.raises(ValueError):
        BranchLine(2, 2, "Q", 2.5, "e")
    with pytest.raises(ValueError):
        BranchLine(3, 1, "P", 0.0, "e")


@given(st.integers(min_value=1, max_value=200))
def test_honl_london_sum_rule(J):
    total = sum(ln.honl_london for ln in allowed_branches(J, "e")) + sum(
        ln.honl_london for ln in allowed_branches(J, "f")
    )
    assert abs(total - (2 * J + 1)) < 1e-12


@given(st.integers(min_value=1, max_value=50))
def test_parity_filter(J):
    assert all(ln.branch == "Q" and ln.J_lower == J for ln in allowed_branches(J, "f"))
    assert all(abs(ln.J_lower - J) == 1 for ln in allowed_branches(J, "e"))
    assert decay_J_values(J, "both") == sorted({J - 1, J, J + 1})


# --- Einstein coefficients --------------------------------------------------


def test_prefactor_from_constants():
    eps0 = 8.8541878188e-12
    debye = 1e-21 / C
    hand = 16 * math.pi**3 * (100 * C) ** 3 * debye**2 / (3 * eps0 * H * C**3)
    assert einstein_prefactor() == pytest.approx(hand, rel=1e-9)
    assert einstein_prefactor() == pytest.approx(3.1361886629717197e-07, rel=1e-9)


def test_einstein_A_reference_value():
    lo, up = fake_level(0.0), fake_level(10000.0)
    A = einstein_A(up, lo, None, DipoleFunction(constant=1.0))
    assert A == pytest.approx(3.1361886629717197e-07 * 1e12, rel=1e-9)


def test_einstein_A_scalings():
    lo, up = fake_level(0.0), fake_level(10000.0)
    d = DipoleFunction(constant=1.0)
    A = einstein_A(up, lo, None, d)
    assert einstein_A(up, lo, None, d.scaled(2.0)) == pytest.approx(4 * A, rel=1e-12)
    assert einstein_A(fake_level(20000.0), lo, None, d) == pytest.approx(8 * A, rel=1e-12)
    line = allowed_branches(2, "f")[0]
    assert einstein_A(up, lo, line, d) == pytest.approx(A * 2.5 / 5, rel=1e-12)
    with pytest.raises(ValueError):
        einstein_A(lo, up, None, d)


# --- decay tables -----------------------------------------------------------


def test_decay_table_normalized(upper_level, lower_manifolds):
    t = decay_table(upper_level, lower_manifolds, DipoleFunction(constant=1.0), parity="both")
    assert math.fsum(r.rel_pop for r in t.rows) == pytest.approx(1.0, abs=1e-9)
    assert all(r.A >= 0 and r.rel_pop >= 0 for r in t.rows)
    assert [(r.v, r.J) for r in t.rows] == sorted((r.v, r.J) for r in t.rows)
    assert t.continuum_leakage < 1e-3
    layout = t.table_layout()
    assert [k for k, _ in layout] == [str(v) for v in range(11)] + ["Σ(11-20)", "Σ(>20)"]
    assert sum(p for _, p in layout) == pytest.approx(1.0, abs=1e-9)


def test_decay_table_dipole_scaling(upper_level, lower_manifolds):
    R = np.linspace(2.0, 10.0, 30)
    d = DipoleFunction(R, 5.0 - 0.3 * R)
    a = decay_table(upper_level, lower_manifolds, d, parity="e")
    b = decay_table(upper_level, lower_manifolds, d.scaled(3.0), parity="e")
    np.testing.assert_allclose([r.rel_pop for r in a.rows], [r.rel_pop for r in b.rows], rtol=1e-9, atol=1e-15)
    assert b.total_A == pytest.approx(9 * a.total_A, rel=1e-12)


def test_decay_table_parity_rows(upper_level, lower_manifolds):
    d = DipoleFunction(constant=1.0)
    f = decay_table(upper_level, lower_manifolds, d, parity="f")
    e = decay_table(upper_level, lower_manifolds, d, parity="e")
    assert {r.J for r in f.rows} == {2}
    assert {r.J for r in e.rows} == {1, 3}


def test_decay_identical_curves_diagonal():
    up = solve_level(LOWER, 3, J=1, mu=MU)
    lower = rotational_manifolds(LOWER, MU, [0, 1, 2], range(10))
    # shift the upper level up so every line has positive frequency
    up = RovibLevel(up.v, up.J, up.energy + 15000.0, up.R, up.psi, up.Bv)
    pops = decay_table(up, lower, DipoleFunction(constant=1.0)).vibrational_populations()
    assert pops[3] > 0.999


def test_decay_table_accepts_plain_list_and_callable(upper_level):
    lv = solve_manifold(LOWER, range(60), J=0, mu=MU)
    d = DipoleFunction(constant=1.0)
    a = decay_table(upper_level, lv, d, parity="f")
    b = decay_table(upper_level, lambda J: lv, d, parity="f")
    assert a.total_A == b.total_A
    assert isinstance(a, DecayTable) and a.upper == (2, 2, "f")


def test_decay_table_warns_when_incomplete(upper_level):
    lv = solve_manifold(LOWER, range(3), J=2, mu=MU)
    with pytest.warns(UserWarning, match="Franck-Condon sum"):
        t = decay_table(upper_level, lv, DipoleFunction(constant=1.0), parity="f")
    assert t.continuum_leakage > 0.01
    with pytest.raises(ValueError, match="empty"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            decay_table(upper_level, [], DipoleFunction(constant=1.0), parity="f")


def test_effective_upper_potential_agrees(upper_level):
    again = solve_level(effective(UPPER, 2, MU), 2)
    assert again.energy == upper_level.energy
    assert MU_LICS == pytest.approx(MU, abs=1e-4)
