import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rovib import units
from rovib.units import convert_energy, reduced_mass

ENERGY_UNITS = ["cm-1", "GHz", "MHz", "K", "mK", "uK", "J", "hartree", "eV"]


def test_cm1_to_ghz_is_exact():
    assert convert_energy(1.0, "cm-1", "GHz") == 29.9792458
    assert units.CM1_IN_GHZ == 29.9792458


def test_wavenumber_to_vacuum_wavelength():
    # 1e7 / 16999.4
    assert convert_energy(16999.4, "cm-1", "nm") == pytest.approx(588.2560560960975, rel=1e-12)
    assert 575 < convert_energy(16999.4, "cm-1", "nm") < 600


def test_millikelvin_to_wavenumber():
    # kB T / (h c) from the exact SI definitions of kB, h and c
    assert convert_energy(1.6, "mK", "cm-1") == pytest.approx(1.112055680777804e-3, rel=1e-12)


def test_aliases_and_unknown_unit():
    assert convert_energy(2.0, "µK", "uK") == 2.0
    assert convert_energy(1.0, "au", "cm-1") == convert_energy(1.0, "hartree", "cm-1")
    with pytest.raises(ValueError, match="unknown energy unit"):
        convert_energy(1.0, "cm-1", "furlong")


def test_hartree_in_wavenumbers():
    assert convert_energy(1.0, "hartree", "cm-1") == pytest.approx(219474.63136314, rel=1e-10)


def test_array_input():
    out = convert_energy(np.array([1.0, 2.0]), "cm-1", "MHz")
    np.testing.assert_allclose(out, [29979.2458, 59958.4916], rtol=1e-15)


def test_reduced_mass_examples():
    assert reduced_mass(7.016, 132.905) == pytest.approx(6.6641996555199015, rel=1e-14)
    assert reduced_mass(3.0, 3.0) == 1.5
    assert reduced_mass(1.0, 1e12) == pytest.approx(1.0, rel=1e-11)


@pytest.mark.parametrize("m1,m2", [(0.0, 1.0), (1.0, -2.0)])
def test_reduced_mass_rejects_nonpositive(m1, m2):
    with pytest.raises(ValueError):
        reduced_mass(m1, m2)


def test_lics_mass_from_isotopes():
    mu = units.mu_lics()
    m1, m2 = units.ISOTOPE_MASSES["Li7"], units.ISOTOPE_MASSES["Cs133"]
    assert mu == m1 * m2 / (m1 + m2)
    assert mu == pytest.approx(6.6641, abs=2e-3)


def test_hbar2_over_2mu_against_si():
    # hbar^2/(2 mu) for mu = 1 amu, by hand from CODATA values
    h, amu, c = 6.62607015e-34, 1.66053906892e-27, 299792458.0
    hbar = h / (2 * math.pi)
    expect = hbar**2 / (2 * amu) / (h * c * 100) * 1e20
    assert units.hbar2_over_2mu(1.0) == pytest.approx(expect, rel=1e-9)
    assert units.hbar2_over_2mu(2.0) == pytest.approx(expect / 2, rel=1e-15)


def test_single_constants_provider():
    # the other modules import their constants from ``units`` and define none of their own
    import pathlib
    import re

    import rovib

    pkg = pathlib.Path(rovib.__file__).parent
    for path in pkg.glob("*.py"):
        if path.name == "units.py":
            continue
        text = path.read_text(encoding="utf-8")
        assert "scipy.constants" not in text, path.name
        assert not re.search(r"\b(1\.0545|6\.626|1\.3806|2\.9979)", text), path.name


@given(
    st.floats(min_value=1e-6, max_value=1e6),
    st.sampled_from(ENERGY_UNITS),
    st.sampled_from(ENERGY_UNITS),
)
def test_round_trip(value, a, b):
    back = convert_energy(convert_energy(value, a, b), b, a)
    assert back == pytest.approx(value, rel=1e-12)


@given(st.floats(min_value=1.0, max_value=1e6))
def test_wavelength_is_an_involution(x):
    assert convert_energy(convert_energy(x, "cm-1", "nm"), "nm", "cm-1") == pytest.approx(x, rel=1e-13)


@given(st.floats(min_value=-1e6, max_value=1e6), st.floats(min_value=-1e6, max_value=1e6),
       st.sampled_from(ENERGY_UNITS), st.sampled_from(ENERGY_UNITS))
def test_linearity(x, y, a, b):
    lhs = convert_energy(x + y, a, b)
    rhs = convert_energy(x, a, b) + convert_energy(y, a, b)
    scale = max(abs(convert_energy(x, a, b)), abs(convert_energy(y, a, b)), 1e-300)
    assert math.isclose(lhs, rhs, rel_tol=0, abs_tol=1e-12 * scale + 1e-300)
