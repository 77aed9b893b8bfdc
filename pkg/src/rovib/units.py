"""Physical constants and energy-unit conversions.

Every other module takes its constants from here. Values come from
``scipy.constants`` (CODATA 2018 or newer, depending on the SciPy release).

Internal canonical units: energy in cm^-1, length in angstrom, mass in amu.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import scipy.constants as _sc


@dataclass(frozen=True)
class ConstantsTable:
    hbar: float  # J s
    h: float  # J s
    kB: float  # J/K
    c: float  # m/s
    amu: float  # kg
    bohr_radius: float  # m
    debye: float  # C m
    eps0: float  # F/m
    hartree: float  # J
    eV: float  # J
    electron_mass: float  # kg


CONSTANTS = ConstantsTable(
    hbar=_sc.hbar,
    h=_sc.h,
    kB=_sc.k,
    c=_sc.c,
    amu=_sc.physical_constants["atomic mass constant"][0],
    bohr_radius=_sc.physical_constants["Bohr radius"][0],
    debye=1e-21 / _sc.c,
    eps0=_sc.epsilon_0,
    hartree=_sc.physical_constants["Hartree energy"][0],
    eV=_sc.eV,
    electron_mass=_sc.m_e,
)

# Atomic masses in amu (AME2020).
ISOTOPE_MASSES = MappingProxyType(
    {
        "Li6": 6.0151228874,
        "Li7": 7.0160034366,
        "Cs133": 132.9054519610,
    }
)

BOHR_IN_ANGSTROM = CONSTANTS.bohr_radius * 1e10
AU_DIPOLE_IN_DEBYE = _sc.e * CONSTANTS.bohr_radius / CONSTANTS.debye
CM1_IN_GHZ = CONSTANTS.c / 1e7  # 29.9792458 exactly
# hc in J per cm^-1
_HC_CM = CONSTANTS.h * CONSTANTS.c * 100.0

# amount of each unit equivalent to 1 cm^-1
_PER_CM1 = {
    "cm-1": 1.0,
    "GHz": CM1_IN_GHZ,
    "MHz": CM1_IN_GHZ * 1e3,
    "K": _HC_CM / CONSTANTS.kB,
    "mK": 1e3 * _HC_CM / CONSTANTS.kB,
    "uK": 1e6 * _HC_CM / CONSTANTS.kB,
    "J": _HC_CM,
    "hartree": _HC_CM / CONSTANTS.hartree,
    "eV": _HC_CM / CONSTANTS.eV,
}

_ALIASES = {
    "cm^-1": "cm-1",
    "cm⁻¹": "cm-1",
    "1/cm": "cm-1",
    "µK": "uK",
    "μK": "uK",
    "Eh": "hartree",
    "au": "hartree",
}

ENERGY_UNITS = tuple(_PER_CM1) + ("nm",)


def _canonical(unit: str) -> str:
    unit = _ALIASES.get(unit, unit)
    if unit not in _PER_CM1 and unit != "nm":
        raise ValueError(f"unknown energy unit {unit!r}; expected one of {ENERGY_UNITS}")
    return unit


def convert_energy(value, from_unit: str, to_unit: str):
    """Convert an energy between units.

    ``nm`` stands for a vacuum wavelength, E = hc/lambda. Works on scalars and
    numpy arrays.
    """
    src, dst = _canonical(from_unit), _canonical(to_unit)
    if src == dst:
        return value
    if src == "nm":
        wavenumber = 1e7 / value
    else:
        wavenumber = value / _PER_CM1[src]
    if dst == "nm":
        return 1e7 / wavenumber
    return wavenumber * _PER_CM1[dst]


def reduced_mass(m1: float, m2: float) -> float:
    """Reduced mass of two bodies (any consistent mass unit)."""
    if m1 <= 0 or m2 <= 0:
        raise ValueError(f"masses must be positive, got {m1}, {m2}")
    return m1 * m2 / (m1 + m2)


def isotope_mass(name: str) -> float:
    try:
        return ISOTOPE_MASSES[name]
    except KeyError:
        raise ValueError(f"unknown isotope {name!r}; known: {sorted(ISOTOPE_MASSES)}") from None


def mu_lics() -> float:
    """Reduced mass of 7Li133Cs in amu."""
    return reduced_mass(ISOTOPE_MASSES["Li7"], ISOTOPE_MASSES["Cs133"])


def hbar2_over_2mu(mu: float) -> float:
    """hbar^2/(2 mu) in cm^-1 angstrom^2 for ``mu`` in amu."""
    if mu <= 0:
        raise ValueError(f"reduced mass must be positive, got {mu}")
    si = CONSTANTS.hbar**2 / (2.0 * mu * CONSTANTS.amu)  # J m^2
    return si / _HC_CM * 1e20
