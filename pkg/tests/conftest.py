import math

import numpy as np
import pytest

from rovib import units
from rovib.io import DATA_ENV
from rovib.potential import HarmonicCurve, MorseCurve

MU_LICS = 7.016 * 132.905 / (7.016 + 132.905)
DATA_FILES = ("X1Sigma.pot", "B1Pi.pot", "dipole_XB.dat")


def write_curve(path, R, V, **header):
    lines = [f"# {k}: {v}" for k, v in header.items()]
    lines += [f"{r:.17g} {y:.17g}" for r, y in zip(R, V)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def harmonic_omega(k, mu):
    """Harmonic wavenumber (cm^-1) for k in cm^-1/A^2: omega = 2 sqrt(K k / 2)."""
    return 2.0 * math.sqrt(units.hbar2_over_2mu(mu) * k / 2.0)


def morse_levels(De, a, mu, n):
    """Closed-form Morse term values above the well bottom."""
    K = units.hbar2_over_2mu(mu)
    we = 2.0 * a * math.sqrt(K * De)
    wexe = K * a * a
    v = np.arange(n) + 0.5
    return we * v - wexe * v * v


@pytest.fixture
def harmonic():
    return HarmonicCurve(k=2.0e4, Re=3.0)


@pytest.fixture
def morse():
    return MorseCurve(De=5000.0, a=1.0, Re=3.5)


@pytest.fixture(scope="session")
def data_dir():
    import os
    from pathlib import Path

    d = os.environ.get(DATA_ENV)
    if not d or not all((Path(d) / f).is_file() for f in DATA_FILES):
        pytest.skip(f"external curve files not available (set {DATA_ENV})")
    return Path(d)
