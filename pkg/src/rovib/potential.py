"""Potential-energy curves: analytic forms, tabulated curves with long-range
tails, file loading and centrifugal terms.

Energies are in cm^-1, distances in angstrom, masses in amu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar

from rovib import units


class CurveFormatError(ValueError):
    """A potential or dipole file does not follow the expected format."""

    def __init__(self, message: str, path: str | None = None, lineno: int | None = None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}"
            if lineno is not None:
                where += f":{lineno}"
            where += ": "
        super().__init__(where + message)


def _check_positive_R(R):
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise ValueError("internuclear distance must be positive")
    return R


class PotentialCurve:
    """Base class for a Born-Oppenheimer curve V(R).

    Subclasses implement ``_eval`` and provide ``asymptote``, ``label`` and
    the search window ``r_near``/``r_far`` used by the bound-state solver.
    """

    label: str = ""
    asymptote: float = math.inf

    def _eval(self, R: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, R):
        """V(R) in cm^-1; accepts scalars or arrays, R must be > 0."""
        R = _check_positive_R(R)
        out = self._eval(np.atleast_1d(R))
        return float(out[0]) if R.ndim == 0 else out

    __call__ = evaluate

    @property
    def r_near(self) -> float:
        raise NotImplementedError

    @property
    def r_far(self) -> float:
        raise NotImplementedError

    def minimum(self) -> tuple[float, float]:
        """Location and value (R_e, V_min) of the well minimum."""
        R = np.linspace(self.r_near, self.r_far, 4001)
        V = self._eval(R)
        i = int(np.argmin(V))
        lo, hi = R[max(i - 1, 0)], R[min(i + 1, len(R) - 1)]
        res = minimize_scalar(
            lambda r: float(self._eval(np.array([r]))[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        return float(res.x), float(res.fun)

    @property
    def depth(self) -> float:
        return self.asymptote - self.minimum()[1]


@dataclass(frozen=True)
class MorseCurve(PotentialCurve):
    """V = Te + De (1 - exp(-a (R - Re)))^2."""

    De: float
    a: float
    Re: float
    Te: float = 0.0
    label: str = "morse"

    def __post_init__(self):
        if self.De <= 0 or self.a <= 0 or self.Re <= 0:
            raise ValueError("Morse parameters De, a, Re must be positive")

    @property
    def asymptote(self) -> float:
        return self.Te + self.De

    def _eval(self, R):
        return self.Te + self.De * (1.0 - np.exp(-self.a * (R - self.Re))) ** 2

    def minimum(self):
        return self.Re, self.Te

    @property
    def r_near(self):
        return max(1e-3, self.Re - 8.0 / self.a)

    @property
    def r_far(self):
        return self.Re + 80.0 / self.a


@dataclass(frozen=True)
class HarmonicCurve(PotentialCurve):
    """V = Te + k (R - Re)^2 / 2, with k in cm^-1/angstrom^2."""

    k: float
    Re: float
    Te: float = 0.0
    label: str = "harmonic"

    def __post_init__(self):
        if self.k <= 0 or self.Re <= 0:
            raise ValueError("harmonic parameters k, Re must be positive")

    @property
    def asymptote(self):
        return math.inf

    def _eval(self, R):
        return self.Te + 0.5 * self.k * (R - self.Re) ** 2

    def minimum(self):
        return self.Re, self.Te

    @property
    def r_near(self):
        return self.Re * 1e-3

    @property
    def r_far(self):
        return 10.0 * self.Re


@dataclass(frozen=True)
class LongRangeTail:
    """Dispersion tail asymptote - C6/R^6 - C8/R^8, used for R >= match_R."""

    C6: float
    match_R: float
    C8: float = 0.0


class TabulatedCurve(PotentialCurve):
    """Curve given on a table of points.

    Inside the table a natural cubic spline is used. Below the first point
    the inner wall is extended as ``Vmin + (V1 - Vmin) exp(-beta (R - R1))``
    through the first two points. Beyond ``match_R`` the optional dispersion
    tail takes over; it is shifted by a term ``offset (match_R/R)^10`` so that
    the curve is continuous at ``match_R`` and still tends to the asymptote.
    Without a tail, V is held at its last tabulated value.
    """

    def __init__(
        self,
        R,
        V,
        asymptote: float | None = None,
        long_range: LongRangeTail | None = None,
        label: str = "",
    ):
        R = np.asarray(R, dtype=float)
        V = np.asarray(V, dtype=float)
        if R.ndim != 1 or R.shape != V.shape:
            raise ValueError("R and V must be 1-D arrays of equal length")
        if len(R) < 8:
            raise ValueError(f"need at least 8 tabulated points, got {len(R)}")
        if np.any(np.diff(R) <= 0):
            raise ValueError("tabulated R must be strictly increasing")
        if R[0] <= 0:
            raise ValueError("tabulated R must be positive")
        interior = (V[1:-1] < V[:-2]) & (V[1:-1] <= V[2:])
        if np.count_nonzero(interior) != 1:
            raise ValueError(
                f"tabulated curve must have a single minimum, found {np.count_nonzero(interior)}"
            )
        self.R = R
        self.V = V
        self.label = label
        self.long_range = long_range
        if asymptote is None:
            asymptote = 0.0 if long_range is not None else float(V[-1])
        self.asymptote = float(asymptote)
        self._spline = CubicSpline(R, V, bc_type="natural")

        i_min = int(np.argmin(V))
        self._vmin_table = float(V[i_min])
        v1, v2 = V[0] - V[i_min], V[1] - V[i_min]
        if v1 > v2 > 0:
            self._beta = math.log(v1 / v2) / (R[1] - R[0])
        else:
            self._beta = None

        self._tail_offset = 0.0
        if long_range is not None:
            m = long_range.match_R
            if not (R[0] < m <= R[-1]):
                raise ValueError(f"match_R={m} must lie inside the table ({R[0]}, {R[-1]}]")
            self._tail_offset = float(self._spline(m)) - self._raw_tail(np.array([m]))[0]
            s_spline = float(self._spline(m, 1))
            s_tail = float(self._tail_slope(m))
            if abs(s_spline - s_tail) > 0.01 * abs(s_spline):
                raise ValueError(
                    f"long-range tail slope {s_tail:.6g} does not match the table slope "
                    f"{s_spline:.6g} at match_R={m} (more than 1% apart)"
                )

    def _raw_tail(self, R):
        lr = self.long_range
        return self.asymptote - lr.C6 / R**6 - lr.C8 / R**8

    def _tail(self, R):
        m = self.long_range.match_R
        return self._raw_tail(R) + self._tail_offset * (m / R) ** 10

    def _tail_slope(self, R):
        lr = self.long_range
        return (
            6.0 * lr.C6 / R**7
            + 8.0 * lr.C8 / R**9
            - 10.0 * self._tail_offset * lr.match_R**10 / R**11
        )

    def _eval(self, R):
        out = np.empty_like(R)
        R0 = self.R[0]
        r_end = self.long_range.match_R if self.long_range is not None else self.R[-1]
        inner = R < R0
        mid = (R >= R0) & (R <= r_end)
        outer = R > r_end
        out[mid] = self._spline(R[mid])
        if np.any(inner):
            if self._beta is not None:
                v1 = self.V[0] - self._vmin_table
                out[inner] = self._vmin_table + v1 * np.exp(-self._beta * (R[inner] - R0))
            else:
                out[inner] = self._spline(R[inner])
        if np.any(outer):
            if self.long_range is not None:
                out[outer] = self._tail(R[outer])
            else:
                out[outer] = self.V[-1]
        return out

    @property
    def r_near(self):
        return 0.5 * self.R[0]

    @property
    def r_far(self):
        if self.long_range is not None:
            return max(self.R[-1], 10.0 * self.long_range.match_R)
        return float(self.R[-1])


@dataclass(frozen=True)
class EffectivePotential:
    """Base curve plus the centrifugal term hbar^2 l(l+1) / (2 mu R^2)."""

    base: PotentialCurve
    l: int
    mu: float
    _K: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("l must be >= 0")
        object.__setattr__(self, "_K", units.hbar2_over_2mu(self.mu))

    @property
    def hbar2_2mu(self) -> float:
        return self._K

    @property
    def asymptote(self) -> float:
        return self.base.asymptote

    @property
    def label(self) -> str:
        return self.base.label

    @property
    def r_near(self) -> float:
        return self.base.r_near

    @property
    def r_far(self) -> float:
        return self.base.r_far

    def evaluate(self, R):
        if self.l == 0:
            return self.base.evaluate(R)
        R = _check_positive_R(R)
        return self.base.evaluate(R) + self._K * self.l * (self.l + 1) / R**2

    __call__ = evaluate

    def minimum(self) -> tuple[float, float]:
        if self.l == 0:
            return self.base.minimum()
        Re, _ = self.base.minimum()
        lo, hi = self.r_near, self.r_far
        R = np.linspace(lo, min(hi, 4 * Re), 4001)
        V = self.evaluate(R)
        i = int(np.argmin(V))
        res = minimize_scalar(
            lambda r: float(self.evaluate(r)),
            bounds=(R[max(i - 1, 0)], R[min(i + 1, len(R) - 1)]),
            method="bounded",
            options={"xatol": 1e-10},
        )
        return float(res.x), float(res.fun)


def effective(curve: PotentialCurve, l: int, mu: float) -> EffectivePotential:
    return EffectivePotential(curve, l, mu)


def evaluate(curve, R):
    return curve.evaluate(R)


@dataclass(frozen=True)
class Barrier:
    """Centrifugal barrier position and height above the asymptote."""

    R_b: float  # angstrom
    E_b: float  # cm^-1
    R_b_numeric: float
    E_b_numeric: float

    @property
    def E_b_mK(self) -> float:
        return units.convert_energy(self.E_b, "cm-1", "mK")


def centrifugal_barrier(C6: float, mu: float, l: int) -> Barrier:
    """Top of hbar^2 l(l+1)/(2 mu R^2) - C6/R^6.

    ``C6`` in cm^-1 angstrom^6, ``mu`` in amu. The closed-form stationary
    point is cross-checked against a bounded numeric maximization.
    """
    if l < 1:
        raise ValueError("no centrifugal barrier for l = 0")
    if C6 <= 0:
        raise ValueError("C6 must be positive")
    K = units.hbar2_over_2mu(mu)
    L = l * (l + 1)
    R_b = (3.0 * C6 / (K * L)) ** 0.25
    E_b = (2.0 / 3.0) * K * L / R_b**2

    def neg(R):
        return -(K * L / R**2 - C6 / R**6)

    r_scale = (C6 / (K * L)) ** 0.25
    grid = np.geomspace(r_scale / 100, r_scale * 100, 2001)
    i = int(np.argmin(neg(grid)))
    res = minimize_scalar(
        neg, bounds=(grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]),
        method="bounded", options={"xatol": 1e-12 * r_scale},
    )
    R_num, E_num = float(res.x), float(-res.fun)
    if abs(E_num - E_b) > 1e-3 * E_b:
        raise RuntimeError(f"numeric barrier {E_num} disagrees with closed form {E_b}")
    return Barrier(R_b, E_b, R_num, E_num)


# ---------------------------------------------------------------------------
# file format

_R_UNITS = {"angstrom": 1.0, "bohr": units.BOHR_IN_ANGSTROM}
_V_UNITS = {"cm-1": 1.0, "hartree": units.convert_energy(1.0, "hartree", "cm-1")}
_D_UNITS = {"debye": 1.0, "au": units.AU_DIPOLE_IN_DEBYE}


@dataclass
class CurveTable:
    """Raw contents of a two-column curve file, converted to canonical units."""

    R: np.ndarray
    Y: np.ndarray
    header: dict
    y_unit: str


def read_curve_file(path, kind: str = "potential") -> CurveTable:
    """Parse a ``# key: value`` headed, two-column text file.

    ``kind`` is ``potential`` (column 2 in cm-1 or hartree) or ``dipole``
    (column 2 in debye or au). Header quantities C6, C8, match_R and
    asymptote are read in the file's own units and converted along with the
    columns.
    """
    path = str(path)
    header: dict[str, str] = {}
    rows: list[tuple[float, float]] = []
    linenos: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if ":" in body:
                    key, _, value = body.partition(":")
                    header[key.strip()] = value.strip()
                continue
            parts = line.split()
            if len(parts) < 2:
                raise CurveFormatError("expected two numeric columns", path, lineno)
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise CurveFormatError(f"non-numeric data {line!r}", path, lineno) from None
            linenos.append(lineno)

    if "unit_R" not in header:
        raise CurveFormatError("missing header key 'unit_R'", path)
    unit_R = header["unit_R"].lower()
    if unit_R not in _R_UNITS:
        raise CurveFormatError(f"unit_R must be one of {sorted(_R_UNITS)}, got {unit_R!r}", path)
    table = _V_UNITS if kind == "potential" else _D_UNITS
    y_key = "unit_V" if kind == "potential" else ("unit_d" if "unit_d" in header else "unit_V")
    if y_key not in header:
        raise CurveFormatError(f"missing header key {y_key!r}", path)
    y_unit = header[y_key]
    if y_unit not in table:
        raise CurveFormatError(f"{y_key} must be one of {sorted(table)}, got {y_unit!r}", path)
    if len(rows) < 8:
        raise CurveFormatError(f"need at least 8 data rows, got {len(rows)}", path)
    data = np.array(rows)
    for k in range(1, len(data)):
        if data[k, 0] <= data[k - 1, 0]:
            raise CurveFormatError("R column must be strictly increasing", path, linenos[k])
    fR, fY = _R_UNITS[unit_R], table[y_unit]
    return CurveTable(R=data[:, 0] * fR, Y=data[:, 1] * fY, header=header, y_unit=y_unit)


def load_curve(path) -> TabulatedCurve:
    """Load a potential file into a validated :class:`TabulatedCurve`."""
    tab = read_curve_file(path, "potential")
    h = tab.header
    fR = _R_UNITS[h["unit_R"].lower()]
    fV = _V_UNITS[h["unit_V"]]

    def num(key):
        try:
            return float(h[key])
        except ValueError:
            raise CurveFormatError(f"header {key!r} is not a number: {h[key]!r}", str(path)) from None

    asymptote = num("asymptote") * fV if "asymptote" in h else None
    tail = None
    if "C6" in h:
        match_R = num("match_R") * fR if "match_R" in h else float(tab.R[-1])
        C8 = num("C8") * fV * fR**8 if "C8" in h else 0.0
        tail = LongRangeTail(C6=num("C6") * fV * fR**6, C8=C8, match_R=match_R)
    label = h.get("label", Path(path).stem)
    try:
        return TabulatedCurve(tab.R, tab.Y, asymptote=asymptote, long_range=tail, label=label)
    except ValueError as exc:
        raise CurveFormatError(str(exc), str(path)) from exc
