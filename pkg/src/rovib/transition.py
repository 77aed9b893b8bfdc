"""Bound-bound transition strengths between rovibrational levels.

Covers Franck-Condon factors, transition dipole matrix elements, Einstein A
coefficients, Hönl-London factors with e/f parity selection for a
1Pi <-> 1Sigma+ band, and spontaneous-decay tables.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from rovib import units
from rovib.potential import read_curve_file
from rovib.radial import RovibLevel, bound_levels, solve_manifold


class DipoleFunction:
    """Transition dipole d(R) in debye.

    Either a constant or a table interpolated with a natural cubic spline;
    outside the table the end values are held.
    """

    def __init__(self, R=None, d=None, constant: float | None = None, label: str = ""):
        self.label = label
        if constant is not None:
            self.constant = float(constant)
            self._spline = None
            return
        R = np.asarray(R, dtype=float)
        d = np.asarray(d, dtype=float)
        if R.ndim != 1 or R.shape != d.shape or len(R) < 2:
            raise ValueError("dipole table needs matching 1-D R and d arrays")
        if np.any(np.diff(R) <= 0):
            raise ValueError("dipole table R must be strictly increasing")
        self.constant = None
        self.R = R
        self.d = d
        self._spline = CubicSpline(R, d, bc_type="natural")

    @classmethod
    def load(cls, path) -> "DipoleFunction":
        tab = read_curve_file(path, kind="dipole")
        return cls(tab.R, tab.Y, label=tab.header.get("label", str(path)))

    def scaled(self, factor: float) -> "DipoleFunction":
        if self._spline is None:
            return DipoleFunction(constant=self.constant * factor, label=self.label)
        return DipoleFunction(self.R, self.d * factor, label=self.label)

    def __call__(self, R):
        R = np.asarray(R, dtype=float)
        if self._spline is None:
            return np.full_like(R, self.constant)
        return self._spline(np.clip(R, self.R[0], self.R[-1]))


def _common_grid(a: RovibLevel, b: RovibLevel):
    lo = max(a.R[0], b.R[0])
    hi = min(a.R[-1], b.R[-1])
    if lo >= hi:
        raise ValueError("wavefunction grids do not overlap")
    if a.R.shape == b.R.shape and np.array_equal(a.R, b.R):
        return a.R, a.psi, b.psi
    R = np.union1d(a.R[(a.R >= lo) & (a.R <= hi)], b.R[(b.R >= lo) & (b.R <= hi)])
    pa = CubicSpline(a.R, a.psi)(R)
    pb = CubicSpline(b.R, b.psi)(R)
    return R, pa, pb


def overlap(lower: RovibLevel, upper: RovibLevel) -> float:
    R, pl, pu = _common_grid(lower, upper)
    return float(np.trapezoid(pu * pl, R))


def franck_condon(lower: RovibLevel, upper: RovibLevel) -> float:
    """|<psi_upper|psi_lower>|^2."""
    return overlap(lower, upper) ** 2


def fcf_matrix(upper_levels, lower_levels) -> np.ndarray:
    """FCF matrix, rows indexed by upper level, columns by lower level."""
    return np.array([[franck_condon(lo, up) for lo in lower_levels] for up in upper_levels])


def dipole_matrix_element(lower: RovibLevel, upper: RovibLevel, d: DipoleFunction) -> float:
    """<psi_upper| d(R) |psi_lower> in debye."""
    R, pl, pu = _common_grid(lower, upper)
    return float(np.trapezoid(pu * d(R) * pl, R))


# ---------------------------------------------------------------------------
# rotational structure

BRANCH_DELTA = {"P": -1, "Q": 0, "R": +1}  # J_upper - J_lower


def honl_london(branch: str, J_lower: int, transition: str = "Pi-Sigma") -> float:
    """Hönl-London factor for a 1Pi - 1Sigma+ line labelled on the Sigma J.

    S_R = (J+2)/2, S_Q = (2J+1)/2, S_P = (J-1)/2, normalized so the three
    branches sum to 2J+1. P(1) ends on J'=0, which a Pi state lacks; its
    factor is zero. Q(0) and P(0) do not exist and are rejected.
    """
    if transition not in ("Pi-Sigma", "Sigma-Pi"):
        raise ValueError(f"unsupported transition {transition!r}")
    if branch not in BRANCH_DELTA:
        raise ValueError(f"unknown branch {branch!r}")
    J = J_lower
    J_upper = J + BRANCH_DELTA[branch]
    if J < 0 or J_upper < 0 or (J_upper == 0 and branch != "P"):
        raise ValueError(f"{branch}({J}) is not an allowed 1Pi-1Sigma line")
    if branch == "R":
        return (J + 2) / 2.0
    if branch == "Q":
        return (2 * J + 1) / 2.0
    return (J - 1) / 2.0


def branch_for(J_upper: int, J_lower: int) -> str:
    delta = J_upper - J_lower
    for name, dj in BRANCH_DELTA.items():
        if dj == delta:
            return name
    raise ValueError(f"|J_upper - J_lower| > 1 for J'={J_upper}, J''={J_lower}")


@dataclass(frozen=True)
class BranchLine:
    J_upper: int
    J_lower: int
    branch: str
    honl_london: float
    upper_parity: str
    parity_weight: float = 1.0

    def __post_init__(self):
        if abs(self.J_upper - self.J_lower) > 1:
            raise ValueError("|J_upper - J_lower| must be <= 1")
        if self.J_upper == 0 and self.J_lower == 0:
            raise ValueError("J=0 <-> J=0 is forbidden")
        expect = "f" if self.branch == "Q" else "e"
        if self.upper_parity != expect:
            raise ValueError(f"{self.branch} lines require {expect}-parity upper levels")


def allowed_branches(J_upper: int, parity: str) -> list[BranchLine]:
    """Emission lines from a 1Pi level (J_upper, parity) down to 1Sigma+.

    f levels decay only through Q (J'' = J'); e levels through P (J'' = J'+1)
    and R (J'' = J'-1). ``both`` takes the union with weight 1/2 per parity.
    """
    if J_upper < 1:
        raise ValueError("a 1Pi state has no J=0 level")
    if parity not in ("e", "f", "both"):
        raise ValueError(f"parity must be 'e', 'f' or 'both', got {parity!r}")
    w = 0.5 if parity == "both" else 1.0
    lines = []
    if parity in ("e", "both"):
        if J_upper - 1 >= 0:
            J = J_upper - 1
            lines.append(BranchLine(J_upper, J, "R", honl_london("R", J), "e", w))
        J = J_upper + 1
        lines.append(BranchLine(J_upper, J, "P", honl_london("P", J), "e", w))
    if parity in ("f", "both"):
        lines.append(BranchLine(J_upper, J_upper, "Q", honl_london("Q", J_upper), "f", w))
    return sorted(lines, key=lambda ln: ln.J_lower)


def einstein_prefactor() -> float:
    """16 pi^3 nu^3 / (3 eps0 h c^3) expressed in s^-1 / (debye^2 (cm^-1)^3)."""
    C = units.CONSTANTS
    nu_per_cm = C.c * 100.0  # Hz per cm^-1
    return 16.0 * math.pi**3 * nu_per_cm**3 * C.debye**2 / (3.0 * C.eps0 * C.h * C.c**3)


def einstein_A(
    upper: RovibLevel, lower: RovibLevel, line: BranchLine | None, d: DipoleFunction
) -> float:
    """Spontaneous emission rate in s^-1.

    A = 16 pi^3 nu^3 / (3 eps0 h c^3) |M|^2 S / (2J'+1), with nu from the level
    energies and M the transition dipole matrix element. ``line=None`` means
    S/(2J'+1) = 1.
    """
    wavenumber = upper.energy - lower.energy
    if wavenumber <= 0:
        raise ValueError("upper level must lie above the lower level")
    M = dipole_matrix_element(lower, upper, d)
    rot = 1.0 if line is None else line.honl_london / (2 * line.J_upper + 1)
    return einstein_prefactor() * wavenumber**3 * M * M * rot


@dataclass(frozen=True)
class DecayRow:
    v: int
    J: int
    A: float  # s^-1
    rel_pop: float


@dataclass
class DecayTable:
    """Spontaneous decay of one upper level into a lower manifold."""

    upper: tuple[int, int, str]  # (v', J', parity)
    rows: list[DecayRow]
    total_A: float
    fcf_sums: dict[int, float] = field(default_factory=dict)

    @property
    def continuum_leakage(self) -> float:
        if not self.fcf_sums:
            return 0.0
        return max(0.0, 1.0 - min(self.fcf_sums.values()))

    def vibrational_populations(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for r in self.rows:
            out[r.v] = out.get(r.v, 0.0) + r.rel_pop
        return dict(sorted(out.items()))

    def table_layout(self) -> list[tuple[str, float]]:
        """Populations grouped as v''=0..10, sum(11-20), sum(>20)."""
        pops = self.vibrational_populations()
        out = [(str(v), pops.get(v, 0.0)) for v in range(11)]
        out.append(("Σ(11-20)", sum(p for v, p in pops.items() if 11 <= v <= 20)))
        out.append(("Σ(>20)", sum(p for v, p in pops.items() if v > 20)))
        return out


def _manifold_for(lower_manifold, J: int):
    if isinstance(lower_manifold, Mapping):
        return bound_levels(lower_manifold[J])
    if callable(lower_manifold):
        return bound_levels(lower_manifold(J))
    return bound_levels(lower_manifold)


def decay_table(
    upper: RovibLevel,
    lower_manifold,
    d: DipoleFunction,
    parity: str = "both",
) -> DecayTable:
    """Einstein A coefficients and relative populations after decay of ``upper``.

    ``lower_manifold`` is either one list of lower levels (used for every J'',
    the J=0-wavefunction shortcut), a mapping J'' -> list of levels solved at
    that J'', or a callable J'' -> list.
    """
    lines = allowed_branches(upper.J, parity)
    rows: list[tuple[int, int, float]] = []
    fcf_sums: dict[int, float] = {}
    for line in lines:
        levels = _manifold_for(lower_manifold, line.J_lower)
        if not levels:
            raise ValueError("lower manifold is empty")
        fcf_sums[line.J_lower] = sum(franck_condon(lo, upper) for lo in levels)
        for lo in levels:
            if lo.energy >= upper.energy:
                continue
            A = line.parity_weight * einstein_A(upper, lo, line, d)
            rows.append((lo.v, line.J_lower, A))
    rows.sort(key=lambda r: (r[0], r[1]))
    total = math.fsum(r[2] for r in rows)
    if total <= 0:
        raise ValueError("no allowed decay channel carries intensity")
    worst = min(fcf_sums.values())
    if worst < 0.99:
        warnings.warn(
            f"Franck-Condon sum {worst:.4f} < 0.99: lower manifold incomplete or continuum decay",
            stacklevel=2,
        )
    table_rows = [DecayRow(v, J, A, A / total) for v, J, A in rows]
    return DecayTable((upper.v, upper.J, parity), table_rows, total, fcf_sums)


def rotational_manifolds(curve, mu: float, J_values, v_range, **solve_kw) -> dict:
    """Lower-state manifolds re-solved at each J'' (input for ``decay_table``)."""
    return {J: solve_manifold(curve, v_range, J=J, mu=mu, **solve_kw) for J in sorted(set(J_values))}


def decay_J_values(J_upper: int, parity: str) -> list[int]:
    return sorted({ln.J_lower for ln in allowed_branches(J_upper, parity)})

