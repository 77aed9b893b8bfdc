"""Bound rovibrational levels of a diatomic potential.

Levels are found by Numerov shooting on a uniform grid: a node-count scan
brackets level v, bisection on the node count isolates it, and Cooley's
matching correction converges the energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from rovib import units
from rovib._numerov import count_nodes, shoot
from rovib.potential import EffectivePotential, PotentialCurve

N_SCAN = 50
MAX_ITER = 200
HALO_WIDTH = 1e-6  # cm^-1 below the asymptote
TAIL_DECAY = 30.0  # WKB attenuation (nepers) kept beyond each turning point
DEFAULT_PPW = 300.0


class LevelNotFoundError(LookupError):
    """Requested vibrational level is not bound."""

    def __init__(self, v: int, highest_bound: int):
        self.v = v
        self.highest_bound = highest_bound
        super().__init__(f"level v={v} is not bound; highest bound level is v={highest_bound}")


class ConvergenceError(RuntimeError):
    def __init__(self, v: int, bracket: tuple[float, float]):
        self.v = v
        self.bracket = bracket
        super().__init__(f"level v={v} did not converge; last bracket {bracket}")


@dataclass(frozen=True)
class SolveGrid:
    """Uniform radial grid in angstrom."""

    R_min: float
    R_max: float
    n_points: int
    points_per_wavelength: float = DEFAULT_PPW

    def __post_init__(self):
        if not 0 < self.R_min < self.R_max:
            raise ValueError("need 0 < R_min < R_max")
        if self.n_points < 500:
            raise ValueError("a solve grid needs at least 500 points")
        if self.points_per_wavelength < 15:
            raise ValueError("at least 15 points per local de Broglie wavelength are required")

    @property
    def R(self) -> np.ndarray:
        return np.linspace(self.R_min, self.R_max, self.n_points)

    @property
    def h(self) -> float:
        return (self.R_max - self.R_min) / (self.n_points - 1)

    def refined(self, factor: int = 2) -> "SolveGrid":
        return SolveGrid(
            self.R_min,
            self.R_max,
            (self.n_points - 1) * factor + 1,
            self.points_per_wavelength * factor,
        )

    @classmethod
    def for_energy(
        cls,
        pot: EffectivePotential,
        energy: float,
        points_per_wavelength: float = DEFAULT_PPW,
        min_points: int = 500,
    ) -> "SolveGrid":
        """Grid covering all levels up to ``energy``.

        The grid extends past both classical turning points until the WKB
        attenuation reaches ``TAIL_DECAY`` nepers (|psi| well below 1e-10 of
        its peak), and the step resolves the shortest local wavelength with
        ``points_per_wavelength`` points.
        """
        K = pot.hbar2_2mu
        Re, Vmin = pot.minimum()
        if energy <= Vmin:
            raise ValueError("grid energy lies below the well minimum")
        r_near, r_far = pot.r_near, pot.r_far
        R_in, R_out = _turning_points(pot, energy, Re, r_near, r_far)

        def kappa(R):
            return np.sqrt(np.clip((pot.evaluate(R) - energy) / K, 0.0, None))

        R_min = _decay_edge(kappa, R_in, r_near)
        R_max = _decay_edge(kappa, R_out, r_far)
        lam = 2.0 * math.pi / math.sqrt((energy - Vmin) / K)
        h = lam / points_per_wavelength
        n = max(min_points, int(math.ceil((R_max - R_min) / h)) + 1)
        return cls(R_min, R_max, n, points_per_wavelength)


def _turning_points(pot, energy, Re, r_near, r_far):
    def diff(R):
        return float(pot.evaluate(R)) - energy

    R_in = brentq(diff, r_near, Re, xtol=1e-12) if diff(r_near) > 0 else r_near
    R_out = brentq(diff, Re, r_far, xtol=1e-12) if diff(r_far) > 0 else r_far
    return R_in, R_out


def _decay_edge(kappa, R_turn, R_limit, n=4000):
    if R_turn == R_limit:
        return R_limit
    R = np.linspace(R_turn, R_limit, n)
    k = kappa(R)
    acc = np.concatenate(([0.0], np.cumsum(0.5 * (k[1:] + k[:-1]) * np.abs(np.diff(R)))))
    idx = np.searchsorted(acc, TAIL_DECAY)
    return float(R[min(idx, n - 1)])


@dataclass(frozen=True)
class RovibLevel:
    """One bound level (v, J) with its normalized radial wavefunction."""

    v: int
    J: int
    energy: float  # cm^-1, same zero as the curve
    R: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    Bv: float  # GHz
    curve_label: str = ""
    mu: float = 0.0
    halo: bool = False

    @property
    def nodes(self) -> int:
        return count_sign_changes(self.psi)


@dataclass(frozen=True)
class Missing:
    """Placeholder for an unbound level in a manifold."""

    v: int
    reason: str


def count_sign_changes(psi: np.ndarray, rel_floor: float = 1e-7) -> int:
    big = psi[np.abs(psi) > rel_floor * np.max(np.abs(psi))]
    return int(np.count_nonzero(np.diff(np.sign(big)) != 0))


def _as_effective(pot, J, mu):
    if isinstance(pot, EffectivePotential):
        if J is None or J == pot.l:
            return pot
        return EffectivePotential(pot.base, J, pot.mu)
    if isinstance(pot, PotentialCurve):
        if mu is None:
            raise ValueError("a reduced mass is required to solve a bare curve")
        return EffectivePotential(pot, J or 0, mu)
    raise TypeError(f"cannot solve on {type(pot).__name__}")


class _Discretized:
    """A potential sampled on a grid, ready for repeated shooting."""

    def __init__(self, pot: EffectivePotential, grid: SolveGrid):
        self.pot = pot
        self.grid = grid
        self.R = grid.R
        self.V = np.asarray(pot.evaluate(self.R), dtype=float)
        self.K = pot.hbar2_2mu
        self.h = grid.h

    def fg(self, E):
        g = (self.V - E) / self.K
        return 1.0 - self.h * self.h * g / 12.0, g

    def limits(self, f):
        # Skip points where the Numerov weight degenerates (deep in the walls).
        ok = np.nonzero(f > 0.5)[0]
        return int(ok[0]), int(ok[-1])

    def nodes(self, E) -> int:
        f, _ = self.fg(E)
        i0, i1 = self.limits(f)
        return count_nodes(f, i0, i1)

    def shoot(self, E):
        f, g = self.fg(E)
        i0, i1 = self.limits(f)
        allowed = np.nonzero(g[i0:i1 + 1] < 0)[0]
        m = i0 + int(allowed[-1]) if allowed.size else (i0 + i1) // 2
        m = min(max(m, i0 + 2), i1 - 2)
        psi, resid = shoot(f, g, self.h, i0, i1, m)
        norm = float(np.sum(psi * psi))
        dE = -self.K * psi[m] * resid / norm
        return psi, dE


def _ceiling(pot: EffectivePotential, v: int) -> float:
    """An energy expected to lie above level v (capped at the asymptote)."""
    Re, Vmin = pot.minimum()
    d = 1e-4 * max(Re, 1e-3)
    curv = (float(pot.evaluate(Re + d)) - 2 * Vmin + float(pot.evaluate(Re - d))) / d**2
    omega = math.sqrt(2.0 * pot.hbar2_2mu * max(curv, 1e-300))
    return min(pot.asymptote, Vmin + 1.5 * (v + 2) * omega)


class _Scan:
    """Node counts at trial energies on a coarse grid spanning the well."""

    def __init__(self, pot: EffectivePotential, v_max: int, ppw: float):
        self.pot = pot
        _, self.Vmin = pot.minimum()
        top = _ceiling(pot, v_max)
        while True:
            disc = _Discretized(pot, SolveGrid.for_energy(pot, top, points_per_wavelength=ppw))
            n_top = disc.nodes(top)
            if n_top > v_max or top >= pot.asymptote:
                break
            top = min(pot.asymptote, self.Vmin + 2.0 * (top - self.Vmin))
        self.top = top
        self.n_top = n_top
        self.E = np.linspace(self.Vmin, top, N_SCAN + 1)[1:]
        self.counts = np.array([disc.nodes(e) for e in self.E])
        self.counts[-1] = n_top

    @property
    def n_bound(self) -> int:
        return int(self.n_top)

    def bracket(self, v: int) -> tuple[float, float]:
        if v >= self.n_top:
            raise LevelNotFoundError(v, self.n_top - 1)
        j = int(np.argmax(self.counts > v))
        lo = self.Vmin if j == 0 else float(self.E[j - 1])
        return lo, float(self.E[j])


def _refine(disc: _Discretized, v: int, lo: float, hi: float, tol: float):
    width = hi - lo
    # Re-establish the bracket on this grid: n(lo) <= v < n(hi).
    for _ in range(60):
        if disc.nodes(lo) <= v:
            break
        lo -= width
    for _ in range(60):
        if disc.nodes(hi) > v or hi >= disc.pot.asymptote:
            break
        hi = min(hi + width, disc.pot.asymptote)
    # isolate the level
    for _ in range(MAX_ITER):
        n_lo, n_hi = disc.nodes(lo), disc.nodes(hi)
        if n_lo == v and n_hi == v + 1:
            break
        mid = 0.5 * (lo + hi)
        if disc.nodes(mid) <= v:
            lo = mid
        else:
            hi = mid
    E = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        if disc.nodes(E) <= v:
            lo = E
        else:
            hi = E
        psi, dE = disc.shoot(E)
        E_new = E + dE
        if abs(dE) < tol:
            psi, _ = disc.shoot(E_new)
            return E_new, psi
        if not lo < E_new < hi:
            E_new = 0.5 * (lo + hi)
        if hi - lo < 1e-3 * tol:
            psi, _ = disc.shoot(E_new)
            return E_new, psi
        E = E_new
    raise ConvergenceError(v, (lo, hi))


def _finish(pot: EffectivePotential, v: int, disc: _Discretized, E: float, psi: np.ndarray):
    R = disc.R
    norm = np.trapezoid(psi * psi, R)
    psi = psi / math.sqrt(norm)
    # sign convention: outermost lobe positive
    big = np.nonzero(np.abs(psi) > 1e-3 * np.max(np.abs(psi)))[0]
    if psi[big[-1]] < 0:
        psi = -psi
    nodes = count_sign_changes(psi)
    if nodes != v:
        raise ConvergenceError(v, (E, E))
    Bv_cm = pot.hbar2_2mu * np.trapezoid(psi * psi / R**2, R)
    return RovibLevel(
        v=v,
        J=pot.l,
        energy=float(E),
        R=R,
        psi=psi,
        Bv=float(units.convert_energy(Bv_cm, "cm-1", "GHz")),
        curve_label=pot.label,
        mu=pot.mu,
        halo=bool(pot.asymptote - E < HALO_WIDTH),
    )


def _tolerance(pot: EffectivePotential, scan_top: float, Vmin: float) -> float:
    depth = pot.asymptote - Vmin if math.isfinite(pot.asymptote) else scan_top - Vmin
    return 1e-10 * depth


def solve_level(
    pot,
    v: int,
    J: int | None = None,
    grid: SolveGrid | None = None,
    mu: float | None = None,
    points_per_wavelength: float = DEFAULT_PPW,
    _scan: _Scan | None = None,
) -> RovibLevel:
    """Solve for the bound level with ``v`` nodes.

    ``pot`` is an :class:`EffectivePotential` (or a bare curve plus ``mu``);
    ``J`` overrides its rotational quantum number. Without an explicit
    ``grid`` one is sized automatically for the level.

    Raises :class:`LevelNotFoundError` if the level is not bound and
    :class:`ConvergenceError` if the eigenvalue search fails.
    """
    if v < 0:
        raise ValueError("v must be >= 0")
    pot = _as_effective(pot, J, mu)
    scan = _scan or _Scan(pot, v, ppw=max(15.0, points_per_wavelength / 8))
    lo, hi = scan.bracket(v)
    if grid is None:
        top = hi if hi < pot.asymptote else pot.asymptote
        grid = SolveGrid.for_energy(pot, top, points_per_wavelength=points_per_wavelength)
    disc = _Discretized(pot, grid)
    E, psi = _refine(disc, v, lo, hi, _tolerance(pot, scan.top, scan.Vmin))
    if E >= pot.asymptote:
        raise LevelNotFoundError(v, v - 1)
    return _finish(pot, v, disc, E, psi)


def solve_manifold(
    pot,
    v_range,
    J: int | None = None,
    grid: SolveGrid | None = None,
    mu: float | None = None,
    points_per_wavelength: float = DEFAULT_PPW,
) -> list:
    """Solve every v in ``v_range``.

    Unbound or failed levels appear as :class:`Missing` entries so the batch
    always completes. Bound levels have strictly increasing energies.
    """
    v_list = list(v_range)
    if not v_list:
        return []
    pot = _as_effective(pot, J, mu)
    scan = _Scan(pot, max(v_list), ppw=max(15.0, points_per_wavelength / 8))
    out: list = []
    for v in v_list:
        try:
            out.append(
                solve_level(pot, v, grid=grid, points_per_wavelength=points_per_wavelength, _scan=scan)
            )
        except (LevelNotFoundError, ConvergenceError) as exc:
            out.append(Missing(v, str(exc)))
    return out


def bound_levels(manifold) -> list[RovibLevel]:
    return [lev for lev in manifold if isinstance(lev, RovibLevel)]


def expectation(level: RovibLevel, f) -> float:
    """<psi| f(R) |psi> by trapezoid quadrature on the level's grid."""
    vals = f(level.R) if callable(f) else np.broadcast_to(f, level.R.shape)
    return float(np.trapezoid(level.psi * vals * level.psi, level.R))


def rotational_constant(level: RovibLevel, mu: float | None = None) -> float:
    """B_v = (hbar^2 / 2 mu) <1/R^2> in GHz."""
    mu = mu if mu is not None else level.mu
    b_cm = units.hbar2_over_2mu(mu) * expectation(level, lambda R: 1.0 / R**2)
    return float(units.convert_energy(b_cm, "cm-1", "GHz"))
