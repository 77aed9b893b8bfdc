"""Depletion and REMPI spectra: line positions, synthesis and fitting.

Depletion dips sit at omega0 + B' J'(J'+1) - B'' J''(J''+1) for every
populated ground rotational level J'' and every J' allowed by the
1Pi <- 1Sigma+ selection rules. Dips are multiplicative survival factors on
the undepleted ion signal, weighted by Hönl-London factor times population
and scaled so the strongest line reaches the full depletion depth.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares

from rovib import units
from rovib.radial import RovibLevel
from rovib.spectrum import Spectrum
from rovib.transition import allowed_branches, branch_for, franck_condon, honl_london

PROFILES = ("lorentzian", "gaussian")


class UnderdeterminedError(ValueError):
    """Too few resolved dips to determine the requested parameters."""


@dataclass(frozen=True)
class LineRow:
    label: str
    J_lower: int
    J_upper: int
    freq: float  # cm^-1
    weight: float


@dataclass
class LineList:
    rows: list[LineRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def freqs(self) -> np.ndarray:
        return np.array([r.freq for r in self.rows])

    @property
    def weights(self) -> np.ndarray:
        return np.array([r.weight for r in self.rows])

    def to_csv(self, path, header: dict | None = None):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            for key, value in (header or {}).items():
                fh.write(f"# {key}: {value}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["label", "J_lower", "J_upper", "freq_cm-1", "weight"])
            for r in self.rows:
                w.writerow([r.label, r.J_lower, r.J_upper, repr(r.freq), repr(r.weight)])


def _parity_of(J: int, hypothesis: str) -> str:
    """Map a total-parity label (+/-) of a 1Pi level J onto e/f.

    For a singlet, e levels carry parity (-1)^J and f levels -(-1)^J.
    """
    if hypothesis == "both":
        return "both"
    sign = {"plus": 1, "minus": -1}[hypothesis]
    return "e" if sign == (-1) ** J else "f"


def populations_from_pa(J_pa: int, hypothesis: str = "both") -> dict[int, float]:
    """Ground rotational populations after spontaneous decay of a 1Pi level.

    Each parity component decays with Hönl-London branching; ``both`` mixes
    the two components with equal weight.
    """
    parity = _parity_of(J_pa, hypothesis)
    comps = ("e", "f") if parity == "both" else (parity,)
    pops: dict[int, float] = {}
    for p in comps:
        lines = allowed_branches(J_pa, p)
        total = sum(ln.honl_london for ln in lines)
        for ln in lines:
            pops[ln.J_lower] = pops.get(ln.J_lower, 0.0) + ln.honl_london / total / len(comps)
    return dict(sorted(pops.items()))


@dataclass(frozen=True)
class DepletionModel:
    omega0: float  # cm^-1
    B_upper: float  # GHz
    B_lower: float  # GHz
    population: dict
    dip_fwhm: float = 2.0  # GHz
    depth: float = 1.0
    baseline: float = 1.0
    parity_hypothesis: str = "both"
    profile: str = "lorentzian"

    def __post_init__(self):
        if not self.population:
            raise ValueError("population map is empty")
        if any(p < 0 for p in self.population.values()):
            raise ValueError("populations must be non-negative")
        if abs(sum(self.population.values()) - 1.0) > 1e-9:
            raise ValueError("populations must sum to 1")
        if not 0.0 <= self.depth <= 1.0:
            raise ValueError("depth must lie in [0, 1]")
        if self.dip_fwhm <= 0:
            raise ValueError("dip_fwhm must be positive")
        if self.parity_hypothesis not in ("plus", "minus", "both"):
            raise ValueError("parity_hypothesis must be plus, minus or both")
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}")

    @classmethod
    def for_pa_level(cls, J_pa: int, hypothesis: str, **kw) -> "DepletionModel":
        return cls(population=populations_from_pa(J_pa, hypothesis),
                   parity_hypothesis=hypothesis, **kw)

    def with_(self, **kw) -> "DepletionModel":
        return replace(self, **kw)


def depletion_positions(model: DepletionModel) -> LineList:
    """Absorption lines J'' -> J' from every populated ground rotational level."""
    Bu = model.B_upper / units.CM1_IN_GHZ
    Bl = model.B_lower / units.CM1_IN_GHZ
    rows = []
    for Jl, pop in sorted(model.population.items()):
        if pop <= 0:
            continue
        for Ju in (Jl - 1, Jl, Jl + 1):
            if Ju < 1:
                continue
            S = honl_london(branch_for(Ju, Jl), Jl)
            if S == 0:
                continue
            freq = model.omega0 + Bu * Ju * (Ju + 1) - Bl * Jl * (Jl + 1)
            rows.append(LineRow(f"{Jl}-{Ju}", Jl, Ju, freq, S * pop))
    rows.sort(key=lambda r: r.freq)
    return LineList(rows)


def _dip_profile(x, fwhm, profile):
    if profile == "lorentzian":
        return 1.0 / (1.0 + (2.0 * x / fwhm) ** 2)
    return np.exp(-4.0 * math.log(2.0) * (x / fwhm) ** 2)


def _untouched(model: DepletionModel, nu, lines: LineList) -> np.ndarray:
    """Product of the per-line survival factors 1 - w_i L_i(nu)."""
    out = np.ones_like(nu, dtype=float)
    if not len(lines):
        return out
    w = lines.weights / lines.weights.max()
    fwhm = model.dip_fwhm / units.CM1_IN_GHZ
    for row, wi in zip(lines, w):
        out *= 1.0 - wi * _dip_profile(nu - row.freq, fwhm, model.profile)
    return out


def _survival(model: DepletionModel, nu, lines: LineList | None = None) -> np.ndarray:
    """Surviving fraction 1 - depth (1 - prod_i (1 - w_i L_i)).

    Overlapping dips compound multiplicatively, while ``depth`` caps the
    total depletion, so the result stays inside [1 - depth, 1].
    """
    lines = lines if lines is not None else depletion_positions(model)
    return 1.0 - model.depth * (1.0 - _untouched(model, nu, lines))


def simulate_depletion(model: DepletionModel, nu_grid) -> Spectrum:
    """Depletion spectrum on ``nu_grid`` (cm^-1)."""
    nu = np.asarray(nu_grid, dtype=float)
    lines = depletion_positions(model)
    pad = 3.0 * model.dip_fwhm / units.CM1_IN_GHZ
    if len(lines) and (nu.min() > lines.freqs.min() - pad or nu.max() < lines.freqs.max() + pad):
        raise ValueError(
            f"grid must cover [{lines.freqs.min() - pad:.6f}, {lines.freqs.max() + pad:.6f}] cm^-1"
        )
    return Spectrum(nu, model.baseline * _survival(model, nu, lines), unit="cm-1")


def add_noise(spectrum: Spectrum, sigma: float, seed: int | np.random.SeedSequence) -> Spectrum:
    """Copy of ``spectrum`` with Gaussian noise of standard deviation ``sigma``."""
    rng = np.random.default_rng(seed)
    noisy = spectrum.signal + rng.normal(0.0, sigma, spectrum.signal.size)
    seed_repr = seed.entropy if isinstance(seed, np.random.SeedSequence) else seed
    meta = {**spectrum.meta, "noise_sigma": sigma, "seed": seed_repr}
    return Spectrum(spectrum.freq.copy(), noisy, None, spectrum.unit, meta)


@dataclass
class DepletionFit:
    model: DepletionModel
    rss: float
    residuals: np.ndarray
    flagged: bool = False
    note: str = ""
    stderr: dict = field(default_factory=dict)

    def __iter__(self):
        # allows ``model, rss = fit_depletion(...)``
        return iter((self.model, self.rss))


def _best_baseline(P, y, w):
    den = float(np.sum(w * P * P))
    return float(np.sum(w * P * y)) / den if den > 0 else 0.0


def _profile_depth(template, nu, y, w, lines, depths):
    """Grid over depth with the baseline solved in closed form."""
    if not len(lines):
        b = _best_baseline(np.ones_like(nu), y, w)
        return float(np.sum(w * (y - b) ** 2)), 0.0, b
    removed = 1.0 - _untouched(template, nu, lines)
    depths = np.asarray(depths, dtype=float)
    P = 1.0 - depths[:, None] * removed[None, :]
    den = np.sum(w * P * P, axis=1)
    b = np.where(den > 0, np.sum(w * P * y, axis=1) / np.where(den > 0, den, 1.0), 0.0)
    rss = np.sum(w * (y - b[:, None] * P) ** 2, axis=1)
    k = int(np.argmin(rss))
    return float(rss[k]), float(depths[k]), float(b[k])


def fit_depletion(
    spectrum: Spectrum,
    model_template: DepletionModel,
    free=("baseline", "depth"),
) -> DepletionFit:
    """Fit the undepleted signal level and the depletion depth.

    Line positions, widths and populations are taken from the template.
    A coarse depth grid (baseline solved linearly) seeds a Levenberg-Marquardt
    refinement; depth is confined to [0, 1].
    """
    if set(free) != {"baseline", "depth"}:
        raise ValueError("fit_depletion frees exactly baseline and depth")
    nu, y, w = spectrum.freq, spectrum.signal, spectrum.weights
    sw = np.sqrt(w)
    lines = depletion_positions(model_template)
    _, d0, b0 = _profile_depth(model_template, nu, y, w, lines, np.linspace(0, 1, 51))

    def resid(p):
        m = replace(model_template, depth=float(np.clip(p[1], 0.0, 1.0)))
        return sw * (p[0] * _survival(m, nu, lines) - y)

    res = least_squares(resid, [b0, d0], method="lm", xtol=1e-12, ftol=1e-12)
    b, d = float(res.x[0]), float(np.clip(res.x[1], 0.0, 1.0))
    P = _survival(replace(model_template, depth=d), nu, lines)
    if res.x[1] != d:
        b = _best_baseline(P, y, w)
    model = replace(model_template, depth=d, baseline=b)
    r = y - b * P
    rss = float(np.sum(w * r * r))

    J = np.column_stack([P, -b * _dsurvival_ddepth(model, nu, lines)]) * sw[:, None]
    stderr = {}
    try:
        cov = np.linalg.inv(J.T @ J)
        if spectrum.sigma is None and len(y) > 2:
            cov *= rss / (len(y) - 2)
        stderr = {"baseline": math.sqrt(max(cov[0, 0], 0)), "depth": math.sqrt(max(cov[1, 1], 0))}
    except np.linalg.LinAlgError:
        pass
    sd = stderr.get("depth", math.inf)
    flagged = d < max(0.01, 3.0 * sd)
    note = "no significant depletion" if flagged else ""
    return DepletionFit(model, rss, r, flagged, note, stderr)


def _dsurvival_ddepth(model, nu, lines, eps=1e-7):
    d = model.depth
    lo, hi = max(d - eps, 0.0), min(d + eps, 1.0)
    a = _survival(replace(model, depth=hi), nu, lines)
    c = _survival(replace(model, depth=lo), nu, lines)
    return -(a - c) / (hi - lo)


@dataclass
class ParityRanking:
    """Templates ordered by fit quality (best first)."""

    order: list[int]  # template indices
    labels: list[str]
    rss: list[float]
    fits: list[DepletionFit]
    tie: bool

    @property
    def winner(self) -> int:
        return self.order[0]

    @property
    def ratio(self) -> float:
        """rss of the runner-up over rss of the best fit."""
        if len(self.rss) < 2:
            return math.inf
        return self.rss[1] / self.rss[0] if self.rss[0] > 0 else math.inf


def select_parity_model(spectrum: Spectrum, templates, tie_tol: float = 1e-6) -> ParityRanking:
    """Fit every template and rank by residual sum of squares."""
    templates = list(templates)
    if not templates:
        raise ValueError("need at least one template")
    fits = [fit_depletion(spectrum, t) for t in templates]
    order = sorted(range(len(fits)), key=lambda i: fits[i].rss)
    rss = [fits[i].rss for i in order]
    tie = len(rss) > 1 and (rss[1] - rss[0]) <= tie_tol * max(rss[0], 1e-300)
    labels = [templates[i].parity_hypothesis for i in order]
    return ParityRanking(order, labels, rss, [fits[i] for i in order], tie)


def resolved_dips(model: DepletionModel, nu_lo: float, nu_hi: float) -> int:
    """Number of lines inside [nu_lo, nu_hi] separated by at least one FWHM."""
    lines = depletion_positions(model)
    f = sorted(r.freq for r in lines if nu_lo <= r.freq <= nu_hi and r.weight > 0)
    fwhm = model.dip_fwhm / units.CM1_IN_GHZ
    count, last = 0, -math.inf
    for x in f:
        if x - last >= fwhm:
            count += 1
            last = x
    return count


def fit_rotational_constants(
    spectrum: Spectrum,
    model_template: DepletionModel,
    free=("omega0", "B_upper"),
) -> DepletionFit:
    """Fit omega0 and B' (plus baseline and depth) with B'' held fixed.

    A scan over omega0 locates the dip pattern; Levenberg-Marquardt then
    refines all four parameters.
    """
    if set(free) != {"omega0", "B_upper"}:
        raise ValueError("fit_rotational_constants frees exactly omega0 and B_upper")
    nu, y, w = spectrum.freq, spectrum.signal, spectrum.weights
    sw = np.sqrt(w)
    t_lines = depletion_positions(model_template)
    if len(t_lines) == 0:
        raise UnderdeterminedError("template predicts no lines")
    rel = t_lines.freqs - model_template.omega0
    fwhm = model_template.dip_fwhm / units.CM1_IN_GHZ

    # omega0 values that keep at least one line inside the window
    o_lo, o_hi = nu.min() - rel.max(), nu.max() - rel.min()
    offsets = np.arange(o_lo, o_hi + fwhm / 6, fwhm / 6)
    best = (math.inf, model_template.omega0, 0.0, 0.0)
    for o in offsets:
        m = replace(model_template, omega0=float(o))
        rss, d, b = _profile_depth(m, nu, y, w, depletion_positions(m), np.linspace(0.1, 1, 10))
        if rss < best[0]:
            best = (rss, float(o), d, b)
    _, o0, d0, b0 = best
    start = replace(model_template, omega0=o0)
    if resolved_dips(start, nu.min(), nu.max()) < 3:
        raise UnderdeterminedError("fewer than 3 resolved dips inside the spectrum")

    def build(p):
        return replace(model_template, omega0=float(p[0]), B_upper=float(p[1]),
                       depth=float(np.clip(p[3], 0.0, 1.0)), baseline=float(p[2]))

    def resid(p):
        m = build(p)
        return sw * (m.baseline * _survival(m, nu) - y)

    res = least_squares(resid, [o0, model_template.B_upper, b0, d0], method="lm",
                        xtol=1e-14, ftol=1e-14, gtol=1e-14, x_scale=[fwhm, 0.1, 1.0, 0.1])
    model = build(res.x)
    r = y - model.baseline * _survival(model, nu)
    rss = float(np.sum(w * r * r))
    stderr = {}
    try:
        cov = np.linalg.inv(res.jac.T @ res.jac)
        if spectrum.sigma is None and len(y) > 4:
            cov *= rss / (len(y) - 4)
        for k, name in enumerate(("omega0", "B_upper", "baseline", "depth")):
            stderr[name] = math.sqrt(max(cov[k, k], 0.0))
    except np.linalg.LinAlgError:
        pass
    return DepletionFit(model, rss, r, False, "", stderr)


def rempi_line_positions(x_levels, b_levels) -> LineList:
    """All pairwise X(v'') -> B(v') transition energies with FCF weights."""
    rows = []
    for xl in x_levels:
        if not isinstance(xl, RovibLevel):
            continue
        for bl in b_levels:
            if not isinstance(bl, RovibLevel):
                continue
            rows.append(LineRow(f"{xl.v}->{bl.v}", xl.J, bl.J, bl.energy - xl.energy,
                                franck_condon(xl, bl)))
    rows.sort(key=lambda r: r.freq)
    return LineList(rows)
