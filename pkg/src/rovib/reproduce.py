"""Reproduction suite for reference numbers of the LiCs photoassociation experiment.

Each check returns a :class:`Check`. Checks that need experimental curve and
dipole files are skipped when those files are not found.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from rovib import io, units
from rovib.lineshape import (
    ThermalLineModel,
    fit_temperature,
    pair_com_temperature,
    partial_wave_fraction,
    relative_collision_temperature,
    thermal_lineshape,
)
from rovib.potential import HarmonicCurve, MorseCurve, centrifugal_barrier, effective, load_curve
from rovib.radial import bound_levels, solve_level, solve_manifold
from rovib.rates import RateChain, microwave_transfer_frequencies, production_rate
from rovib.spectra import (
    DepletionModel,
    add_noise,
    fit_rotational_constants,
    rempi_line_positions,
    select_parity_model,
    simulate_depletion,
)
from rovib.spectrum import Spectrum
from rovib.transition import (
    DipoleFunction,
    allowed_branches,
    decay_table,
    fcf_matrix,
    honl_london,
    rotational_manifolds,
)

X_FILE = "X1Sigma.pot"
B_FILE = "B1Pi.pot"
DIPOLE_FILE = "dipole_XB.dat"
MASTER_SEED = 20080901


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    detail: str = ""


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def lics_C6() -> float:
    """C6 of Li+Cs in cm^-1 angstrom^6 from the packaged data file."""
    p = io.read_params(io.packaged_data("lics_long_range.txt"))
    c6 = float(p["C6"])
    if p.get("unit", "au") == "au":
        c6 *= units.convert_energy(1.0, "hartree", "cm-1") * units.BOHR_IN_ANGSTROM**6
    return c6


def check_eigensolver() -> Check:
    mu = 6.6641
    K = units.hbar2_over_2mu(mu)
    harm = HarmonicCurve(k=2.0e4, Re=3.0)
    omega = math.sqrt(2 * K * harm.k)
    t0 = time.perf_counter()
    levels = solve_manifold(effective(harm, 0, mu), range(10))
    t_h = time.perf_counter() - t0
    err_h = max(abs(lv.energy - omega * (lv.v + 0.5)) / (omega * (lv.v + 0.5)) for lv in levels)
    morse = MorseCurve(De=5000.0, a=1.0, Re=3.5)
    we, wexe = 2 * morse.a * math.sqrt(K * morse.De), morse.a**2 * K
    t0 = time.perf_counter()
    levels = solve_manifold(effective(morse, 0, mu), range(15))
    t_m = time.perf_counter() - t0

    def e_morse(v):
        return we * (v + 0.5) - wexe * (v + 0.5) ** 2

    err_m = max(abs(lv.energy - e_morse(lv.v)) / e_morse(lv.v) for lv in levels)
    ok = err_h < 1e-8 and err_m < 1e-7 and t_h < 1 and t_m < 1
    return Check("eigensolver oracles", _status(ok),
                 f"harmonic {err_h:.2e} ({t_h:.2f}s), Morse {err_m:.2e} ({t_m:.2f}s)")


def check_rates() -> Check:
    r1 = production_rate(RateChain(5e-3, 20, 0.40, 0.01, 0.20))
    r2 = production_rate(RateChain(0.2, 20, 0.40, 0.01, 0.20))
    return Check("production rates", _status(r1 == 125 and r2 == 5000), f"{r1:g}, {r2:g} /s")


def check_microwave() -> Check:
    f = microwave_transfer_frequencies(5.62, 2, 0)
    ok = abs(f[0] - 22.5) <= 0.1 and abs(f[1] - 11.2) <= 0.1
    return Check("microwave transfer", _status(ok), ", ".join(f"{x:.2f} GHz" for x in f))


def check_kinematics() -> Check:
    m1, m2 = 7.016, 132.905
    t_com = pair_com_temperature(m1, 545, m2, 250)
    t_rel = relative_collision_temperature(m1, 545, m2, 250)
    ok = abs(t_com - 260) <= 10 and abs(t_rel - 530) <= 0.05 * 530
    return Check("kinematic temperatures", _status(ok), f"T_com {t_com:.1f} uK, T_rel {t_rel:.1f} uK")


def check_barrier() -> Check:
    b = centrifugal_barrier(lics_C6(), units.mu_lics(), 1)
    ok = abs(b.E_b_mK - 1.6) <= 0.15 * 1.6
    return Check("p-wave barrier", _status(ok), f"{b.E_b_mK:.3f} mK at {b.R_b:.1f} A")


def check_partial_wave() -> Check:
    x = 1.6e3 / 530.0
    frac = partial_wave_fraction(530.0, 1.6)
    ok = abs(frac - gammaincc(1.5, x)) < 1e-6 and 0.01 < frac < 0.5
    return Check("p-wave fraction", _status(ok), f"{frac:.4f}")


def check_lineshape(n_seeds: int = 50) -> Check:
    truth = ThermalLineModel(0.0, 530.0, 7.0, 1000.0, 10.0)
    nu = np.linspace(-150.0, 120.0, 250)
    clean = thermal_lineshape(truth, nu)
    noise = 0.03 * clean.signal.max()
    seeds = np.random.SeedSequence(MASTER_SEED).spawn(n_seeds)
    temps, converged = [], 0
    t0 = time.perf_counter()
    for s in seeds:
        y = clean.signal + np.random.default_rng(s).normal(0, noise, nu.size)
        try:
            fit = fit_temperature(Spectrum(nu, y), gamma_fixed=7.0)
        except RuntimeError:
            continue
        converged += not fit.flagged
        temps.append(fit.model.T)
    dt = time.perf_counter() - t0
    med = float(np.median(temps)) if temps else math.nan
    ok = abs(med - 530) <= 80 and converged >= 0.9 * n_seeds and dt < 10
    return Check("PA lineshape temperature", _status(ok),
                 f"median {med:.0f} uK, {converged}/{n_seeds} converged, {dt:.1f}s")


DEPLETION_KW = dict(omega0=16895.75, B_upper=3.096, B_lower=5.62, dip_fwhm=2.0)


def check_depletion(n_seeds: int = 50) -> Check:
    truth = DepletionModel(population={2: 1.0}, depth=0.9, baseline=100.0, **DEPLETION_KW)
    nu = np.linspace(16894.4, 16896.5, 500)
    clean = simulate_depletion(truth, nu)
    template = truth.with_(B_upper=3.0, omega0=16895.70)
    B, O = [], []
    for s in np.random.SeedSequence(MASTER_SEED + 1).spawn(n_seeds):
        fit = fit_rotational_constants(add_noise(clean, 5.0, s), template)
        B.append(fit.model.B_upper)
        O.append(fit.model.omega0)
    b, o = float(np.median(B)), float(np.median(O))
    ok = abs(b - 3.096) <= 0.05 and abs(o - 16895.75) <= 0.02
    return Check("depletion constants", _status(ok), f"B' {b:.4f} GHz, omega0 {o:.4f} cm-1")


def check_parity(n_seeds: int = 50) -> Check:
    kw = dict(depth=0.8, baseline=100.0, **DEPLETION_KW)
    templates = [DepletionModel.for_pa_level(1, h, **kw) for h in ("plus", "minus", "both")]
    nu = np.linspace(16894.5, 16896.3, 400)
    clean = simulate_depletion(templates[2], nu)
    wins = 0
    for s in np.random.SeedSequence(MASTER_SEED + 2).spawn(n_seeds):
        ranking = select_parity_model(add_noise(clean, 5.0, s), templates)
        wins += ranking.labels[0] == "both"
    return Check("parity selection", _status(wins >= 48), f"both-parity first in {wins}/{n_seeds}")


def check_branches() -> Check:
    f2 = {ln.J_lower for ln in allowed_branches(2, "f")}
    b1 = {ln.J_lower for ln in allowed_branches(1, "both")}
    sums = [
        honl_london("R", J - 1) + honl_london("Q", J) + honl_london("P", J + 1) for J in range(1, 21)
    ]
    worst = max(abs(s - (2 * J + 1)) for J, s in zip(range(1, 21), sums))
    ok = f2 == {2} and b1 == {0, 1, 2} and worst < 1e-12
    return Check("branch and parity rules", _status(ok), f"(2,f)->{sorted(f2)}, (1,both)->{sorted(b1)}")


def check_franck_condon() -> Check:
    mu = 6.6641
    lower = MorseCurve(De=8000.0, a=1.0, Re=3.6)
    upper = MorseCurve(De=4000.0, a=0.9, Re=3.8, Te=12000.0)
    lo = bound_levels(solve_manifold(effective(lower, 0, mu), range(80)))
    up = [solve_level(effective(upper, 1, mu), v) for v in range(3)]
    same = fcf_matrix(lo[:6], lo[:6])
    ident = float(np.max(np.abs(same - np.eye(6))))
    row_sums = fcf_matrix(up, lo).sum(axis=1)
    tab = decay_table(up[0], lo, DipoleFunction(constant=1.0), parity="both")
    tab2 = decay_table(up[0], lo, DipoleFunction(constant=3.0), parity="both")
    pop_sum = sum(r.rel_pop for r in tab.rows)
    inv = max(abs(a.rel_pop - b.rel_pop) for a, b in zip(tab.rows, tab2.rows))
    ok = ident < 1e-8 and row_sums.min() >= 0.999 and abs(pop_sum - 1) < 1e-9 and inv < 1e-12
    return Check("Franck-Condon properties", _status(ok),
                 f"identity {ident:.1e}, min row sum {row_sums.min():.5f}")


def data_gated(data_dir=None) -> list[Check]:
    paths = {n: io.find_data_file(n, data_dir) for n in (X_FILE, B_FILE, DIPOLE_FILE)}
    names = ("decay populations v'=4 J'=2", "B(v'=12) rotational constant", "REMPI v''=0 -> v'=14 line")
    if paths[X_FILE] is None or paths[B_FILE] is None:
        return [Check(n, "skipped", "curve files not found") for n in names]
    mu = units.mu_lics()
    X = load_curve(paths[X_FILE])
    B = load_curve(paths[B_FILE])
    out = []
    if paths[DIPOLE_FILE] is None:
        out.append(Check(names[0], "skipped", "dipole file not found"))
    else:
        d = DipoleFunction.load(paths[DIPOLE_FILE])
        upper = solve_level(B, 4, J=2, mu=mu)
        lower = rotational_manifolds(X, mu, [2], range(80))
        pops = dict(decay_table(upper, lower, d, parity="f").table_layout())
        p0, p11 = 100 * pops["0"], 100 * pops["Σ(11-20)"]
        ok = abs(p0 - 23) <= 3 and abs(p11 - 35) <= 4
        out.append(Check(names[0], _status(ok), f"v''=0 {p0:.1f}%, sum(11-20) {p11:.1f}%"))
    b12 = solve_level(B, 12, J=0, mu=mu).Bv
    out.append(Check(names[1], _status(abs(b12 - 3.096) <= 0.01 * 3.096), f"{b12:.4f} GHz"))
    x0 = solve_level(X, 0, J=0, mu=mu)
    b14 = solve_level(B, 14, J=0, mu=mu)
    line = rempi_line_positions([x0], [b14]).rows[0].freq
    out.append(Check(names[2], _status(abs(line - 16999.4) <= 2.0), f"{line:.2f} cm-1"))
    return out


CHECKS = (
    check_eigensolver,
    check_rates,
    check_microwave,
    check_kinematics,
    check_barrier,
    check_partial_wave,
    check_lineshape,
    check_depletion,
    check_parity,
    check_branches,
    check_franck_condon,
)


def run_all(data_dir=None) -> list[Check]:
    results = []
    for fn in CHECKS:
        try:
            results.append(fn())
        except Exception as exc:  # a crashing check is a failed check
            results.append(Check(fn.__name__, "fail", f"{type(exc).__name__}: {exc}"))
    try:
        results.extend(data_gated(data_dir))
    except Exception as exc:
        results.append(Check("data-gated checks", "fail", f"{type(exc).__name__}: {exc}"))
    return results


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{r.status.upper():8s} {r.name:<{width}}  {r.detail}" for r in results]
    return "\n".join(lines)
