"""Command-line front end: ``rovib <command> [options]``.

Exit codes: 0 success, 1 invalid input, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import shlex
import sys
from pathlib import Path

import numpy as np

from rovib import __version__, io, units
from rovib.lineshape import (
    FitError,
    ThermalLineModel,
    fit_temperature,
    pair_com_temperature,
    partial_wave_fraction,
    relative_collision_temperature,
    thermal_lineshape,
)
from rovib.potential import (
    CurveFormatError,
    HarmonicCurve,
    MorseCurve,
    centrifugal_barrier,
    effective,
    load_curve,
)
from rovib.radial import ConvergenceError, LevelNotFoundError, Missing, bound_levels, solve_level, solve_manifold
from rovib.rates import (
    AccumulationModel,
    RateChain,
    accumulate,
    microwave_transfer_frequencies,
    production_rate,
    scale_rate,
)
from rovib.reproduce import format_table, run_all
from rovib.spectra import (
    DepletionModel,
    add_noise,
    depletion_positions,
    fit_depletion,
    fit_rotational_constants,
    rempi_line_positions,
    select_parity_model,
    simulate_depletion,
)
from rovib.spectrum import Spectrum
from rovib.transition import DipoleFunction, decay_J_values, decay_table, fcf_matrix, rotational_manifolds

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# argument helpers


def parse_range(text: str) -> range:
    """``"3"`` -> range(3, 4); ``"0..5"`` -> range(0, 6) (inclusive)."""
    if ".." in text:
        a, b = text.split("..", 1)
        return range(int(a), int(b) + 1)
    return range(int(text), int(text) + 1)


def parse_mu(args) -> float:
    if args.mu is not None:
        return args.mu
    names = args.mu_from.split(",")
    if len(names) != 2:
        raise ValueError("--mu-from expects two isotopes, e.g. Li7,Cs133")
    return units.reduced_mass(*(units.isotope_mass(n.strip()) for n in names))


def _resolve(path: str, data_dir) -> Path:
    found = io.find_data_file(path, data_dir)
    if found is None:
        raise FileNotFoundError(f"file not found: {path}")
    return found


def parse_curve(text: str, data_dir=None):
    """A curve file path, ``morse:De,a,Re[,Te]`` or ``harmonic:k,Re[,Te]``."""
    kind, sep, rest = text.partition(":")
    if sep and kind in ("morse", "harmonic"):
        vals = [float(x) for x in rest.split(",")]
        return MorseCurve(*vals) if kind == "morse" else HarmonicCurve(*vals)
    return load_curve(_resolve(text, data_dir))


def parse_level_arg(text: str) -> tuple[str, dict]:
    """``B.pot:v=4,J=2,parity=f`` -> ("B.pot", {...})."""
    path, _, rest = text.rpartition(":") if "=" in text else (text, "", "")
    opts = {}
    for item in filter(None, rest.split(",")):
        key, _, value = item.partition("=")
        opts[key.strip()] = value.strip()
    return path, opts


def parse_population(text: str) -> dict[int, float]:
    pops = {}
    for item in text.split(","):
        J, _, p = item.partition(":")
        pops[int(J)] = float(p) if p else 1.0
    total = sum(pops.values())
    return {J: p / total for J, p in pops.items()}


def _r(x) -> str:
    return repr(float(x))


def header(args, **extra) -> dict:
    h = {"tool": f"rovib {__version__}", "command": args._argv, "seed": args.seed}
    if args.timestamps:
        h["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    h.update(extra)
    return h


def _out(args, default: str) -> Path:
    return Path(args.output or default)


def _add_mu(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--mu", type=float, help="reduced mass in amu")
    g.add_argument("--mu-from", default="Li7,Cs133", help="two isotopes, e.g. Li7,Cs133")


def _add_depletion_model(p):
    p.add_argument("--omega0", type=float, default=16895.75, help="term energy, cm-1")
    p.add_argument("--B-upper", type=float, default=3.096, help="GHz")
    p.add_argument("--B-lower", type=float, default=5.62, help="GHz")
    p.add_argument("--pop", help="ground populations, e.g. '0:1,1:1.5,2:0.5' (normalized)")
    p.add_argument("--pa-J", type=int, default=2, help="PA level J' feeding the ground state")
    p.add_argument("--parity", default="both", choices=("plus", "minus", "both"))
    p.add_argument("--fwhm", type=float, default=2.0, help="dip FWHM, GHz")
    p.add_argument("--depth", type=float, default=1.0)
    p.add_argument("--baseline", type=float, default=1.0)
    p.add_argument("--profile", default="lorentzian", choices=("lorentzian", "gaussian"))


def _depletion_model(args, parity=None) -> DepletionModel:
    kw = dict(omega0=args.omega0, B_upper=args.B_upper, B_lower=args.B_lower,
              dip_fwhm=args.fwhm, depth=args.depth, baseline=args.baseline, profile=args.profile)
    parity = parity or args.parity
    if args.pop:
        return DepletionModel(population=parse_population(args.pop), parity_hypothesis=parity, **kw)
    return DepletionModel.for_pa_level(args.pa_J, parity, **kw)


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args):
    mu = parse_mu(args)
    curve = parse_curve(args.potential, args.data_dir)
    levels = solve_manifold(effective(curve, args.J, mu), parse_range(args.v),
                            points_per_wavelength=args.ppw)
    rows = [(lv.v, lv.J, lv.energy, lv.Bv, int(lv.halo)) for lv in bound_levels(levels)]
    missing = {f"missing_v{m.v}": m.reason for m in levels if isinstance(m, Missing)}
    if not rows and not any("did not converge" in r for r in missing.values()):
        print(f"error: no bound level in v={args.v}", file=sys.stderr)
        return EXIT_INPUT
    out = _out(args, "levels.csv")
    io.write_rows(out, ["v", "J", "energy_cm-1", "Bv_GHz", "halo"], rows,
                  header(args, mu_amu=_r(mu), curve=curve.label, **missing))
    print(f"{len(rows)} levels written to {out}")
    if any("did not converge" in r for r in missing.values()):
        print("error: some levels did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_fcf(args):
    mu = parse_mu(args)
    upper = parse_curve(args.upper, args.data_dir)
    lower = parse_curve(args.lower, args.data_dir)
    up = bound_levels(solve_manifold(effective(upper, args.J_upper, mu), parse_range(args.v_upper)))
    lo = bound_levels(solve_manifold(effective(lower, args.J_lower, mu), parse_range(args.v_lower)))
    M = fcf_matrix(up, lo)
    cols = ["v_upper"] + [f"v''={lv.v}" for lv in lo]
    rows = [[u.v] + [float(x) for x in M[i]] for i, u in enumerate(up)]
    out = _out(args, "fcf.csv")
    io.write_rows(out, cols, rows, header(args, quantity="Franck-Condon factor (dimensionless)"))
    print(f"{M.shape[0]}x{M.shape[1]} FCF matrix written to {out}")
    return EXIT_OK


def cmd_decay(args):
    mu = parse_mu(args)
    path, opts = parse_level_arg(args.upper)
    v, J = int(opts.get("v", 0)), int(opts.get("J", 1))
    parity = opts.get("parity", "both")
    upper_curve = parse_curve(path, args.data_dir)
    lower_curve = parse_curve(args.lower, args.data_dir)
    if args.dipole:
        d = DipoleFunction.load(_resolve(args.dipole, args.data_dir))
    else:
        d = DipoleFunction(constant=args.dipole_constant)
    upper = solve_level(upper_curve, v, J=J, mu=mu)
    v_range = parse_range(args.v_lower)
    if args.j0_wavefunctions:
        lower = solve_manifold(lower_curve, v_range, J=0, mu=mu)
    else:
        lower = rotational_manifolds(lower_curve, mu, decay_J_values(J, parity), v_range)
    table = decay_table(upper, lower, d, parity=parity)
    out = _out(args, "decay.csv")
    if args.layout:
        io.write_rows(out, ["v''", "rel_pop_percent"],
                      [(label, 100.0 * p) for label, p in table.table_layout()],
                      header(args, upper_level=f"v'={v}, J'={J}, parity={parity}"))
    else:
        io.write_decay_table(out, table, header(args))
    for label, p in table.table_layout():
        print(f"v''={label:>9s}  {100 * p:6.2f} %")
    print(f"total A = {table.total_A:.6g} /s, continuum leakage = {table.continuum_leakage:.2e}")
    return EXIT_OK


def cmd_lineshape(args):
    if args.fit:
        data = Spectrum.from_csv(_resolve(args.fit, args.data_dir))
        fit = fit_temperature(data, gamma_fixed=args.gamma)
        m = fit.model
        report = {
            "nu0_MHz": _r(m.nu0), "nu0_err_MHz": _r(fit.stderr("nu0")),
            "T_uK": _r(m.T), "T_err_uK": _r(fit.stderr("T")),
            "gamma_MHz": _r(m.gamma), "amplitude": _r(m.amplitude),
            "baseline": _r(m.baseline), "rss": _r(fit.rss),
            "flagged": str(fit.flagged), "note": fit.note,
        }
        out = _out(args, "lineshape_fit.txt")
        io.write_report(out, report)
        for k, val in report.items():
            print(f"{k}: {val}")
        return EXIT_OK
    model = ThermalLineModel(args.nu0, args.T, args.gamma, args.amplitude, args.baseline)
    half = args.span or 12.0 * max(args.gamma, units.convert_energy(args.T, "uK", "MHz"))
    nu = np.linspace(args.nu0 - half, args.nu0 + half, args.points)
    data = thermal_lineshape(model, nu)
    if args.noise:
        data = add_noise(data, args.noise, args.seed)
    out = _out(args, "lineshape.csv")
    data.to_csv(out, header(args, T_uK=args.T, gamma_MHz=args.gamma, nu0_MHz=args.nu0))
    if args.gnuplot_script:
        io.gnuplot_script(out, "nu_MHz")
    print(f"{len(data)} samples written to {out}")
    return EXIT_OK


def cmd_depletion_sim(args):
    model = _depletion_model(args)
    lines = depletion_positions(model)
    pad = 4.0 * args.fwhm / units.CM1_IN_GHZ
    lo = args.nu_min if args.nu_min is not None else lines.freqs.min() - pad
    hi = args.nu_max if args.nu_max is not None else lines.freqs.max() + pad
    data = simulate_depletion(model, np.linspace(lo, hi, args.points))
    if args.noise:
        data = add_noise(data, args.noise, args.seed)
    out = _out(args, "depletion.csv")
    data.to_csv(out, header(args, population=model.population))
    if args.lines:
        lines.to_csv(args.lines, header(args))
    if args.gnuplot_script:
        io.gnuplot_script(out, "nu_cm-1")
    print(f"{len(data)} samples, {len(lines)} lines; written to {out}")
    return EXIT_OK


def cmd_depletion_fit(args):
    data = Spectrum.from_csv(_resolve(args.spectrum, args.data_dir))
    free = tuple(x.strip() for x in args.free.split(","))
    report: dict = {}
    if args.templates:
        templates = [_depletion_model(args, parity=h.strip()) for h in args.templates.split(",")]
        ranking = select_parity_model(data, templates)
        for rank, (label, rss) in enumerate(zip(ranking.labels, ranking.rss), start=1):
            report[f"rank{rank}"] = f"{label} rss={_r(rss)}"
        report["rss_ratio"] = _r(ranking.ratio)
        report["tie"] = str(ranking.tie)
        fit = ranking.fits[0]
    elif set(free) == {"omega0", "B_upper"}:
        fit = fit_rotational_constants(data, _depletion_model(args))
    else:
        fit = fit_depletion(data, _depletion_model(args), free=free)
    m = fit.model
    report.update({
        "omega0_cm-1": _r(m.omega0), "B_upper_GHz": _r(m.B_upper), "B_lower_GHz": _r(m.B_lower),
        "baseline": _r(m.baseline), "depth": _r(m.depth), "rss": _r(fit.rss),
        "flagged": str(fit.flagged),
    })
    for k, val in fit.stderr.items():
        report[f"{k}_err"] = _r(val)
    out = _out(args, "depletion_fit.txt")
    io.write_report(out, report)
    io.write_rows(Path(str(out) + ".residuals.csv"), ["nu_cm-1", "residual"],
                  list(zip(data.freq.tolist(), fit.residuals.tolist())), header(args))
    for k, val in report.items():
        print(f"{k}: {val}")
    return EXIT_OK


def cmd_rempi_lines(args):
    mu = parse_mu(args)
    X = parse_curve(args.lower, args.data_dir)
    B = parse_curve(args.upper, args.data_dir)
    xl = solve_manifold(X, parse_range(args.v_lower), J=args.J, mu=mu)
    bl = solve_manifold(B, parse_range(args.v_upper), J=max(args.J, 1) if args.pi_upper else args.J, mu=mu)
    lines = rempi_line_positions(xl, bl)
    out = _out(args, "rempi_lines.csv")
    lines.to_csv(out, header(args))
    print(f"{len(lines)} lines written to {out}")
    return EXIT_OK


def _c6_from_args(args) -> float:
    if args.C6_file:
        p = io.read_params(_resolve(args.C6_file, args.data_dir))
        value, unit = float(p["C6"]), p.get("unit", "au")
    elif args.C6 is not None:
        value, unit = args.C6, args.C6_unit
    else:
        p = io.read_params(io.packaged_data("lics_long_range.txt"))
        value, unit = float(p["C6"]), p.get("unit", "au")
    if unit == "au":
        return value * units.convert_energy(1.0, "hartree", "cm-1") * units.BOHR_IN_ANGSTROM**6
    if unit in ("cm-1A6", "cm-1*A^6"):
        return value
    raise ValueError(f"unknown C6 unit {unit!r} (use au or cm-1A6)")


def cmd_barrier(args):
    b = centrifugal_barrier(_c6_from_args(args), parse_mu(args), args.l)
    rows = [("R_b_A", b.R_b), ("E_b_cm-1", b.E_b), ("E_b_mK", b.E_b_mK),
            ("R_b_numeric_A", b.R_b_numeric), ("E_b_numeric_cm-1", b.E_b_numeric)]
    for k, val in rows:
        print(f"{k}: {val!r}")
    if args.output:
        io.write_rows(args.output, ["quantity", "value"], rows, header(args))
    return EXIT_OK


def cmd_rates(args):
    vals = {"ions_per_pulse": args.ions_per_pulse, "rep_rate": args.rep, "overlap": args.overlap,
            "ionization_prob": args.pion, "detector_eff": args.pdet}
    if args.params:
        p = io.read_params(_resolve(args.params, args.data_dir))
        for k in vals:
            if k in p:
                vals[k] = float(p[k])
    missing = [k for k, v in vals.items() if v is None]
    if missing:
        raise ValueError(f"missing rate parameters: {', '.join(missing)}")
    chain = RateChain(**vals)
    trace = chain.trace()
    rate = production_rate(chain)
    if args.scale or args.pair_density:
        f1, f2 = args.scale if args.scale else (args.pair_density, 1.0)
        trace.append(("density_factor_1", f1))
        trace.append(("density_factor_2", f2))
        trace.append(("scaled_rate_per_s", scale_rate(rate, f1, f2)))
    if args.csv:
        print("quantity,value")
        for k, val in trace:
            print(f"{k},{val!r}")
    else:
        for k, val in trace:
            print(f"{k:>24s} = {val:.6g}")
    if args.output:
        io.write_rows(args.output, ["quantity", "value"], trace, header(args))
    return EXIT_OK


def cmd_accumulate(args):
    n = accumulate(AccumulationModel(args.rate, args.loss, args.t))
    print(f"N({args.t:g} s) = {n:.6g} molecules")
    if args.loss > 0:
        print(f"steady state = {args.rate / args.loss:.6g} molecules")
    return EXIT_OK


def cmd_kinematics(args):
    m1 = units.isotope_mass(args.species1) if args.m1 is None else args.m1
    m2 = units.isotope_mass(args.species2) if args.m2 is None else args.m2
    t_rel = relative_collision_temperature(m1, args.T1, m2, args.T2)
    t_com = pair_com_temperature(m1, args.T1, m2, args.T2)
    print(f"relative collision temperature: {t_rel:.2f} uK")
    print(f"pair centre-of-mass temperature: {t_com:.2f} uK")
    if args.barrier_mK:
        frac = partial_wave_fraction(t_rel, args.barrier_mK)
        print(f"fraction above {args.barrier_mK} mK barrier: {frac:.4f}")
    if args.microwave:
        freqs = microwave_transfer_frequencies(args.microwave[0], int(args.microwave[1]),
                                               int(args.microwave[2]))
        print("microwave ladder: " + ", ".join(f"{f:.3f}" for f in freqs))
    return EXIT_OK


def cmd_reproduce(args):
    results = run_all(args.data_dir)
    print(format_table(results))
    return EXIT_NUMERIC if any(r.status == "fail" for r in results) else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="output file")
    common.add_argument("--seed", type=int, default=0, help="random seed for synthetic noise")
    common.add_argument("--timestamps", action="store_true", help="add a timestamp to output headers")
    common.add_argument("--data-dir", default=None, help=f"search path for input files (default ${io.DATA_ENV})")
    common.add_argument("--gnuplot-script", action="store_true", help="write a gnuplot script next to the CSV")

    parser = _Parser(prog="rovib", description="Diatomic rovibrational spectroscopy tools")
    parser.add_argument("--version", action="version", version=f"rovib {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="bound levels of a potential")
    p.add_argument("--potential", required=True, help="curve file, morse:De,a,Re[,Te] or harmonic:k,Re[,Te]")
    _add_mu(p)
    p.add_argument("--v", default="0", help="level or inclusive range, e.g. 0..5")
    p.add_argument("--J", type=int, default=0)
    p.add_argument("--ppw", type=float, default=300.0, help="grid points per local wavelength")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("fcf", parents=[common], help="Franck-Condon factor matrix")
    p.add_argument("--upper", required=True)
    p.add_argument("--lower", required=True)
    _add_mu(p)
    p.add_argument("--v-upper", default="0..5")
    p.add_argument("--v-lower", default="0..10")
    p.add_argument("--J-upper", type=int, default=0)
    p.add_argument("--J-lower", type=int, default=0)
    p.set_defaults(func=cmd_fcf)

    p = sub.add_parser("decay", parents=[common], help="spontaneous decay table")
    p.add_argument("--upper", required=True, help="curve with level, e.g. B.pot:v=4,J=2,parity=f")
    p.add_argument("--lower", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dipole", help="transition dipole file")
    g.add_argument("--dipole-constant", type=float, default=1.0, help="constant dipole in debye")
    _add_mu(p)
    p.add_argument("--v-lower", default="0..80")
    p.add_argument("--j0-wavefunctions", action="store_true",
                   help="use J''=0 lower wavefunctions for every branch")
    p.add_argument("--layout", action="store_true", help="write v''=0..10, sum(11-20), sum(>20)")
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("lineshape", parents=[common], help="thermal PA line synthesis or fit")
    p.add_argument("--fit", help="spectrum CSV to fit instead of synthesizing")
    p.add_argument("--nu0", type=float, default=0.0, help="MHz")
    p.add_argument("--T", type=float, default=530.0, help="uK")
    p.add_argument("--gamma", type=float, default=7.0, help="Lorentzian FWHM, MHz")
    p.add_argument("--amplitude", type=float, default=1000.0)
    p.add_argument("--baseline", type=float, default=0.0)
    p.add_argument("--span", type=float, help="half-width of the grid, MHz")
    p.add_argument("--points", type=int, default=301)
    p.add_argument("--noise", type=float, default=0.0, help="Gaussian noise sigma")
    p.set_defaults(func=cmd_lineshape)

    p = sub.add_parser("depletion-sim", parents=[common], help="synthesize a depletion spectrum")
    _add_depletion_model(p)
    p.add_argument("--nu-min", type=float)
    p.add_argument("--nu-max", type=float)
    p.add_argument("--points", type=int, default=500)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--lines", help="also write the line list CSV here")
    p.set_defaults(func=cmd_depletion_sim)

    p = sub.add_parser("depletion-fit", parents=[common], help="fit a depletion spectrum")
    p.add_argument("--spectrum", required=True)
    _add_depletion_model(p)
    p.add_argument("--free", default="baseline,depth", help="baseline,depth or omega0,B_upper")
    p.add_argument("--templates", help="rank parity hypotheses, e.g. plus,minus,both")
    p.set_defaults(func=cmd_depletion_fit)

    p = sub.add_parser("rempi-lines", parents=[common], help="X -> B line positions")
    p.add_argument("--lower", required=True)
    p.add_argument("--upper", required=True)
    _add_mu(p)
    p.add_argument("--v-lower", default="0..3")
    p.add_argument("--v-upper", default="0..30")
    p.add_argument("--J", type=int, default=0)
    p.add_argument("--pi-upper", action="store_true", help="solve the upper state at J>=1")
    p.set_defaults(func=cmd_rempi_lines)

    p = sub.add_parser("barrier", parents=[common], help="centrifugal barrier from C6")
    p.add_argument("--C6", type=float)
    p.add_argument("--C6-unit", default="au", choices=("au", "cm-1A6"))
    p.add_argument("--C6-file", help="key: value file with C6 and unit")
    _add_mu(p)
    p.add_argument("--l", type=int, default=1)
    p.set_defaults(func=cmd_barrier)

    p = sub.add_parser("rates", parents=[common], help="production rate from ion counts")
    p.add_argument("--params", help="key: value file with RateChain fields")
    p.add_argument("--ions-per-pulse", type=float)
    p.add_argument("--rep", type=float, default=20.0, help="repetition rate, Hz")
    p.add_argument("--overlap", type=float, default=0.40)
    p.add_argument("--pion", type=float, default=0.01)
    p.add_argument("--pdet", type=float, default=0.20)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--scale", type=float, nargs=2, metavar=("F1", "F2"),
                   help="density factors of both species (e.g. 10 10 gives x100)")
    g.add_argument("--pair-density", type=float, metavar="F",
                   help="overall pair-density factor (e.g. 10 gives x10)")
    p.add_argument("--csv", action="store_true", help="print the trace as CSV")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("accumulate", parents=[common], help="molecule number N(t)")
    p.add_argument("--rate", type=float, required=True, help="production rate, 1/s")
    p.add_argument("--loss", type=float, default=0.0, help="loss rate, 1/s")
    p.add_argument("--t", type=float, default=1.0, help="time, s")
    p.set_defaults(func=cmd_accumulate)

    p = sub.add_parser("kinematics", parents=[common], help="pair temperatures and p-wave fraction")
    p.add_argument("--species1", default="Li7")
    p.add_argument("--species2", default="Cs133")
    p.add_argument("--m1", type=float)
    p.add_argument("--m2", type=float)
    p.add_argument("--T1", type=float, default=545.0, help="uK")
    p.add_argument("--T2", type=float, default=250.0, help="uK")
    p.add_argument("--barrier-mK", type=float)
    p.add_argument("--microwave", type=float, nargs=3, metavar=("B_GHz", "J_FROM", "J_TO"))
    p.set_defaults(func=cmd_kinematics)

    p = sub.add_parser("reproduce", parents=[common], help="run the reproduction checks")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    args._argv = "rovib " + shlex.join(argv)
    try:
        return args.func(args)
    except (ConvergenceError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, LevelNotFoundError, CurveFormatError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())
