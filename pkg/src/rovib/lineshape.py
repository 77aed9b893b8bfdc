"""Thermally broadened photoassociation lines and collision kinematics.

A PA resonance probed from a thermal gas is a Lorentzian of FWHM ``gamma``
convolved with the Maxwell-Boltzmann distribution of collision energies,
f(E) ~ sqrt(E) exp(-E/kT). A collision energy E is supplied by the atom
pair, so the laser is resonant at nu0 - E/h and the line gets a red wing.

Frequencies are in MHz, temperatures in microkelvin, masses in amu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import least_squares
from scipy.special import expit, wofz

from rovib import units
from rovib.spectrum import Spectrum

T_BOUNDS = (0.1, 1e6)  # uK
T_STARTS = (50.0, 150.0, 500.0, 1500.0, 5000.0)


class FitError(RuntimeError):
    def __init__(self, message: str, best_rss: float | None = None):
        self.best_rss = best_rss
        super().__init__(message)


@dataclass(frozen=True)
class ThermalLineModel:
    nu0: float  # MHz, line position for zero collision energy
    T: float  # uK
    gamma: float  # MHz, Lorentzian FWHM
    amplitude: float = 1.0  # line area, signal x MHz
    baseline: float = 0.0

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError("temperature must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")


def thermal_width(T: float) -> float:
    """kB T / h in MHz for T in uK."""
    return float(units.convert_energy(T, "uK", "MHz"))


def thermal_kernel(detuning, T: float, gamma: float) -> np.ndarray:
    """Unit-area thermal PA profile at ``detuning`` = nu - nu0 (MHz).

    With eps = kT/h and a = (detuning - i gamma/2)/eps, the Boltzmann-weighted
    Lorentzian integrates in closed form to
    -(2/(pi eps)) Im[sqrt(pi a) w(i sqrt(a))], w being the Faddeeva function.
    """
    eps = thermal_width(T)
    a = (np.asarray(detuning, dtype=float) - 0.5j * gamma) / eps
    s = np.sqrt(a)
    return -(2.0 / (math.pi * eps)) * np.imag(np.sqrt(math.pi) * s * wofz(1j * s))


def thermal_kernel_quad(detuning: float, T: float, gamma: float) -> float:
    """Same profile by adaptive quadrature over x = E/kT."""
    eps = thermal_width(T)
    hw = 0.5 * gamma

    def integrand(x):
        d = detuning + eps * x
        return math.sqrt(x) * math.exp(-x) * hw / (math.pi * (d * d + hw * hw))

    # split at the Lorentzian centre when it falls inside the domain
    x_c = -detuning / eps
    pts = [x_c] if 0 < x_c < 60 else None
    val, _ = quad(integrand, 0, 60, points=pts, epsrel=1e-10, epsabs=0, limit=400)
    tail, _ = quad(integrand, 60, np.inf, epsrel=1e-10, epsabs=0)
    return (val + tail) / (0.5 * math.sqrt(math.pi))


def _required_halfspan(model: ThermalLineModel) -> float:
    return 10.0 * max(model.gamma, thermal_width(model.T))


def thermal_lineshape(model: ThermalLineModel, nu_grid, method: str = "closed") -> Spectrum:
    """Synthesize the thermal PA line on ``nu_grid`` (MHz).

    S = baseline + amplitude * K(nu - nu0), K of unit area. ``method='quad'``
    evaluates K by adaptive quadrature instead of the closed form.
    """
    nu = np.asarray(nu_grid, dtype=float)
    half = _required_halfspan(model)
    if nu.min() > model.nu0 - half or nu.max() < model.nu0 + half:
        raise ValueError(
            f"grid must span at least nu0 +/- {half:.6g} MHz "
            f"([{model.nu0 - half:.6g}, {model.nu0 + half:.6g}])"
        )
    if method == "closed":
        k = thermal_kernel(nu - model.nu0, model.T, model.gamma)
    elif method == "quad":
        k = np.array([thermal_kernel_quad(x - model.nu0, model.T, model.gamma) for x in nu])
    else:
        raise ValueError(f"unknown method {method!r}")
    return Spectrum(nu, model.baseline + model.amplitude * k, unit="MHz")


@dataclass
class ThermalFit:
    model: ThermalLineModel
    covariance: np.ndarray  # order: nu0, T, amplitude, baseline
    rss: float
    flagged: bool = False
    note: str = ""

    param_names = ("nu0", "T", "amplitude", "baseline")

    def stderr(self, name: str) -> float:
        i = self.param_names.index(name)
        return float(math.sqrt(max(self.covariance[i, i], 0.0)))


def _T_from_u(u, lo, hi):
    return math.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * expit(u))


def _u_from_T(T, lo, hi):
    p = (math.log(T) - math.log(lo)) / (math.log(hi) - math.log(lo))
    p = min(max(p, 1e-12), 1 - 1e-12)
    return math.log(p / (1 - p))


def fit_temperature(
    spectrum: Spectrum,
    gamma_fixed: float = 7.0,
    T_starts=T_STARTS,
    T_bounds=T_BOUNDS,
) -> ThermalFit:
    """Fit nu0, T, amplitude and baseline of a thermal PA line, gamma fixed.

    Levenberg-Marquardt from several starting temperatures; T is kept inside
    ``T_bounds`` by a smooth log-logistic map. A result whose best fit sits at
    a bound is flagged.
    """
    if len(spectrum) < 20:
        raise ValueError("need at least 20 points to fit a PA line")
    nu, y = spectrum.freq, spectrum.signal
    sw = np.sqrt(spectrum.weights)
    lo, hi = T_bounds

    def model_of(nu0, T, amp, base):
        return base + amp * thermal_kernel(nu - nu0, T, gamma_fixed)

    def resid(p):
        nu0, u, amp, base = p
        return sw * (model_of(nu0, _T_from_u(u, lo, hi), amp, base) - y)

    base0 = float(np.median(y))
    area0 = max(float(np.trapezoid(y - base0, nu)), 1e-12)
    nu_peak = float(nu[np.argmax(y)])

    best = None
    for T0 in T_starts:
        p0 = [nu_peak + 0.5 * thermal_width(T0), _u_from_T(T0, lo, hi), area0, base0]
        try:
            res = least_squares(resid, p0, method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14,
                                max_nfev=4000)
        except (ValueError, FloatingPointError):
            continue
        if not np.all(np.isfinite(res.x)):
            continue
        if best is None or res.cost < best.cost:
            best = res
    if best is None or best.status <= 0:
        raise FitError("thermal line fit did not converge",
                       None if best is None else 2 * best.cost)

    nu0, u, amp, base = best.x
    T = _T_from_u(u, lo, hi)
    rss = 2.0 * best.cost
    flagged, note = False, ""

    # Compare against fits with T pinned at either bound.
    for T_pin in (lo, hi):
        def resid_pinned(p, T_pin=T_pin):
            return sw * (model_of(p[0], T_pin, p[1], p[2]) - y)

        pinned = least_squares(resid_pinned, [nu0, amp, base], method="lm",
                               xtol=1e-14, ftol=1e-14, gtol=1e-14)
        rss_pin = float(np.sum(pinned.fun**2))
        if rss_pin <= rss * (1 + 1e-9) + 1e-300:
            nu0, amp, base = pinned.x
            T, rss = T_pin, rss_pin
            flagged, note = True, f"temperature at fit bound {T_pin} uK"
            break
    if not flagged and (T < lo * 1.01 or T > hi / 1.01):
        flagged, note = True, "temperature at fit bound"

    model = ThermalLineModel(float(nu0), float(T), gamma_fixed, float(max(amp, 0.0)), float(base))
    cov = _covariance(lambda p: sw * (model_of(*p) - y), np.array([nu0, T, amp, base]),
                      rss, len(y), spectrum.sigma is not None)
    return ThermalFit(model, cov, rss, flagged, note)


def _covariance(fun, p, rss, n, absolute_sigma):
    J = np.empty((n, p.size))
    for k in range(p.size):
        step = 1e-6 * max(abs(p[k]), 1e-3)
        dp = np.zeros_like(p)
        dp[k] = step
        J[:, k] = (fun(p + dp) - fun(p - dp)) / (2 * step)
    try:
        cov = np.linalg.inv(J.T @ J)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(J.T @ J)
    if not absolute_sigma and n > p.size:
        cov = cov * rss / (n - p.size)
    return cov


# ---------------------------------------------------------------------------
# kinematics


def relative_collision_temperature(m1: float, T1: float, m2: float, T2: float) -> float:
    """Temperature of the relative motion, mu (T1/m1 + T2/m2)."""
    if min(m1, m2) <= 0 or min(T1, T2) < 0:
        raise ValueError("masses must be positive and temperatures non-negative")
    return units.reduced_mass(m1, m2) * (T1 / m1 + T2 / m2)


def pair_com_temperature(m1: float, T1: float, m2: float, T2: float) -> float:
    """Temperature of the pair's centre-of-mass motion, (m1 T1 + m2 T2)/(m1 + m2)."""
    if min(m1, m2) < 0 or m1 + m2 <= 0 or min(T1, T2) < 0:
        raise ValueError("masses and temperatures must be non-negative")
    return (m1 * T1 + m2 * T2) / (m1 + m2)


def partial_wave_fraction(T: float, E_b: float) -> float:
    """Fraction of Maxwell-Boltzmann collisions with energy above ``E_b``.

    ``T`` in uK, ``E_b`` in mK. Evaluates Gamma(3/2, E_b/kT)/Gamma(3/2) by
    adaptive quadrature.
    """
    if T <= 0 or E_b < 0:
        raise ValueError("T must be positive and E_b non-negative")
    x = E_b * 1e3 / T
    if x == 0:
        return 1.0
    val, _ = quad(lambda t: math.sqrt(t) * math.exp(-t), x, np.inf, epsabs=0, epsrel=1e-12)
    return val / (0.5 * math.sqrt(math.pi))

