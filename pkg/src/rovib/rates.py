"""Molecule production-rate bookkeeping, accumulation and microwave transfer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal


def _dec(x) -> Decimal:
    # Decimal(repr(float)) keeps the decimal digits the user typed, so
    # 5e-3 * 20 / (0.4 * 0.01 * 0.2) is exactly 125.
    return Decimal(repr(float(x)))


@dataclass(frozen=True)
class RateChain:
    """Conversion from detected ions per pulse to molecules produced per second."""

    ions_per_pulse: float
    rep_rate: float  # Hz
    overlap: float
    ionization_prob: float
    detector_eff: float

    def __post_init__(self):
        if self.ions_per_pulse < 0:
            raise ValueError("ions_per_pulse must be non-negative")
        if self.rep_rate <= 0:
            raise ValueError("rep_rate must be positive")
        for name in ("overlap", "ionization_prob", "detector_eff"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")

    def trace(self) -> list[tuple[str, float]]:
        """Intermediate quantities of the derivation, in order."""
        detected = _dec(self.ions_per_pulse) * _dec(self.rep_rate)
        eff = _dec(self.overlap) * _dec(self.ionization_prob) * _dec(self.detector_eff)
        return [
            ("ions_per_pulse", self.ions_per_pulse),
            ("rep_rate_Hz", self.rep_rate),
            ("detected_ions_per_s", float(detected)),
            ("overlap", self.overlap),
            ("ionization_prob", self.ionization_prob),
            ("detector_eff", self.detector_eff),
            ("total_efficiency", float(eff)),
            ("production_rate_per_s", float(detected / eff)),
        ]


def production_rate(chain: RateChain) -> float:
    """ions_per_pulse * rep_rate / (overlap * ionization_prob * detector_eff)."""
    return chain.trace()[-1][1]


def scale_rate(rate: float, density_factor_1: float, density_factor_2: float) -> float:
    """Rescale a two-body production rate by both species' density factors."""
    if density_factor_1 <= 0 or density_factor_2 <= 0:
        raise ValueError("density factors must be positive")
    return float(_dec(rate) * _dec(density_factor_1) * _dec(density_factor_2))


def microwave_transfer_frequencies(B_lower: float, J_from: int, J_to: int) -> list[float]:
    """Rigid-rotor frequencies 2 B J for the ladder J_from -> J_to (downward).

    Returns one frequency per step in the unit of ``B_lower``.
    """
    if J_from < 0 or J_to < 0:
        raise ValueError("J must be non-negative")
    if J_to > J_from:
        raise ValueError("only downward transfer (J_to <= J_from) is modelled")
    return [2.0 * B_lower * J for J in range(J_from, J_to, -1)]


@dataclass(frozen=True)
class AccumulationModel:
    production_rate: float  # 1/s
    loss_rate: float = 0.0  # 1/s
    t: float = 1.0  # s

    def __post_init__(self):
        if self.production_rate < 0 or self.loss_rate < 0:
            raise ValueError("rates must be non-negative")


def accumulate(model: AccumulationModel) -> float:
    """N(t) = (R/G)(1 - exp(-G t)), or R t without losses."""
    R, G, t = model.production_rate, model.loss_rate, model.t
    if G == 0:
        return R * t
    return R / G * -math.expm1(-G * t)
