"""Sampled spectra and their CSV form."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

_FREQ_COLUMNS = {"MHz": "nu_MHz", "GHz": "nu_GHz", "cm-1": "nu_cm-1"}


@dataclass
class Spectrum:
    """Ordered (frequency, signal, optional sigma) samples."""

    freq: np.ndarray
    signal: np.ndarray
    sigma: np.ndarray | None = None
    unit: str = "MHz"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.freq = np.asarray(self.freq, dtype=float)
        self.signal = np.asarray(self.signal, dtype=float)
        if self.sigma is not None:
            self.sigma = np.asarray(self.sigma, dtype=float)
            if self.sigma.shape != self.freq.shape or np.any(self.sigma <= 0):
                raise ValueError("sigma must be positive and match the frequency grid")
        if self.freq.shape != self.signal.shape or self.freq.ndim != 1:
            raise ValueError("freq and signal must be 1-D arrays of equal length")
        if self.unit not in _FREQ_COLUMNS:
            raise ValueError(f"unsupported frequency unit {self.unit!r}")
        if np.any(np.diff(self.freq) < 0):
            order = np.argsort(self.freq, kind="stable")
            self.freq = self.freq[order]
            self.signal = self.signal[order]
            if self.sigma is not None:
                self.sigma = self.sigma[order]

    def __len__(self):
        return self.freq.size

    @property
    def weights(self) -> np.ndarray:
        """Inverse-variance weights, or ones without uncertainties."""
        if self.sigma is None:
            return np.ones_like(self.signal)
        return 1.0 / self.sigma**2

    def to_csv(self, path, header: dict | None = None):
        meta = {**self.meta, **(header or {})}
        col = _FREQ_COLUMNS[self.unit]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            for key, value in meta.items():
                fh.write(f"# {key}: {value}\n")
            w = csv.writer(fh, lineterminator="\n")
            if self.sigma is None:
                w.writerow([col, "signal"])
                for x, y in zip(self.freq, self.signal):
                    w.writerow([repr(float(x)), repr(float(y))])
            else:
                w.writerow([col, "signal", "sigma"])
                for x, y, s in zip(self.freq, self.signal, self.sigma):
                    w.writerow([repr(float(x)), repr(float(y)), repr(float(s))])

    @classmethod
    def from_csv(cls, path) -> "Spectrum":
        meta: dict[str, str] = {}
        rows: list[list[str]] = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("#"):
                    key, _, value = line.lstrip("#").partition(":")
                    if value:
                        meta[key.strip()] = value.strip()
                elif line.strip():
                    rows.append(next(csv.reader([line])))
        if not rows:
            raise ValueError(f"{path}: no data")
        head = [c.strip() for c in rows[0]]
        units_by_col = {v: k for k, v in _FREQ_COLUMNS.items()}
        if head[0] not in units_by_col or head[1] != "signal":
            raise ValueError(f"{path}: unexpected columns {head}")
        data = np.array([[float(x) for x in r] for r in rows[1:]])
        sigma = data[:, 2] if len(head) > 2 and head[2] == "sigma" else None
        return cls(data[:, 0], data[:, 1], sigma, unit=units_by_col[head[0]], meta=meta)
