"""Compiled Numerov recurrences used by :mod:`rovib.radial`.

The radial equation is written as psi'' = g(R) psi with g = (V - E)/K and
K = hbar^2/(2 mu). With f_i = 1 - h^2 g_i / 12 the Numerov step reads
f_{i+1} psi_{i+1} = (12 - 10 f_i) psi_i - f_{i-1} psi_{i-1}.
"""

import numpy as np
from numba import njit

_BIG = 1e150


@njit(cache=True)
def count_nodes(f, i0, i1):
    """Sign changes of the outward solution started at i0, run up to i1.

    By the oscillation theorem this is the number of eigenvalues of the
    discretized problem below the trial energy.
    """
    y_prev = 0.0
    y = 1e-30
    nodes = 0
    for i in range(i0 + 1, i1):
        y_next = ((12.0 - 10.0 * f[i]) * y - f[i - 1] * y_prev) / f[i + 1]
        if y_next == 0.0:
            y_next = 1e-300 * (1.0 if y >= 0 else -1.0)
        if (y_next > 0) != (y > 0):
            nodes += 1
        y_prev = y
        y = y_next
        if abs(y) > _BIG:
            y_prev /= _BIG
            y /= _BIG
    return nodes


@njit(cache=True)
def shoot(f, g, h, i0, i1, m):
    """Outward (i0 -> m+1) and inward (i1 -> m-1) integration, matched at m.

    Returns the matched wavefunction (zero outside [i0, i1]) and the
    derivative-mismatch residual D of the Numerov equation at m, which is
    zero at an eigenvalue.
    """
    n = f.shape[0]
    psi = np.zeros(n)
    out = np.zeros(n)
    out[i0] = 0.0
    out[i0 + 1] = 1e-30
    for i in range(i0 + 1, m + 1):
        out[i + 1] = ((12.0 - 10.0 * f[i]) * out[i] - f[i - 1] * out[i - 1]) / f[i + 1]
        if abs(out[i + 1]) > _BIG:
            for k in range(i0, i + 2):
                out[k] /= _BIG
    inw = np.zeros(n)
    inw[i1] = 0.0
    inw[i1 - 1] = 1e-30
    for i in range(i1 - 1, m - 1, -1):
        inw[i - 1] = ((12.0 - 10.0 * f[i]) * inw[i] - f[i + 1] * inw[i + 1]) / f[i - 1]
        if abs(inw[i - 1]) > _BIG:
            for k in range(i - 1, i1 + 1):
                inw[k] /= _BIG
    scale = inw[m] / out[m]
    for i in range(i0, m + 1):
        psi[i] = out[i] * scale
    for i in range(m + 1, i1 + 1):
        psi[i] = inw[i]
    y_minus = f[m - 1] * out[m - 1] * scale
    y_plus = f[m + 1] * inw[m + 1]
    y_m = f[m] * psi[m]
    resid = (y_plus - 2.0 * y_m + y_minus) / (h * h) - g[m] * psi[m]
    return psi, resid
