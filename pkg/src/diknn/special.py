"""Digamma function.

Upward recurrence ``psi(x) = psi(x + 1) - 1/x`` until the argument reaches
``_ASYMPTOTIC_FROM``, then the Stirling-type asymptotic series in ``1/x**2``.
With the cut at 10 and terms through ``x**-14`` the truncation error is below
1e-16; the recurrence adds a few ulps.
"""

from __future__ import annotations

import numpy as np

_ASYMPTOTIC_FROM = 10.0

# B_{2n} / (2n) for n = 1..7
_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x):
    """Digamma of a positive scalar or array.

    Raises ``ValueError`` for any non-positive or non-finite argument.
    Scalars in, float out; arrays in, float64 array out.
    """
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("digamma is only defined here for finite x > 0")

    z = arr.copy()
    shift = np.zeros_like(z)
    small = z < _ASYMPTOTIC_FROM
    while np.any(small):
        shift[small] += 1.0 / z[small]
        z[small] += 1.0
        small = z < _ASYMPTOTIC_FROM

    inv2 = 1.0 / (z * z)
    poly = np.zeros_like(z)
    for coef in reversed(_SERIES):
        poly = (poly + coef) * inv2
    out = np.log(z) - 0.5 / z - poly - shift

    if out.ndim == 0:
        return float(out)
    return out
