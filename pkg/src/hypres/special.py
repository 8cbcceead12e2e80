"""Reciprocal Gamma function for complex arguments."""

import numpy as np

# Lanczos coefficients, g = 607/128, 15 terms
_G = 607.0 / 128.0
_COEF = np.array([
    0.999999999999997092,
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
])
_SQRT_2PI = np.sqrt(2.0 * np.pi)


def _rgamma_right(z):
    # valid for Re z >= 1/2; Gamma(z) = sqrt(2 pi) A(z)/z * t^(z+1/2) e^(-t), t = z + g + 1/2
    acc = np.full(z.shape, _COEF[0], dtype=complex)
    for i in range(1, len(_COEF)):
        acc = acc + _COEF[i] / (z + i)
    t = z + _G + 0.5
    return z * np.exp(t - (z + 0.5) * np.log(t)) / (_SQRT_2PI * acc)


def rgamma(z):
    """Entire function ``1/Gamma(z)``.

    Lanczos approximation on ``Re z >= 1/2`` and the reflection formula
    ``1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi`` elsewhere; zeros at the
    nonpositive integers are exact.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _rgamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        s = np.sin(np.pi * zl)
        # snap the lattice so that the zeros are exact
        on_lattice = (zl.imag == 0) & (zl.real == np.round(zl.real))
        s[on_lattice] = 0.0
        out[left] = s / (np.pi * _rgamma_right(1.0 - zl))
    return out[0] if scalar else out
