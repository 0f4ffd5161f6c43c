"""Special-function wrappers with the branch conventions the package needs.

Everything delegates to scipy.special where possible; the only genuinely
hand-rolled object is ``csc_power``, the product of a complex power of
(-mu) and a cosecant, which must be assembled in log space because its two
factors separately overflow double precision long before their product
does.
"""

import numpy as np
from scipy import special as sp

__all__ = [
    "airy_ai",
    "airy_ai_prime",
    "log_gamma",
    "gaussian_cdf",
    "log_sin",
    "csc_power",
]


def airy_ai(x):
    """Airy function Ai at real arguments (vectorized)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("airy_ai requires finite arguments")
    return sp.airy(x)[0]


def airy_ai_prime(x):
    """Derivative Ai' at real arguments (vectorized)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("airy_ai_prime requires finite arguments")
    return sp.airy(x)[1]


def log_gamma(z):
    """Principal branch of log Gamma for complex arguments."""
    return sp.loggamma(z)


def gaussian_cdf(x):
    """Standard normal cumulative distribution function."""
    return sp.ndtr(np.asarray(x, dtype=float))


def log_sin(w):
    """log(sin(w)) for complex w, stable for large |Im w|.

    The branch of the result is unspecified up to 2*pi*i; callers only ever
    exponentiate (a multiple of) it, so the ambiguity is harmless.  For
    |Im w| > 20 the naive sine would overflow; there the identity
    sin w = e^{-iw} (e^{2iw} - 1) / (2i) (and its mirror) is used.
    """
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    im = w.imag
    hi = im > 20.0
    lo = im < -20.0
    mid = ~(hi | lo)
    if np.any(mid):
        out[mid] = np.log(np.sin(w[mid]))
    if np.any(hi):
        wh = w[hi]
        # sin w = e^{-iw}(e^{2iw} - 1)/(2i); |e^{2iw}| <= e^{-40}
        out[hi] = -1j * wh + np.log1p(-np.exp(2j * wh)) + 1j * np.pi \
            - np.log(2j)
    if np.any(lo):
        wl = w[lo]
        out[lo] = 1j * wl + np.log1p(-np.exp(-2j * wl)) - np.log(2j)
    return out


def csc_power(z, mu):
    """pi * (-mu)^(-z/2) * csc(pi*z/2), assembled in log space.

    ``mu`` must avoid the branch cut along the positive real axis, so that
    -mu avoids the standard cut of the principal logarithm; (-mu)^(-z/2)
    means exp(-log(-mu)*z/2) with the principal log.  ``z`` must avoid the
    even integers where the cosecant has poles.  Vectorized over z for a
    scalar mu.
    """
    mu = complex(mu)
    if mu.imag == 0.0 and mu.real >= 0.0:
        raise ValueError("csc_power: mu must stay off the branch cut [0, inf)")
    z = np.asarray(z, dtype=complex)
    logm = np.log(-mu)
    total = np.log(np.pi) - 0.5 * logm * z - log_sin(0.5 * np.pi * z)
    if np.any(total.real > 700.0):
        raise FloatingPointError("csc_power overflows double range")
    return np.exp(total)
