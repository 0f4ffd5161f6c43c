"""Independent reference implementations used only by the test suite.

Each oracle is deliberately written with a *different* method than the
package code it checks: power series instead of library calls, cofactor
expansion instead of LU, composite Simpson instead of Gauss panels.  They
are slow and simple on purpose.
"""

import numpy as np
from scipy.special import gamma as _gamma


def ai_series(x, terms=120):
    """Airy Ai by its Maclaurin series; accurate for |x| <= 6 or so.

    Ai(x) = c1*f(x) - c2*g(x) with
    f = sum_k 3^k (1/3)_k x^{3k}/(3k)!,
    g = sum_k 3^k (2/3)_k x^{3k+1}/(3k+1)!,
    c1 = 3^{-2/3}/Gamma(2/3), c2 = 3^{-1/3}/Gamma(1/3).
    """
    c1 = 3.0 ** (-2.0 / 3.0) / _gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / _gamma(1.0 / 3.0)
    f, g = 0.0, 0.0
    tf, tg = 1.0, x
    for k in range(terms):
        f += tf
        g += tg
        tf *= 3.0 * (1.0 / 3.0 + k) * x ** 3 / ((3 * k + 1) * (3 * k + 2) * (3 * k + 3))
        tg *= 3.0 * (2.0 / 3.0 + k) * x ** 3 / ((3 * k + 2) * (3 * k + 3) * (3 * k + 4))
    return c1 * f - c2 * g


def ai_prime_series(x, terms=120):
    """Airy Ai' by the term-by-term derivative of the Maclaurin series.

    f'(x) = sum_{k>=1} 3^k (1/3)_k x^{3k-1}/(3k-1)!,
    g'(x) = sum_{k>=0} 3^k (2/3)_k x^{3k}/(3k)!.
    """
    c1 = 3.0 ** (-2.0 / 3.0) / _gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / _gamma(1.0 / 3.0)
    fp = 0.0
    a = 0.5 * x * x  # k = 1 term: 3*(1/3)*x^2/2!
    for k in range(1, terms):
        fp += a
        a *= 3.0 * (1.0 / 3.0 + k) * x ** 3 / ((3 * k) * (3 * k + 1) * (3 * k + 2))
    gp = 0.0
    b = 1.0
    for k in range(terms):
        gp += b
        b *= 3.0 * (2.0 / 3.0 + k) * x ** 3 / ((3 * k + 1) * (3 * k + 2) * (3 * k + 3))
    return c1 * fp - c2 * gp


def erf_series(x, terms=80):
    """Error function by its Maclaurin series; accurate for |x| <= 4."""
    s = 0.0
    term = x
    for k in range(terms):
        s += term / (2 * k + 1)
        term *= -x * x / (k + 1)
    return 2.0 / np.sqrt(np.pi) * s


def normal_cdf_series(x):
    return 0.5 * (1.0 + erf_series(x / np.sqrt(2.0)))


def det_cofactor(a):
    """Determinant by cofactor expansion; fine for n <= 7."""
    a = np.asarray(a)
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    total = 0.0 + 0.0j if np.iscomplexobj(a) else 0.0
    for j in range(n):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1) ** j * a[0, j] * det_cofactor(minor)
    return total


def csc_identity_lhs(z, mu, t_max=250.0, npts=500001):
    """Composite-Simpson evaluation of  int mu e^{-z t/2} / (e^t - mu) dt.

    Valid for Re(-z/2) in (0, 1) and mu off the positive real axis.  The
    integrand decays like e^{-(1+Re z/2)t} as t -> +inf and like
    e^{Re(z)|t|/2} as t -> -inf, so t_max = 250 truncates far below 1e-10
    for Re z in [-1.6, -0.4].
    """
    z = complex(z)
    mu = complex(mu)
    t = np.linspace(-t_max, t_max, npts)
    f = mu * np.exp(-0.5 * z * t) / (np.exp(t) - mu)
    h = t[1] - t[0]
    w = np.ones(npts)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return np.sum(f * w) * h / 3.0
