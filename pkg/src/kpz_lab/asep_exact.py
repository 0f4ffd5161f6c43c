"""Exact finite-time height distribution of the asymmetric exclusion process.

For step initial data (every positive site occupied, drift to the left)
the one-point law of the height function has a closed contour form: an
integral over a circle of mu of an infinite product against a Fredholm
determinant on an eta-circle, whose kernel is itself a zeta-circle
integral weighted by the bilateral geometric-type series ``f_series``.
Every contour is a positively oriented circle, every contour integral
carries the Cauchy normalization 1/(2*pi*i), and the trapezoid rule turns
each circle into a plain average over roots of unity.  With that
normalization the t = 0 value reproduces the deterministic step-profile
indicator with no adjustable constant, which is how the convention was
pinned (and the Monte Carlo engine confirms it at positive times).

The weak-asymmetry helpers (``wasep_params``, ``wasep_m``) translate a
continuum query at scale (T, X) into the rates and the integer
height-event parameter m consumed by the exact formula.
"""

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import circle_rule, complex_det

__all__ = [
    "AsepParams",
    "TWKernelSpec",
    "f_series",
    "asep_height_cdf",
    "wasep_params",
    "wasep_site",
    "wasep_m",
]

_PRODUCT_TOL = 1e-14


@dataclass(frozen=True)
class AsepParams:
    """Jump rates of the exclusion process.

    Particles jump left at rate q and right at rate p, with p + q = 1 and
    q > p >= 0, so the drift gamma = q - p lies in (0, 1] and the rate
    ratio tau = p/q in [0, 1).
    """

    p: float
    q: float

    def __post_init__(self):
        if abs(self.p + self.q - 1.0) > 1e-12:
            raise ValueError("rates must satisfy p + q = 1")
        if not self.q > self.p >= 0.0:
            raise ValueError("need q > p >= 0")

    @property
    def gamma(self):
        return self.q - self.p

    @property
    def tau(self):
        return self.p / self.q

    @classmethod
    def from_gamma(cls, gamma):
        """Rates with the given drift: p = (1-gamma)/2, q = (1+gamma)/2."""
        return cls(0.5 * (1.0 - gamma), 0.5 * (1.0 + gamma))


@dataclass(frozen=True)
class TWKernelSpec:
    """Geometry of one determinant evaluation.

    t is the time variable of the contour formula (the drift times the
    physical time), m the height-event integer, x the observation site.
    rho_eta and r_zeta are the two circle radii; xi is the reference
    point at which the exponent is anchored.  The exponent always enters
    through differences, so xi cancels identically; choosing it at the
    leftmost point of the eta-circle keeps every exponential below ~e^1
    even for times in the hundreds, instead of letting the two factors
    blow up to e^(+-0.5 t) separately.
    """

    t: float
    m: int
    x: int
    rho_eta: float
    r_zeta: float
    xi: complex

    def check(self, tau):
        """Radius ordering tau < rho < 1 < r_zeta < rho/tau."""
        ok = tau < self.rho_eta < 1.0 < self.r_zeta
        if tau > 0.0:
            ok = ok and self.r_zeta < self.rho_eta / tau
        if not ok:
            raise ValueError("circle radii violate the annulus ordering")

    @classmethod
    def default(cls, params, t, m, x):
        """Circles centered in their legal annuli.

        The eta-radius sits halfway between tau and 1; the zeta-radius a
        quarter of the way from 1 to rho/tau (capped for very small tau,
        where the upper constraint recedes to infinity).
        """
        tau = params.tau
        rho = 0.5 * (1.0 + tau)
        if tau < 1e-12:
            r_zeta = 2.0
        else:
            r_zeta = 1.0 + 0.25 * (rho / tau - 1.0)
            r_zeta = min(r_zeta, 2.0)
        return cls(t=float(t), m=int(m), x=int(x), rho_eta=rho,
                   r_zeta=r_zeta, xi=complex(-rho))


def _log_lambda(z, t, m, x):
    """-x log(1-z) + t z/(1-z) + m log z with principal logs.

    m and x are integers, so exp of this is single-valued in spite of
    the branch cuts of the two logarithms.
    """
    z = np.asarray(z, dtype=complex)
    return -x * np.log(1.0 - z) + t * z / (1.0 - z) + m * np.log(z)


def f_series(mu, z, tau, tol=1e-14):
    """Bilateral series sum_k tau^k z^k / (1 - tau^k mu).

    Requires 1 < |z| < 1/tau; the positive-k tail is then geometric with
    rate tau|z| and the negative-k tail geometric with rate 1/|z|, and the
    sum is truncated when the a-priori bound on each remainder falls
    below tol (plus ten terms of slack).  Negative-k terms are summed in
    the equivalent form z^(-j) / (tau^j - mu), which avoids the huge
    intermediate powers tau^(-j).

    Raises if mu sits within 1e-10 of a pole (any integer power of tau,
    including mu = 1) or at 0, where the negative tail diverges.
    """
    mu = complex(mu)
    z = complex(z)
    az = abs(z)
    if not az > 1.0:
        raise ValueError("need |z| > 1")
    if tau > 0.0 and not az < 1.0 / tau:
        raise ValueError("need |z| < 1/tau")
    if abs(mu) < 1e-10:
        raise ValueError("mu = 0 is a pole of the bilateral series")
    kp, kn = _tail_lengths(tau, az, tol, 1.0 - abs(mu) if abs(mu) < 1.0
                           else abs(mu) - 1.0)
    k = np.arange(kp + 1)
    den_pos = 1.0 - tau ** k * mu
    j = np.arange(1, kn + 1)
    den_neg = tau ** j - mu
    dmin = min(np.abs(den_pos).min(), np.abs(den_neg).min())
    if dmin < 1e-10:
        raise ValueError("mu within 1e-10 of a pole tau^k")
    total = np.sum(np.power(tau * z, k) / den_pos)
    total += np.sum(np.power(z, -j.astype(float)) / den_neg)
    return complex(total)


def _tail_lengths(tau, az, tol, floor):
    """Truncation lengths for the two geometric tails of f_series.

    floor is a lower bound for |denominator| along the whole tail; the
    tail of a geometric series with rate r is bounded by r^K/(1-r), so K
    solves r^K <= tol*(1-r)*floor.  Ten extra terms of slack are added.
    """
    floor = max(floor, 1e-3)
    rp = tau * az
    if rp <= 0.0:
        kp = 0
    else:
        kp = int(np.ceil(np.log(tol * (1.0 - rp) * floor) / np.log(rp)))
    rn = 1.0 / az
    kn = int(np.ceil(np.log(tol * (1.0 - rn) * floor) / np.log(rn)))
    return max(kp, 0) + 10, max(kn, 1) + 10


def _tw_contour_value(params, spec, sizes=(128, 96, 96)):
    """Complex value of the tagged-particle contour formula.

    Averages prod_k (1 - mu tau^k) * det(I + mu J) over the mu-circle of
    radius (1+tau)/2.  The returned value is real up to quadrature noise;
    the caller takes the real part.

    The J matrix for each mu is assembled from mu-independent pieces: the
    Cauchy factor zeta/(zeta - eta), the exponential of the anchored
    exponent differences, and the bilateral series expanded as two
    separable sums U diag(c(mu)) V with the power factors rebalanced by
    the geometric-mean radius so that both U and V decay (the raw split
    tau^k zeta^k x eta^(-k) overflows for hundreds of terms).
    """
    tau = params.tau
    spec.check(tau)
    n_mu, n_eta, n_zeta = sizes
    rho, r_zeta = spec.rho_eta, spec.r_zeta

    eta, _ = circle_rule(n_eta, radius=rho)
    zeta, _ = circle_rule(n_zeta, radius=r_zeta)
    mu_nodes, _ = circle_rule(n_mu, radius=0.5 * (1.0 + tau))

    lam_xi = _log_lambda(spec.xi, spec.t, spec.m, spec.x)
    psi_z = _log_lambda(zeta, spec.t, spec.m, spec.x) - lam_xi
    psi_e = _log_lambda(eta, spec.t, spec.m, spec.x) - lam_xi
    with np.errstate(under="ignore"):
        expo = np.exp(psi_z[:, None] - psi_e[None, :])      # (zeta, eta)
    # dzeta/(2 pi i (zeta - eta)) on the trapezoid nodes
    cauchy = (zeta[None, :] / n_zeta) / (zeta[None, :] - eta[:, None])

    # mu-independent power factors of the bilateral series
    az = r_zeta / rho
    kp, kn = _tail_lengths(tau, az, _PRODUCT_TOL, 0.5 * (1.0 - tau))
    g = math.sqrt(rho * r_zeta)
    k = np.arange(kp + 1)
    j = np.arange(1, kn + 1)
    u_pos = np.power((math.sqrt(tau) / g) * zeta[:, None], k[None, :])
    v_pos = np.power(math.sqrt(tau) * g / eta[None, :], k[:, None])
    u_neg = np.power(g / zeta[:, None], j[None, :])
    v_neg = np.power(eta[None, :] / g, j[:, None])
    tau_k = tau ** k
    tau_j = tau ** j

    if tau > 0.0:
        n_prod = int(np.ceil(np.log(_PRODUCT_TOL) / np.log(tau)))
    else:
        n_prod = 1
    tau_prod = tau ** np.arange(n_prod)

    eye = np.eye(n_eta)
    total = 0.0 + 0.0j
    for mu in mu_nodes:
        c_pos = 1.0 / (1.0 - tau_k * mu)
        c_neg = 1.0 / (tau_j - mu)
        f_mat = u_pos @ (c_pos[:, None] * v_pos) \
            + u_neg @ (c_neg[:, None] * v_neg)
        jhat = (cauchy @ (expo * f_mat)) / n_eta
        prefactor = np.exp(np.sum(np.log(1.0 - mu * tau_prod)))
        total += prefactor * complex_det(eye + mu * jhat)
    return total / n_mu


def asep_height_cdf(params, t, x, s, sizes=(128, 96, 96)):
    """P(h(t, x) >= s) for the exclusion height started from a step.

    h is the corner-growth height coupled to the exclusion process with
    rates ``params``: h(t, 0) is twice the net particle current across
    the origin and h(0, x) = |x|.  Since h(t, x) = x (mod 2), the event
    is read through the integer m = ceil((s + x)/2):

        {h(t, x) >= s}  =  {at least m particles at or left of x},

    which holds with probability 1 when m <= 0 and is otherwise the
    tagged-particle event evaluated by the exact contour formula.  The
    formula's time variable is gamma * t.

    Parameters
    ----------
    params : AsepParams
    t : float
        Physical time, >= 0.
    x : int
        Observation site.
    s : int or float
        Height level.
    sizes : (n_mu, n_eta, n_zeta)
        Trapezoid point counts for the three circles.  The defaults are
        sized for t*gamma up to ~20 and gamma not too close to 0; the
        accuracy at other parameters should be certified by recomputing
        at doubled sizes.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    x = int(x)
    m = math.ceil((s + x) / 2.0)
    if m <= 0:
        return 1.0
    spec = TWKernelSpec.default(params, params.gamma * t, m, x)
    return float(np.real(_tw_contour_value(params, spec, sizes)))


# ----------------------------------------------------------------------
# weak-asymmetry bookkeeping
# ----------------------------------------------------------------------

def wasep_params(epsilon):
    """Rates at weak asymmetry: gamma = sqrt(epsilon)."""
    root = math.sqrt(epsilon)
    return AsepParams(0.5 * (1.0 - root), 0.5 * (1.0 + root))


def wasep_site(epsilon, X):
    """Integer lattice site for the continuum coordinate X."""
    return int(round(X / epsilon))


def wasep_m(epsilon, s, T, X):
    """Height-event integer matching a continuum query at scale (T, X).

    With t = eps^(-3/2) T and x the lattice site for X,

        m = floor(( eps^(-1/2) (-s + log(eps^(-1/2)/2) + X^2/(2T))
                    + t/2 + x ) / 2).

    Increasing s decreases m.  Feeding s_height = 2 m - x back into
    ``asep_height_cdf`` recovers exactly this m, so the pair of calls
    evaluates P(crossover height at (T, X) >= -s rescalings) through the
    exact finite-time formula.
    """
    if not 0.0 < epsilon <= 0.25:
        raise ValueError("epsilon must lie in (0, 1/4]")
    t = epsilon ** -1.5 * T
    x = wasep_site(epsilon, X)
    inner = epsilon ** -0.5 * (-s + math.log(0.5 * epsilon ** -0.5)
                               + X * X / (2.0 * T)) + 0.5 * t + x
    return int(math.floor(0.5 * inner))
