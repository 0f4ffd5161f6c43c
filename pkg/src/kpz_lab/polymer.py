"""Directed polymers on the discrete lattice, and their zero-noise limits.

A polymer path is a simple-random-walk trajectory (i, pi(i)), i = 0..n,
pi(0) = 0, |pi(i) - pi(i-1)| = 1, collecting i.i.d. weights w_{i,j} on
the sites it visits.  The point-to-point partition function

    Z(n, y) = sum over paths ending at (n, y) of exp(beta * sum of w)

is computed three ways that must agree: brute-force enumeration over
all 2^n step sequences (the oracle, n <= 22), a level-by-level transfer
recursion in the log domain (usable to n ~ 10^4), and, at zero
temperature, a dynamic-programming maximum (last-passage percolation).
The normalized form Ztilde = Z / 2^n obeys

    Ztilde(n, y) = 1/2 (Ztilde(n-1, y-1) + Ztilde(n-1, y+1)) * e^{beta w_{n,y}}

which is a lattice regularization of the multiplicative-noise heat
equation; with the weight factor recentered to mean one it is a
martingale in n, the basis of the weak-noise checks here.
"""

import math
from dataclasses import dataclass

import numpy as np

_DISTS = ("normal", "exponential", "zero")


@dataclass(frozen=True)
class DisorderField:
    """I.i.d. site weights on the lattice cone reachable from (0, 0).

    Row i holds the i+1 weights at sites j = -i, -i+2, ..., i.  Rows are
    drawn lazily from a counter-based stream keyed by (seed, level), so
    w_{i,j} is a pure function of (seed, i, j) and fields of any size
    cost nothing until read.  dist is one of "normal" (standard
    normal), "exponential" (Exp(1) - 1, centered), or "zero".
    """

    n: int
    dist: str = "normal"
    seed: int = 0

    def __post_init__(self):
        if self.dist not in _DISTS:
            raise ValueError("dist must be one of %s" % (_DISTS,))
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    def row(self, i):
        """Weights at level i on sites j = -i..i (step 2)."""
        if not 0 <= i <= self.n:
            raise ValueError("level outside field")
        if self.dist == "zero":
            return np.zeros(i + 1)
        key = np.array([self.seed & (2**64 - 1), i], dtype=np.uint64)
        rng = np.random.Generator(np.random.Philox(key=key))
        if self.dist == "normal":
            return rng.standard_normal(i + 1)
        return rng.exponential(1.0, size=i + 1) - 1.0

    def weight(self, i, j):
        if (i + j) % 2 != 0:
            raise ValueError("site (%d, %d) violates path parity" % (i, j))
        if abs(j) > i:
            raise ValueError("site (%d, %d) is unreachable from (0, 0)" % (i, j))
        return self.row(i)[(j + i) // 2]

    def log_weight_mgf(self, beta):
        """log E[e^{beta w}], when it exists in closed form."""
        if self.dist == "zero":
            return 0.0
        if self.dist == "normal":
            return 0.5 * beta * beta
        # centered exponential: E e^{beta (E-1)} = e^{-beta}/(1-beta)
        if beta >= 1.0:
            raise ValueError("exponential weights have no moment at beta >= 1")
        return -beta - math.log1p(-beta)


@dataclass(frozen=True)
class PartitionArray:
    """Log-domain normalized partition values at one level.

    log_values[k] = log Ztilde(level, j) at j = -level + 2k; sites of
    the opposite parity do not exist and are rejected on access.
    """

    level: int
    log_values: np.ndarray

    @property
    def sites(self):
        return np.arange(-self.level, self.level + 1, 2)

    @property
    def parity(self):
        return self.level % 2

    def log_value(self, j):
        if (self.level + j) % 2 != 0:
            raise ValueError("site %d has wrong parity at level %d"
                             % (j, self.level))
        if abs(j) > self.level:
            raise ValueError("site %d unreachable at level %d" % (j, self.level))
        return self.log_values[(j + self.level) // 2]

    def value(self, j):
        return math.exp(self.log_value(j))


def _check_endpoint(n, y):
    if abs(y) > n:
        raise ValueError("|y| must not exceed n")
    if (n + y) % 2 != 0:
        raise ValueError("(n + y) must be even")


def partition_enumerate(field, n, y, beta, log=False):
    """Point-to-point partition function by exhaustive path enumeration.

    Sums exp(beta * path weight) over every simple-random-walk bridge
    from (0,0) to (n,y), visiting all 2^n step sequences in vectorized
    chunks and accumulating in log-sum-exp.  The 2^n bound restricts
    n <= 22.  With log=True the log-partition value is returned, which
    stays finite for large beta.
    """
    if n > 22:
        raise ValueError("enumeration bound is n <= 22")
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check_endpoint(n, y)
    rows = [field.row(i) for i in range(n + 1)]
    if n == 0:
        total = beta * rows[0][0]
        return total if log else math.exp(total)

    chunk_bits = min(n, 16)
    steps_template = np.empty((1 << chunk_bits, n), dtype=np.int8)
    log_total = -np.inf
    for base in range(0, 1 << n, 1 << chunk_bits):
        codes = base + np.arange(1 << chunk_bits)
        for b in range(n):
            steps_template[:, b] = ((codes >> b) & 1) * 2 - 1
        pos = np.cumsum(steps_template, axis=1)
        keep = pos[:, -1] == y
        if not np.any(keep):
            continue
        pos_k = pos[keep]
        path_w = np.full(pos_k.shape[0], rows[0][0])
        for i in range(1, n + 1):
            path_w += rows[i][(pos_k[:, i - 1] + i) >> 1]
        log_total = np.logaddexp(log_total, _logsumexp(beta * path_w))
    return float(log_total) if log else float(math.exp(log_total))


def _logsumexp(a):
    m = np.max(a)
    if not np.isfinite(m):
        return m
    return m + math.log(np.sum(np.exp(a - m)))


def partition_transfer(field, n, beta, centered=False):
    """Normalized partition values Ztilde(n, .) by the transfer recursion.

    Runs the half-weighted two-point recursion in the log domain, one
    level per step, so n ~ 10^4 at beta ~ 1 is routine.  Ztilde relates
    to the unnormalized sum by Ztilde = Z / 2^n exactly.  With
    centered=True every weight factor e^{beta w} is divided by its mean
    E[e^{beta w}], making Ztilde a martingale in n with
    E[Ztilde(n, y)] equal to the walk occupation probability.
    """
    if not 0 <= n <= field.n:
        raise ValueError("field does not cover level n")
    c = field.log_weight_mgf(beta) if centered else 0.0
    log_z = np.array([beta * field.row(0)[0] - c])
    for i in range(1, n + 1):
        padded = np.concatenate([[-np.inf], log_z, [-np.inf]])
        log_z = (np.logaddexp(padded[:-1], padded[1:]) - math.log(2.0)
                 + beta * field.row(i) - c)
    return PartitionArray(level=n, log_values=log_z)


def endpoint_law(field, n, y, m, beta):
    """Quenched law of the polymer midpoint pi(m) given endpoint (n, y).

    P(pi(m) = x) = Z(0,0; m,x) * Z(m,x; n,y) / Z(0,0; n,y): the forward
    and backward partition arrays are combined in the log domain and
    divided by an independently computed full partition value, so the
    reported law sums to one only up to the consistency of the three
    quantities (a test point, not an enforced normalization).
    Returns (sites, probabilities) at level m.
    """
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    _check_endpoint(n, y)
    # forward, unnormalized: log Z(0,0; m, x)
    fwd = partition_transfer(field, m, beta).log_values + m * math.log(2.0)
    # backward: log Z(m, x; n, y) collecting weights on levels m+1..n
    width = n - m
    bwd_sites = np.arange(y - 0, y + 1, 2)  # level n: single site y
    log_b = np.zeros(1)
    for i in range(n - 1, m - 1, -1):
        # sites at level i reachable to (n, y): |j - y| <= n - i
        lo = max(-i, y - (n - i))
        hi = min(i, y + (n - i))
        sites_i = np.arange(lo, hi + 1, 2)
        row_next = field.row(i + 1)
        nxt = np.full(sites_i.size, -np.inf)
        for k, j in enumerate(sites_i):
            for j2 in (j - 1, j + 1):
                if bwd_sites[0] <= j2 <= bwd_sites[-1]:
                    idx = (j2 - bwd_sites[0]) // 2
                    cand = beta * row_next[(j2 + i + 1) // 2] + log_b[idx]
                    nxt[k] = np.logaddexp(nxt[k], cand)
        bwd_sites, log_b = sites_i, nxt
    # align backward support with the full level-m lattice
    full_sites = np.arange(-m, m + 1, 2)
    log_bwd = np.full(full_sites.size, -np.inf)
    sel = (full_sites >= bwd_sites[0]) & (full_sites <= bwd_sites[-1])
    log_bwd[sel] = log_b[(full_sites[sel] - bwd_sites[0]) // 2]

    log_total = (partition_transfer(field, n, beta).log_value(y)
                 + n * math.log(2.0))
    probs = np.exp(fwd + log_bwd - log_total)
    return full_sites, probs


def last_passage(field, n, y):
    """Maximal path weight from (0,0) to (n,y) (zero-temperature limit)."""
    _check_endpoint(n, y)
    g = np.array([field.row(0)[0]])
    for i in range(1, n + 1):
        padded = np.concatenate([[-np.inf], g, [-np.inf]])
        g = np.maximum(padded[:-1], padded[1:]) + field.row(i)
    return float(g[(y + n) // 2])


@dataclass(frozen=True)
class WeakNoiseSample:
    """One renormalized partition observation under weak-noise scaling."""

    value: float      # Ztilde at the scaled endpoint, mean-one weights
    expected: float   # its exact expectation (walk occupation probability)

    @property
    def centered(self):
        return self.value - self.expected

    @property
    def ratio(self):
        return self.value / self.expected


def intermediate_disorder_sample(alpha, epsilon, T, X, seed):
    """Partition value at inverse temperature eps*alpha on the long lattice.

    Uses path length n = eps^{-4} T and endpoint y = eps^{-2} X (rounded
    to the lattice, y bumped by one when the parities of n and y
    disagree), with standard-normal weights and mean-one weight factors,
    so the returned value has expectation exactly the walk occupation
    probability and fluctuations that grow with alpha.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = int(round(T * epsilon ** -4))
    if n > 10 ** 6:
        raise ValueError("resource bound: eps^{-4} T must stay <= 1e6")
    if n < 0:
        raise ValueError("T must be nonnegative")
    y = int(round(X * epsilon ** -2))
    if (n + y) % 2 != 0:
        y += 1
    if abs(y) > n:
        raise ValueError("endpoint outside the lattice cone")
    beta = epsilon * alpha
    field = DisorderField(n=n, dist="normal", seed=seed)
    arr = partition_transfer(field, n, beta, centered=True)
    value = arr.value(y)
    k = (y + n) // 2
    log_occ = (_log_binom(n, k) - n * math.log(2.0))
    return WeakNoiseSample(value=float(value), expected=math.exp(log_occ))


def _log_binom(n, k):
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


def martingale_W(field, n, beta):
    """Point-to-line partition value normalized to a mean-one martingale.

    W_n = sum over endpoints y of Z(n, y), divided by 2^n E[e^{beta w}]^{n+1}
    (n+1 weights on a path).  Requires a weight distribution with a
    closed-form exponential moment.  E[W_n] = 1 for every n, and W_n > 0.
    """
    if not 0 <= n <= field.n:
        raise ValueError("field does not cover level n")
    c = field.log_weight_mgf(beta)  # raises when no closed form exists
    arr = partition_transfer(field, n, beta)
    return float(math.exp(_logsumexp(arr.log_values) - (n + 1) * c))
