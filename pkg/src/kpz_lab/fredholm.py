"""Nystrom discretization of Fredholm determinants.

A trace-class kernel K on L^2(J), discretized on quadrature nodes x_i with
positive weights w_i, becomes the matrix M_ij = sqrt(w_i w_j) K(x_i, x_j)
(the symmetrized weighting keeps real symmetric kernels symmetric; the
determinant is the same as for the plain one-sided weighting).  Kernels
living on complex contours carry oriented complex weights instead, and the
plain one-sided weighting is used.

Resolution certificates are computed by re-running a calculation with all
node counts scaled up and comparing; there is no error *estimate* anywhere,
only this direct self-consistency check.
"""

import numpy as np

from .quadrature import complex_det

__all__ = [
    "nystrom_det",
    "contour_det",
    "composed_kernel_matrix",
    "resolution_certificate",
]


def nystrom_det(kernel_matrix, weights):
    """det(I - K) for a kernel sampled on real nodes with weights > 0.

    Parameters
    ----------
    kernel_matrix : (n, n) ndarray, real or complex
        K(x_i, x_j) on the quadrature nodes.
    weights : (n,) ndarray
        Positive quadrature weights for the underlying rule.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("nystrom_det expects positive weights")
    sw = np.sqrt(w)
    m = kernel_matrix * sw[:, None] * sw[None, :]
    return complex_det(np.eye(len(w)) - m)


def contour_det(kernel_matrix, dz, prefactor=1.0):
    """det(I - c * K) for a kernel on a contour with oriented weights dz.

    The matrix acting on samples is K(z_i, z_j) * dz_j * prefactor.
    """
    dz = np.asarray(dz, dtype=complex)
    m = prefactor * kernel_matrix * dz[None, :]
    return complex_det(np.eye(len(dz)) - m)


def composed_kernel_matrix(left, sigma_weights, right=None):
    """Kernel matrix of an integral-composed operator.

    Builds K(x_i, x_j) = sum_q left[i, q] * sigma_weights[q] * right[j, q],
    the discretization of K(x, y) = int sigma(t) L(x + t) R(y + t) dt with
    the t-quadrature folded into sigma_weights.  ``right`` defaults to
    ``left`` (symmetric kernels).
    """
    if right is None:
        right = left
    sig = np.asarray(sigma_weights)
    if np.iscomplexobj(sig) and not np.iscomplexobj(left):
        # two real GEMMs instead of one complex one: A diag(re+im*i) B^T
        re = (left * sig.real[None, :]) @ right.T
        im = (left * sig.imag[None, :]) @ right.T
        return re + 1j * im
    return (left * sig[None, :]) @ right.T


def resolution_certificate(value_fn, base, factor=1.5):
    """Self-consistency check of a resolution-dependent quantity.

    Evaluates ``value_fn`` at the integer node count ``base`` and at
    ``ceil(base * factor)`` and returns (value, delta) where value is the
    higher-resolution result and delta the absolute difference.
    """
    n_hi = int(np.ceil(base * factor))
    v_lo = value_fn(base)
    v_hi = value_fn(n_hi)
    return v_hi, abs(v_hi - v_lo)
