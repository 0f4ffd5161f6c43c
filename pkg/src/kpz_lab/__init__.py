"""kpz-lab: numerical laboratory for exact KPZ crossover statistics.

The package has three legs that check each other:

* exact one-point distributions of the KPZ crossover family computed from
  Fredholm determinants and contour integrals (``distributions``),
* exact finite-size height distributions for the asymmetric exclusion
  process computed from Fredholm determinants on circles (``asep_exact``),
* Monte Carlo simulation of the exclusion process / corner growth model and
  of discrete directed polymers (``asep_sim``, ``polymer``).

Everything downstream rests on the quadrature and determinant helpers in
``quadrature`` and the special-function wrappers in ``special``.
"""

from .quadrature import (
    gauss_legendre,
    interval_rule,
    panel_rule,
    semiinfinite_rule,
    circle_rule,
    hairpin_rule,
    complex_det,
)
from .special import airy_ai, airy_ai_prime, log_gamma, csc_power, gaussian_cdf
from . import fredholm
from . import distributions
from . import asep_exact
from . import asep_sim
from . import polymer

__version__ = "0.1.0"
