"""Scaled hypercomplex numbers H_t and analysis built on them.

``H_t`` is the real algebra spanned by ``1, i, j, k`` with ``i^2 = -1`` and
``j^2 = k^2 = t``.  The package covers arithmetic and adjoints, matrices
over ``H_t``, left power series with the star product, Blaschke factors
and interpolation, Fueter-type variables, and state-space realizations.
"""

from . import certify, fueter, hardy, htmatrix, hypercomplex, jets, rational, series
from .errors import HTError
from .hardy import (
    bracket_blaschke,
    blaschke_circled,
    hardy_inner,
    solve_one_point,
    theta_certificates,
    theta_interpolate,
)
from .htmatrix import HMatrix, gram_points, minvert, mnorm_op, stein_solve
from .hypercomplex import AdjointKind, HElem, NormKind, basis, cayley_table
from .jets import Jet
from .rational import Realization, rinverse, rmul, rsum, to_series
from .series import PowerSeries, eval_series, star_inverse, star_mul

__version__ = "0.1.0"

__all__ = [
    "AdjointKind",
    "HElem",
    "HMatrix",
    "HTError",
    "Jet",
    "NormKind",
    "PowerSeries",
    "Realization",
    "basis",
    "blaschke_circled",
    "bracket_blaschke",
    "cayley_table",
    "certify",
    "eval_series",
    "fueter",
    "gram_points",
    "hardy",
    "hardy_inner",
    "htmatrix",
    "hypercomplex",
    "jets",
    "minvert",
    "mnorm_op",
    "rational",
    "rinverse",
    "rmul",
    "rsum",
    "series",
    "solve_one_point",
    "star_inverse",
    "star_mul",
    "stein_solve",
    "theta_certificates",
    "theta_interpolate",
    "to_series",
]
