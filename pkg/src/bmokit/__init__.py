"""Numerical toolkit for BMO norms on the unit circle.

Fourier/power series on the circle, Poisson and Green kernels, disk
quadrature, Garsia and Poisson-average BMO norms, Hardy-Stein type
identities, and checks of the associated sharp inequalities.
"""

from .circle_fn import AnalyticSeries, DiskPoint, FourierSeries, poisson_extend
from .errors import BMOError, DomainError, NumericalAbort, SingularityError
from .identities import CheckReport
from .inequalities import InequalityResult
from .norms import NormReport, SearchGrid, bmo1, bmo2, bmo_pair, bmo_star, garsia_at
from .quadrature import DiskQuadScheme

__all__ = [
    "AnalyticSeries", "FourierSeries", "DiskPoint", "poisson_extend",
    "BMOError", "DomainError", "NumericalAbort", "SingularityError",
    "CheckReport", "InequalityResult", "NormReport", "SearchGrid", "DiskQuadScheme",
    "bmo1", "bmo2", "bmo_pair", "bmo_star", "garsia_at",
]
__version__ = "0.1.0"
