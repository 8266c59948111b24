"""Numerical Wiener-Hopf factorization of even fractional-order symbols,
a fractional Dirichlet solver on the interval, and verification of the
associated integration-by-parts and Pohozaev identities."""

from .grids import FreqGrid, SpaceGrid
from .cauchy import FreqSlice, SpaceSlice, h_minus, h_plus
from .symbols import RayAngle, Symbol, catalog_symbol
from .factorization import FactorizationResult, factorize_slice
from .operators import GridFunction, order_reduce
from .dirichlet import WeightedFn, solve_interval, weighted_trace
from .identities import IdentityReport, NonlinearSpec
from .schemas import ReportBundle, RunConfig
from .runner import run

__version__ = "0.1.0"

__all__ = [
    "FreqGrid", "SpaceGrid", "FreqSlice", "SpaceSlice", "h_plus", "h_minus",
    "RayAngle", "Symbol", "catalog_symbol", "FactorizationResult",
    "factorize_slice", "GridFunction", "order_reduce", "WeightedFn",
    "solve_interval", "weighted_trace", "IdentityReport", "NonlinearSpec",
    "ReportBundle", "RunConfig", "run", "__version__",
]
