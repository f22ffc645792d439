"""
TaxiBounds

Exact enumeration and certified bounds for taxi walks on the oriented
Manhattan lattice: walk and bridge counts, the transfer-matrix bound, the
mistake-avoiding word bound and the bridge lower bounds.
"""

from .errors import ComputationError, ContourError, InvariantViolation, LongRunRefused, TaxiBoundsError
from .bound_report import BoundReport
from .count_table import CountTable
from .int_series import IntSeries
from .walkcount import TaxiWalk, count_taxi_walks, enumerate_taxi_walks, fibonacci_bound, subadditive_upper_bound
from .bridgecount import (
    bridge_lower_bound,
    count_bridges,
    enumerate_irreducible_bridges,
    irreducible_from_bridges,
    irreducible_lower_bound,
)
from .almbound import TransferMatrix, alm_upper_bound, build_transfer_matrix, dominant_eigenvalue_upper
from .gjbound import MistakeSet, TaxiPolygon, count_avoiding_words, enumerate_taxi_polygons, gj_upper_bound

__all__ = [
    'TaxiBoundsError',
    'ComputationError',
    'InvariantViolation',
    'ContourError',
    'LongRunRefused',
    'BoundReport',
    'CountTable',
    'IntSeries',
    'TaxiWalk',
    'count_taxi_walks',
    'enumerate_taxi_walks',
    'fibonacci_bound',
    'subadditive_upper_bound',
    'count_bridges',
    'irreducible_from_bridges',
    'enumerate_irreducible_bridges',
    'bridge_lower_bound',
    'irreducible_lower_bound',
    'TransferMatrix',
    'build_transfer_matrix',
    'dominant_eigenvalue_upper',
    'alm_upper_bound',
    'MistakeSet',
    'TaxiPolygon',
    'enumerate_taxi_polygons',
    'count_avoiding_words',
    'gj_upper_bound',
]
