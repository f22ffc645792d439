"""
Contour Lab Module

Peierls contours of hard-core configurations with even boundary on U_n:
construction, the shift and reconstruction maps, exhaustive or sampled
property sweeps, and the geometric tail condition.
"""

from .box_config import BoxConfig
from .contour_builder import Contour, augment, build_contour, contour_to_taxi_walk
from .shift_maps import ShiftResult, best_shift, reconstruct, shift
from .config_sweep import (
    ContourReport,
    contour_checks,
    count_box_configs,
    enumerate_box_configs,
    run_contour_sweep,
    sample_box_configs,
)
from .peierls_tail import TailParams, TailReport, peierls_tail, tail_sum

__all__ = [
    'BoxConfig',
    'Contour',
    'augment',
    'build_contour',
    'contour_to_taxi_walk',
    'ShiftResult',
    'shift',
    'best_shift',
    'reconstruct',
    'ContourReport',
    'contour_checks',
    'count_box_configs',
    'enumerate_box_configs',
    'sample_box_configs',
    'run_contour_sweep',
    'TailParams',
    'TailReport',
    'peierls_tail',
    'tail_sum',
]
