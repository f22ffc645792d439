"""
Exception hierarchy shared by every TaxiBounds module.

The CLI maps these onto exit codes (see app.py).
"""


class TaxiBoundsError(Exception):
    """Base exception for taxi-walk computations"""
    pass


class ComputationError(TaxiBoundsError):
    """A computation could not be carried out (bad input, missing data, divergence)"""
    pass


class InvariantViolation(TaxiBoundsError):
    """A lemma, property or cross-method consistency check failed"""
    pass


class ContourError(ComputationError):
    """Invalid hard-core configuration handed to the contour lab"""
    pass


class LongRunRefused(TaxiBoundsError):
    """A full-scale preset was requested without the long-run flag"""
    pass
