"""Exception types shared across the package."""


class DegeneracyError(Exception):
    """Geometric degeneracy: vanishing speed, curvature, torsion, or orientation."""


class FitError(Exception):
    """Constant fitting failed; the message carries the reason."""
