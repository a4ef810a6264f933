"""Direction-estimation error metrics with 0/360 wraparound handling."""

import numpy as np

from gaitradar.errors import ParameterError


def circular_error(true_deg, pred_deg):
    """Great-circle angular difference in degrees, in [0, 180]."""
    diff = np.abs(np.asarray(true_deg, dtype=float) - np.asarray(pred_deg, dtype=float)) % 360.0
    return np.minimum(diff, 360.0 - diff)


def mse_by_direction(truths_deg, preds_deg):
    """Per-direction mean squared circular error and its square root.

    Returns (directions, mse, rmse) with directions sorted ascending.
    """
    truths = np.asarray(truths_deg, dtype=float)
    preds = np.asarray(preds_deg, dtype=float)
    if truths.size == 0:
        raise ParameterError("need at least one prediction")
    errs = circular_error(truths, preds) ** 2
    directions = np.unique(truths)
    mse = np.array([errs[truths == d].mean() for d in directions])
    return directions, mse, np.sqrt(mse)


def prob_within(errors_deg, thresholds_deg=(5.0, 10.0, 15.0, 20.0)):
    """Fraction of errors strictly below each threshold."""
    errs = np.asarray(errors_deg, dtype=float)
    if errs.size == 0:
        raise ParameterError("need at least one error")
    return {float(t): float(np.mean(errs < t)) for t in thresholds_deg}
