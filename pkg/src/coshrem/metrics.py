"""Pratt's figure of merit and the exact Euclidean distance transform."""

from __future__ import annotations

import numpy as np
import scipy.ndimage

from .imagecore import BinaryMap

PRATT_A = 1.0 / 9.0


def distance_transform(reference: BinaryMap) -> np.ndarray:
    """Exact Euclidean distance (pixels) to the nearest on-pixel."""
    if not reference.mask.any():
        raise ValueError("distance transform of an empty reference is undefined")
    return scipy.ndimage.distance_transform_edt(~reference.mask)


def pfom(detected: BinaryMap, truth: BinaryMap, a: float = PRATT_A) -> float:
    """Pratt's figure of merit in [0, 1].

    score = 1/max(N_t, N_d) * sum over detected pixels of 1/(1 + a d^2)
    with d the exact Euclidean distance to the nearest truth pixel.
    Conventions: both maps empty -> 1.0 (perfect agreement); detected empty
    or truth empty (but not both) -> 0.0.
    """
    if detected.mask.shape != truth.mask.shape:
        raise ValueError(
            f"dimension mismatch: {detected.mask.shape} vs {truth.mask.shape}")
    if a <= 0:
        raise ValueError("the distance weight a must be positive")
    n_d = detected.count()
    n_t = truth.count()
    if n_d == 0 and n_t == 0:
        return 1.0
    if n_d == 0 or n_t == 0:
        return 0.0
    d = distance_transform(truth)[detected.mask]
    return float(np.sum(1.0 / (1.0 + a * d * d)) / max(n_d, n_t))
