"""Reference edge detectors for the comparison protocol: Canny and Sobel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.ndimage

from .imagecore import BinaryMap, GrayImage
from .phantoms import gaussian_blur
from .postprocess import hysteresis_threshold

AUTO = "auto"

_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
_SOBEL_Y = _SOBEL_X.T


@dataclass(frozen=True)
class CannyParams:
    """sigma in pixels; thresholds as quantile fractions of the nonzero
    gradient magnitude, or 'auto' (Otsu-derived, emulating the common
    default configuration)."""

    sigma: float = 2.0
    low_frac: object = 0.5
    high_frac: object = 0.8

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        explicit = self.low_frac != AUTO and self.high_frac != AUTO
        if explicit:
            if not (0.0 <= self.low_frac <= 1.0 and 0.0 <= self.high_frac <= 1.0):
                raise ValueError("quantile fractions must lie in [0, 1]")
            if self.low_frac > self.high_frac:
                raise ValueError("low_frac must not exceed high_frac")

    @classmethod
    def auto(cls) -> "CannyParams":
        return cls(sigma=math.sqrt(2.0), low_frac=AUTO, high_frac=AUTO)

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "low_frac": self.low_frac,
                "high_frac": self.high_frac}


def _gradients(pixels: np.ndarray, sigma: float):
    smoothed = gaussian_blur(pixels, sigma)
    gx = scipy.ndimage.correlate(smoothed, _SOBEL_X, mode="reflect")
    gy = scipy.ndimage.correlate(smoothed, _SOBEL_Y, mode="reflect")
    return np.hypot(gx, gy), gx, gy


def _non_maximum_suppression(mag: np.ndarray, gx: np.ndarray,
                             gy: np.ndarray) -> np.ndarray:
    """Keep pixels that are local maxima along the gradient direction,
    quantized to 4 bins."""
    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    h, w = mag.shape
    padded = np.pad(mag, 1, mode="constant")

    def shifted(dy, dx):
        return padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]

    bins = [
        ((angle < 22.5) | (angle >= 157.5), shifted(0, 1), shifted(0, -1)),
        ((angle >= 22.5) & (angle < 67.5), shifted(1, 1), shifted(-1, -1)),
        ((angle >= 67.5) & (angle < 112.5), shifted(1, 0), shifted(-1, 0)),
        ((angle >= 112.5) & (angle < 157.5), shifted(1, -1), shifted(-1, 1)),
    ]
    keep = np.zeros_like(mag, dtype=bool)
    for sel, qa, qb in bins:
        keep |= sel & (mag >= qa) & (mag >= qb)
    out = mag.copy()
    out[~keep] = 0.0
    return out


def _otsu(values: np.ndarray, bins: int = 256) -> float:
    hist, edges = np.histogram(values, bins=bins)
    hist = hist.astype(np.float64)
    centers = 0.5 * (edges[:-1] + edges[1:])
    total = hist.sum()
    if total == 0:
        return 0.0
    w0 = np.cumsum(hist)
    w1 = total - w0
    mu0 = np.cumsum(hist * centers) / np.where(w0 == 0, 1, w0)
    mu_total = (hist * centers).sum() / total
    mu1 = (mu_total * total - np.cumsum(hist * centers)) / np.where(w1 == 0, 1, w1)
    between = w0 * w1 * (mu0 - mu1) ** 2
    return float(centers[int(np.argmax(between))])


def canny(image: GrayImage, params: CannyParams) -> BinaryMap:
    """Gaussian smoothing, Sobel gradients, 4-bin non-maximum suppression,
    quantile (or Otsu 'auto') hysteresis."""
    mag, gx, gy = _gradients(image.pixels, params.sigma)
    # float dust from smoothing a flat image is not a gradient
    tiny = 1e-9 * max(1.0, float(np.abs(image.pixels).max()))
    mag[mag <= tiny] = 0.0
    nonzero = mag[mag > 0]
    if nonzero.size == 0:
        return BinaryMap(np.zeros_like(mag, dtype=bool))
    if params.low_frac == AUTO or params.high_frac == AUTO:
        high = _otsu(nonzero)
        low = 0.4 * high
    else:
        low = float(np.quantile(nonzero, params.low_frac))
        high = float(np.quantile(nonzero, params.high_frac))
    suppressed = _non_maximum_suppression(mag, gx, gy)
    if high <= 0:
        return BinaryMap(suppressed > 0)
    return hysteresis_threshold(suppressed / high, low / high, 1.0)


def sobel(image: GrayImage, threshold: float) -> BinaryMap:
    """3x3 Sobel magnitude, global threshold at threshold * max.

    Returns the raw thresholded map (threshold 0 keeps every pixel with a
    nonzero gradient); the benchmark harness thins all detector outputs per
    its comparison protocol.
    """
    if not (0.0 <= threshold <= 1.0):
        raise ValueError("threshold must lie in [0, 1]")
    gx = scipy.ndimage.correlate(image.pixels, _SOBEL_X, mode="reflect")
    gy = scipy.ndimage.correlate(image.pixels, _SOBEL_Y, mode="reflect")
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak == 0:
        return BinaryMap(np.zeros_like(mag, dtype=bool))
    if threshold == 0:
        return BinaryMap(mag > 0)
    return BinaryMap(mag >= threshold * peak)
