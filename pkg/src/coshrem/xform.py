"""Complex shearlet analysis of an image: frequency-domain correlation.

Boundary semantics are periodic (circular). Shift covariance is therefore
exact; images whose content matters near the border should be padded by at
least the wavelet support before analysis.
"""

from __future__ import annotations

import numpy as np
import scipy.fft

from .imagecore import GrayImage
from .shearlets import HORIZONTAL, VERTICAL, ShearletSystem


class CoefficientVolume:
    """Per-pixel complex coefficients for every filter of a system.

    ``stack`` has shape (n_scales, n_orientations, height, width),
    complex128: real part = even-symmetric coefficient, imaginary part =
    odd-symmetric coefficient. Filter index order matches the system
    (scale-major).
    """

    def __init__(self, stack: np.ndarray, system_key: str):
        self.stack = stack
        self.system_key = system_key

    @property
    def height(self) -> int:
        return self.stack.shape[2]

    @property
    def width(self) -> int:
        return self.stack.shape[3]

    @property
    def n_scales(self) -> int:
        return self.stack.shape[0]

    @property
    def n_orientations(self) -> int:
        return self.stack.shape[1]

    @property
    def even(self) -> np.ndarray:
        return self.stack.real

    @property
    def odd(self) -> np.ndarray:
        return self.stack.imag


def analyze(system: ShearletSystem, image: GrayImage) -> CoefficientVolume:
    """Correlate the image with every filter of the system.

    The per-scale calibration gains are applied here, so coefficient
    magnitudes are directly comparable to the image's intensity contrasts
    (a unit step peaks at odd coefficient 1.0 on every scale).
    """
    if (image.height, image.width) != (system.height, system.width):
        raise ValueError(
            f"image {image.width}x{image.height} does not match system "
            f"{system.width}x{system.height}")
    if not np.all(np.isfinite(image.pixels)):
        raise ValueError("image contains non-finite pixel values")

    fimg = scipy.fft.fft2(image.pixels)
    # conj(spectrum) with spectrum = E*(1-sign); both factors are real
    masked = {
        cone: fimg * (1.0 - system.axis_sign(cone))
        for cone in (HORIZONTAL, VERTICAL)
    }
    J, n_or = system.n_scales, system.n_orientations
    stack = np.empty((J, n_or, system.height, system.width), dtype=np.complex128)
    for oi, orient in enumerate(system.orientations):
        fcone = masked[orient.cone]
        for j in range(J):
            prod = fcone * (system.even_spectra[j, oi] * system.scale_gains[j])
            stack[j, oi] = scipy.fft.ifft2(prod, overwrite_x=True)
    return CoefficientVolume(stack, system.cache_key)


def coefficients_at(volume: CoefficientVolume, x: int, y: int) -> list[tuple[int, complex]]:
    """All (filter index, coefficient) pairs at one pixel, filter-index order."""
    if not (0 <= x < volume.width and 0 <= y < volume.height):
        raise IndexError(f"pixel ({x}, {y}) out of bounds "
                         f"{volume.width}x{volume.height}")
    values = volume.stack[:, :, y, x].reshape(-1)
    return [(i, complex(v)) for i, v in enumerate(values)]
