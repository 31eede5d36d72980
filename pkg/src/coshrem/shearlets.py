"""Cone-adapted complex shearlet filter banks built in the frequency domain.

Each filter is a pair of real spatial kernels: an even-symmetric band-pass
kernel and its odd-symmetric Hilbert partner. Both live on the DFT grid of
the target image size, so analysis is a plain frequency-domain multiply.

Construction of the even generator, horizontal cone, scale ``j`` and integer
shear ``s``::

    E(xi1, xi2) = B(a_j * xi1) * exp(-0.5 * (g_j * (xi2/xi1 - s/2^L))^2)

with ``B(u) = u^2 exp(-u^2 sw^2 / 2)`` (Mexican-hat band profile, peak
normalized), ``a_j = 2^(-j / scales_per_octave)`` and the angular
concentration ``g_j`` growing as ``a_j^(alpha-1)`` so that wedges narrow
towards fine scales. The vertical cone swaps the frequency axes. Shears run
over the full integer range [-2^L, 2^L] at every scale, so one shear index
addresses the same orientation on all scales; the two boundary wedges shared
by both cones (the 45/135 degree diagonals) are stored once, as the mean of
the two cone constructions.

The odd partner is defined spectrally as ``O = -i * sign(xi_axis) * E``
where ``xi_axis`` is the cone's primary frequency axis and ``sign`` is
forced to zero on the DC and Nyquist lines so that the spatial kernel stays
exactly real and odd-symmetric on the grid.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

# Mapping from the two "support" parameters (pixels) to Gaussian widths.
# The band profile treats wavelet_support as ~8 sigma of the even kernel's
# envelope; the angular window treats gaussian_support as ~2 sigma of the
# transverse bump at the coarsest scale.
WAVELET_SUPPORT_SIGMAS = 8.0
TRANSVERSE_SUPPORT_SIGMAS = 2.0

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True)
class SystemParams:
    """The six numbers that define a shearlet system (for a given grid size)."""

    wavelet_support: float = 70.0
    gaussian_support: float = 25.0
    scales_per_octave: int = 2
    octaves: float = 3.5
    shear_level: int = 3
    alpha: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.scales_per_octave < 1:
            raise ValueError("scales_per_octave must be >= 1")
        if self.octaves <= 0:
            raise ValueError("octaves must be positive")
        if self.shear_level < 0:
            raise ValueError("shear_level must be nonnegative")
        if self.wavelet_support <= 0 or self.gaussian_support <= 0:
            raise ValueError("support parameters must be positive")
        if self.scale_count < 1:
            raise ValueError("octaves * scales_per_octave must round to >= 1")

    @property
    def scale_count(self) -> int:
        return int(round(self.octaves * self.scales_per_octave))

    @property
    def orientation_count(self) -> int:
        return 2 * (2 ** (self.shear_level + 1) + 1) - 2

    def to_dict(self) -> dict:
        return {
            "wavelet_support": self.wavelet_support,
            "gaussian_support": self.gaussian_support,
            "scales_per_octave": self.scales_per_octave,
            "octaves": self.octaves,
            "shear_level": self.shear_level,
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        return cls(**{k: d[k] for k in (
            "wavelet_support", "gaussian_support", "scales_per_octave",
            "octaves", "shear_level", "alpha")})


@dataclass(frozen=True)
class Orientation:
    """One distinct wedge direction: cone, integer shear and tangent angle."""

    cone: str
    shear: int
    angle: float  # degrees in [0, 180); tangent orientation of max response


def cache_key(params: SystemParams, width: int, height: int) -> str:
    """Deterministic digest of (params, grid size). Any field change changes it."""
    payload = json.dumps(
        {"params": params.to_dict(), "width": int(width), "height": int(height)},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("ascii")).hexdigest()


def _orientations(shear_level: int) -> list[Orientation]:
    """All distinct orientations, sorted by angle ascending."""
    smax = 2 ** shear_level
    entries = []
    for s in range(-smax, smax + 1):
        angle = (90.0 + math.degrees(math.atan2(s, smax))) % 180.0
        entries.append(Orientation(HORIZONTAL, s, angle))
    for s in range(-(smax - 1), smax):
        angle = (-math.degrees(math.atan2(s, smax))) % 180.0
        entries.append(Orientation(VERTICAL, s, angle))
    entries.sort(key=lambda o: o.angle)
    return entries


class ShearletFilter:
    """View of one filter in a ShearletSystem.

    ``spectrum`` is the complex transfer function whose inverse transform,
    correlated with an image, yields even coefficients in the real part and
    odd coefficients in the imaginary part.
    """

    def __init__(self, system: "ShearletSystem", scale_index: int, orient_index: int):
        self.system = system
        self.scale_index = scale_index
        self.orient_index = orient_index
        meta = system.orientations[orient_index]
        self.cone = meta.cone
        self.shear = meta.shear
        self.nominal_angle = meta.angle

    def even_spectrum(self) -> np.ndarray:
        """Real nonnegative spectrum of the even-symmetric kernel."""
        return self.system.even_spectra[self.scale_index, self.orient_index]

    def odd_spectrum(self) -> np.ndarray:
        """Purely imaginary spectrum of the odd (Hilbert) partner."""
        sgn = self.system.axis_sign(self.cone)
        return -1j * sgn * self.even_spectrum()

    @property
    def spectrum(self) -> np.ndarray:
        """Complex spectrum E - i*O combining the even/odd pair."""
        sgn = self.system.axis_sign(self.cone)
        return (self.even_spectrum() * (1.0 - sgn)).astype(np.complex128)


class ShearletSystem:
    """Immutable, calibrated bank of complex shearlet filters for one grid size.

    Filters are indexed ``scale * n_orientations + orient`` where orientations
    are sorted by angle. ``even_spectra`` has shape (J, N_or, height, width),
    float32. ``scale_gains`` holds one multiplicative calibration gain per
    scale (see :func:`calibrate_scales`).
    """

    def __init__(self, params: SystemParams, width: int, height: int,
                 even_spectra: np.ndarray, scale_gains: np.ndarray,
                 orientations: list[Orientation], key: str):
        self.params = params
        self.width = int(width)
        self.height = int(height)
        self.even_spectra = even_spectra
        self.scale_gains = np.asarray(scale_gains, dtype=np.float64)
        self.orientations = orientations
        self.cache_key = key
        self._signs = {}
        self.even_spectra.flags.writeable = False
        self.scale_gains.flags.writeable = False

    @property
    def n_scales(self) -> int:
        return self.even_spectra.shape[0]

    @property
    def n_orientations(self) -> int:
        return self.even_spectra.shape[1]

    @property
    def n_filters(self) -> int:
        return self.n_scales * self.n_orientations

    @property
    def angles(self) -> np.ndarray:
        return np.array([o.angle for o in self.orientations])

    def axis_sign(self, cone: str) -> np.ndarray:
        """sign(xi_axis) on the grid, zeroed on the DC and Nyquist lines."""
        if cone not in self._signs:
            n = self.width if cone == HORIZONTAL else self.height
            freqs = scipy.fft.fftfreq(n)
            sgn1d = np.sign(freqs)
            if n % 2 == 0:
                sgn1d[n // 2] = 0.0
            if cone == HORIZONTAL:
                self._signs[cone] = sgn1d[np.newaxis, :]
            else:
                self._signs[cone] = sgn1d[:, np.newaxis]
        return self._signs[cone]

    def filter_at(self, index: int) -> ShearletFilter:
        j, oi = divmod(index, self.n_orientations)
        return ShearletFilter(self, j, oi)

    @property
    def filters(self) -> list[ShearletFilter]:
        return [self.filter_at(i) for i in range(self.n_filters)]

    def scale_values(self) -> np.ndarray:
        spo = self.params.scales_per_octave
        return 2.0 ** (-np.arange(self.n_scales) / spo)


def _band_profile(u: np.ndarray, sigma_w: float) -> np.ndarray:
    """Peak-normalized Mexican-hat spectrum u^2 exp(-u^2 sigma_w^2 / 2)."""
    peak = (2.0 / sigma_w ** 2) * math.exp(-1.0)
    return (u * u) * np.exp(-0.5 * (u * sigma_w) ** 2) / peak


def _cone_spectra(params: SystemParams, width: int, height: int,
                  cone: str, shears: np.ndarray) -> np.ndarray:
    """Even spectra for one cone, shape (J, len(shears), height, width)."""
    xi_x = 2.0 * np.pi * scipy.fft.fftfreq(width)
    xi_y = 2.0 * np.pi * scipy.fft.fftfreq(height)
    if cone == HORIZONTAL:
        xi_band = xi_x[np.newaxis, :]
        xi_trans = xi_y[:, np.newaxis]
        delta = 2.0 * np.pi / width
    else:
        xi_band = xi_y[:, np.newaxis]
        xi_trans = xi_x[np.newaxis, :]
        delta = 2.0 * np.pi / height
    # slope of the frequency vector against the cone's primary axis,
    # guarded on the xi_band = 0 line (where the band profile vanishes)
    safe = np.maximum(np.abs(xi_band), delta)
    slope = xi_trans * np.where(xi_band < 0, -1.0, 1.0) / safe

    sigma_w = params.wavelet_support / WAVELET_SUPPORT_SIGMAS
    sigma_g = params.gaussian_support / TRANSVERSE_SUPPORT_SIGMAS
    xi_peak = math.sqrt(2.0) / sigma_w
    gamma0 = xi_peak * sigma_g

    J = params.scale_count
    smax = 2 ** params.shear_level
    out = np.empty((J, len(shears), height, width), dtype=np.float32)
    for j in range(J):
        a_j = 2.0 ** (-j / params.scales_per_octave)
        band = _band_profile(a_j * xi_band, sigma_w)
        gamma_j = gamma0 * a_j ** (params.alpha - 1.0)
        for k, s in enumerate(shears):
            window = np.exp(-0.5 * (gamma_j * (slope - s / smax)) ** 2)
            out[j, k] = band * window
    return out


def _symmetrize(spectra: np.ndarray) -> None:
    """Force exact F(k) = F(-k mod n) grid symmetry, in place."""
    h, w = spectra.shape[-2:]
    flip_y = (-np.arange(h)) % h
    flip_x = (-np.arange(w)) % w
    flipped = spectra[..., flip_y[:, None], flip_x[None, :]]
    spectra += flipped
    spectra *= 0.5


def build_system(params: SystemParams, width: int, height: int,
                 calibrate: bool = True) -> ShearletSystem:
    """Construct (and by default calibrate) a shearlet system for a grid size.

    Raises ValueError for grids smaller than 8 pixels on a side or invalid
    parameters.
    """
    if width < 8 or height < 8:
        raise ValueError(
            f"grid {width}x{height} too small for shearlet analysis (min 8x8)")
    smax = 2 ** params.shear_level
    orientations = _orientations(params.shear_level)

    hor_shears = np.array([o.shear for o in orientations if o.cone == HORIZONTAL])
    ver_shears = np.array([o.shear for o in orientations if o.cone == VERTICAL])
    hor = _cone_spectra(params, width, height, HORIZONTAL, hor_shears)
    ver = _cone_spectra(params, width, height, VERTICAL, ver_shears)

    # The +-2^L boundary wedges exist in both cones; store their mean once,
    # under the horizontal label.
    ver_at_boundary = _cone_spectra(params, width, height, VERTICAL,
                                    np.array([-smax, smax]))
    for k, s in enumerate(hor_shears):
        if abs(s) == smax:
            b = 0 if s == -smax else 1
            hor[:, k] = 0.5 * (hor[:, k] + ver_at_boundary[:, b])

    J = params.scale_count
    n_or = len(orientations)
    spectra = np.empty((J, n_or, height, width), dtype=np.float32)
    hi = vi = 0
    for oi, o in enumerate(orientations):
        if o.cone == HORIZONTAL:
            spectra[:, oi] = hor[:, hi]
            hi += 1
        else:
            spectra[:, oi] = ver[:, vi]
            vi += 1
    _symmetrize(spectra)
    spectra[..., 0, 0] = 0.0  # zero DC, exactly

    key = cache_key(params, width, height)
    system = ShearletSystem(params, width, height, spectra,
                            np.ones(J), orientations, key)
    if calibrate:
        system = calibrate_scales(system)
    return system


def unit_step_image(width: int, height: int) -> np.ndarray:
    """The calibration target: vertical 0 -> 1 step, jump at column width//2.

    Jump columns hold 0.5 (the sampled ideal step with the jump at a sample
    point), so even-symmetric responses vanish exactly there. Analysis is
    periodic, so the wrap-around jump at the last column is aligned the same
    way; both edges then carry identical profiles and the per-scale peak sits
    exactly on the jump columns.
    """
    img = np.zeros((height, width), dtype=np.float64)
    img[:, width // 2] = 0.5
    img[:, width // 2 + 1:width - 1] = 1.0
    img[:, width - 1] = 0.5
    return img


def calibrate_scales(system: ShearletSystem) -> ShearletSystem:
    """Set per-scale gains so the ideal unit step has peak odd response 1.0.

    The probe is the shear-0 horizontal-cone filter of each scale applied to
    a vertical unit step of the system's own size. Recomputes gains from
    scratch, so calibrating twice is a no-op.
    """
    oi0 = next(i for i, o in enumerate(system.orientations)
               if o.cone == HORIZONTAL and o.shear == 0)
    step = unit_step_image(system.width, system.height)
    fstep = scipy.fft.fft2(step)
    sgn = system.axis_sign(HORIZONTAL)
    gains = np.empty(system.n_scales)
    for j in range(system.n_scales):
        spec = system.even_spectra[j, oi0] * (1.0 - sgn)
        plane = scipy.fft.ifft2(fstep * np.conj(spec))
        peak = float(np.abs(plane.imag).max())
        if peak < 1e-12:
            raise ValueError(
                f"degenerate filter: scale {j} has no response to the unit step")
        gains[j] = 1.0 / peak
    return ShearletSystem(system.params, system.width, system.height,
                          system.even_spectra, gains, system.orientations,
                          system.cache_key)
