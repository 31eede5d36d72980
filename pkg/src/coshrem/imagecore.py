"""Grayscale image containers, PGM/PNG I/O and RGB rendering helpers.

Intensities are carried as unclamped floats on a nominal [0, 255] scale;
clamping and quantization happen only when an image is written to disk.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

DARK_RED = np.array([170.0, 20.0, 20.0])
LIGHT_BLUE = np.array([120.0, 200.0, 255.0])
UNDEFINED_COLOR = np.array([255.0, 255.0, 255.0])


class ImageFormatError(ValueError):
    """Raised for unreadable, non-grayscale or unsupported image files."""


@dataclass(frozen=True)
class GrayImage:
    """Real-valued grayscale raster, row-major, nominal range [0, 255]."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2:
            raise ValueError(f"expected 2D pixel array, got shape {px.shape}")
        px = np.ascontiguousarray(px)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def data(self) -> np.ndarray:
        """Flat row-major view of the intensities."""
        return self.pixels.reshape(-1)


@dataclass(frozen=True)
class BinaryMap:
    """Boolean per-pixel mask with the same dimension contract as GrayImage."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.ndim != 2:
            raise ValueError(f"expected 2D mask, got shape {m.shape}")
        m = np.ascontiguousarray(m)
        m.flags.writeable = False
        object.__setattr__(self, "mask", m)

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    def count(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class RgbImage:
    """8-bit three-channel image."""

    channels: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.channels, dtype=np.uint8)
        if c.ndim != 3 or c.shape[2] != 3:
            raise ValueError(f"expected (h, w, 3) array, got shape {c.shape}")
        c = np.ascontiguousarray(c)
        c.flags.writeable = False
        object.__setattr__(self, "channels", c)

    @property
    def height(self) -> int:
        return self.channels.shape[0]

    @property
    def width(self) -> int:
        return self.channels.shape[1]


def _read_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:2] != b"P5":
        raise ImageFormatError(f"{path}: not a binary (P5) PGM file")
    # header = magic, width, height, maxval; '#' comments allowed between tokens
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError(f"{path}: truncated PGM header")
        tokens.append(raw[start:pos])
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = (int(t) for t in tokens)
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: invalid PGM dimensions {width}x{height}")
    if maxval < 1 or maxval > 65535:
        raise ImageFormatError(f"{path}: unsupported PGM maxval {maxval}")
    count = width * height
    if maxval < 256:
        data = np.frombuffer(raw, dtype=np.uint8, count=count, offset=pos)
        scale = 255.0 / maxval if maxval != 255 else 1.0
        pixels = data.astype(np.float64) * scale
    else:
        data = np.frombuffer(raw, dtype=">u2", count=count, offset=pos)
        pixels = data.astype(np.float64) / 257.0
    return pixels.reshape(height, width)


def load_gray(path: str) -> GrayImage:
    """Load an 8/16-bit grayscale PGM or PNG, mapped to the [0, 255] scale.

    16-bit samples are divided by 257 so that 0 -> 0.0 and 65535 -> 255.0
    exactly. Color input is rejected.
    """
    if not os.path.exists(path):
        raise ImageFormatError(f"{path}: file does not exist")
    ext = os.path.splitext(path)[1].lower()
    if ext == ".pgm":
        return GrayImage(_read_pgm(path))
    try:
        img = Image.open(path)
        img.load()
    except Exception as exc:
        raise ImageFormatError(f"{path}: unreadable image ({exc})") from exc
    if img.mode == "L":
        pixels = np.asarray(img, dtype=np.float64)
    elif img.mode in ("I;16", "I;16B", "I;16L", "I"):
        arr = np.asarray(img, dtype=np.float64)
        if img.mode == "I" and arr.max(initial=0.0) > 65535:
            raise ImageFormatError(f"{path}: unsupported bit depth (>16)")
        pixels = arr / 257.0
    else:
        raise ImageFormatError(
            f"{path}: mode {img.mode!r} is not grayscale; convert before loading"
        )
    return GrayImage(pixels)


def _quantize(pixels: np.ndarray, maxval: int) -> np.ndarray:
    scaled = pixels * (maxval / 255.0)
    # round half up, then clamp
    return np.clip(np.floor(scaled + 0.5), 0, maxval)


def save_gray(img: GrayImage, path: str) -> None:
    """Write as 8-bit PGM or PNG chosen by extension, clamped and rounded."""
    values = _quantize(img.pixels, 255).astype(np.uint8)
    ext = os.path.splitext(path)[1].lower()
    if ext == ".pgm":
        header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(values.tobytes())
    elif ext == ".png":
        Image.fromarray(values, mode="L").save(path)
    else:
        raise ImageFormatError(f"{path}: unsupported output extension {ext!r}")


def save_gray16(img: GrayImage, path: str) -> None:
    """Write a 16-bit big-endian PGM (used for measure maps)."""
    if os.path.splitext(path)[1].lower() != ".pgm":
        raise ImageFormatError(f"{path}: 16-bit output is PGM only")
    values = _quantize(img.pixels, 65535).astype(">u2")
    header = f"P5\n{img.width} {img.height}\n65535\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(values.tobytes())


def save_rgb(img: RgbImage, path: str) -> None:
    Image.fromarray(img.channels, mode="RGB").save(path)


def render_overlay(base: GrayImage, detection) -> RgbImage:
    """Paint a detection in dark red over a brightened copy of the image.

    `detection` is a BinaryMap (hard paint) or a measure array/map in [0, 1]
    (alpha blend proportional to the value).
    """
    from .measures import MeasureMap  # local import, avoids a cycle

    if isinstance(detection, BinaryMap):
        alpha = detection.mask.astype(np.float64)
    elif isinstance(detection, MeasureMap):
        alpha = detection.values
    else:
        alpha = np.asarray(detection, dtype=np.float64)
    if alpha.shape != base.pixels.shape:
        raise ValueError(
            f"dimension mismatch: base {base.pixels.shape} vs detection {alpha.shape}"
        )
    bg = np.clip(base.pixels * 1.5, 0.0, 255.0)
    out = (1.0 - alpha)[:, :, None] * bg[:, :, None] + alpha[:, :, None] * DARK_RED
    return RgbImage(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))


def render_anglemap(values, value_range: float,
                    deviation_from_horizontal: bool = False) -> RgbImage:
    """Linear light-blue -> dark-red colormap over [0, value_range].

    Accepts an OrientationMap, a CurvatureMap or a plain array. Orientation
    angles are folded to [0, 90] degrees of deviation from horizontal
    (0 = horizontal = light blue, 90 = vertical = dark red); curvatures map
    linearly and saturate at dark red from ``value_range`` upward. NaN marks
    undefined pixels and renders white.
    """
    from .measures import CurvatureMap, OrientationMap

    if value_range <= 0:
        raise ValueError("value_range must be positive")
    if isinstance(values, OrientationMap):
        values = values.angles
        deviation_from_horizontal = True
    elif isinstance(values, CurvatureMap):
        values = values.values
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 2:
        raise ValueError(f"expected 2D value array, got shape {vals.shape}")
    if deviation_from_horizontal:
        folded = np.mod(vals, 180.0)
        vals = np.minimum(folded, 180.0 - folded)
    undefined = ~np.isfinite(vals)
    t = np.clip(vals / value_range, 0.0, 1.0)
    t = np.where(undefined, 0.0, t)
    out = (1.0 - t)[:, :, None] * LIGHT_BLUE + t[:, :, None] * DARK_RED
    out[undefined] = UNDEFINED_COLOR
    return RgbImage(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))
