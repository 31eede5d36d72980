"""Mock edge/ridge images with analytic ground truth, plus corruption.

Phantoms are built from geometric primitives. Edge mode fills the union of
primitive interiors with the foreground intensity; the ground truth is the
rasterized boundary, pruned to pixels that actually sit on a
foreground/background interface (boundary arcs buried inside the union, or
hugging the image border, carry no detectable edge). Ridge mode strokes the
primitive curves at a given width; the ground truth is the centerline.

Ground-truth pixels carry the analytic tangent angle (degrees, [0, 180))
and curvature (degrees per pixel of arclength) of their primitive.

Corruption is Gaussian blur (kernel truncated at 4 sigma, sum-normalized,
reflective boundary) followed by seeded additive Gaussian noise, optionally
followed by mean-preserving Poisson resampling. Randomness comes from
NumPy's PCG64 generator, so results are reproducible for a fixed seed.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.ndimage
from PIL import Image, ImageDraw

from .imagecore import BinaryMap, GrayImage

log = logging.getLogger(__name__)

GT_SCHEMA_VERSION = 1

EDGE = "edge"
RIDGE = "ridge"


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float

    def bounds(self):
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)


@dataclass(frozen=True)
class Segment:
    x0: float
    y0: float
    x1: float
    y1: float

    def bounds(self):
        return (min(self.x0, self.x1), min(self.y0, self.y1),
                max(self.x0, self.x1), max(self.y0, self.y1))


@dataclass(frozen=True)
class Arc:
    """Circular arc swept from start_deg to end_deg (increasing angle)."""

    cx: float
    cy: float
    r: float
    start_deg: float
    end_deg: float

    def __post_init__(self):
        if not (self.start_deg < self.end_deg <= self.start_deg + 360.0):
            raise ValueError("arc sweep must be increasing and at most 360 degrees")

    def bounds(self):
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)


@dataclass(frozen=True)
class Polyline:
    points: tuple  # ((x, y), ...)
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points",
                           tuple((float(x), float(y)) for x, y in self.points))

    def bounds(self):
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class PhantomSpec:
    width: int
    height: int
    primitives: tuple
    mode: str = EDGE
    foreground: float = 200.0
    background: float = 20.0
    stroke_width: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        if self.mode not in (EDGE, RIDGE):
            raise ValueError(f"mode must be 'edge' or 'ridge', got {self.mode!r}")
        if self.foreground == self.background:
            raise ValueError("foreground and background intensities must differ")
        if self.mode == RIDGE and self.stroke_width < 1:
            raise ValueError("stroke_width must be >= 1 in ridge mode")
        for p in self.primitives:
            x0, y0, x1, y1 = p.bounds()
            if x0 < 0 or y0 < 0 or x1 > self.width - 1 or y1 > self.height - 1:
                raise ValueError(f"primitive {p} exceeds {self.width}x{self.height}")
            if self.mode == EDGE and isinstance(p, (Segment, Arc)):
                raise ValueError(
                    f"{type(p).__name__} has no interior; edge mode needs "
                    "circles or closed polylines")
            if self.mode == EDGE and isinstance(p, Polyline) and not p.closed:
                raise ValueError("edge mode needs closed polylines")

    def to_dict(self) -> dict:
        prims = []
        for p in self.primitives:
            if isinstance(p, Circle):
                prims.append({"type": "circle", "cx": p.cx, "cy": p.cy, "r": p.r})
            elif isinstance(p, Segment):
                prims.append({"type": "segment", "x0": p.x0, "y0": p.y0,
                              "x1": p.x1, "y1": p.y1})
            elif isinstance(p, Arc):
                prims.append({"type": "arc", "cx": p.cx, "cy": p.cy, "r": p.r,
                              "start_deg": p.start_deg, "end_deg": p.end_deg})
            else:
                prims.append({"type": "polyline", "points": list(p.points),
                              "closed": p.closed})
        return {"schema_version": GT_SCHEMA_VERSION, "width": self.width,
                "height": self.height, "mode": self.mode,
                "foreground": self.foreground, "background": self.background,
                "stroke_width": self.stroke_width, "primitives": prims}

    @classmethod
    def from_dict(cls, d: dict) -> "PhantomSpec":
        prims = []
        for p in d["primitives"]:
            t = p["type"]
            if t == "circle":
                prims.append(Circle(p["cx"], p["cy"], p["r"]))
            elif t == "segment":
                prims.append(Segment(p["x0"], p["y0"], p["x1"], p["y1"]))
            elif t == "arc":
                prims.append(Arc(p["cx"], p["cy"], p["r"],
                                 p["start_deg"], p["end_deg"]))
            elif t == "polyline":
                prims.append(Polyline(tuple(map(tuple, p["points"])), p["closed"]))
            else:
                raise ValueError(f"unknown primitive type {t!r}")
        return cls(width=d["width"], height=d["height"], primitives=tuple(prims),
                   mode=d["mode"], foreground=d["foreground"],
                   background=d["background"], stroke_width=d["stroke_width"])


@dataclass
class GroundTruth:
    """Minimally connected curve pixels with analytic tangent and curvature."""

    map: BinaryMap
    tangent: np.ndarray    # degrees in [0, 180), NaN off-curve
    curvature: np.ndarray  # degrees per pixel, NaN off-curve or undefined
    chains: list = field(default_factory=list)  # [(chain_id, [(y, x), ...])]

    def to_dict(self) -> dict:
        ys, xs = np.nonzero(self.map.mask)
        return {
            "schema_version": GT_SCHEMA_VERSION,
            "width": self.map.width,
            "height": self.map.height,
            "pixels": [[int(y), int(x)] for y, x in zip(ys, xs)],
            "tangent": [None if not np.isfinite(v) else float(v)
                        for v in self.tangent[ys, xs]],
            "curvature": [None if not np.isfinite(v) else float(v)
                          for v in self.curvature[ys, xs]],
        }


# ---------------------------------------------------------------------------
# rasterization

def _bresenham(x0: int, y0: int, x1: int, y1: int) -> list:
    """8-connected minimally connected line, as (y, x) pairs."""
    pts = []
    dx, dy = abs(x1 - x0), abs(y1 - y0)
    sx = 1 if x1 >= x0 else -1
    sy = 1 if y1 >= y0 else -1
    err = dx - dy
    x, y = x0, y0
    while True:
        pts.append((y, x))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy
    return pts


def _minimal_cleanup(pts: list, closed: bool = False) -> list:
    """Drop chain pixels whose removal keeps consecutive pixels 8-adjacent."""
    def adjacent(a, b):
        return max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1

    pts = list(dict.fromkeys(pts))  # drop exact repeats, keep order
    changed = True
    while changed and len(pts) > 2:
        changed = False
        out = []
        n = len(pts)
        i = 0
        while i < n:
            prv = pts[i - 1] if (i > 0 or closed) else None
            nxt = pts[(i + 1) % n] if (i < n - 1 or closed) else None
            if prv is not None and nxt is not None and adjacent(prv, nxt) \
                    and not (i == n - 1 and not closed):
                changed = True
                i += 1
                if nxt == pts[0] and i >= n:
                    break
                continue
            out.append(pts[i])
            i += 1
        pts = out
    return pts


def _circle_chain(c: Circle) -> list:
    """Midpoint-circle ring ordered by angle, as (y, x) pairs."""
    cx, cy = int(round(c.cx)), int(round(c.cy))
    r = int(round(c.r))
    pts = set()
    x, y, d = r, 0, 1 - r
    while x >= y:
        for px, py in ((x, y), (y, x), (-y, x), (-x, y),
                       (-x, -y), (-y, -x), (y, -x), (x, -y)):
            pts.add((cy + py, cx + px))
        y += 1
        if d < 0:
            d += 2 * y + 1
        else:
            x -= 1
            d += 2 * (y - x) + 1
    ordered = sorted(pts, key=lambda p: math.atan2(p[0] - cy, p[1] - cx))
    return ordered


def _polyline_chain(p: Polyline) -> list:
    pts = []
    vertex_index = []
    points = list(p.points)
    if p.closed:
        points = points + [points[0]]
    for (xa, ya), (xb, yb) in zip(points[:-1], points[1:]):
        seg = _bresenham(int(round(xa)), int(round(ya)),
                         int(round(xb)), int(round(yb)))
        if pts and seg and seg[0] == pts[-1]:
            seg = seg[1:]
        pts.extend(seg)
    if p.closed and len(pts) > 1 and pts[-1] == pts[0]:
        pts = pts[:-1]
    return _minimal_cleanup(pts, closed=p.closed)


def _arc_chain(a: Arc) -> list:
    step = math.degrees(0.5 / max(a.r, 1.0))
    n = max(int(abs(a.end_deg - a.start_deg) / step), 2)
    phis = np.linspace(a.start_deg, a.end_deg, n)
    pts = [(int(round(a.cy + a.r * math.sin(math.radians(f)))),
            int(round(a.cx + a.r * math.cos(math.radians(f)))))
           for f in phis]
    out = [pts[0]]
    for q in pts[1:]:
        if q != out[-1]:
            out.append(q)
    return _minimal_cleanup(out, closed=False)


def _chain_attrs(prim, pts: list) -> tuple[np.ndarray, np.ndarray]:
    """Analytic tangent (deg in [0,180)) and curvature (deg/px) per pixel."""
    n = len(pts)
    tangent = np.empty(n)
    curvature = np.empty(n)
    if isinstance(prim, (Circle, Arc)):
        for i, (y, x) in enumerate(pts):
            phi = math.degrees(math.atan2(y - prim.cy, x - prim.cx))
            tangent[i] = (phi + 90.0) % 180.0
        curvature[:] = math.degrees(1.0 / prim.r)
    elif isinstance(prim, Segment):
        ang = math.degrees(math.atan2(prim.y1 - prim.y0, prim.x1 - prim.x0)) % 180.0
        tangent[:] = ang
        curvature[:] = 0.0
    elif isinstance(prim, Polyline):
        # nearest polyline segment decides the local tangent
        segs = list(zip(prim.points[:-1], prim.points[1:]))
        if prim.closed:
            segs.append((prim.points[-1], prim.points[0]))
        sa = np.array([s[0] for s in segs])
        sb = np.array([s[1] for s in segs])
        for i, (y, x) in enumerate(pts):
            d, k = _point_segments_distance(np.array([x, y]), sa, sb)
            (xa, ya), (xb, yb) = segs[k]
            tangent[i] = math.degrees(math.atan2(yb - ya, xb - xa)) % 180.0
        curvature[:] = 0.0
    else:
        raise TypeError(f"unknown primitive {prim!r}")
    return tangent, curvature


def _point_segments_distance(p, sa, sb):
    """Distance from point p to each segment (sa[i] -> sb[i]); returns
    (min distance, argmin index)."""
    d = sb - sa
    L2 = (d ** 2).sum(axis=1)
    L2 = np.where(L2 == 0, 1.0, L2)
    t = np.clip(((p - sa) * d).sum(axis=1) / L2, 0.0, 1.0)
    proj = sa + t[:, None] * d
    dist = np.hypot(*(p - proj).T)
    k = int(dist.argmin())
    return float(dist[k]), k


def _prim_chain(prim) -> list:
    if isinstance(prim, Circle):
        return _circle_chain(prim)
    if isinstance(prim, Segment):
        return _bresenham(int(round(prim.x0)), int(round(prim.y0)),
                          int(round(prim.x1)), int(round(prim.y1)))
    if isinstance(prim, Arc):
        return _arc_chain(prim)
    if isinstance(prim, Polyline):
        return _polyline_chain(prim)
    raise TypeError(f"unknown primitive {prim!r}")


# ---------------------------------------------------------------------------
# region fill / stroking (supersampled coverage, 8x8 subsamples per pixel)

_SUPERSAMPLE = 8


def _subpixel_grid(width: int, height: int, scale: int):
    """Subpixel-center coordinates; pixel k spans [k - 0.5, k + 0.5)."""
    xs = (np.arange(width * scale) + 0.5) / scale - 0.5
    ys = (np.arange(height * scale) + 0.5) / scale - 0.5
    return xs[np.newaxis, :], ys[:, np.newaxis]


def _downsample(mask_hi: np.ndarray, scale: int) -> np.ndarray:
    h, w = mask_hi.shape[0] // scale, mask_hi.shape[1] // scale
    return mask_hi.reshape(h, scale, w, scale).mean(axis=(1, 3))


def _fill_coverage(spec: PhantomSpec, scale: int = _SUPERSAMPLE) -> np.ndarray:
    """Per-pixel coverage in [0, 1] of the union of primitive interiors."""
    xx, yy = _subpixel_grid(spec.width, spec.height, scale)
    mask_hi = np.zeros((spec.height * scale, spec.width * scale), dtype=bool)
    for prim in spec.primitives:
        if isinstance(prim, Circle):
            mask_hi |= (xx - prim.cx) ** 2 + (yy - prim.cy) ** 2 <= prim.r ** 2
        elif isinstance(prim, Polyline):
            img = Image.new("1", (spec.width * scale, spec.height * scale), 0)
            pts = [((x + 0.5) * scale - 0.5, (y + 0.5) * scale - 0.5)
                   for x, y in prim.points]
            ImageDraw.Draw(img).polygon(pts, fill=1, outline=1)
            mask_hi |= np.asarray(img, dtype=bool)
    return _downsample(mask_hi, scale)


def _stroke_coverage(spec: PhantomSpec, scale: int = _SUPERSAMPLE) -> np.ndarray:
    """Per-pixel coverage of the stroked primitive curves.

    The curves are rasterized on the supersampled grid and dilated to the
    stroke width via an exact distance transform (centerline position error
    <= 1/scale px).
    """
    hh, ww = spec.height * scale, spec.width * scale
    centerline = np.zeros((hh, ww), dtype=bool)

    def to_hi(v: float) -> float:
        return (v + 0.5) * scale - 0.5

    for prim in spec.primitives:
        if isinstance(prim, Circle):
            hi = Circle(to_hi(prim.cx), to_hi(prim.cy), prim.r * scale)
            pts = _circle_chain(hi)
        elif isinstance(prim, Arc):
            hi = Arc(to_hi(prim.cx), to_hi(prim.cy), prim.r * scale,
                     prim.start_deg, prim.end_deg)
            pts = _arc_chain(hi)
        elif isinstance(prim, Segment):
            pts = _bresenham(int(round(to_hi(prim.x0))), int(round(to_hi(prim.y0))),
                             int(round(to_hi(prim.x1))), int(round(to_hi(prim.y1))))
        else:
            hi = Polyline(tuple((to_hi(x), to_hi(y)) for x, y in prim.points),
                          prim.closed)
            pts = _polyline_chain(hi)
        for (y, x) in pts:
            if 0 <= y < hh and 0 <= x < ww:
                centerline[y, x] = True

    if not centerline.any():
        return np.zeros((spec.height, spec.width))
    dist = scipy.ndimage.distance_transform_edt(~centerline)
    mask_hi = dist <= spec.stroke_width / 2.0 * scale
    return _downsample(mask_hi, scale)


# ---------------------------------------------------------------------------
# generation

def _prune_to_interface(chain: list, coverage: np.ndarray) -> list:
    """Split a boundary chain into runs of pixels that sit on a real
    foreground/background interface (both sides visible within 3x3)."""
    h, w = coverage.shape
    runs = []
    cur = []
    for (y, x) in chain:
        y0, y1 = max(y - 1, 0), min(y + 2, h)
        x0, x1 = max(x - 1, 0), min(x + 2, w)
        neigh = coverage[y0:y1, x0:x1]
        if (neigh >= 0.75).any() and (neigh <= 0.25).any():
            cur.append((y, x))
        else:
            if cur:
                runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    # a chain may have been cut at an arbitrary start point; rejoin ends
    if len(runs) > 1 and runs[0][0] != runs[-1][-1]:
        a, b = runs[0][0], runs[-1][-1]
        if max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1:
            runs[0] = runs.pop() + runs[0]
    return runs


def generate(spec: PhantomSpec) -> tuple[GrayImage, GroundTruth]:
    """Render the phantom and its analytic ground truth."""
    shape = (spec.height, spec.width)
    tangent = np.full(shape, np.nan)
    curvature = np.full(shape, np.nan)
    gt_mask = np.zeros(shape, dtype=bool)
    chains = []

    if spec.mode == EDGE:
        coverage = _fill_coverage(spec)
    else:
        coverage = _stroke_coverage(spec)
    pixels = spec.background + coverage * (spec.foreground - spec.background)

    chain_id = 0
    for prim in spec.primitives:
        full_chain = _prim_chain(prim)
        if spec.mode == EDGE:
            runs = _prune_to_interface(full_chain, coverage)
        else:
            runs = [full_chain] if full_chain else []
        t_all, k_all = (_chain_attrs(prim, full_chain) if full_chain
                        else (np.array([]), np.array([])))
        attr = {p: (t_all[i], k_all[i]) for i, p in enumerate(full_chain)}
        for run in runs:
            if not run:
                continue
            for (y, x) in run:
                gt_mask[y, x] = True
                tangent[y, x], curvature[y, x] = attr[(y, x)]
            chains.append((chain_id, list(run)))
            chain_id += 1
        # polyline vertices have no defined curvature
        if isinstance(prim, Polyline):
            for (x, y) in prim.points:
                yi, xi = int(round(y)), int(round(x))
                if 0 <= yi < spec.height and 0 <= xi < spec.width and gt_mask[yi, xi]:
                    curvature[yi, xi] = np.nan

    gt = GroundTruth(BinaryMap(gt_mask), tangent, curvature, chains)
    return GrayImage(pixels), gt


def check_gt_connectivity(gt: GroundTruth) -> bool:
    """Table-1 style property: at most two neighbors except where curves meet."""
    from .postprocess import neighbor_counts

    counts = neighbor_counts(gt.map.mask)
    owners = {}
    for cid, pts in gt.chains:
        for p in pts:
            owners.setdefault(p, set()).add(cid)
    bad = np.argwhere(counts > 2)
    for y, x in bad:
        near = set()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                near |= owners.get((y + dy, x + dx), set())
        if len(near) < 2:
            return False
    return True


# ---------------------------------------------------------------------------
# corruption

def gaussian_blur(pixels: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian, kernel sampled then sum-normalized, truncated at
    4 sigma, reflective boundary. Identity for sigma = 0."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return pixels.copy()
    radius = int(round(4.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (x / sigma) ** 2)
    kernel /= kernel.sum()
    out = scipy.ndimage.correlate1d(pixels, kernel, axis=0, mode="reflect")
    return scipy.ndimage.correlate1d(out, kernel, axis=1, mode="reflect")


def blur_kernel(sigma: float) -> np.ndarray:
    """The 2D kernel corrupt() effectively convolves with (for oracles)."""
    radius = int(round(4.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    yy, xx = np.meshgrid(x, x, indexing="ij")
    k = np.exp(-0.5 * (xx ** 2 + yy ** 2) / sigma ** 2)
    return k / k.sum()


def corrupt(image: GrayImage, sigma_blur: float, sigma_noise: float,
            seed: int) -> GrayImage:
    """Gaussian blur then seeded additive white Gaussian noise; no clamping."""
    if sigma_blur < 0 or sigma_noise < 0:
        raise ValueError("corruption sigmas must be nonnegative")
    out = gaussian_blur(image.pixels, sigma_blur)
    if sigma_noise > 0:
        rng = np.random.default_rng(seed)
        out = out + rng.normal(0.0, sigma_noise, out.shape)
    return GrayImage(out)


def poissonize(image: GrayImage, seed: int) -> GrayImage:
    """Resample each pixel from Poisson(v / 10), rescaled by 10 (mean
    preserving). Negative inputs are floored to zero first and reported."""
    values = image.pixels
    negatives = int((values < 0).sum())
    if negatives:
        log.warning("poissonize: %d negative pixels floored to 0", negatives)
        values = np.maximum(values, 0.0)
    rng = np.random.default_rng(seed)
    return GrayImage(10.0 * rng.poisson(values / 10.0).astype(np.float64))


# ---------------------------------------------------------------------------
# standard phantoms

def _sine_points(y0: float, x_lo: int = 24, x_hi: int = 488,
                 amplitude: float = 14.0, period: float = 128.0,
                 reverse: bool = False) -> list:
    xs = list(range(x_lo, x_hi + 1, 2))
    pts = [(float(x), y0 + amplitude * math.sin(2.0 * math.pi * x / period))
           for x in xs]
    return pts[::-1] if reverse else pts


def edge512_spec() -> PhantomSpec:
    """512x512 filled-region phantom: two overlapping discs, a rectangle and
    a ribbon with sinusoidal boundaries. Nothing touches the image border
    (analysis is periodic; border contact would fabricate wrap-around edges).
    """
    ribbon = Polyline(tuple(_sine_points(440.0) + _sine_points(482.0, reverse=True)),
                      closed=True)
    return PhantomSpec(
        width=512, height=512,
        primitives=(
            Circle(170.0, 160.0, 95.0),
            Circle(262.0, 228.0, 75.0),
            Polyline(((370.0, 280.0), (480.0, 280.0), (480.0, 400.0),
                      (370.0, 400.0)), closed=True),
            ribbon,
        ),
        mode=EDGE, foreground=200.0, background=20.0)


def ridge512_spec(stroke_width: float = 3.0) -> PhantomSpec:
    """The same geometry as edge512, as a stroked line drawing."""
    return PhantomSpec(
        width=512, height=512,
        primitives=(
            Circle(170.0, 160.0, 95.0),
            Circle(262.0, 228.0, 75.0),
            Polyline(((370.0, 280.0), (480.0, 280.0), (480.0, 400.0),
                      (370.0, 400.0)), closed=True),
            Polyline(tuple(_sine_points(440.0)), closed=False),
            Polyline(tuple(_sine_points(482.0)), closed=False),
        ),
        mode=RIDGE, foreground=200.0, background=20.0, stroke_width=stroke_width)


def step_phantom(width: int = 512, height: int = 512, angle: float = 90.0,
                 foreground: float = 200.0, background: float = 20.0
                 ) -> tuple[GrayImage, GroundTruth]:
    """Ideal straight edge through the image center with the stated tangent
    angle (degrees). The boundary passes through pixel centers, so boundary
    pixels hold the mid intensity and even-symmetric responses cancel there.
    """
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = width // 2, height // 2
    t = math.radians(angle % 180.0)
    # signed distance to the line through (cx, cy) with tangent (cos t, sin t);
    # the foreground sits on the side the rotated normal points to (right of
    # a vertical edge, top of a horizontal one)
    d = (xx - cx) * math.sin(t) - (yy - cy) * math.cos(t)
    coverage = np.clip(0.5 + d, 0.0, 1.0)
    pixels = background + coverage * (foreground - background)

    half = max(width, height)
    x0 = cx - half * math.cos(t)
    y0 = cy - half * math.sin(t)
    x1 = cx + half * math.cos(t)
    y1 = cy + half * math.sin(t)
    chain = [(y, x) for (y, x) in _bresenham(int(round(x0)), int(round(y0)),
                                             int(round(x1)), int(round(y1)))
             if 0 <= y < height and 0 <= x < width]
    shape = (height, width)
    tangent = np.full(shape, np.nan)
    curvature = np.full(shape, np.nan)
    mask = np.zeros(shape, dtype=bool)
    for (y, x) in chain:
        mask[y, x] = True
        tangent[y, x] = angle % 180.0
        curvature[y, x] = 0.0
    gt = GroundTruth(BinaryMap(mask), tangent, curvature, [(0, chain)])
    return GrayImage(pixels), gt


def line_phantom(width: int = 512, height: int = 512, angle: float = 0.0,
                 line_width: float = 3.0, foreground: float = 200.0,
                 background: float = 20.0) -> tuple[GrayImage, GroundTruth]:
    """A straight ridge through the image center: trapezoid cross-section of
    the stated width, symmetric about a pixel-centered centerline."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = width // 2, height // 2
    t = math.radians(angle % 180.0)
    d = np.abs(-(xx - cx) * math.sin(t) + (yy - cy) * math.cos(t))
    coverage = np.clip(line_width / 2.0 + 0.5 - d, 0.0, 1.0)
    pixels = background + coverage * (foreground - background)

    half = max(width, height)
    chain = [(y, x) for (y, x) in _bresenham(
        int(round(cx - half * math.cos(t))), int(round(cy - half * math.sin(t))),
        int(round(cx + half * math.cos(t))), int(round(cy + half * math.sin(t))))
        if 0 <= y < height and 0 <= x < width]
    shape = (height, width)
    tangent = np.full(shape, np.nan)
    curvature = np.full(shape, np.nan)
    mask = np.zeros(shape, dtype=bool)
    for (y, x) in chain:
        mask[y, x] = True
        tangent[y, x] = angle % 180.0
        curvature[y, x] = 0.0
    gt = GroundTruth(BinaryMap(mask), tangent, curvature, [(0, chain)])
    return GrayImage(pixels), gt


def disc_phantom(radius: float, width: int = 512, height: int = 512,
                 foreground: float = 200.0, background: float = 20.0
                 ) -> tuple[GrayImage, GroundTruth]:
    """A single filled disc centered in the image (curvature test target)."""
    spec = PhantomSpec(width=width, height=height,
                       primitives=(Circle(width // 2, height // 2, radius),),
                       mode=EDGE, foreground=foreground, background=background)
    return generate(spec)


STANDARD_PHANTOMS = {
    "edge512": lambda: generate(edge512_spec()),
    "ridge512": lambda: generate(ridge512_spec()),
    "step-h": lambda: step_phantom(angle=0),
    "step-45": lambda: step_phantom(angle=45),
    "step-v": lambda: step_phantom(angle=90),
    "line-0": lambda: line_phantom(angle=0),
    "line-45": lambda: line_phantom(angle=45),
    "line-90": lambda: line_phantom(angle=90),
    "disc100": lambda: disc_phantom(100.0),
    "disc20": lambda: disc_phantom(20.0),
}


def save_ground_truth(gt: GroundTruth, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(gt.to_dict(), fh)
