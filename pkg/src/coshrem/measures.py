"""Edge and ridge measures, tangent orientation and curvature estimation.

The measures rate, per pixel, how edge-like (or ridge-like) the complex
shearlet coefficients look at the locally dominant orientation: an ideal
edge has equal odd-symmetric coefficients on every scale and vanishing
even-symmetric ones, which drives the edge measure to 1; a ridge swaps the
roles of the two coefficient kinds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .imagecore import BinaryMap
from .shearlets import ShearletSystem
from .xform import CoefficientVolume

log = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"
BOTH = "both"


@dataclass(frozen=True)
class DetectionParams:
    """The four numbers that configure a detection run.

    min_contrast floors the measure to 0 wherever the strongest relevant
    coefficient stays below it (intensity units); the denominator stabilizer
    is epsilon_factor * min_contrast. pivot_scales lists the scale indices
    searched for the per-pixel dominant orientation; the measure itself
    always sums over all scales. polarity selects bright/dark ridges or
    rising/falling edges by the sign of the summed coefficients.
    """

    min_contrast: float = 4.0
    epsilon_factor: float = 0.01
    pivot_scales: tuple = (0, 1, 2)
    polarity: str = BOTH

    def __post_init__(self):
        if self.min_contrast <= 0:
            raise ValueError("min_contrast must be positive")
        if self.epsilon_factor <= 0:
            raise ValueError("epsilon_factor must be positive")
        if len(self.pivot_scales) == 0:
            raise ValueError("pivot_scales must not be empty")
        if self.polarity not in (POSITIVE, NEGATIVE, BOTH):
            raise ValueError(f"polarity must be one of positive|negative|both, "
                             f"got {self.polarity!r}")
        object.__setattr__(self, "pivot_scales",
                           tuple(int(s) for s in self.pivot_scales))

    @property
    def epsilon(self) -> float:
        return self.epsilon_factor * self.min_contrast

    def to_dict(self) -> dict:
        return {
            "min_contrast": self.min_contrast,
            "epsilon_factor": self.epsilon_factor,
            "pivot_scales": list(self.pivot_scales),
            "polarity": self.polarity,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DetectionParams":
        return cls(min_contrast=d["min_contrast"],
                   epsilon_factor=d["epsilon_factor"],
                   pivot_scales=tuple(d["pivot_scales"]),
                   polarity=d["polarity"])


@dataclass(frozen=True)
class MeasureMap:
    """Per-pixel measure in [0, 1]; kind is 'edge' or 'ridge'."""

    values: np.ndarray
    kind: str

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


class PivotMap:
    """Winning orientation per pixel plus the data orientation refinement needs.

    ``orient_index`` indexes the system's angle-sorted orientation list;
    ``objective`` holds the pivot objective at the winner and its two
    angular ring neighbors (previous, winner, next).
    """

    def __init__(self, orient_index: np.ndarray, objective_prev: np.ndarray,
                 objective_best: np.ndarray, objective_next: np.ndarray,
                 system: ShearletSystem):
        self.orient_index = orient_index
        self.objective_prev = objective_prev
        self.objective_best = objective_best
        self.objective_next = objective_next
        self.system_key = system.cache_key
        self.angles = system.angles
        self.cones = [o.cone for o in system.orientations]
        self.shears = [o.shear for o in system.orientations]

    def nominal_angles(self) -> np.ndarray:
        return self.angles[self.orient_index]


class OrientationMap:
    """Tangent angle in degrees, [0, 180); NaN where no structure was measured."""

    def __init__(self, angles: np.ndarray):
        self.angles = angles

    @property
    def height(self) -> int:
        return self.angles.shape[0]

    @property
    def width(self) -> int:
        return self.angles.shape[1]


class CurvatureMap:
    """|d(tangent angle)/d(arclength)| in degrees per pixel along traced curves.

    NaN everywhere except curve-interior pixels. ``skipped`` counts skeleton
    pixels dropped because their orientation was undefined.
    """

    def __init__(self, values: np.ndarray, skipped: int = 0):
        self.values = values
        self.skipped = skipped

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def _check(volume: CoefficientVolume, system: ShearletSystem) -> None:
    if volume.system_key != system.cache_key:
        raise ValueError("coefficient volume was computed with a different system")


def _measure(volume: CoefficientVolume, system: ShearletSystem,
             det: DetectionParams, kind: str):
    """Shared implementation: kind='edge' pivots on odd and rates odd-vs-even
    coherence; kind='ridge' swaps the two coefficient roles."""
    _check(volume, system)
    J = volume.n_scales
    for s in det.pivot_scales:
        if not (0 <= s < J):
            raise ValueError(f"pivot scale {s} out of range 0..{J - 1}")

    primary = volume.odd if kind == "edge" else volume.even
    secondary = volume.even if kind == "edge" else volume.odd

    # dominant orientation: argmax over orientations of the summed
    # primary-coefficient magnitude on the pivot scales
    objective = np.zeros(primary.shape[1:], dtype=np.float64)
    for j in det.pivot_scales:
        objective += np.abs(primary[j])
    pivot = objective.argmax(axis=0).astype(np.int16)

    n_or = volume.n_orientations
    idx = pivot[None, None, :, :].astype(np.intp)
    gathered = np.take_along_axis(volume.stack, idx, axis=1)[:, 0]
    p_sel = gathered.imag if kind == "edge" else gathered.real
    s_sel = gathered.real if kind == "edge" else gathered.imag

    sum_p = p_sel.sum(axis=0)
    abs_s = np.abs(s_sel).sum(axis=0)
    max_p = np.abs(p_sel).max(axis=0)

    raw = (np.abs(sum_p) - abs_s) / (J * max_p + det.epsilon)
    values = np.clip(raw, 0.0, 1.0)
    values[max_p < det.min_contrast] = 0.0
    if det.polarity == POSITIVE:
        values[sum_p < 0.0] = 0.0
    elif det.polarity == NEGATIVE:
        values[sum_p > 0.0] = 0.0

    oi = pivot.astype(np.intp)
    obj_prev = np.take_along_axis(objective, ((oi - 1) % n_or)[None], axis=0)[0]
    obj_best = np.take_along_axis(objective, oi[None], axis=0)[0]
    obj_next = np.take_along_axis(objective, ((oi + 1) % n_or)[None], axis=0)[0]

    measure = MeasureMap(values, kind)
    pmap = PivotMap(pivot, obj_prev.astype(np.float32),
                    obj_best.astype(np.float32), obj_next.astype(np.float32),
                    system)
    return measure, pmap


def edge_measure(volume: CoefficientVolume, system: ShearletSystem,
                 det: DetectionParams):
    """Edge measure in [0, 1] plus the per-pixel pivot orientation.

    Polarity 'positive' keeps edges whose summed odd coefficients are
    positive (intensity rising along the filter axis), 'negative' the
    mirrored ones, 'both' keeps all.
    """
    return _measure(volume, system, det, "edge")


def ridge_measure(volume: CoefficientVolume, system: ShearletSystem,
                  det: DetectionParams):
    """Ridge measure: the edge measure with even/odd roles exchanged.

    Polarity 'positive' selects bright ridges on dark ground, 'negative'
    dark ridges.
    """
    return _measure(volume, system, det, "ridge")


def _wrap180(d: np.ndarray) -> np.ndarray:
    """Map angle differences into (-90, 90]."""
    return 90.0 - np.mod(90.0 - d, 180.0)


def orientation_map(measure: MeasureMap, pivot: PivotMap,
                    system: ShearletSystem) -> OrientationMap:
    """Tangent angles from the pivot, refined to sub-shear accuracy.

    A parabola is fitted through the pivot objective at the winning
    orientation and its two angular neighbors (angles are unevenly spaced,
    so the general three-point vertex formula is used); the vertex within
    the neighbor interval gives the refined angle. Defined where the
    measure is positive.
    """
    if measure.values.shape != pivot.orient_index.shape:
        raise ValueError("measure and pivot dimensions differ")
    angles = pivot.angles
    n_or = len(angles)
    oi = pivot.orient_index.astype(np.intp)
    theta0 = angles[oi]
    theta_prev = angles[(oi - 1) % n_or]
    theta_next = angles[(oi + 1) % n_or]
    x1 = _wrap180(theta_prev - theta0)
    x2 = _wrap180(theta_next - theta0)
    y0 = pivot.objective_best.astype(np.float64)
    y1 = pivot.objective_prev.astype(np.float64)
    y2 = pivot.objective_next.astype(np.float64)

    denom = x1 * x2 * (x1 - x2)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (x2 * (y1 - y0) - x1 * (y2 - y0)) / denom
        b = (x1 * x1 * (y2 - y0) - x2 * x2 * (y1 - y0)) / denom
        vertex = -b / (2.0 * a)
    vertex = np.where(np.isfinite(vertex) & (a < 0.0), vertex, 0.0)
    vertex = np.clip(vertex, np.minimum(x1, x2), np.maximum(x1, x2))

    theta = np.mod(theta0 + vertex, 180.0)
    theta[measure.values <= 0.0] = np.nan
    return OrientationMap(theta)


def curvature_along(skeleton: BinaryMap, orient: OrientationMap) -> CurvatureMap:
    """Curvature along traced skeleton curves by central differences.

    At chain pixel i, curvature is |wrap180(theta[i+1] - theta[i-1])|
    divided by the arclength between those neighbors (diagonal steps count
    sqrt(2)). Chain endpoints and junction pixels stay undefined; skeleton
    pixels without a defined orientation are skipped and counted.
    """
    from .postprocess import junction_pixels, trace_curves

    if skeleton.mask.shape != orient.angles.shape:
        raise ValueError("skeleton and orientation dimensions differ")
    chains = trace_curves(skeleton)
    junctions = junction_pixels(skeleton)
    values = np.full(skeleton.mask.shape, np.nan)
    skipped = 0
    for chain in chains:
        pts = chain.pixels
        n = len(pts)
        if n < 3:
            continue
        theta = np.array([orient.angles[y, x] for (y, x) in pts])
        steps = np.array([
            np.hypot(pts[k + 1][0] - pts[k][0], pts[k + 1][1] - pts[k][1])
            for k in range(n - 1)
        ])
        if chain.closed:
            closing = np.hypot(pts[0][0] - pts[-1][0], pts[0][1] - pts[-1][1])
            steps = np.append(steps, closing)
            interior = range(n)
        else:
            interior = range(1, n - 1)
        for k in interior:
            prev_k = (k - 1) % n
            next_k = (k + 1) % n
            y, x = pts[k]
            if (y, x) in junctions:
                continue
            t_prev, t_next = theta[prev_k], theta[next_k]
            if not (np.isfinite(t_prev) and np.isfinite(t_next)):
                skipped += 1
                continue
            ds = steps[k % len(steps)] + steps[prev_k % len(steps)]
            dtheta = _wrap180(np.array(t_next - t_prev))
            values[y, x] = abs(float(dtheta)) / ds
    if skipped:
        log.warning("curvature_along: %d skeleton pixels had undefined "
                    "orientation and were skipped", skipped)
    return CurvatureMap(values, skipped)
