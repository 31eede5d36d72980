"""Binary postprocessing: hysteresis thresholding, thinning, curve tracing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.ndimage
from skimage.morphology import thin as _guo_hall_thin

from .imagecore import BinaryMap
from .measures import MeasureMap

_EIGHT = np.ones((3, 3), dtype=int)

# ring offsets in circular order (N, NE, E, SE, S, SW, W, NW)
_RING = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)]


@dataclass
class CurveChain:
    """Ordered 8-connected pixel chain; (y, x) coordinates, no repeats."""

    pixels: list
    closed: bool

    def __len__(self) -> int:
        return len(self.pixels)


def hysteresis_threshold(measure, low: float, high: float) -> BinaryMap:
    """Keep pixels >= low that are 8-connected to some pixel >= high."""
    if not (0.0 <= low <= high):
        raise ValueError(f"need 0 <= low <= high, got low={low} high={high}")
    values = measure.values if isinstance(measure, MeasureMap) else np.asarray(measure)
    seeds = values >= high
    candidates = values >= low
    if not seeds.any():
        return BinaryMap(np.zeros_like(candidates))
    labels, n = scipy.ndimage.label(candidates, structure=_EIGHT)
    keep = np.zeros(n + 1, dtype=bool)
    keep[np.unique(labels[seeds])] = True
    keep[0] = False
    return BinaryMap(keep[labels])


def thin(binary: BinaryMap) -> BinaryMap:
    """Reduce to a unit-width 8-connected skeleton (Guo-Hall thinning).

    Idempotent, and preserves the 8-connectivity of every component.
    """
    return BinaryMap(_guo_hall_thin(binary.mask))


def prune_small_components(binary: BinaryMap, min_size: int) -> BinaryMap:
    """Drop 8-connected components smaller than min_size pixels."""
    if min_size <= 1:
        return binary
    labels, n = scipy.ndimage.label(binary.mask, structure=_EIGHT)
    if n == 0:
        return binary
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    return BinaryMap(np.isin(labels, np.nonzero(sizes >= min_size)[0]))


def neighbor_counts(mask: np.ndarray) -> np.ndarray:
    """Number of on 8-neighbors for each pixel (0 off the mask)."""
    counts = scipy.ndimage.convolve(mask.astype(np.uint8), _EIGHT,
                                    mode="constant", cval=0) - mask.astype(np.uint8)
    counts[~mask] = 0
    return counts


def _branch_counts(mask: np.ndarray) -> np.ndarray:
    """Crossing number: 0->1 transitions around each pixel's neighbor ring.

    2 for interior curve pixels, 1 for endpoints, >= 3 where curves meet.
    """
    m = np.pad(mask, 1).astype(np.uint8)
    h, w = mask.shape
    ring = np.stack([m[1 + dy: 1 + dy + h, 1 + dx: 1 + dx + w]
                     for dy, dx in _RING])
    nxt = np.roll(ring, -1, axis=0)
    transitions = ((ring == 0) & (nxt == 1)).sum(axis=0)
    transitions[~mask] = 0
    return transitions


def junction_pixels(skeleton: BinaryMap) -> set:
    """Skeleton pixels where three or more curve branches meet.

    Covers both high crossing-number pixels and the irreducible 2x2 cores
    that X-shaped crossings thin down to (no pixel of such a core can be
    removed without splitting the arms).
    """
    mask = skeleton.mask
    branches = _branch_counts(mask)
    out = branches >= 3
    core = mask[:-1, :-1] & mask[:-1, 1:] & mask[1:, :-1] & mask[1:, 1:]
    out[:-1, :-1] |= core
    out[:-1, 1:] |= core
    out[1:, :-1] |= core
    out[1:, 1:] |= core
    out &= mask
    ys, xs = np.nonzero(out)
    return set(zip(ys.tolist(), xs.tolist()))


def _is_thin(mask: np.ndarray) -> bool:
    """A map is thin exactly when it is a fixed point of thinning."""
    return bool(np.array_equal(_guo_hall_thin(mask), mask))


def trace_curves(skeleton: BinaryMap) -> list[CurveChain]:
    """Partition a thinned skeleton into ordered chains.

    Chains break where curves meet (junction pixels); each junction pixel is
    attached to exactly one incident chain, so chain lengths sum to the
    skeleton's pixel count. Junction-free loops come back flagged closed.
    Raises ValueError for non-thin input (anything thinning can still reduce).
    """
    mask = skeleton.mask
    if not _is_thin(mask):
        raise ValueError("skeleton is not thin: thinning would still remove pixels")
    h, w = mask.shape
    junctions = junction_pixels(skeleton)

    def neighbors(p):
        y, x = p
        return [(y + dy, x + dx) for dy, dx in _RING
                if 0 <= y + dy < h and 0 <= x + dx < w and mask[y + dy, x + dx]]

    def path_neighbors(p):
        # a diagonal step whose shared orthogonal pixel is on is a shortcut;
        # the chain must pass through that pixel (or stop, if it is a junction)
        out = []
        for n in neighbors(p):
            if n in junctions:
                continue
            if n[0] != p[0] and n[1] != p[1]:
                if mask[p[0], n[1]] or mask[n[0], p[1]]:
                    continue
            out.append(n)
        return out

    ys, xs = np.nonzero(mask)
    on_pixels = list(zip(ys.tolist(), xs.tolist()))
    path_pixels = [p for p in on_pixels if p not in junctions]

    visited: set = set()
    claimed: set = set()
    chains: list[CurveChain] = []

    def walk_from(start):
        chain = [start]
        visited.add(start)
        prev = None
        cur = start
        while True:
            nxt = [n for n in path_neighbors(cur) if n != prev and n not in visited]
            if not nxt:
                return chain
            prev, cur = cur, nxt[0]
            chain.append(cur)
            visited.add(cur)

    def attach_junctions(chain):
        for end, front in ((chain[0], True), (chain[-1], False)):
            for n in neighbors(end):
                if n in junctions and n not in claimed:
                    claimed.add(n)
                    if front:
                        chain.insert(0, n)
                    else:
                        chain.append(n)
                    break
        return chain

    # open paths first (walk from ends), then what remains are cycles
    for p in path_pixels:
        if p not in visited and len(path_neighbors(p)) <= 1:
            chains.append(CurveChain(attach_junctions(walk_from(p)), closed=False))
    for p in path_pixels:
        if p not in visited:
            chain = walk_from(p)
            closed = len(chain) > 2 and chain[0] in neighbors(chain[-1])
            chains.append(CurveChain(chain, closed=closed))
    for p in on_pixels:
        if p in junctions and p not in claimed:
            claimed.add(p)
            chains.append(CurveChain([p], closed=False))
    return chains
