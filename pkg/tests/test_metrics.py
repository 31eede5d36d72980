import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coshrem.imagecore import BinaryMap
from coshrem.metrics import distance_transform, pfom


def _brute_force_edt(mask: np.ndarray) -> np.ndarray:
    """O(N^2) oracle: per-pixel minimum distance to any on-pixel."""
    ys, xs = np.nonzero(mask)
    pts = np.stack([ys, xs], axis=1).astype(float)
    h, w = mask.shape
    out = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            d = np.hypot(pts[:, 0] - y, pts[:, 1] - x)
            out[y, x] = d.min()
    return out


def test_pfom_perfect_match():
    mask = np.zeros((16, 16), bool)
    mask[4, 2:12] = True
    m = BinaryMap(mask)
    assert pfom(m, m) == 1.0


def test_pfom_hand_computed_distance_three():
    truth = np.zeros((9, 9), bool)
    truth[4, 1] = True
    det = np.zeros((9, 9), bool)
    det[4, 4] = True
    # single pixel at distance 3, a = 1/9: score = 1 / (1 + 9/9) = 0.5
    assert pfom(BinaryMap(det), BinaryMap(truth), a=1.0 / 9.0) == pytest.approx(0.5)


def test_pfom_empty_conventions():
    empty = BinaryMap(np.zeros((8, 8), bool))
    something = BinaryMap(np.eye(8, dtype=bool))
    assert pfom(empty, empty) == 1.0
    assert pfom(empty, something) == 0.0
    assert pfom(something, empty) == 0.0


def test_pfom_dimension_mismatch():
    with pytest.raises(ValueError):
        pfom(BinaryMap(np.zeros((4, 4), bool)), BinaryMap(np.zeros((4, 5), bool)))
    with pytest.raises(ValueError):
        pfom(BinaryMap(np.ones((4, 4), bool)), BinaryMap(np.ones((4, 4), bool)),
             a=0.0)


def test_pfom_far_pixel_strictly_decreases():
    truth = np.zeros((32, 32), bool)
    truth[10, 5:25] = True
    det = truth.copy()
    base = pfom(BinaryMap(det), BinaryMap(truth))
    det2 = det.copy()
    det2[30, 30] = True
    assert pfom(BinaryMap(det2), BinaryMap(truth)) < base


def test_pfom_translation_invariance():
    rng = np.random.default_rng(5)
    truth = np.zeros((40, 40), bool)
    truth[12:16, 8:30] = rng.random((4, 22)) > 0.5
    det = np.zeros((40, 40), bool)
    det[13:17, 9:31] = truth[12:16, 8:30]
    s1 = pfom(BinaryMap(det), BinaryMap(truth))
    s2 = pfom(BinaryMap(np.roll(det, (5, 3), (0, 1))),
              BinaryMap(np.roll(truth, (5, 3), (0, 1))))
    assert s1 == pytest.approx(s2, rel=1e-12)


def test_edt_basics():
    mask = np.zeros((10, 10), bool)
    mask[2, 3] = True
    d = distance_transform(BinaryMap(mask))
    assert d[2, 3] == 0.0
    assert d[6, 6] == pytest.approx(5.0)  # offset (4, 3)


def test_edt_empty_rejected():
    with pytest.raises(ValueError):
        distance_transform(BinaryMap(np.zeros((4, 4), bool)))


def test_edt_matches_brute_force_random():
    rng = np.random.default_rng(9)
    for _ in range(3):
        mask = rng.random((64, 64)) > 0.98
        if not mask.any():
            mask[0, 0] = True
        got = distance_transform(BinaryMap(mask))
        np.testing.assert_allclose(got, _brute_force_edt(mask), atol=1e-9)


def test_edt_lipschitz():
    rng = np.random.default_rng(10)
    mask = rng.random((32, 32)) > 0.95
    mask[5, 5] = True
    d = distance_transform(BinaryMap(mask))
    assert np.abs(np.diff(d, axis=0)).max() <= 1.0 + 1e-12
    assert np.abs(np.diff(d, axis=1)).max() <= 1.0 + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pfom_in_unit_interval(seed):
    rng = np.random.default_rng(seed)
    det = rng.random((24, 24)) > 0.8
    truth = rng.random((24, 24)) > 0.8
    score = pfom(BinaryMap(det), BinaryMap(truth))
    assert 0.0 <= score <= 1.0
