import math

import numpy as np
import pytest

from coshrem.imagecore import GrayImage
from coshrem.phantoms import (Arc, Circle, GroundTruth, PhantomSpec, Polyline,
                              Segment, blur_kernel, check_gt_connectivity,
                              corrupt, edge512_spec, gaussian_blur, generate,
                              line_phantom, poissonize, ridge512_spec,
                              step_phantom)


def test_circle_gt_curvature_and_tangent():
    spec = PhantomSpec(256, 256, (Circle(128, 128, 100),), mode="edge")
    img, gt = generate(spec)
    ys, xs = np.nonzero(gt.map.mask)
    assert len(ys) > 0
    np.testing.assert_allclose(gt.curvature[ys, xs], math.degrees(1 / 100.0))
    # tangent at the point due right of the center is vertical
    sel = (ys == 128)
    i = np.flatnonzero(sel)[np.argmax(xs[sel])]
    assert gt.tangent[ys[i], xs[i]] == pytest.approx(90.0, abs=1.0)
    # interior is foreground, exterior background
    assert img.pixels[128, 128] == 200.0
    assert img.pixels[5, 5] == 20.0


def test_horizontal_ridge_gt():
    spec = PhantomSpec(64, 64, (Segment(8, 32, 55, 32),), mode="ridge",
                       stroke_width=3.0)
    img, gt = generate(spec)
    ys, xs = np.nonzero(gt.map.mask)
    assert set(ys) == {32}
    np.testing.assert_allclose(gt.tangent[ys, xs], 0.0)
    np.testing.assert_allclose(gt.curvature[ys, xs], 0.0)
    assert img.pixels[32, 30] == 200.0
    assert img.pixels[20, 30] == 20.0


def test_empty_spec_constant_image():
    spec = PhantomSpec(32, 32, (), mode="edge")
    img, gt = generate(spec)
    assert np.all(img.pixels == 20.0)
    assert gt.map.count() == 0


def test_spec_validation():
    with pytest.raises(ValueError, match="exceeds"):
        PhantomSpec(64, 64, (Circle(60, 60, 30),))
    with pytest.raises(ValueError, match="interior"):
        PhantomSpec(64, 64, (Segment(1, 1, 10, 10),), mode="edge")
    with pytest.raises(ValueError, match="closed"):
        PhantomSpec(64, 64, (Polyline(((1, 1), (10, 10)), closed=False),),
                    mode="edge")
    with pytest.raises(ValueError):
        PhantomSpec(64, 64, (), foreground=20.0, background=20.0)
    with pytest.raises(ValueError):
        PhantomSpec(64, 64, (), mode="ridge", stroke_width=0.5)


def test_spec_json_roundtrip():
    spec = edge512_spec()
    back = PhantomSpec.from_dict(spec.to_dict())
    assert back == spec
    spec2 = ridge512_spec()
    assert PhantomSpec.from_dict(spec2.to_dict()) == spec2


def test_gt_connectivity_standard_phantoms():
    for builder in (edge512_spec, ridge512_spec):
        _, gt = generate(builder())
        assert check_gt_connectivity(gt)


def test_gt_buried_boundary_pruned():
    # two overlapping discs: boundary arcs inside the union carry no edge
    spec = PhantomSpec(128, 128, (Circle(50, 64, 30), Circle(78, 64, 30)),
                       mode="edge")
    img, gt = generate(spec)
    ys, xs = np.nonzero(gt.map.mask)
    # no ground-truth pixel deep inside the union
    inside = ((xs - 50) ** 2 + (ys - 64) ** 2 < 27 ** 2) & \
             ((xs - 78) ** 2 + (ys - 64) ** 2 < 27 ** 2)
    assert not inside.any()


def test_corrupt_identity():
    img = GrayImage(np.arange(64.0).reshape(8, 8))
    out = corrupt(img, 0.0, 0.0, seed=123)
    np.testing.assert_array_equal(out.pixels, img.pixels)


def test_blur_impulse_matches_kernel_oracle():
    # oracle: the (0,0) entry of the normalized sampled 9x9 Gaussian kernel
    img = np.zeros((33, 33))
    img[16, 16] = 1.0
    out = corrupt(GrayImage(img), 1.0, 0.0, seed=0)
    kernel = blur_kernel(1.0)
    assert kernel.shape == (9, 9)
    assert out.pixels[16, 16] == pytest.approx(kernel[4, 4], rel=1e-9)
    assert out.pixels[16, 17] == pytest.approx(kernel[4, 5], rel=1e-9)


def test_blur_preserves_sum():
    rng = np.random.default_rng(8)
    img = rng.random((64, 64)) * 200
    out = gaussian_blur(img, 1.5)
    assert out.sum() == pytest.approx(img.sum(), rel=1e-6)


def test_noise_statistics_seeded():
    img = GrayImage(np.full((512, 512), 100.0))
    out = corrupt(img, 0.0, 50.0, seed=77)
    delta = out.pixels - img.pixels
    assert -0.5 <= delta.mean() <= 0.5
    assert 49.0 <= delta.std() <= 51.0


def test_corrupt_deterministic():
    img = GrayImage(np.full((64, 64), 100.0))
    a = corrupt(img, 1.0, 30.0, seed=5)
    b = corrupt(img, 1.0, 30.0, seed=5)
    np.testing.assert_array_equal(a.pixels, b.pixels)
    c = corrupt(img, 1.0, 30.0, seed=6)
    assert not np.array_equal(a.pixels, c.pixels)


def test_poissonize_zero_and_multiples():
    img = GrayImage(np.zeros((16, 16)))
    out = poissonize(img, seed=1)
    assert np.all(out.pixels == 0.0)
    img2 = GrayImage(np.full((64, 64), 87.0))
    out2 = poissonize(img2, seed=2)
    assert np.all(np.mod(out2.pixels, 10.0) == 0.0)
    assert np.all(out2.pixels >= 0.0)


def test_poissonize_moments():
    img = GrayImage(np.full((512, 512), 100.0))
    out = poissonize(img, seed=3)
    assert 98.5 <= out.pixels.mean() <= 101.5
    assert 900.0 <= out.pixels.var() <= 1100.0


def test_poissonize_mean_preserving_at_255():
    img = GrayImage(np.full((512, 512), 255.0))
    out = poissonize(img, seed=4)
    # E[v'] = 255, std of the mean ~ 10*sqrt(25.5)/512 ~ 0.1
    assert out.pixels.mean() == pytest.approx(255.0, abs=0.5)


def test_poissonize_deterministic_and_floors_negative():
    img = GrayImage(np.full((32, 32), -5.0))
    out = poissonize(img, seed=9)
    assert np.all(out.pixels == 0.0)
    img2 = GrayImage(np.full((64, 64), 60.0))
    np.testing.assert_array_equal(poissonize(img2, seed=10).pixels,
                                  poissonize(img2, seed=10).pixels)


def test_step_phantom_transition_column():
    img, gt = step_phantom(64, 64, angle=90.0, foreground=200, background=20)
    assert img.pixels[10, 32] == pytest.approx(110.0)  # mid intensity
    assert img.pixels[10, 20] == 20.0 and img.pixels[10, 50] == 200.0
    ys, xs = np.nonzero(gt.map.mask)
    assert set(xs) == {32}


def test_line_phantom_profile():
    # width 3 centered on a row: three solid foreground rows, clean background
    img, gt = line_phantom(64, 64, angle=0.0, line_width=3.0)
    col = img.pixels[:, 20]
    assert col[32] == 200.0
    assert col[31] == 200.0 and col[33] == 200.0
    assert col[30] == 20.0 and col[34] == 20.0
    # even widths put the half-covered shoulder on the grid
    img2, _ = line_phantom(64, 64, angle=0.0, line_width=2.0)
    col2 = img2.pixels[:, 20]
    assert col2[32] == 200.0
    assert col2[31] == pytest.approx(110.0)
    assert col2[33] == pytest.approx(110.0)


def test_arc_rasterization_connected():
    spec = PhantomSpec(96, 96, (Arc(48, 48, 30, 0.0, 180.0),), mode="ridge",
                       stroke_width=3.0)
    _, gt = generate(spec)
    assert check_gt_connectivity(gt)
    assert gt.map.count() > 60
