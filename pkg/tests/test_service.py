import io
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from coshrem.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def _pgm_bytes(pixels: np.ndarray) -> bytes:
    h, w = pixels.shape
    return (f"P5\n{w} {h}\n255\n".encode()
            + pixels.astype(np.uint8).tobytes())


SMALL_PARAMS = {
    "mode": "edge",
    "system": {"waveletSupport": 16.0, "gaussianSupport": 10.0,
               "scalesPerOctave": 2, "octaves": 1.5, "shearLevel": 2,
               "alpha": 0.6},
    "detection": {"minContrast": 20.0, "epsilonFactor": 0.1,
                  "pivotScales": [0, 1]},
    "thresholds": {"lowThreshold": 0.3, "highThreshold": 0.5},
}


def _detect(client, pixels, params=None):
    return client.post(
        "/api/detect",
        files={"image": ("t.pgm", _pgm_bytes(pixels), "image/x-portable-graymap")},
        data={"params": json.dumps(params or SMALL_PARAMS)})


def test_schema_shape(client):
    r = client.get("/api/params/schema")
    assert r.status_code == 200
    body = r.json()
    params = body["parameters"]
    assert len(params) == 12  # ten tunables + two hysteresis thresholds
    groups = {}
    for p in params:
        groups.setdefault(p["group"], []).append(p["name"])
        assert "type" in p and "default" in p
    assert len(groups["system"]) == 6
    assert len(groups["detection"]) == 4
    assert len(groups["postprocess"]) == 2


def test_detect_constant_image_zero_stats(client):
    r = _detect(client, np.full((64, 64), 128.0))
    assert r.status_code == 200
    body = r.json()
    assert body["stats"]["measureMax"] == 0.0
    assert body["stats"]["onPixels"] == 0
    assert body["stats"]["positivePixels"] == 0
    assert "runId" in body and "timings" in body


def test_detect_cache_hit_second_call(client):
    px = np.zeros((64, 64))
    px[:, 32:] = 200.0
    r1 = _detect(client, px)
    r2 = _detect(client, px)
    assert r2.json()["cacheHit"] is True
    assert r2.json()["timings"]["systemBuildMs"] <= \
        max(0.05 * max(r1.json()["timings"]["systemBuildMs"], 1e-9), 1.0)


def test_result_layers_are_png(client):
    px = np.zeros((64, 64))
    px[:, 32:] = 200.0
    run_id = _detect(client, px).json()["runId"]
    for layer in ("measure", "overlay", "orientation", "curvature", "skeleton"):
        r = client.get(f"/api/result/{run_id}/{layer}")
        assert r.status_code == 200, layer
        assert r.content[:8] == b"\x89PNG\r\n\x1a\n"
        assert r.headers["content-type"] == "image/png"


def test_result_unknown_run_and_layer(client):
    r = client.get("/api/result/deadbeef/measure")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_run"
    px = np.zeros((64, 64))
    run_id = _detect(client, px).json()["runId"]
    r = client.get(f"/api/result/{run_id}/nope")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_layer"


def test_out_of_range_param_rejected(client):
    bad = json.loads(json.dumps(SMALL_PARAMS))
    bad["system"]["alpha"] = 1.5
    r = _detect(client, np.zeros((64, 64)), bad)
    assert r.status_code == 422
    body = r.json()
    assert body["code"] == "out_of_range"
    assert body["field"] == "alpha"


def test_bad_threshold_order_rejected(client):
    bad = json.loads(json.dumps(SMALL_PARAMS))
    bad["thresholds"] = {"lowThreshold": 0.8, "highThreshold": 0.3}
    r = _detect(client, np.zeros((64, 64)), bad)
    assert r.status_code == 422
    assert r.json()["field"] == "lowThreshold"


def test_missing_image_rejected(client):
    r = client.post("/api/detect", data={"params": json.dumps(SMALL_PARAMS)})
    assert r.status_code == 400
    assert r.json()["code"] == "missing_image"


def test_phantom_endpoint_and_detect_by_reference(client):
    r = client.post("/api/phantom", json={
        "spec": {
            "schema_version": 1, "width": 64, "height": 64, "mode": "ridge",
            "foreground": 200.0, "background": 20.0, "stroke_width": 3.0,
            "primitives": [{"type": "segment", "x0": 8, "y0": 32,
                            "x1": 55, "y1": 32}],
        },
        "noise": 10.0, "seed": 5,
    })
    assert r.status_code == 200
    ref = r.json()["runId"]
    assert r.json()["gtPixels"] > 0

    params = json.loads(json.dumps(SMALL_PARAMS))
    params["mode"] = "ridge"
    params["imageRef"] = ref
    r2 = client.post("/api/detect", data={"params": json.dumps(params)})
    assert r2.status_code == 200
    assert r2.json()["stats"]["positivePixels"] > 0


def test_phantom_standard_name(client):
    r = client.post("/api/phantom", json={"standard": "line-0"})
    assert r.status_code == 200
    r2 = client.post("/api/phantom", json={"standard": "bogus"})
    assert r2.status_code == 422
    assert r2.json()["code"] == "unknown_phantom"
