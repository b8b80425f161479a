"""Smoke test for the pyhelixkit extension module.

Run after `pip install --no-build-isolation crates/python`:

    python crates/python/python/smoke_test.py
"""

import json
import math

import pyhelixkit as hk


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    helix = hk.Curve.helix(2.0, 1.0)
    assert helix.dim == 3 and helix.source == "analytic"

    app = hk.build_apparatus(helix, 512)
    assert len(app) == 512
    assert all(close(k, 0.4, 1e-9) for k in app.curvature(1))
    assert all(close(k, 0.2, 1e-9) for k in app.curvature(2))

    h = hk.harmonic_h(app)
    assert all(close(v, 2.0, 1e-9) for v in h.values(1))
    verdict = hk.classify("inclined", h)
    assert verdict.is_helix
    assert hk.classify("inclined", h, method="differential").is_helix
    axis = hk.reconstruct_axis(app, h, verdict)
    assert max(abs(a - b) for a, b in zip(axis.x, [0.0, 0.0, 1.0])) <= 1e-6
    assert close(math.cos(axis.phi), 1 / math.sqrt(5), 1e-9)

    oracle = hk.brute_force_axis(app, 1, resolution=32)
    assert oracle is not None and oracle.verified
    assert hk.brute_force_axis(app, 2, resolution=32) is None

    report = json.loads(hk.analyze(helix, name="helix"))
    by_kind = {v["kind"]: v["is_helix"] for v in report["verdicts"] if v["method"] == "algebraic"}
    assert by_kind == {"inclined": True, "v2_slant": False, "vn_slant": True}, by_kind

    curve, synth = hk.synthesize(hk.Curve.prescribed(["0.4", "0.2"], (0.0, 10.0), 1e-3))
    assert curve.source == "sampled" and synth.dim == 3

    v2 = hk.build_apparatus(hk.fixture("v2", 4, 0))
    g = hk.functions_g(v2)
    assert hk.classify("v2", g).is_helix

    try:
        hk.build_apparatus(hk.Curve.parse("dim 3 on [0, 6]: x = cos(t); y = sin(t); z = 0"))
    except hk.CurveError as e:
        assert "degenerate at step 3" in str(e)
    else:
        raise AssertionError("planar circle accepted")

    try:
        hk.Curve.parse("dim 3: x = cos(t")
    except hk.HelixkitError as e:
        assert not isinstance(e, hk.CurveError)
    else:
        raise AssertionError("syntax error accepted")

    print("pyhelixkit smoke test passed")


if __name__ == "__main__":
    main()
