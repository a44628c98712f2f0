import numpy as np
import pytest

import xcflab


def test_model_point_eigenvalues_and_cross_curvature():
    p = xcflab.model_point(np.eye(3), np.diag([1.0, 2.0, 3.0]))
    assert p["lambda"] == pytest.approx([1.0, 2.0, 3.0])
    assert np.allclose(p["adj_ein"], np.diag([6.0, 3.0, 2.0]))
    assert p["det_e"] == pytest.approx(6.0)


def test_hyperbolic_frame_curvature():
    p = xcflab.frame_curvature(1.0, 1.0, np.eye(3))
    assert p["sc"] == pytest.approx(-6.0)
    assert np.allclose(p["ein"], np.eye(3))


def test_symbol_kernel_and_deturck_identity():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3))
    g = a @ a.T + 0.5 * np.eye(3)
    b = rng.normal(size=(3, 3))
    e = b @ b.T + 0.5 * np.eye(3)
    xi = [0.3, -0.7, 1.1]
    s = xcflab.symbol_xcf(g, e, xi)
    assert s.shape == (6, 6)
    assert xcflab.kernel_dimension(g, e, xi) == 3
    d = xcflab.symbol_deturck(g, g, xi)
    assert np.allclose(d, (np.asarray(xi) @ np.linalg.solve(g, xi)) * np.eye(6))


def test_symbol_scan_is_seeded():
    r = xcflab.symbol_scan(200, 11)
    assert r["xcf_kernel_dim_histogram"] == {"3": 200}
    assert r["deturck_min_real_part"] > 0
    assert r == xcflab.symbol_scan(200, 11)


def test_verify_algebraic_passes():
    r = xcflab.verify("algebraic", 1.0, 0)
    assert r["pass"] is True
    assert {c["criterion"] for c in r["checks"]} >= {2, 3}


def test_frame_run_and_config_error(tmp_path):
    csv = tmp_path / "m.csv"
    cfg = {
        "backend": "frame",
        "family": {"name": "frame_solvable", "m0": "identity"},
        "flow": {"variant": {"normalized": {"K": -1.0}}, "t_end": 1.0, "dt": 0.01},
        "outputs": {"monitor_csv": str(csv)},
    }
    out = xcflab.run(cfg)
    assert out["status_line"] == "completed"
    assert out["rows"] == 101
    assert len(csv.read_text().splitlines()) == 102
    cfg["flow"]["cfl"] = 0.1
    with pytest.raises(xcflab.XcfError, match="flow.dt"):
        xcflab.run(cfg)


def test_embed_halfspace():
    cfg = {
        "family": {"name": "hyperbolic_halfspace", "K0": -1.0},
        "grid": {"dims": 9, "h": 0.0625, "origin": [0, 0, 1]},
        "flow": {"t_end": 0.0, "dt": 1.0},
    }
    e = xcflab.embed(cfg)
    assert e["quadric"]["mean"] == pytest.approx(-1.0, abs=1e-2)
    c = xcflab.curvature(cfg)
    assert len(c["sc"]) == 7 ** 3
