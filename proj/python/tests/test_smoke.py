import numpy as np
import pytest

import cgoeit

SMALL = {"mesh_level": 2, "degree": 4, "grid_n": 24, "xi_cutoff": 6}


def test_named_phantoms_evaluate():
    g = cgoeit.eval_phantom("two_layer", 20)
    assert g.shape == (20, 20, 20)
    assert g.dtype == np.complex128
    centre = g[10, 10, 10]
    assert abs(centre - (1.5 + 0.5j)) < 0.05
    assert np.allclose(g[0, 0, 0], 1.0)
    spec = cgoeit.named_phantom("small_contrast")
    assert np.allclose(cgoeit.eval_phantom(spec, 16), cgoeit.eval_phantom("small_contrast", 16))


def test_radial_dtn_of_constant_is_l():
    lam = cgoeit.radial_dtn("constant", 6)
    assert np.allclose(lam, np.arange(7), atol=1e-8)


def test_zeta_frame():
    xi = np.array([1.0, 2.0, 0.5])
    z = np.array(cgoeit.zeta_frame(xi, 3.0))
    assert abs(z @ z) < 1e-12
    assert abs(xi @ xi + 2 * (z @ xi)) < 1e-12


def test_constant_phantom_round_trip():
    cfg = dict(SMALL, phantom="constant")
    sim = cgoeit.simulate(cfg)
    assert sim["lambda_gamma"].shape == (25, 25)
    assert np.array_equal(sim["lambda_gamma"], sim["lambda_1"])
    rec = cgoeit.reconstruct(cfg, sim["lambda_gamma"], sim["lambda_1"])
    assert rec["gamma"].shape == (24, 24, 24)
    assert np.max(np.abs(rec["gamma"] - 1.0)) < 1e-7
    assert all(s["t_re"] is not None for s in rec["samples"])


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        cgoeit.simulate({"grid_n": 8})
    with pytest.raises(cgoeit.UsageError):
        cgoeit.simulate({"gridn": 24})
    with pytest.raises(cgoeit.UsageError):
        cgoeit.reconstruct(SMALL, np.eye(3), np.eye(3))

    run = tmp_path / "run"
    cgoeit.run_simulate(dict(SMALL, phantom="constant", output=run))
    data = bytearray((run / "lambda_gamma.bin").read_bytes())
    data[-1] ^= 1
    (run / "lambda_gamma.bin").write_bytes(bytes(data))
    with pytest.raises(cgoeit.IntegrityError):
        cgoeit.run_reconstruct(dict(SMALL, phantom="constant", output=run))
    assert not (run / "gamma_rec.bin").exists()
