"""Backend selection and numpy/numba kernel equivalence.

The numba loops mirror the numpy expressions term by term; the only
permitted divergence is libm-vs-SIMD rounding of exp/tanh, about one
ulp per transcendental, so the paths must agree far below 1e-12.
"""

import subprocess
import sys

import numpy as np
import pytest

import swisht
from swisht import ActivationKind as K
from swisht import ActParams

pytestmark = pytest.mark.skipif(
    "numba" not in swisht.available_backends(), reason="numba not installed"
)

PARAM_GRID = [ActParams(0.1, 1.0), ActParams(0.5, 6.0), ActParams(1.0, 0.5)]


def test_backends_agree_to_ulp_scale():
    xs = np.linspace(-20.0, 20.0, 8001)
    for kind in K:
        for params in PARAM_GRID:
            with swisht.use_backend("numpy"):
                ref = swisht.act_eval_fused_batch(kind, params, xs)
            with swisht.use_backend("numba"):
                got = swisht.act_eval_fused_batch(kind, params, xs)
            for r, g, name in zip(ref, got, ("y", "dx", "dbeta")):
                np.testing.assert_allclose(
                    g, r, rtol=1e-12, atol=1e-12,
                    err_msg=f"{kind.value} {name} {params}",
                )


def test_scalar_loop_matches_batch_on_large_ramp():
    # 1e6-element ramp: batch output equals a scalar loop elementwise
    xs = np.linspace(-8.0, 8.0, 1_000_000)
    params = ActParams(0.1, 1.0)
    batch = swisht.act_forward_batch(K.SWISH_T_C, params, xs)
    loop = np.array([swisht.act_forward(K.SWISH_T_C, params, float(v)) for v in xs])
    assert np.abs(batch - loop).max() <= 1e-15


def test_scalar_loop_matches_batch_exhaustively_small(backend):
    xs = np.linspace(-10.0, 10.0, 2001)
    params = ActParams(0.5, 2.0)
    for kind in (K.SWISH_T, K.SWISH_T_C, K.MISH, K.GELU):
        batch = swisht.act_forward_batch(kind, params, xs)
        loop = np.array([swisht.act_forward(kind, params, float(v)) for v in xs])
        np.testing.assert_array_equal(batch, loop)


def test_set_backend_round_trip():
    start = swisht.get_backend()
    with swisht.use_backend("numpy"):
        assert swisht.get_backend() == "numpy"
        with swisht.use_backend("numba"):
            assert swisht.get_backend() == "numba"
        assert swisht.get_backend() == "numpy"
    assert swisht.get_backend() == start


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        swisht.set_backend("cuda")


@pytest.mark.parametrize("name", ["numpy", "numba"])
def test_env_flag_selects_backend(name):
    code = "import swisht; print(swisht.get_backend())"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "SWISHT_BACKEND": name},
        check=True,
    )
    assert out.stdout.strip() == name


def test_env_flag_rejects_unknown_backend():
    code = "import swisht; swisht.get_backend()"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "SWISHT_BACKEND": "fortran"},
    )
    assert out.returncode != 0
    assert "SWISHT_BACKEND" in out.stderr
