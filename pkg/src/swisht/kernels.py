"""Elementwise activation kernels: forward values, input derivatives,
beta derivatives, and a fused single-pass evaluation.

Two interchangeable batch backends exist: a pure-numpy path (always
available, instrumented for transcendental counting) and a numba
``@njit`` path for the hot loops.  Selection order: the
``SWISHT_BACKEND`` environment variable (``"numpy"`` or ``"numba"``),
else numba when importable, else numpy.  Within one backend the scalar
ops, the batch ops, and the fused op agree bitwise because the scalar
ops evaluate the batch kernel on a singleton and the fused kernel
reuses the exact expressions of the unfused ones.

All math is in 64-bit floats.  The sigmoid is computed in a
branch-stable form that cannot overflow for any finite argument.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from typing import Iterator

import numpy as np

from . import counters
from .kinds import (
    ActivationKind,
    ActParams,
    EvalTriple,
    validate_params,
)

GELU_SCALE = math.sqrt(2.0 / math.pi)
GELU_CUBIC = 0.044715
LEAKY_SLOPE = 0.01

# ---------------------------------------------------------------------------
# backend selection


def _autodetect_backend() -> str:
    forced = os.environ.get("SWISHT_BACKEND", "").strip().lower()
    if forced:
        if forced not in ("numpy", "numba"):
            raise ValueError(
                f"SWISHT_BACKEND must be 'numpy' or 'numba', got {forced!r}"
            )
        if forced == "numba" and not _numba_importable():
            raise ImportError("SWISHT_BACKEND=numba but numba is not installed")
        return forced
    return "numba" if _numba_importable() else "numpy"


def _numba_importable() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


_backend: str | None = None


def get_backend() -> str:
    """Name of the active batch backend ('numpy' or 'numba')."""
    global _backend
    if _backend is None:
        _backend = _autodetect_backend()
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numpy", "numba"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _numba_importable():
        raise ImportError("numba backend requested but numba is not installed")
    _backend = name


def available_backends() -> tuple[str, ...]:
    return ("numpy", "numba") if _numba_importable() else ("numpy",)


@contextmanager
def use_backend(name: str) -> Iterator[None]:
    previous = get_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


# ---------------------------------------------------------------------------
# numpy backend

def _sig(u: np.ndarray) -> np.ndarray:
    """Stable sigmoid: never exponentiates a positive argument."""
    counters.tally_sigmoid(u.size)
    out = np.empty_like(u)
    pos = u >= 0.0
    neg = ~pos
    out[pos] = 1.0 / (1.0 + np.exp(-u[pos]))
    eu = np.exp(u[neg])
    out[neg] = eu / (1.0 + eu)
    return out


def _tanh(u: np.ndarray) -> np.ndarray:
    counters.tally_tanh(u.size)
    return np.tanh(u)


def _softplus(x: np.ndarray) -> np.ndarray:
    """max(x, 0) + log1p(exp(-|x|)); overflow-safe."""
    counters.tally_exp(x.size)
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _forward_np(kind, alpha, beta, x):
    if kind is ActivationKind.SWISH_T:
        return x * _sig(beta * x) + alpha * _tanh(x)
    if kind is ActivationKind.SWISH_T_A:
        return _sig(x) * (x + 2.0 * alpha) - alpha
    if kind is ActivationKind.SWISH_T_B:
        return _sig(beta * x) * (x + 2.0 * alpha) - alpha
    if kind is ActivationKind.SWISH_T_C:
        return _sig(beta * x) * (x + 2.0 * alpha / beta) - alpha / beta
    if kind is ActivationKind.SWISH:
        return x * _sig(beta * x)
    if kind is ActivationKind.SILU:
        return x * _sig(x)
    if kind is ActivationKind.RELU:
        return np.maximum(x, 0.0)
    if kind is ActivationKind.LEAKY_RELU:
        return np.where(x > 0.0, x, LEAKY_SLOPE * x)
    if kind is ActivationKind.GELU:
        u = GELU_SCALE * (x + GELU_CUBIC * x * x * x)
        return 0.5 * x * (1.0 + _tanh(u))
    if kind is ActivationKind.MISH:
        return x * _tanh(_softplus(x))
    raise AssertionError(kind)


def _dx_np(kind, alpha, beta, x):
    if kind is ActivationKind.SWISH_T:
        s = _sig(beta * x)
        s2 = _sig(2.0 * x)
        return s + beta * x * s * (1.0 - s) + 4.0 * alpha * s2 * (1.0 - s2)
    if kind is ActivationKind.SWISH_T_A:
        s = _sig(x)
        f = s * (x + 2.0 * alpha) - alpha
        return s * (x + alpha + 1.0 - f)
    if kind is ActivationKind.SWISH_T_B:
        s = _sig(beta * x)
        f = s * (x + 2.0 * alpha) - alpha
        return s * (beta * (x + alpha - f) + 1.0)
    if kind is ActivationKind.SWISH_T_C:
        s = _sig(beta * x)
        f = s * (x + 2.0 * alpha / beta) - alpha / beta
        return s * (beta * (x - f) + alpha + 1.0)
    if kind is ActivationKind.SWISH:
        s = _sig(beta * x)
        return s + beta * x * s * (1.0 - s)
    if kind is ActivationKind.SILU:
        s = _sig(x)
        return s + x * s * (1.0 - s)
    if kind is ActivationKind.RELU:
        return np.where(x > 0.0, 1.0, 0.0)
    if kind is ActivationKind.LEAKY_RELU:
        return np.where(x > 0.0, 1.0, LEAKY_SLOPE)
    if kind is ActivationKind.GELU:
        u = GELU_SCALE * (x + GELU_CUBIC * x * x * x)
        t = _tanh(u)
        du = GELU_SCALE * (1.0 + 3.0 * GELU_CUBIC * x * x)
        return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du
    if kind is ActivationKind.MISH:
        t = _tanh(_softplus(x))
        return t + x * (1.0 - t * t) * _sig(x)
    raise AssertionError(kind)


def _dbeta_np(kind, alpha, beta, x):
    if kind is ActivationKind.SWISH_T or kind is ActivationKind.SWISH:
        s = _sig(beta * x)
        return x * x * s * (1.0 - s)
    if kind is ActivationKind.SWISH_T_B:
        s = _sig(beta * x)
        return x * (x + 2.0 * alpha) * s * (1.0 - s)
    if kind is ActivationKind.SWISH_T_C:
        s = _sig(beta * x)
        bb = beta * beta
        return x * (x + 2.0 * alpha / beta) * s * (1.0 - s) - 2.0 * alpha * s / bb + alpha / bb
    return np.zeros_like(x)


def _fused_np(kind, alpha, beta, x):
    """One pass computing (y, dy/dx, dy/dbeta); sigma(beta*x) evaluated once."""
    if kind is ActivationKind.SWISH_T:
        s = _sig(beta * x)
        s2 = _sig(2.0 * x)
        y = x * s + alpha * _tanh(x)
        dx = s + beta * x * s * (1.0 - s) + 4.0 * alpha * s2 * (1.0 - s2)
        db = x * x * s * (1.0 - s)
        return y, dx, db
    if kind is ActivationKind.SWISH_T_A:
        s = _sig(x)
        y = s * (x + 2.0 * alpha) - alpha
        dx = s * (x + alpha + 1.0 - y)
        return y, dx, np.zeros_like(x)
    if kind is ActivationKind.SWISH_T_B:
        s = _sig(beta * x)
        y = s * (x + 2.0 * alpha) - alpha
        dx = s * (beta * (x + alpha - y) + 1.0)
        db = x * (x + 2.0 * alpha) * s * (1.0 - s)
        return y, dx, db
    if kind is ActivationKind.SWISH_T_C:
        s = _sig(beta * x)
        y = s * (x + 2.0 * alpha / beta) - alpha / beta
        dx = s * (beta * (x - y) + alpha + 1.0)
        bb = beta * beta
        db = x * (x + 2.0 * alpha / beta) * s * (1.0 - s) - 2.0 * alpha * s / bb + alpha / bb
        return y, dx, db
    if kind is ActivationKind.SWISH:
        s = _sig(beta * x)
        y = x * s
        dx = s + beta * x * s * (1.0 - s)
        db = x * x * s * (1.0 - s)
        return y, dx, db
    if kind is ActivationKind.SILU:
        s = _sig(x)
        y = x * s
        dx = s + x * s * (1.0 - s)
        return y, dx, np.zeros_like(x)
    if kind is ActivationKind.RELU:
        return np.maximum(x, 0.0), np.where(x > 0.0, 1.0, 0.0), np.zeros_like(x)
    if kind is ActivationKind.LEAKY_RELU:
        y = np.where(x > 0.0, x, LEAKY_SLOPE * x)
        return y, np.where(x > 0.0, 1.0, LEAKY_SLOPE), np.zeros_like(x)
    if kind is ActivationKind.GELU:
        u = GELU_SCALE * (x + GELU_CUBIC * x * x * x)
        t = _tanh(u)
        y = 0.5 * x * (1.0 + t)
        du = GELU_SCALE * (1.0 + 3.0 * GELU_CUBIC * x * x)
        dx = 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du
        return y, dx, np.zeros_like(x)
    if kind is ActivationKind.MISH:
        t = _tanh(_softplus(x))
        y = x * t
        dx = t + x * (1.0 - t * t) * _sig(x)
        return y, dx, np.zeros_like(x)
    raise AssertionError(kind)


# ---------------------------------------------------------------------------
# batch API (backend-dispatched)

def _as_batch(xs) -> np.ndarray:
    return np.ascontiguousarray(xs, dtype=np.float64)


def act_forward_batch(kind: ActivationKind, params: ActParams, xs) -> np.ndarray:
    """Elementwise activation values; equals the scalar op element by element."""
    validate_params(kind, params)
    xs = _as_batch(xs)
    if get_backend() == "numba":
        from . import _numba_kernels as nb

        return nb.forward(nb.KIND_CODE[kind], params.alpha, params.beta, xs)
    return _forward_np(kind, params.alpha, params.beta, xs)


def act_dx_batch(kind: ActivationKind, params: ActParams, xs) -> np.ndarray:
    """Elementwise analytic d/dx, using the reduced forms that reuse the forward value."""
    validate_params(kind, params)
    xs = _as_batch(xs)
    if get_backend() == "numba":
        from . import _numba_kernels as nb

        return nb.dx(nb.KIND_CODE[kind], params.alpha, params.beta, xs)
    return _dx_np(kind, params.alpha, params.beta, xs)


def act_dbeta_batch(kind: ActivationKind, params: ActParams, xs) -> np.ndarray:
    """Elementwise analytic d/dbeta; identically zero for kinds without beta."""
    validate_params(kind, params)
    xs = _as_batch(xs)
    if get_backend() == "numba":
        from . import _numba_kernels as nb

        return nb.dbeta(nb.KIND_CODE[kind], params.alpha, params.beta, xs)
    return _dbeta_np(kind, params.alpha, params.beta, xs)


def act_eval_fused_batch(
    kind: ActivationKind, params: ActParams, xs
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(values, d/dx, d/dbeta) in a single pass sharing one sigma(beta*x)."""
    validate_params(kind, params)
    xs = _as_batch(xs)
    if get_backend() == "numba":
        from . import _numba_kernels as nb

        return nb.fused(nb.KIND_CODE[kind], params.alpha, params.beta, xs)
    return _fused_np(kind, params.alpha, params.beta, xs)


# ---------------------------------------------------------------------------
# scalar API

def sigmoid(x: float) -> float:
    """Stable logistic 1/(1+e^-x); total over finite reals, never overflows."""
    counters.tally_sigmoid(1)
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def act_forward(kind: ActivationKind, params: ActParams, x: float) -> float:
    return float(act_forward_batch(kind, params, np.array([x], dtype=np.float64))[0])


def act_dx(kind: ActivationKind, params: ActParams, x: float) -> float:
    return float(act_dx_batch(kind, params, np.array([x], dtype=np.float64))[0])


def act_dbeta(kind: ActivationKind, params: ActParams, x: float) -> float:
    return float(act_dbeta_batch(kind, params, np.array([x], dtype=np.float64))[0])


def act_eval_fused(kind: ActivationKind, params: ActParams, x: float) -> EvalTriple:
    y, dx, db = act_eval_fused_batch(kind, params, np.array([x], dtype=np.float64))
    return EvalTriple(float(y[0]), float(dx[0]), float(db[0]))
