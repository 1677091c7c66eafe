"""Numba ``@njit`` twins of the numpy batch kernels.

Formulas mirror ``kernels`` expression by expression; the backends may
differ by libm-vs-SIMD rounding of exp/tanh (about one ulp), nothing
more.  Kind dispatch uses small integer codes because jitted code
cannot branch on enum members.  Compiled artifacts are cached on disk,
so the first call in a fresh environment pays the JIT cost once.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .kinds import ActivationKind

KIND_CODE = {kind: code for code, kind in enumerate(ActivationKind)}

_RELU = KIND_CODE[ActivationKind.RELU]
_LEAKY = KIND_CODE[ActivationKind.LEAKY_RELU]
_GELU = KIND_CODE[ActivationKind.GELU]
_SILU = KIND_CODE[ActivationKind.SILU]
_SWISH = KIND_CODE[ActivationKind.SWISH]
_MISH = KIND_CODE[ActivationKind.MISH]
_SWISH_T = KIND_CODE[ActivationKind.SWISH_T]
_SWISH_T_A = KIND_CODE[ActivationKind.SWISH_T_A]
_SWISH_T_B = KIND_CODE[ActivationKind.SWISH_T_B]
_SWISH_T_C = KIND_CODE[ActivationKind.SWISH_T_C]

GELU_SCALE = math.sqrt(2.0 / math.pi)
GELU_CUBIC = 0.044715
LEAKY_SLOPE = 0.01


@njit(cache=True)
def _sig(u):
    if u >= 0.0:
        return 1.0 / (1.0 + math.exp(-u))
    e = math.exp(u)
    return e / (1.0 + e)


@njit(cache=True)
def _softplus(x):
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


@njit(cache=True)
def _forward_one(code, alpha, beta, x):
    if code == _SWISH_T:
        return x * _sig(beta * x) + alpha * math.tanh(x)
    if code == _SWISH_T_A:
        return _sig(x) * (x + 2.0 * alpha) - alpha
    if code == _SWISH_T_B:
        return _sig(beta * x) * (x + 2.0 * alpha) - alpha
    if code == _SWISH_T_C:
        return _sig(beta * x) * (x + 2.0 * alpha / beta) - alpha / beta
    if code == _SWISH:
        return x * _sig(beta * x)
    if code == _SILU:
        return x * _sig(x)
    if code == _RELU:
        return max(x, 0.0)
    if code == _LEAKY:
        return x if x > 0.0 else LEAKY_SLOPE * x
    if code == _GELU:
        u = GELU_SCALE * (x + GELU_CUBIC * x * x * x)
        return 0.5 * x * (1.0 + math.tanh(u))
    # mish
    return x * math.tanh(_softplus(x))


@njit(cache=True)
def _dx_one(code, alpha, beta, x):
    if code == _SWISH_T:
        s = _sig(beta * x)
        s2 = _sig(2.0 * x)
        return s + beta * x * s * (1.0 - s) + 4.0 * alpha * s2 * (1.0 - s2)
    if code == _SWISH_T_A:
        s = _sig(x)
        f = s * (x + 2.0 * alpha) - alpha
        return s * (x + alpha + 1.0 - f)
    if code == _SWISH_T_B:
        s = _sig(beta * x)
        f = s * (x + 2.0 * alpha) - alpha
        return s * (beta * (x + alpha - f) + 1.0)
    if code == _SWISH_T_C:
        s = _sig(beta * x)
        f = s * (x + 2.0 * alpha / beta) - alpha / beta
        return s * (beta * (x - f) + alpha + 1.0)
    if code == _SWISH:
        s = _sig(beta * x)
        return s + beta * x * s * (1.0 - s)
    if code == _SILU:
        s = _sig(x)
        return s + x * s * (1.0 - s)
    if code == _RELU:
        return 1.0 if x > 0.0 else 0.0
    if code == _LEAKY:
        return 1.0 if x > 0.0 else LEAKY_SLOPE
    if code == _GELU:
        u = GELU_SCALE * (x + GELU_CUBIC * x * x * x)
        t = math.tanh(u)
        du = GELU_SCALE * (1.0 + 3.0 * GELU_CUBIC * x * x)
        return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du
    # mish
    t = math.tanh(_softplus(x))
    return t + x * (1.0 - t * t) * _sig(x)


@njit(cache=True)
def _dbeta_one(code, alpha, beta, x):
    if code == _SWISH_T or code == _SWISH:
        s = _sig(beta * x)
        return x * x * s * (1.0 - s)
    if code == _SWISH_T_B:
        s = _sig(beta * x)
        return x * (x + 2.0 * alpha) * s * (1.0 - s)
    if code == _SWISH_T_C:
        s = _sig(beta * x)
        bb = beta * beta
        return x * (x + 2.0 * alpha / beta) * s * (1.0 - s) - 2.0 * alpha * s / bb + alpha / bb
    return 0.0


@njit(cache=True)
def forward(code, alpha, beta, xs):
    out = np.empty(xs.size, dtype=np.float64)
    for i in range(xs.size):
        out[i] = _forward_one(code, alpha, beta, xs[i])
    return out


@njit(cache=True)
def dx(code, alpha, beta, xs):
    out = np.empty(xs.size, dtype=np.float64)
    for i in range(xs.size):
        out[i] = _dx_one(code, alpha, beta, xs[i])
    return out


@njit(cache=True)
def dbeta(code, alpha, beta, xs):
    out = np.empty(xs.size, dtype=np.float64)
    for i in range(xs.size):
        out[i] = _dbeta_one(code, alpha, beta, xs[i])
    return out


@njit(cache=True)
def fused(code, alpha, beta, xs):
    n = xs.size
    y = np.empty(n, dtype=np.float64)
    dydx = np.empty(n, dtype=np.float64)
    dydb = np.empty(n, dtype=np.float64)
    if code == _SWISH_T:
        for i in range(n):
            x = xs[i]
            s = _sig(beta * x)
            s2 = _sig(2.0 * x)
            y[i] = x * s + alpha * math.tanh(x)
            dydx[i] = s + beta * x * s * (1.0 - s) + 4.0 * alpha * s2 * (1.0 - s2)
            dydb[i] = x * x * s * (1.0 - s)
    elif code == _SWISH_T_A:
        for i in range(n):
            x = xs[i]
            s = _sig(x)
            f = s * (x + 2.0 * alpha) - alpha
            y[i] = f
            dydx[i] = s * (x + alpha + 1.0 - f)
            dydb[i] = 0.0
    elif code == _SWISH_T_B:
        for i in range(n):
            x = xs[i]
            s = _sig(beta * x)
            f = s * (x + 2.0 * alpha) - alpha
            y[i] = f
            dydx[i] = s * (beta * (x + alpha - f) + 1.0)
            dydb[i] = x * (x + 2.0 * alpha) * s * (1.0 - s)
    elif code == _SWISH_T_C:
        bb = beta * beta
        for i in range(n):
            x = xs[i]
            s = _sig(beta * x)
            f = s * (x + 2.0 * alpha / beta) - alpha / beta
            y[i] = f
            dydx[i] = s * (beta * (x - f) + alpha + 1.0)
            dydb[i] = x * (x + 2.0 * alpha / beta) * s * (1.0 - s) - 2.0 * alpha * s / bb + alpha / bb
    elif code == _SWISH:
        for i in range(n):
            x = xs[i]
            s = _sig(beta * x)
            y[i] = x * s
            dydx[i] = s + beta * x * s * (1.0 - s)
            dydb[i] = x * x * s * (1.0 - s)
    elif code == _SILU:
        for i in range(n):
            x = xs[i]
            s = _sig(x)
            y[i] = x * s
            dydx[i] = s + x * s * (1.0 - s)
            dydb[i] = 0.0
    elif code == _GELU:
        for i in range(n):
            x = xs[i]
            u = GELU_SCALE * (x + GELU_CUBIC * x * x * x)
            t = math.tanh(u)
            y[i] = 0.5 * x * (1.0 + t)
            du = GELU_SCALE * (1.0 + 3.0 * GELU_CUBIC * x * x)
            dydx[i] = 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du
            dydb[i] = 0.0
    elif code == _MISH:
        for i in range(n):
            x = xs[i]
            t = math.tanh(_softplus(x))
            y[i] = x * t
            dydx[i] = t + x * (1.0 - t * t) * _sig(x)
            dydb[i] = 0.0
    else:
        for i in range(n):
            x = xs[i]
            y[i] = _forward_one(code, alpha, beta, x)
            dydx[i] = _dx_one(code, alpha, beta, x)
            dydb[i] = 0.0
    return y, dydx, dydb
