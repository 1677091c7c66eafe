"""Scalar and batched kernel values against independently computed references.

Reference constants were evaluated with 40-digit arithmetic (mpmath)
from the defining formulas, then frozen here.
"""

import math

import numpy as np
import pytest

import swisht
from swisht import (
    ActivationKind,
    ActParams,
    InvalidParameterError,
    act_dbeta,
    act_dbeta_batch,
    act_dx,
    act_dx_batch,
    act_eval_fused,
    act_eval_fused_batch,
    act_forward,
    act_forward_batch,
    counting,
    sigmoid,
)

K = ActivationKind
P = ActParams(alpha=0.1, beta=1.0)

# 40-digit references, rounded to float64
SIGMOID_1 = 0.7310585786300049
SWISH_T_A_AT_1 = 0.7772702943560059
SWISH_T_AT_1 = 0.8072179942255814
SWISH_T_DBETA_AT_1 = 0.19661193324148185
SWISH_T_B_FUSED_AT_1 = (0.7772702943560059, 0.9669928985197831, 0.23593431988977823)
GELU_AT_1 = 0.8411919906082767
MISH_AT_1 = 0.8650983882673103


class TestSigmoid:
    def test_symmetry_point(self):
        assert sigmoid(0.0) == 0.5

    def test_reference_value(self):
        assert sigmoid(1.0) == pytest.approx(SIGMOID_1, abs=1e-15)

    def test_deep_negative_saturation_no_overflow(self):
        v = sigmoid(-800.0)
        assert 0.0 <= v <= 1e-300

    def test_deep_positive_saturation(self):
        assert sigmoid(800.0) == 1.0

    def test_monotone(self):
        xs = np.linspace(-30, 30, 1001)
        vals = [sigmoid(float(x)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestForward:
    def test_swish_t_a_reference(self, backend):
        assert act_forward(K.SWISH_T_A, P, 1.0) == pytest.approx(SWISH_T_A_AT_1, abs=1e-15)

    def test_swish_t_reference(self, backend):
        assert act_forward(K.SWISH_T, P, 1.0) == pytest.approx(SWISH_T_AT_1, abs=1e-15)

    def test_zero_centered(self, backend):
        for kind in swisht.SWISH_T_FAMILY:
            for alpha in (0.1, 0.5, 1.0):
                for beta in (0.5, 1.0, 2.0, 6.0):
                    assert act_forward(kind, ActParams(alpha, beta), 0.0) == 0.0

    def test_negative_asymptote_is_minus_alpha(self, backend):
        assert act_forward(K.SWISH_T, P, -20.0) == pytest.approx(-0.1, abs=1e-7)

    def test_baselines(self, backend):
        assert act_forward(K.RELU, P, -3.0) == 0.0
        assert act_forward(K.RELU, P, 2.5) == 2.5
        assert act_forward(K.LEAKY_RELU, P, -2.0) == pytest.approx(-0.02)
        assert act_forward(K.GELU, P, 1.0) == pytest.approx(GELU_AT_1, abs=1e-15)
        assert act_forward(K.MISH, P, 1.0) == pytest.approx(MISH_AT_1, abs=1e-15)
        assert act_forward(K.SILU, P, 1.0) == pytest.approx(SIGMOID_1, abs=1e-15)

    def test_mish_large_input_stable(self, backend):
        # naive softplus would overflow: log(1 + e^800)
        assert act_forward(K.MISH, P, 800.0) == pytest.approx(800.0)
        assert math.isfinite(act_forward(K.MISH, P, -800.0))

    def test_swish_t_c_rejects_tiny_beta(self, backend):
        with pytest.raises(InvalidParameterError):
            act_forward(K.SWISH_T_C, ActParams(0.1, 1e-9), 1.0)
        # the identity regime beta = 1e-4 stays legal
        act_forward(K.SWISH_T_C, ActParams(1.0, 1e-4), 1.0)


class TestDerivatives:
    def test_swish_t_a_dx_at_zero(self, backend):
        assert act_dx(K.SWISH_T_A, P, 0.0) == pytest.approx(0.55, abs=1e-15)

    def test_swish_t_dx_at_zero(self, backend):
        assert act_dx(K.SWISH_T, P, 0.0) == pytest.approx(0.6, abs=1e-15)

    def test_relu_subgradient(self, backend):
        assert act_dx(K.RELU, P, -3.0) == 0.0
        assert act_dx(K.RELU, P, 0.0) == 0.0
        assert act_dx(K.RELU, P, 3.0) == 1.0

    def test_swish_t_dbeta_reference(self, backend):
        assert act_dbeta(K.SWISH_T, P, 1.0) == pytest.approx(SWISH_T_DBETA_AT_1, abs=1e-15)

    def test_no_beta_kinds_have_zero_dbeta(self, backend):
        for kind in (K.SWISH_T_A, K.RELU, K.LEAKY_RELU, K.GELU, K.SILU, K.MISH):
            for x in (-3.0, 0.0, 1.7):
                assert act_dbeta(kind, ActParams(0.7, 2.0), x) == 0.0

    def test_swish_t_c_dbeta_cancels_at_zero(self, backend):
        assert act_dbeta(K.SWISH_T_C, P, 0.0) == 0.0


class TestFused:
    def test_swish_t_b_triple(self, backend):
        y, dx, db = act_eval_fused(K.SWISH_T_B, P, 1.0)
        assert (y, dx, db) == pytest.approx(SWISH_T_B_FUSED_AT_1, abs=1e-15)

    def test_swish_t_a_triple(self, backend):
        assert act_eval_fused(K.SWISH_T_A, P, 0.0) == pytest.approx((0.0, 0.55, 0.0), abs=1e-15)

    def test_fused_matches_scalar_ops_bitwise(self, backend):
        # the contract is <= 1e-15 for |x| <= 50; sharing one sigma makes it exact
        xs = np.linspace(-50.0, 50.0, 2001)
        for kind in K:
            params = ActParams(0.5, 2.0)
            y, dx, db = act_eval_fused_batch(kind, params, xs)
            np.testing.assert_array_equal(y, act_forward_batch(kind, params, xs))
            np.testing.assert_array_equal(dx, act_dx_batch(kind, params, xs))
            np.testing.assert_array_equal(db, act_dbeta_batch(kind, params, xs))

    def test_sigma_evaluated_once_per_call(self):
        with counting() as counter:
            for _ in range(10):
                act_eval_fused(K.SWISH_T_A, P, 0.3)
        assert counter.sigmoid_evals == 10


class TestBatch:
    def test_zeros_map_to_zeros(self, backend):
        for kind in swisht.SWISH_T_FAMILY:
            out = act_forward_batch(kind, P, np.zeros(3))
            np.testing.assert_array_equal(out, np.zeros(3))

    def test_singleton_matches_scalar(self, backend):
        for kind in K:
            batch = act_forward_batch(kind, P, np.array([1.0]))
            assert batch.shape == (1,)
            assert batch[0] == act_forward(kind, P, 1.0)

    def test_length_preserved(self, backend, x_grid):
        for op in (act_forward_batch, act_dx_batch, act_dbeta_batch):
            assert op(K.SWISH_T_C, P, x_grid).shape == x_grid.shape

    def test_accepts_lists(self, backend):
        out = act_forward_batch(K.SILU, P, [0.0, 1.0])
        assert out[1] == pytest.approx(SIGMOID_1, abs=1e-15)


def test_outputs_finite_across_extreme_inputs(backend):
    # EvalTriple fields must stay finite for any finite x and valid params
    xs = np.concatenate([
        -np.logspace(-8, 3, 45), [0.0], np.logspace(-8, 3, 45),
    ])
    for kind in K:
        for params in (P, ActParams(1.0, 6.0), ActParams(0.5, 100.0), ActParams(1.0, 1e-4)):
            y, dx, db = act_eval_fused_batch(kind, params, xs)
            assert np.isfinite(y).all(), (kind, params)
            assert np.isfinite(dx).all(), (kind, params)
            assert np.isfinite(db).all(), (kind, params)


def test_scalar_ops_return_python_floats(backend):
    triple = act_eval_fused(K.SWISH_T, P, 0.3)
    assert all(type(v) is float for v in triple)
    assert type(act_forward(K.MISH, P, 0.3)) is float
    assert type(act_dx(K.GELU, P, 0.3)) is float
    assert type(act_dbeta(K.SWISH, P, 0.3)) is float


def test_counter_resets_and_accumulates():
    with counting() as counter:
        act_forward_batch(K.SILU, P, np.zeros(4))
        assert counter.sigmoid_evals == 4
        act_forward_batch(K.SILU, P, np.zeros(2))
        assert counter.sigmoid_evals == 6
        counter.reset()
        assert (counter.sigmoid_evals, counter.tanh_evals, counter.exp_evals) == (0, 0, 0)


def test_invalid_params_rejected_at_construction():
    with pytest.raises(InvalidParameterError):
        ActParams(alpha=float("nan"))
    with pytest.raises(InvalidParameterError):
        ActParams(beta=float("inf"))


def test_parse_kind_round_trip_and_rejection():
    for kind in K:
        assert swisht.parse_kind(kind.value) is kind
    with pytest.raises(ValueError, match="unknown activation kind"):
        swisht.parse_kind("swish_t_d")


def test_has_beta_partition():
    with_beta = {k for k in K if swisht.has_beta(k)}
    assert with_beta == {K.SWISH, K.SWISH_T, K.SWISH_T_B, K.SWISH_T_C}
