"""Full training loop behavior on the synthetic dataset, plus the
random-net landscape generator.
"""

import math

import numpy as np
import pytest

from swisht import ActivationKind as K
from swisht import ActParams
from swisht.data import synth_blobs
from swisht.nn import TrainConfig, landscape, landscape_weights, train

ALL_KINDS = list(K)


@pytest.fixture(scope="module")
def blobs():
    return synth_blobs(200, seed=0), synth_blobs(200, seed=1)


def _cfg(**kw):
    base = dict(seed=0, epochs=20, batch_size=32, lr0=0.01, kind=K.SWISH_T_C)
    base.update(kw)
    return TrainConfig(**base)


class TestTrainLoop:
    def test_separable_blobs_reach_high_accuracy(self, blobs):
        for kind in (K.SWISH_T, K.SWISH_T_A, K.SWISH_T_B, K.SWISH_T_C):
            report = train(_cfg(kind=kind), *blobs)
            assert report.final_test_acc >= 0.98, kind

    def test_bitwise_deterministic(self, blobs):
        a = train(_cfg(epochs=4), *blobs)
        b = train(_cfg(epochs=4), *blobs)
        assert a.metrics_table() == b.metrics_table()

    def test_loss_decreases_for_every_kind(self, blobs):
        for kind in ALL_KINDS:
            report = train(_cfg(kind=kind, epochs=5), *blobs)
            assert report.epochs[-1].train_loss < report.epochs[0].train_loss, kind

    def test_fixed_beta_bit_identical_across_epochs(self, blobs):
        report = train(_cfg(beta0=6.0, beta_trainable=False, epochs=6), *blobs)
        assert all(row.beta == 6.0 for row in report.epochs)

    def test_trainable_beta_moves_and_stays_finite(self, blobs):
        report = train(_cfg(epochs=6), *blobs)
        assert report.final_beta != 1.0
        assert math.isfinite(report.final_beta)

    def test_beta_constant_for_non_beta_kind(self, blobs):
        report = train(_cfg(kind=K.RELU, epochs=3), *blobs)
        assert all(row.beta == 1.0 for row in report.epochs)

    def test_lr_follows_cosine_schedule(self, blobs):
        report = train(_cfg(epochs=4), *blobs)
        lrs = [row.lr for row in report.epochs]
        assert lrs[0] == 0.01
        assert lrs == sorted(lrs, reverse=True)

    def test_constant_scheduler(self, blobs):
        report = train(_cfg(scheduler="constant", epochs=3), *blobs)
        assert all(row.lr == 0.01 for row in report.epochs)

    def test_report_round_trip_dict(self, blobs):
        report = train(_cfg(epochs=2), *blobs)
        d = report.to_dict()
        assert d["config"]["kind"] == "swish_t_c"
        assert len(d["epochs"]) == 2
        assert d["final_beta"] == report.final_beta

    def test_rejects_mismatched_feature_dims(self, blobs):
        train_set, _ = blobs
        bad_test = synth_blobs(10, seed=2)
        bad = type(bad_test)(np.ones((4, 3)), np.zeros(4, dtype=np.int64), 2)
        with pytest.raises(ValueError):
            train(_cfg(epochs=1), train_set, bad)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)
        with pytest.raises(ValueError):
            TrainConfig(lr0=0.0)
        with pytest.raises(ValueError):
            TrainConfig(batch_size=0)
        with pytest.raises(ValueError):
            TrainConfig(scheduler="linear")


class TestLandscape:
    def test_deterministic_per_seed(self):
        a = landscape(3, K.MISH, ActParams(), resolution=48)
        b = landscape(3, K.MISH, ActParams(), resolution=48)
        np.testing.assert_array_equal(a, b)
        c = landscape(4, K.MISH, ActParams(), resolution=48)
        assert not np.array_equal(a, c)

    def test_near_identity_activation_gives_affine_surface(self):
        # swish_t_c at alpha=1, beta=1e-4 acts as identity, so the net
        # collapses to the product of its weight matrices
        seed, res = 9, 64
        surface = landscape(seed, K.SWISH_T_C, ActParams(1.0, 1e-4), resolution=res)
        w1, w2, w3 = landscape_weights(seed)
        axis = np.linspace(-5.0, 5.0, res)
        gx, gy = np.meshgrid(axis, axis)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        affine = (((pts @ w1.T) @ w2.T) @ w3.T).reshape(res, res)
        assert np.abs(surface - affine).max() <= 1e-2

    def test_relu_leaves_exactly_dead_units(self):
        # some grid points must have at least one exactly-zero hidden unit
        seed, res = 0, 64
        w1, w2, _ = landscape_weights(seed)
        axis = np.linspace(-5.0, 5.0, res)
        gx, gy = np.meshgrid(axis, axis)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        h1 = np.maximum(pts @ w1.T, 0.0)
        h2 = np.maximum(h1 @ w2.T, 0.0)
        frac = np.mean((h2 == 0.0).any(axis=1))
        assert frac > 0.0

    def test_resolution_validated(self):
        with pytest.raises(ValueError):
            landscape(0, K.RELU, ActParams(), resolution=1)
