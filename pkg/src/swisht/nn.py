"""Minimal dense-network training harness with hand-written backward
passes and one globally shared trainable beta.

Every activation site in a network reads the same beta; their
beta-gradient contributions are summed into a single accumulator and
applied in one optimizer update.  Matrices are plain 2-D float64
numpy arrays (row-major), one row per sample.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import kernels
from .kinds import BETA_MIN, ActivationKind, ActParams, has_beta

Tensor2D = np.ndarray


class BackwardBeforeForwardError(RuntimeError):
    """Backward was invoked without a matching cached forward pass."""


class DenseLayer:
    """Fully connected layer y = x W^T + b with gradient accumulation."""

    def __init__(self, in_dim: int, out_dim: int, rng: np.random.Generator):
        self.weights = rng.normal(0.0, 1.0 / math.sqrt(in_dim), size=(out_dim, in_dim))
        self.bias = np.zeros(out_dim)
        self.grad_weights = np.zeros_like(self.weights)
        self.grad_bias = np.zeros_like(self.bias)
        self.vel_weights = np.zeros_like(self.weights)
        self.vel_bias = np.zeros_like(self.bias)
        self._cached_x: Tensor2D | None = None

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    def forward(self, x: Tensor2D, train: bool = True) -> Tensor2D:
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ValueError(f"expected input of shape (batch, {self.in_dim}), got {x.shape}")
        if train:
            self._cached_x = x
        return x @ self.weights.T + self.bias

    def backward(self, grad_out: Tensor2D) -> Tensor2D:
        if self._cached_x is None:
            raise BackwardBeforeForwardError("dense backward called before forward")
        x = self._cached_x
        self._cached_x = None
        self.grad_weights += grad_out.T @ x
        self.grad_bias += grad_out.sum(axis=0)
        return grad_out @ self.weights

    def zero_grad(self) -> None:
        self.grad_weights[:] = 0.0
        self.grad_bias[:] = 0.0


class GlobalActivation:
    """The network-wide activation: one shared (alpha, beta) for all sites.

    Forward passes stash their inputs on a stack; backward pops in
    reverse order, multiplies the upstream gradient by the analytic
    d/dx, and adds every element's d/dbeta contribution into
    ``accumulated_dbeta``.
    """

    def __init__(self, kind: ActivationKind, params: ActParams):
        self.kind = kind
        self.params = params
        self.accumulated_dbeta = 0.0
        self.beta_velocity = 0.0
        self._cached_inputs: list[Tensor2D] = []

    @property
    def beta(self) -> float:
        return self.params.beta

    def set_beta(self, beta: float) -> None:
        self.params = replace(self.params, beta=beta)

    def forward(self, x: Tensor2D, train: bool = True) -> Tensor2D:
        if train:
            self._cached_inputs.append(x)
        y = kernels.act_forward_batch(self.kind, self.params, x.ravel())
        return y.reshape(x.shape)

    def backward(self, grad_out: Tensor2D) -> Tensor2D:
        if not self._cached_inputs:
            raise BackwardBeforeForwardError("activation backward called before forward")
        x = self._cached_inputs.pop()
        if x.shape != grad_out.shape:
            raise ValueError(f"gradient shape {grad_out.shape} does not match cached input {x.shape}")
        flat = x.ravel()
        if has_beta(self.kind):
            _, dx, db = kernels.act_eval_fused_batch(self.kind, self.params, flat)
            self.accumulated_dbeta += float(grad_out.ravel() @ db)
        else:
            dx = kernels.act_dx_batch(self.kind, self.params, flat)
        return grad_out * dx.reshape(x.shape)

    def reset(self) -> None:
        self._cached_inputs.clear()
        self.accumulated_dbeta = 0.0


class Mlp:
    """Dense layers interleaved with one shared activation."""

    def __init__(
        self,
        layer_sizes: Sequence[int],
        kind: ActivationKind,
        params: ActParams,
        rng: np.random.Generator,
    ):
        if len(layer_sizes) < 2:
            raise ValueError("need at least input and output sizes")
        self.layers = [
            DenseLayer(layer_sizes[i], layer_sizes[i + 1], rng)
            for i in range(len(layer_sizes) - 1)
        ]
        self.activation = GlobalActivation(kind, params)

    def forward(self, x: Tensor2D, train: bool = True) -> Tensor2D:
        out = x
        for layer in self.layers[:-1]:
            out = self.activation.forward(layer.forward(out, train), train)
        return self.layers[-1].forward(out, train)

    def backward(self, grad_logits: Tensor2D) -> Tensor2D:
        grad = self.layers[-1].backward(grad_logits)
        for layer in reversed(self.layers[:-1]):
            grad = layer.backward(self.activation.backward(grad))
        return grad

    def zero_grad(self) -> None:
        for layer in self.layers:
            layer.zero_grad()
        self.activation.accumulated_dbeta = 0.0


def softmax_cross_entropy(logits: Tensor2D, labels: np.ndarray) -> tuple[float, Tensor2D]:
    """Mean cross-entropy with log-sum-exp stabilization and its logit gradient."""
    labels = np.asarray(labels)
    n, n_classes = logits.shape
    if labels.min() < 0 or labels.max() >= n_classes:
        raise ValueError(f"labels must lie in [0, {n_classes}), got range "
                         f"[{labels.min()}, {labels.max()}]")
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_z
    loss = -float(log_probs[np.arange(n), labels].mean())
    grad = np.exp(log_probs)
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def sgd_step(
    mlp: Mlp,
    lr: float,
    momentum: float = 0.9,
    weight_decay: float = 5e-4,
    beta_weight_decay_applies: bool = False,
) -> None:
    """One SGD-with-momentum update: v <- m v + g + wd w; w <- w - lr v.

    Weight decay applies to dense weights and biases.  Beta (when
    trainable) gets the same momentum rule but no decay term unless
    ``beta_weight_decay_applies``; after the update swish_t_c's beta is
    floored to |beta| >= BETA_MIN.  All gradient accumulators are
    zeroed at the end.
    """
    for layer in mlp.layers:
        layer.vel_weights = momentum * layer.vel_weights + layer.grad_weights + weight_decay * layer.weights
        layer.vel_bias = momentum * layer.vel_bias + layer.grad_bias + weight_decay * layer.bias
        layer.weights = layer.weights - lr * layer.vel_weights
        layer.bias = layer.bias - lr * layer.vel_bias

    act = mlp.activation
    if has_beta(act.kind) and act.params.beta_trainable:
        grad = act.accumulated_dbeta
        if beta_weight_decay_applies:
            grad = grad + weight_decay * act.beta
        act.beta_velocity = momentum * act.beta_velocity + grad
        beta = act.beta - lr * act.beta_velocity
        if act.kind is ActivationKind.SWISH_T_C and abs(beta) < BETA_MIN:
            beta = math.copysign(BETA_MIN, beta if beta != 0.0 else 1.0)
        act.set_beta(beta)
    mlp.zero_grad()


def cosine_lr(lr0: float, epoch: int, total_epochs: int) -> float:
    """Half-cosine decay from lr0 to ~0 at per-epoch granularity."""
    if not 0 <= epoch < total_epochs:
        raise ValueError(f"epoch {epoch} outside [0, {total_epochs})")
    return lr0 * 0.5 * (1.0 + math.cos(math.pi * epoch / total_epochs))


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    epochs: int = 5
    batch_size: int = 128
    lr0: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 5e-4
    scheduler: str = "cosine"  # "cosine" | "constant"
    kind: ActivationKind = ActivationKind.SWISH_T_C
    alpha: float = 0.1
    beta0: float = 1.0
    beta_trainable: bool = True
    beta_weight_decay_applies: bool = False

    def __post_init__(self) -> None:
        if self.lr0 <= 0:
            raise ValueError("lr0 must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.scheduler not in ("cosine", "constant"):
            raise ValueError(f"unknown scheduler {self.scheduler!r}")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "lr0": self.lr0,
            "momentum": self.momentum,
            "weight_decay": self.weight_decay,
            "scheduler": self.scheduler,
            "kind": self.kind.value,
            "alpha": self.alpha,
            "beta0": self.beta0,
            "beta_trainable": self.beta_trainable,
            "beta_weight_decay_applies": self.beta_weight_decay_applies,
        }


@dataclass
class EpochMetrics:
    epoch: int
    train_loss: float
    train_acc: float
    test_loss: float
    test_acc: float
    lr: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "train_acc": self.train_acc,
            "test_loss": self.test_loss,
            "test_acc": self.test_acc,
            "lr": self.lr,
            "beta": self.beta,
        }


@dataclass
class RunReport:
    config: TrainConfig
    epochs: list[EpochMetrics] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def final_beta(self) -> float:
        return self.epochs[-1].beta

    @property
    def final_test_acc(self) -> float:
        return self.epochs[-1].test_acc

    def metrics_table(self) -> list[dict]:
        """Per-epoch metric rows; excludes wall time, so two runs with the
        same seed must produce identical tables."""
        return [row.to_dict() for row in self.epochs]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seed": self.config.seed,
            "wall_time_s": self.wall_time_s,
            "final_beta": self.final_beta,
            "epochs": self.metrics_table(),
        }


def evaluate(mlp: Mlp, features: Tensor2D, labels: np.ndarray, batch_size: int = 1024) -> tuple[float, float]:
    """(mean loss, accuracy) without caching or touching any RNG."""
    total_loss = 0.0
    correct = 0
    n = features.shape[0]
    for start in range(0, n, batch_size):
        xb = features[start : start + batch_size]
        yb = labels[start : start + batch_size]
        logits = mlp.forward(xb, train=False)
        loss, _ = softmax_cross_entropy(logits, yb)
        total_loss += loss * xb.shape[0]
        correct += int((logits.argmax(axis=1) == yb).sum())
    return total_loss / n, correct / n


def _hidden_sizes(input_dim: int) -> tuple[int, int]:
    return (128, 64) if input_dim == 784 else (32, 32)


def train(config: TrainConfig, train_set, test_set) -> RunReport:
    """Full training loop: seeded shuffle per epoch, minibatch SGD with
    momentum/weight decay, per-epoch scheduler and evaluation.

    Deterministic given the seed: layer init and epoch permutations are
    drawn from a single Generator stream in a fixed order.
    """
    if train_set.features.shape[0] == 0 or test_set.features.shape[0] == 0:
        raise ValueError("datasets must be non-empty")
    d = train_set.features.shape[1]
    if test_set.features.shape[1] != d:
        raise ValueError(f"train/test feature dims differ: {d} vs {test_set.features.shape[1]}")
    n_classes = train_set.classes

    t_start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    params = ActParams(alpha=config.alpha, beta=config.beta0, beta_trainable=config.beta_trainable)
    mlp = Mlp([d, *_hidden_sizes(d), n_classes], config.kind, params, rng)

    report = RunReport(config=config)
    n = train_set.features.shape[0]
    for epoch in range(config.epochs):
        lr = cosine_lr(config.lr0, epoch, config.epochs) if config.scheduler == "cosine" else config.lr0
        perm = rng.permutation(n)
        loss_sum = 0.0
        correct = 0
        for start in range(0, n, config.batch_size):
            idx = perm[start : start + config.batch_size]
            xb = train_set.features[idx]
            yb = train_set.labels[idx]
            logits = mlp.forward(xb, train=True)
            loss, grad = softmax_cross_entropy(logits, yb)
            loss_sum += loss * xb.shape[0]
            correct += int((logits.argmax(axis=1) == yb).sum())
            mlp.backward(grad)
            sgd_step(
                mlp,
                lr,
                momentum=config.momentum,
                weight_decay=config.weight_decay,
                beta_weight_decay_applies=config.beta_weight_decay_applies,
            )
        test_loss, test_acc = evaluate(mlp, test_set.features, test_set.labels)
        report.epochs.append(
            EpochMetrics(
                epoch=epoch,
                train_loss=loss_sum / n,
                train_acc=correct / n,
                test_loss=test_loss,
                test_acc=test_acc,
                lr=lr,
                beta=mlp.activation.beta,
            )
        )
    report.wall_time_s = time.perf_counter() - t_start
    return report


def landscape_weights(net_seed: int, hidden: int = 16) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seeded Gaussian(0, 1/sqrt(fan_in)) weights of the 2->H->H->1 landscape net."""
    rng = np.random.default_rng(net_seed)
    w1 = rng.normal(0.0, 1.0 / math.sqrt(2.0), size=(hidden, 2))
    w2 = rng.normal(0.0, 1.0 / math.sqrt(hidden), size=(hidden, hidden))
    w3 = rng.normal(0.0, 1.0 / math.sqrt(hidden), size=(1, hidden))
    return w1, w2, w3


def landscape(
    net_seed: int,
    kind: ActivationKind,
    params: ActParams,
    grid_range: float = 5.0,
    resolution: int = 256,
    hidden: int = 16,
) -> np.ndarray:
    """Scalar output surface of a random, untrained 3-layer net over a
    2-D input grid; rows follow the second coordinate, columns the first."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    w1, w2, w3 = landscape_weights(net_seed, hidden)
    axis = np.linspace(-grid_range, grid_range, resolution)
    gx, gy = np.meshgrid(axis, axis)
    pts = np.column_stack([gx.ravel(), gy.ravel()])

    def act(z: np.ndarray) -> np.ndarray:
        return kernels.act_forward_batch(kind, params, z.ravel()).reshape(z.shape)

    h1 = act(pts @ w1.T)
    h2 = act(h1 @ w2.T)
    return (h2 @ w3.T).reshape(resolution, resolution)
