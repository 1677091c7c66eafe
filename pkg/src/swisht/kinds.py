"""Activation kinds and their parameter container.

The Swish-T family shares two parameters: ``alpha`` scales the bounded
tanh bias and ``beta`` controls gate sharpness.  Baseline activations
(ReLU, GELU, ...) carry the same container but ignore the fields they
do not use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

# Hard floor on |beta| for swish_t_c, whose formula divides by beta.
BETA_MIN = 1e-8


class InvalidParameterError(ValueError):
    """Raised when activation parameters are invalid for the given kind."""


class ActivationKind(enum.Enum):
    RELU = "relu"
    LEAKY_RELU = "leaky_relu"
    GELU = "gelu"
    SILU = "silu"
    SWISH = "swish"  # x * sigmoid(beta * x) with trainable beta
    MISH = "mish"
    SWISH_T = "swish_t"
    SWISH_T_A = "swish_t_a"
    SWISH_T_B = "swish_t_b"
    SWISH_T_C = "swish_t_c"


#: Kinds whose formula depends on beta (and therefore have a d/dbeta channel).
BETA_KINDS = frozenset(
    {
        ActivationKind.SWISH,
        ActivationKind.SWISH_T,
        ActivationKind.SWISH_T_B,
        ActivationKind.SWISH_T_C,
    }
)

#: The four members of the Swish-T family.
SWISH_T_FAMILY = (
    ActivationKind.SWISH_T,
    ActivationKind.SWISH_T_A,
    ActivationKind.SWISH_T_B,
    ActivationKind.SWISH_T_C,
)


def has_beta(kind: ActivationKind) -> bool:
    """True exactly for the kinds with a trainable gate-sharpness beta."""
    return kind in BETA_KINDS


def parse_kind(name: str) -> ActivationKind:
    """Parse a kind name (e.g. ``"swish_t_c"``), rejecting unknown names."""
    try:
        return ActivationKind(name.strip().lower())
    except ValueError:
        known = ", ".join(k.value for k in ActivationKind)
        raise ValueError(f"unknown activation kind {name!r}; known kinds: {known}") from None


@dataclass(frozen=True)
class ActParams:
    """The (alpha, beta) pair with a trainability flag.

    alpha: scale of the tanh bias.
    beta: gate sharpness inside the sigmoid.
    beta_trainable: when False, beta must stay bit-identical through training.
    """

    alpha: float = 0.1
    beta: float = 1.0
    beta_trainable: bool = True

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha):
            raise InvalidParameterError(f"alpha must be finite, got {self.alpha!r}")
        if not math.isfinite(self.beta):
            raise InvalidParameterError(f"beta must be finite, got {self.beta!r}")


def validate_params(kind: ActivationKind, params: ActParams) -> None:
    """Reject parameter values that the kind's formula cannot accept."""
    if kind is ActivationKind.SWISH_T_C and abs(params.beta) < BETA_MIN:
        raise InvalidParameterError(
            f"swish_t_c requires |beta| >= {BETA_MIN:g}, got beta={params.beta!r}"
        )


class EvalTriple(NamedTuple):
    """Result of one fused kernel evaluation."""

    y: float
    dy_dx: float
    dy_dbeta: float
