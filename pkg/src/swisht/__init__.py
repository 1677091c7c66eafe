"""Swish-T activation family: analytic forward/backward kernels, a
finite-difference gradient-check oracle, a minimal dense-network
training harness with a globally shared trainable beta, dataset IO,
and an experiment CLI.
"""

from .counters import TranscendentalCounter, counting
from .kinds import (
    BETA_KINDS,
    BETA_MIN,
    SWISH_T_FAMILY,
    ActivationKind,
    ActParams,
    EvalTriple,
    InvalidParameterError,
    has_beta,
    parse_kind,
    validate_params,
)
from .kernels import (
    act_dbeta,
    act_dbeta_batch,
    act_dx,
    act_dx_batch,
    act_eval_fused,
    act_eval_fused_batch,
    act_forward,
    act_forward_batch,
    available_backends,
    get_backend,
    set_backend,
    sigmoid,
    use_backend,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationKind",
    "ActParams",
    "EvalTriple",
    "InvalidParameterError",
    "TranscendentalCounter",
    "BETA_KINDS",
    "BETA_MIN",
    "SWISH_T_FAMILY",
    "act_dbeta",
    "act_dbeta_batch",
    "act_dx",
    "act_dx_batch",
    "act_eval_fused",
    "act_eval_fused_batch",
    "act_forward",
    "act_forward_batch",
    "available_backends",
    "counting",
    "get_backend",
    "has_beta",
    "parse_kind",
    "set_backend",
    "sigmoid",
    "use_backend",
    "validate_params",
]
