"""Transcendental-call counting for kernel instrumentation.

Counts are a hardware-independent proxy for kernel cost: one sigmoid
evaluation is tallied per element passed through the stable-sigmoid
helper, and likewise for tanh and raw exp (a sigmoid does not also
count as an exp).  Counting is only supported on the numpy backend and
in single-threaded use; :func:`counting` switches the backend for its
duration so callers get counts regardless of the active default.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator


@dataclass
class TranscendentalCounter:
    sigmoid_evals: int = 0
    tanh_evals: int = 0
    exp_evals: int = 0

    def reset(self) -> None:
        self.sigmoid_evals = 0
        self.tanh_evals = 0
        self.exp_evals = 0


_active: TranscendentalCounter | None = None


def tally_sigmoid(n: int) -> None:
    if _active is not None:
        _active.sigmoid_evals += n


def tally_tanh(n: int) -> None:
    if _active is not None:
        _active.tanh_evals += n


def tally_exp(n: int) -> None:
    if _active is not None:
        _active.exp_evals += n


@contextmanager
def counting() -> Iterator[TranscendentalCounter]:
    """Activate a fresh counter and force the instrumented numpy backend."""
    from . import kernels  # late import; kernels imports this module

    global _active
    counter = TranscendentalCounter()
    previous = _active
    _active = counter
    try:
        with kernels.use_backend("numpy"):
            yield counter
    finally:
        _active = previous
