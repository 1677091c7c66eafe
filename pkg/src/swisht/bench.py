"""Elementwise kernel benchmark: wall time per backend plus
hardware-independent transcendental counts per element.

Wall times are informational (min of repetitions, single-threaded
timed region); the only asserted quantity is the per-element sigmoid
count of the fused kernels, which is fixed by construction: one for
swish_t_a / swish_t_b / swish_t_c, two for swish_t.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .counters import counting
from .kinds import ActivationKind, ActParams

MIN_ELEMENTS = 100_000


@dataclass
class BenchReport:
    kind: ActivationKind
    backend: str
    elements: int
    repetitions: int
    wall_ns_forward: int
    wall_ns_fused: int
    sigmoid_per_element: float
    tanh_per_element: float
    exp_per_element: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "backend": self.backend,
            "elements": self.elements,
            "repetitions": self.repetitions,
            "wall_ns_forward": self.wall_ns_forward,
            "wall_ns_fused": self.wall_ns_fused,
            "sigmoid_per_element": self.sigmoid_per_element,
            "tanh_per_element": self.tanh_per_element,
            "exp_per_element": self.exp_per_element,
        }


#: Required fused-kernel sigmoid counts per element (the speed contract).
SIGMOID_CONTRACT = {
    ActivationKind.SWISH_T: 2.0,
    ActivationKind.SWISH_T_A: 1.0,
    ActivationKind.SWISH_T_B: 1.0,
    ActivationKind.SWISH_T_C: 1.0,
}


def contract_violations(reports: list[BenchReport]) -> list[str]:
    """Human-readable violations of the per-element sigmoid contract."""
    problems = []
    for rep in reports:
        want = SIGMOID_CONTRACT.get(rep.kind)
        if want is not None and rep.sigmoid_per_element != want:
            problems.append(
                f"{rep.kind.value}: expected {want} sigmoid/element in the fused kernel, "
                f"measured {rep.sigmoid_per_element}"
            )
    return problems


def _time_min_ns(fn, reps: int) -> int:
    best = None
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        elapsed = time.perf_counter_ns() - t0
        best = elapsed if best is None else min(best, elapsed)
    return best


def run_bench(
    kinds: list[ActivationKind],
    n_elements: int = 1_000_000,
    reps: int = 5,
    seed: int = 0,
    params: ActParams | None = None,
    backends: tuple[str, ...] | None = None,
) -> list[BenchReport]:
    """Benchmark forward and fused kernels for each kind on each backend."""
    if n_elements < MIN_ELEMENTS:
        raise ValueError(f"n_elements must be >= {MIN_ELEMENTS} for stable timing")
    if reps < 3:
        raise ValueError("need at least 3 repetitions")
    if params is None:
        params = ActParams()
    if backends is None:
        backends = kernels.available_backends()

    xs = np.random.default_rng(seed).uniform(-8.0, 8.0, size=n_elements)
    reports = []
    for kind in kinds:
        with counting() as counter:
            kernels.act_eval_fused_batch(kind, params, xs)
        sig_pe = counter.sigmoid_evals / n_elements
        tanh_pe = counter.tanh_evals / n_elements
        exp_pe = counter.exp_evals / n_elements

        for backend in backends:
            with kernels.use_backend(backend):
                kernels.act_eval_fused_batch(kind, params, xs[:MIN_ELEMENTS])  # warm up
                wall_fwd = _time_min_ns(lambda: kernels.act_forward_batch(kind, params, xs), reps)
                wall_fused = _time_min_ns(lambda: kernels.act_eval_fused_batch(kind, params, xs), reps)
            reports.append(
                BenchReport(
                    kind=kind,
                    backend=backend,
                    elements=n_elements,
                    repetitions=reps,
                    wall_ns_forward=wall_fwd,
                    wall_ns_fused=wall_fused,
                    sigmoid_per_element=sig_pe,
                    tanh_per_element=tanh_pe,
                    exp_per_element=exp_pe,
                )
            )
    return reports
