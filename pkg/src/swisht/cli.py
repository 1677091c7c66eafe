"""Command-line surface: curve dumps, gradient checks, landscape
surfaces, training runs, and kernel benchmarks.

Every subcommand is deterministic given its flags and seed (wall-time
fields excepted) and writes a ``config.json`` echo next to its outputs.
Exit codes: 0 success, 1 validation failure (failed gradient check or
violated benchmark contract), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import data as data_mod
from . import gradcheck as gc_mod
from . import kernels, nn
from .kinds import ActivationKind, ActParams, InvalidParameterError, has_beta, parse_kind

DEFAULT_GRADCHECK_KINDS = "swish_t,swish_t_a,swish_t_b,swish_t_c,swish,silu,gelu,mish"
ALL_KINDS = ",".join(k.value for k in ActivationKind)


def _parse_kind_list(text: str) -> list[ActivationKind]:
    return [parse_kind(part) for part in text.split(",") if part.strip()]


def _parse_float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _ensure_out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_config_echo(out: Path, args) -> None:
    echo = {k: v for k, v in vars(args).items() if k != "func"}
    (out / "config.json").write_text(json.dumps(echo, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_pgm(path: Path, surface: np.ndarray) -> None:
    """8-bit binary PGM (P5), min-max normalized."""
    lo, hi = float(surface.min()), float(surface.max())
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    img = np.rint((surface - lo) * scale).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode())
        fh.write(img.tobytes())


def _act_params(args, kind: ActivationKind) -> ActParams:
    beta = args.beta
    trainable = True
    if getattr(args, "beta_fixed", None) is not None:
        beta = args.beta_fixed
        trainable = False
    if not has_beta(kind) and (
        args.beta != 1.0 or getattr(args, "beta_fixed", None) is not None
    ):
        print(f"warning: beta is ignored for kind {kind.value!r}", file=sys.stderr)
    return ActParams(alpha=args.alpha, beta=beta, beta_trainable=trainable)


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval(args) -> int:
    kind = parse_kind(args.kind)
    if args.points < 2:
        raise ValueError("--points must be >= 2")
    if not args.xmin < args.xmax:
        raise ValueError("--xmin must be strictly below --xmax")
    params = _act_params(args, kind)
    xs = np.linspace(args.xmin, args.xmax, args.points)
    y, dx, db = kernels.act_eval_fused_batch(kind, params, xs)

    out = _ensure_out_dir(args)
    _write_config_echo(out, args)
    if args.format == "json":
        payload = {
            "kind": kind.value,
            "alpha": params.alpha,
            "beta": params.beta,
            "rows": [
                {"x": float(a), "f": float(b), "df_dx": float(c), "df_dbeta": float(d)}
                for a, b, c, d in zip(xs, y, dx, db)
            ],
        }
        (out / "curve.json").write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote {out / 'curve.json'}")
    else:
        _write_csv(
            out / "curve.csv",
            ["x", "f", "df_dx", "df_dbeta"],
            ([repr(float(a)), repr(float(b)), repr(float(c)), repr(float(d))]
             for a, b, c, d in zip(xs, y, dx, db)),
        )
        print(f"wrote {out / 'curve.csv'}")
    return 0


def cmd_gradcheck(args) -> int:
    kinds = _parse_kind_list(args.kinds)
    alphas = _parse_float_list(args.alphas)
    betas = _parse_float_list(args.betas)
    grid = np.linspace(args.xmin, args.xmax, args.points)
    reports = [
        gc_mod.check_activation(kind, alphas, betas, grid, h=args.h, tol_rel=args.tol)
        for kind in kinds
    ]
    out = _ensure_out_dir(args)
    _write_config_echo(out, args)
    payload = {
        "oracle_self_check_rel_err": gc_mod.validate_oracle(),
        "tol_rel": args.tol,
        "all_passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    (out / "gradcheck.json").write_text(json.dumps(payload, indent=2) + "\n")
    for rep in reports:
        status = "pass" if rep.passed else "FAIL"
        print(
            f"{status} {rep.kind.value}: max_rel_err dx={rep.max_rel_err_dx:.3e} "
            f"dbeta={rep.max_rel_err_dbeta:.3e}"
        )
    print(f"wrote {out / 'gradcheck.json'}")
    return 0 if payload["all_passed"] else 1


def cmd_landscape(args) -> int:
    kind = parse_kind(args.kind)
    params = _act_params(args, kind)
    surface = nn.landscape(
        args.net_seed, kind, params, grid_range=args.range, resolution=args.resolution
    )
    out = _ensure_out_dir(args)
    _write_config_echo(out, args)
    _write_csv(
        out / "landscape.csv",
        [f"c{j}" for j in range(surface.shape[1])],
        ([repr(float(v)) for v in row] for row in surface),
    )
    write_pgm(out / "landscape.pgm", surface)
    print(f"wrote {out / 'landscape.csv'} and {out / 'landscape.pgm'}")
    return 0


def _load_train_datasets(args) -> tuple[data_mod.Dataset, data_mod.Dataset]:
    if args.data == "synth":
        train_set = data_mod.synth_blobs(
            args.synth_n, separation=args.synth_separation, seed=args.seed
        )
        test_set = data_mod.synth_blobs(
            args.synth_n, separation=args.synth_separation, seed=args.seed + 1
        )
        return train_set, test_set
    required = ("mnist_images", "mnist_labels", "test_images", "test_labels")
    missing = [f"--{name.replace('_', '-')}" for name in required if getattr(args, name) is None]
    if missing:
        raise ValueError(f"--data mnist requires {', '.join(missing)}")
    train_set = data_mod.load_mnist(args.mnist_images, args.mnist_labels)
    test_set = data_mod.load_mnist(args.test_images, args.test_labels)
    if args.subset is not None:
        train_set = data_mod.subset(train_set, args.subset, seed=args.seed)
    return train_set, test_set


def cmd_train(args) -> int:
    kind = parse_kind(args.kind)
    params = _act_params(args, kind)
    config = nn.TrainConfig(
        seed=args.seed,
        epochs=args.epochs,
        batch_size=args.batch,
        lr0=args.lr,
        momentum=args.momentum,
        weight_decay=args.weight_decay,
        scheduler=args.scheduler,
        kind=kind,
        alpha=params.alpha,
        beta0=params.beta,
        beta_trainable=params.beta_trainable,
    )
    train_set, test_set = _load_train_datasets(args)
    report = nn.train(config, train_set, test_set)

    out = _ensure_out_dir(args)
    _write_config_echo(out, args)
    (out / "run.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    header = ["epoch", "train_loss", "train_acc", "test_loss", "test_acc", "lr", "beta"]
    _write_csv(
        out / "metrics.csv",
        header,
        ([repr(row.to_dict()[key]) if key != "epoch" else row.epoch for key in header]
         for row in report.epochs),
    )
    last = report.epochs[-1]
    print(
        f"{kind.value}: final test_acc={last.test_acc:.4f} test_loss={last.test_loss:.4f} "
        f"beta={last.beta!r} ({report.wall_time_s:.1f}s)"
    )
    print(f"wrote {out / 'run.json'} and {out / 'metrics.csv'}")
    return 0


def cmd_bench(args) -> int:
    kinds = _parse_kind_list(args.kinds)
    reports = bench_mod.run_bench(
        kinds, n_elements=args.elements, reps=args.reps, seed=args.seed
    )
    out = _ensure_out_dir(args)
    _write_config_echo(out, args)
    problems = bench_mod.contract_violations(reports)
    payload = {
        "contract_ok": not problems,
        "violations": problems,
        "reports": [r.to_dict() for r in reports],
    }
    (out / "bench.json").write_text(json.dumps(payload, indent=2) + "\n")
    for rep in reports:
        print(
            f"{rep.kind.value:10s} {rep.backend:5s} forward {rep.wall_ns_forward / rep.elements:7.2f} ns/elem"
            f"  fused {rep.wall_ns_fused / rep.elements:7.2f} ns/elem"
            f"  sigmoid/elem={rep.sigmoid_per_element}"
        )
    for problem in problems:
        print(f"CONTRACT VIOLATION: {problem}", file=sys.stderr)
    print(f"wrote {out / 'bench.json'}")
    return 0 if not problems else 1


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swisht",
        description="Swish-T activation family: kernels, gradient checks, training, benchmarks",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out-dir", default="out")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="curve output format (eval); other reports have fixed formats")

    p = sub.add_parser("eval", help="dump activation value/derivative curves")
    common(p)
    p.add_argument("--kind", required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--beta-fixed", type=float, default=None)
    p.add_argument("--xmin", type=float, default=-5.0)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--points", type=int, default=401)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gradcheck", help="validate analytic derivatives against finite differences")
    common(p)
    p.add_argument("--kinds", default=DEFAULT_GRADCHECK_KINDS)
    p.add_argument("--alphas", default="0.1,0.5,1.0")
    p.add_argument("--betas", default="0.5,1.0,2.0,6.0")
    p.add_argument("--xmin", type=float, default=-10.0)
    p.add_argument("--xmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--h", type=float, default=1e-5)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("landscape", help="output surface of a random untrained 3-layer net")
    common(p)
    p.add_argument("--kind", required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--beta-fixed", type=float, default=None)
    p.add_argument("--net-seed", type=int, default=0)
    p.add_argument("--range", type=float, default=5.0)
    p.add_argument("--resolution", type=int, default=256)
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("train", help="train the dense network on MNIST or synthetic blobs")
    common(p)
    p.add_argument("--data", choices=("mnist", "synth"), default="synth")
    p.add_argument("--mnist-images", default=None)
    p.add_argument("--mnist-labels", default=None)
    p.add_argument("--test-images", default=None)
    p.add_argument("--test-labels", default=None)
    p.add_argument("--subset", type=int, default=None,
                   help="stratified training-subset size (mnist only)")
    p.add_argument("--synth-n", type=int, default=200, help="samples per class (synth)")
    p.add_argument("--synth-separation", type=float, default=6.0)
    p.add_argument("--kind", required=True)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--beta-fixed", type=float, default=None,
                   help="freeze beta at this value (beta_trainable=false)")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--weight-decay", type=float, default=5e-4)
    p.add_argument("--scheduler", choices=("cosine", "constant"), default="cosine")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="kernel throughput and transcendental counts per backend")
    common(p)
    p.add_argument("--kinds", default=ALL_KINDS)
    p.add_argument("--elements", type=int, default=1_000_000)
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
