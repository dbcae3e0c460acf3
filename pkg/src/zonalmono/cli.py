"""Command line: ``zonalmono {optimize,basis,verify,eval}``.

Exit codes: 0 success, 1 a verify check failed, 2 bad arguments or input,
3 no optimizer start converged, 4 singular Gram matrix.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .clifford3 import BLADES
from .harmonics import ZonalHarmonicBasis, is_diagonally_dominant, zonal_harmonic_basis
from .near_zonal import NearZonalBasis, build
from .qlinalg import SingularGramError
from .sphere_opt import KINDS, OptimizerConfig, ensemble_size, objective, optimize
from .validation import check_points
from .verify import run_all

log = logging.getLogger("zonalmono")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_SINGULAR = 4


class UsageError(Exception):
    """Bad input detected after argument parsing; maps to exit code 2."""


def git_blob_hash(data: bytes) -> str:
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


@dataclass
class RunManifest:
    command: str
    config: dict
    input_hash: str = ""
    outputs: list = field(default_factory=list)
    wall_time: float = 0.0
    passed: bool = True
    summary: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _content_hash(config: dict, inputs: list[Path]) -> str:
    blob = json.dumps(config, sort_keys=True).encode()
    for path in inputs:
        blob += git_blob_hash(path.read_bytes()).encode()
    return git_blob_hash(blob)


def _dump(obj, path: Path | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _write_manifest(manifest: RunManifest, out: Path | None) -> None:
    if out is None:
        return
    _dump(manifest.to_dict(), out.with_name(out.name + ".manifest.json"))


def load_points(path: Path, fmt: str = "cartesian") -> np.ndarray:
    """Read a JSON point list; an optimizer result or basis bundle also works."""
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read points from {path}: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("best", data).get("points")
    if not data:
        raise UsageError(f"no points in {path}")
    try:
        return check_points(data, spherical=(fmt == "spherical"))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad points in {path}: {exc}") from exc


def cmd_optimize(args) -> int:
    try:
        cfg = OptimizerConfig(
            kind=args.kind,
            k=args.k,
            max_iters=args.max_iters,
            grad_tol=args.tol,
            starts=args.starts,
            seed=args.seed,
            greedy=args.greedy,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    t0 = time.perf_counter()
    res = optimize(cfg, threads=args.threads)
    wall = time.perf_counter() - t0
    n_conv = sum(r.converged for r in res.runs)
    payload = {
        "config": cfg.to_dict(),
        "best": res.best.to_dict(),
        "runs": [r.summary() for r in res.runs],
    }
    _dump(payload, args.out)
    print(f"best objective {res.best.objective!r} (start {res.best.start}, {n_conv}/{len(res.runs)} converged)")
    manifest = RunManifest(
        "optimize",
        cfg.to_dict(),
        _content_hash(cfg.to_dict(), []),
        [str(args.out)] if args.out else [],
        wall,
        n_conv > 0,
        f"best objective {res.best.objective!r}",
    )
    _write_manifest(manifest, args.out)
    if n_conv == 0:
        log.error("no start converged within %d sweeps", cfg.max_iters)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def basis_bundle(kind: str, k: int, pts: np.ndarray) -> dict:
    if kind == "harmonic":
        b = zonal_harmonic_basis(k, pts)
        out = b.to_dict()
        out["objective"] = objective(kind, k, pts)
        out["diagonally_dominant"] = is_diagonally_dominant(b.A)
    else:
        out = build(k, pts).to_dict()
    out["kind"] = kind
    return out


def cmd_basis(args) -> int:
    if args.k < 0:
        raise UsageError(f"degree must be nonnegative, got {args.k}")
    pts = load_points(args.points, args.format)
    need = ensemble_size(args.kind, args.k)
    if len(pts) != need:
        raise UsageError(f"{args.kind} basis of degree {args.k} needs {need} points, got {len(pts)}")
    t0 = time.perf_counter()
    try:
        bundle = basis_bundle(args.kind, args.k, pts)
    except SingularGramError as exc:
        log.error("%s", exc)
        return EXIT_SINGULAR
    _dump(bundle, args.out)
    config = {"kind": args.kind, "k": args.k, "format": args.format}
    _write_manifest(
        RunManifest(
            "basis",
            config,
            _content_hash(config, [args.points]),
            [str(args.out)] if args.out else [],
            time.perf_counter() - t0,
        ),
        args.out,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.k_max < 0:
        raise UsageError("--k-max must be nonnegative")
    if args.quad_deg is not None and args.quad_deg < 0:
        raise UsageError("--quad-deg must be nonnegative")
    t0 = time.perf_counter()
    results = run_all(args.k_max, args.quad_deg, args.seed)
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  ({r.detail})" if r.detail else ""
        print(f"{status} {r.name}: error {r.error:.3e} (tol {r.tol:.0e}){extra}")
    if args.json is not None:
        config = {"k_max": args.k_max, "quad_deg": args.quad_deg, "seed": args.seed}
        _dump({"config": config, "checks": [r.to_dict() for r in results]}, args.json)
        _write_manifest(
            RunManifest(
                "verify",
                config,
                _content_hash(config, []),
                [str(args.json)],
                time.perf_counter() - t0,
                not failed,
                f"{len(results) - len(failed)}/{len(results)} checks passed",
            ),
            args.json,
        )
    if failed:
        print("failed checks: " + ", ".join(r.name for r in failed), file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _load_bundle(path: Path):
    try:
        data = json.loads(path.read_text())
        kind = data["kind"]
        if kind == "harmonic":
            return kind, ZonalHarmonicBasis.from_dict(data)
        if kind == "monogenic":
            return kind, NearZonalBasis.from_dict(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read basis bundle {path}: {exc}") from exc
    raise UsageError(f"unknown basis kind {kind!r} in {path}")


def cmd_eval(args) -> int:
    kind, basis = _load_bundle(args.basis)
    pts = load_points(args.points, args.format)
    t0 = time.perf_counter()
    vals = basis(pts)
    out = {"kind": kind, "k": basis.k, "points": pts.tolist(), "values": vals.tolist()}
    if kind == "monogenic":
        out["blades"] = list(BLADES)
    _dump(out, args.out)
    config = {"kind": kind, "k": basis.k, "format": args.format}
    _write_manifest(
        RunManifest(
            "eval",
            config,
            _content_hash(config, [args.basis, args.points]),
            [str(args.out)] if args.out else [],
            time.perf_counter() - t0,
        ),
        args.out,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zonalmono", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="multi-start descent for a point ensemble")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--starts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--threads", type=int, default=None, help="defaults to MONO_THREADS or 1")
    p.add_argument("--greedy", action="store_true", help="update the largest-gradient point first")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("basis", help="assemble G and A for a given ensemble")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--points", type=Path, required=True)
    p.add_argument("--format", choices=("cartesian", "spherical"), default="cartesian")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", help="run the numerical self-checks")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--quad-deg", type=int, default=None, help="defaults to k-max + 2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", type=Path, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="evaluate a saved basis at points")
    p.add_argument("--basis", type=Path, required=True)
    p.add_argument("--points", type=Path, required=True)
    p.add_argument("--format", choices=("cartesian", "spherical"), default="cartesian")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zonalmono {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
