"""Command line interface: ``tansyz equations | betti-row | verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path

from . import verify
from .geometry import DegenerateOracle, format_poly, from_descriptor
from .geometry.equations import canonical_basis, ideal_bottom_component, sampled_component
from .syzygy import GradedIdealSlice, KoszulSpot, koszul_cohomology_dim

EXIT_OK, EXIT_INPUT, EXIT_ORACLE, EXIT_FAILED = 0, 1, 2, 3


class InputError(ValueError):
    pass


def load_variety(arg: str):
    """A variety from a JSON file path or an inline JSON object."""
    try:
        text = arg if arg.lstrip().startswith("{") else Path(arg).read_text()
        desc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read variety descriptor: {exc}") from exc
    if not isinstance(desc, dict):
        raise InputError("variety descriptor must be a JSON object")
    try:
        return from_descriptor(desc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_arithmetic(s: str) -> int | None:
    if s == "exact":
        return None
    if s.startswith("modp:"):
        try:
            p = int(s[5:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad prime in {s!r}")
        from sympy import isprime

        if not isprime(p) or p >= 2**31:
            raise argparse.ArgumentTypeError(f"{p} is not a prime below 2^31")
        return p
    raise argparse.ArgumentTypeError("arithmetic must be 'exact' or 'modp:P'")


def _emit_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# commands


def cmd_equations(args) -> tuple[int, str]:
    x = load_variety(args.variety)
    rng = random.Random(args.seed)
    basis = canonical_basis(ideal_bottom_component(x, args.q, args.k, method=args.method, rng=rng))
    polys = [format_poly(p) for p in basis]
    exact = args.method == "jets"
    if args.format == "json":
        return EXIT_OK, _emit_json(
            {
                "command": "equations",
                "variety": x.descriptor,
                "q": args.q,
                "k": args.k,
                "method": args.method,
                "status": "exact" if exact else "probabilistic",
                "seed": args.seed,
                "dim": len(polys),
                "basis": polys,
            }
        )
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "polynomial"])
        for i, p in enumerate(polys):
            w.writerow([i, p])
        return EXIT_OK, buf.getvalue()
    line = f"dim={len(polys)}"
    if polys:
        line += "; basis: " + ", ".join(polys)
    if not exact:
        line += f"  (probabilistic, seed={args.seed})"
    return EXIT_OK, line + "\n"


def cmd_betti_row(args) -> tuple[int, str]:
    x = load_variety(args.variety)
    rng = random.Random(args.seed)
    q = args.q
    low = ideal_bottom_component(x, q, args.k, method=args.method, rng=rng)
    sampled = {}
    if args.slice_check:
        sampled[q + 2] = sampled_component(x, q + 2, q, args.k, rng=rng, modp=True)
    I = GradedIdealSlice(
        x.dim_V,
        {q + 1: low},
        weights=x.weights,
        initial_degree=q + 1,
        sampled=sampled,
        provenance="exact" if args.method == "jets" else "sampled",
    )
    row = [koszul_cohomology_dim(I, KoszulSpot(p, q + 1), rng=rng, modp=args.arithmetic) for p in range(args.p_max + 1)]
    if args.arithmetic is not None:
        status = f"filter (mod {args.arithmetic})"
    elif args.method == "jets":
        status = "exact"
    else:
        status = f"probabilistic, seed={args.seed}"
    if args.format == "json":
        out = {
            "command": "betti-row",
            "variety": x.descriptor,
            "q": q,
            "k": args.k,
            "p_max": args.p_max,
            "row": row,
            "status": status,
            "seed": args.seed,
            "ideal_dims": {str(q + 1): len(low)},
        }
        if sampled:
            out["ideal_dims"][str(q + 2)] = sampled[q + 2].dim
            out["sampled_degrees"] = {str(q + 2): f"probabilistic, seed={args.seed}"}
        return EXIT_OK, _emit_json(out)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "dim"])
        for p, d in enumerate(row):
            w.writerow([p, d])
        return EXIT_OK, buf.getvalue()
    text = ",".join(map(str, row)) + "\n"
    if status != "exact":
        text += f"# {status}\n"
    return EXIT_OK, text


def cmd_verify(args) -> tuple[int, str]:
    fn = verify.SUITES[args.suite]
    checks = fn(seed=args.seed)
    passed = all(c.ok for c in checks)
    if args.format == "json":
        text = _emit_json(
            {"suite": args.suite, "seed": args.seed, "passed": passed, "checks": [c.to_json() for c in checks]}
        )
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "expected", "got", "ok"])
        for c in checks:
            w.writerow([c.name, c.expected, c.got, c.ok])
        text = buf.getvalue()
    else:
        lines = [
            f"{'PASS' if c.ok else 'FAIL'} {c.name}: expected={c.expected} got={c.got}" + (f" [{c.note}]" if c.note else "")
            for c in checks
        ]
        lines.append(f"{args.suite}: {'all passed' if passed else 'FAILED'} (seed={args.seed})")
        text = "\n".join(lines) + "\n"
    return (EXIT_OK if passed else EXIT_FAILED), text


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tansyz", description="Equations and bottom syzygies of secant and tangent varieties.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=verify.DEFAULT_SEED, help=f"RNG seed (default {verify.DEFAULT_SEED})")
    common.add_argument("--format", choices=["text", "csv", "json"], default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equations", parents=[common], help="basis of I(sigma_q tau^k X)_{q+1}")
    p.add_argument("variety", help="JSON file or inline JSON descriptor")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--method", choices=["jets", "sampling"], default="jets")
    p.set_defaults(func=cmd_equations)

    p = sub.add_parser("betti-row", parents=[common], help="dim K_{p,q+1}, p = 0..p_max")
    p.add_argument("variety")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p-max", type=int, default=2)
    p.add_argument("--method", choices=["jets", "sampling"], default="jets")
    p.add_argument("--arithmetic", type=parse_arithmetic, default=None, help="exact or modp:P")
    p.add_argument(
        "--slice-check",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="also sample I_{q+2} and check I_{q+1}*V against it",
    )
    p.set_defaults(func=cmd_betti_row)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if getattr(args, "q", 1) < 1 or getattr(args, "k", 0) < 0 or getattr(args, "p_max", 0) < 0:
            raise InputError("need q >= 1, k >= 0 and p-max >= 0")
        code, text = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateOracle as exc:
        print(f"oracle degeneracy: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
