"""Command-line front end.

Exit codes: 0 success, 1 a reproduced claim failed, 2 bad input, 3 a
construction precondition does not hold.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .certify import certify, maximal_patterns, report_to_json, search_product_supports
from .constructions import apply_theorem1, apply_theorem2
from .errors import PreconditionError
from .families import FamilyId, certificate_from_json, certificate_to_json, generate, transform_certificate
from .invariants import compare_lu, compute_invariants, fingerprint, table_to_json
from .linalg import Tolerance, numerical_rank, partial_transpose
from .operators import build, lift_operator, parse_spec
from .reproduce import reproduce
from .states import SpectralState, assemble, state_from_json, state_to_json, validate

EXIT_OK, EXIT_ASSERT, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _common(p: argparse.ArgumentParser):
    # SUPPRESS lets the flags appear before or after the subcommand
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    g.add_argument("--tol-eig", type=float, default=argparse.SUPPRESS, help="eigenvalue floor (default 1e-10)")
    g.add_argument("--tol-rank", type=float, default=argparse.SUPPRESS, help="relative rank cutoff (default 1e-9)")
    g.add_argument("--tol-residual", type=float, default=argparse.SUPPRESS,
                   help="minimum witness residual (default 1e-3)")
    g.add_argument("--out", default=argparse.SUPPRESS,
                   help="output directory (gen, transform, reproduce) or file (other commands; default stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boundent", description=__doc__.splitlines()[0])
    _common(p)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a family member and its certificate")
    g.add_argument("kind", choices=["example1", "example2", "example3"])
    g.add_argument("--epsilon", type=float, required=True)
    g.add_argument("--k", type=int)

    t = sub.add_parser("transform", help="apply a construction to a state file")
    t.add_argument("state")
    t.add_argument("--theorem", type=int, choices=[1, 2], required=True)
    t.add_argument("--op", required=True, help='e.g. "Q3(c=2)*P(1,2)" or "P(4,6)"')
    t.add_argument("--index", type=int, help="eigenpair to move (1-based, construction 2 only)")
    t.add_argument("--target", choices=["A", "B"], default="B", help="subsystem for construction 1")
    t.add_argument("--cert", help="certificate file to transport alongside the state")

    c = sub.add_parser("certify", help="PPT and range-criterion certification")
    c.add_argument("state")
    c.add_argument("cert")
    c.add_argument("--samples", type=int, default=200, help="product-vector draws per family")

    i = sub.add_parser("invariants", help="local-unitary invariant tables")
    i.add_argument("state")
    _invariant_flags(i)

    m = sub.add_parser("compare", help="one-sided local-unitary comparison of two states")
    m.add_argument("state_a")
    m.add_argument("state_b")
    _invariant_flags(m)

    r = sub.add_parser("reproduce", help="run one worked example end to end")
    r.add_argument("example", type=int, choices=range(1, 7))
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--epsilon", type=float)
    r.add_argument("--c", type=float, default=2.0)

    s = sub.add_parser("search-products", help="catalog support patterns of product vectors in the range")
    s.add_argument("state")
    s.add_argument("--draws", type=int, default=5)

    for q in (g, t, c, i, m, r, s):
        _common(q)
    return p


def _invariant_flags(p):
    p.add_argument("--convention", choices=["raw", "normalized"], default="normalized")
    p.add_argument("--S", type=int, help="number of power traces (default min(n, 8))")
    p.add_argument("--use-raw", action="store_true",
                   help="use the raw pairs of an embedded construction record when present")


def _load_json(path):
    try:
        return jsonio.read(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_state(path, use_raw=False) -> SpectralState:
    data = _load_json(path)
    if use_raw and "construction" in data:
        raw = data["construction"]["raw_pairs"]
        data = {"shape": data["shape"], "pairs": raw, "normalized": False}
    try:
        return state_from_json(data)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(args, obj):
    text = jsonio.dumps(obj)
    out = getattr(args, "out", None)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _outdir(args, default=".") -> Path:
    d = Path(getattr(args, "out", default))
    d.mkdir(parents=True, exist_ok=True)
    return d


def cmd_gen(args, tol) -> int:
    fid = FamilyId(args.kind, args.epsilon, args.k)
    s, cert = generate(fid)
    d = assemble(s)
    rep = validate(d, tol)
    rank, _ = numerical_rank(list(s.vectors), tol)
    pt_min = float(np.linalg.eigvalsh(partial_transpose(d.matrix, s.shape))[0])
    out = _outdir(args)
    jsonio.write(out / "state.json", {**state_to_json(s), "family": fid.to_json()})
    jsonio.write(out / "certificate.json", certificate_to_json(cert))
    print(f"{fid.kind} epsilon={fid.epsilon:g}" + (f" k={fid.k}" if fid.k else ""))
    print(f"  shape {s.shape.dim_a}x{s.shape.dim_b}, {s.n} eigenpairs, rank {rank}")
    print(f"  trace deviation {rep.trace_deviation:.3g}, min eigenvalue {rep.min_eigenvalue:.3g}, "
          f"min eigenvalue of partial transpose {pt_min:.3g}")
    print(f"  wrote {out / 'state.json'} and {out / 'certificate.json'}")
    return EXIT_OK


def cmd_transform(args, tol) -> int:
    s = _load_state(args.state)
    cert = certificate_from_json(_load_json(args.cert)) if args.cert else None
    if args.theorem == 1:
        spec = parse_spec(args.op, args.target)
        t, record = apply_theorem1(s, spec)
        dim = s.shape.dim_b if spec.target == "B" else s.shape.dim_a
        big = lift_operator(build(spec, dim), s.shape, spec.target)
    else:
        if args.index is None:
            raise InputError("--index is required for construction 2")
        spec = parse_spec(args.op, "composite")
        big = build(spec, s.shape.dim)
        t, record = apply_theorem2(s, big, args.index - 1, tol, spec)
    out = _outdir(args)
    jsonio.write(out / "transformed_state.json", {**state_to_json(t.normalized_copy()),
                                                  "construction": record.to_json()})
    print(f"construction {args.theorem} with {record.operator}: wrote {out / 'transformed_state.json'}")
    if cert is not None:
        tc = transform_certificate(cert, big, s.shape)
        jsonio.write(out / "transformed_certificate.json", certificate_to_json(tc))
        print(f"  certificate: {len(tc.families)} families kept, dropped {list(tc.dropped)}")
    return EXIT_OK


def cmd_certify(args, tol, seed) -> int:
    s = _load_state(args.state)
    cert = certificate_from_json(_load_json(args.cert))
    v = certify(assemble(s), cert, tol, seed, spanning=s, samples_per_family=args.samples)
    _emit(args, report_to_json(v, seed, tol))
    print(f"conclusion: {v.conclusion}", file=sys.stderr)
    return EXIT_OK


def _tables(args, path):
    s = _load_state(path, args.use_raw)
    if args.S is not None and args.S < 2:
        raise InputError("--S must be at least 2")
    return compute_invariants(s, args.convention, args.S)


def cmd_invariants(args, tol) -> int:
    _emit(args, table_to_json(_tables(args, args.state)))
    return EXIT_OK


def cmd_compare(args, tol) -> int:
    ta, tb = _tables(args, args.state_a), _tables(args, args.state_b)
    cmp = compare_lu((ta, fingerprint(ta)), (tb, fingerprint(tb)))
    _emit(args, {"verdict": cmp.verdict, "witness": cmp.witness, "convention": ta.convention})
    print(f"{cmp.verdict}" + (f" ({cmp.witness})" if cmp.witness else ""), file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args, tol, seed) -> int:
    b = reproduce(args.example, k=args.k, epsilon=args.epsilon, c=args.c, seed=seed, tol=tol)
    out = _outdir(args, "bundles") / f"example{args.example}"
    for name, obj in sorted(b.files.items()):
        jsonio.write(out / name, obj)
    (out / "summary.txt").write_text(b.summary_text())
    sys.stdout.write(b.summary_text())
    return EXIT_OK if b.passed else EXIT_ASSERT


def cmd_search(args, tol, seed) -> int:
    s = _load_state(args.state)
    cat = search_product_supports(assemble(s), tol, seed, args.draws)
    one = lambda xs: [x + 1 for x in xs]
    _emit(args, {
        "patterns": [{"supportA": one(sa), "supportB": one(sb), "dimension": dim} for sa, sb, dim in cat],
        "maximal": [{"supportA": one(sa), "supportB": one(sb)} for sa, sb in sorted(maximal_patterns(cat))],
        "seed": seed,
    })
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = getattr(args, "seed", 0)
    try:
        tol = Tolerance(getattr(args, "tol_eig", 1e-10), getattr(args, "tol_rank", 1e-9),
                        getattr(args, "tol_residual", 1e-3))
        cmd = args.command
        if cmd == "gen":
            return cmd_gen(args, tol)
        if cmd == "transform":
            return cmd_transform(args, tol)
        if cmd == "certify":
            return cmd_certify(args, tol, seed)
        if cmd == "invariants":
            return cmd_invariants(args, tol)
        if cmd == "compare":
            return cmd_compare(args, tol)
        if cmd == "reproduce":
            return cmd_reproduce(args, tol, seed)
        return cmd_search(args, tol, seed)
    except PreconditionError as exc:
        tag = f" [{exc.hypothesis}]" if exc.hypothesis else ""
        print(f"precondition failed{tag}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
