"""Command-line front end.

Examples:
  subspace-star classify --m 3 --r 1 --tau "1/4,sqrt(2)/4,1/2,3/4"
  subspace-star sweep --family paper-example --min 0.21 --max 0.26 --steps 6
  subspace-star construct --m 3 --r 1 --tau ... --case zero
  subspace-star kernel --input star.json
  subspace-star wild-embed --dim 2 --alpha 0.044

Exit codes: 0 ok, 1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import classification as cl
from .errors import ValidationError
from .g_construction import BlockOperator, construct
from .irreducibility import (commutant_dim, family_irreducible_Q, random_admissible_pair,
                             wild_embed, wild_sum_excess)
from .numerics import Tolerance, kernel_basis
from .star_b import StarParams, assemble, dump_star, kernel_dim_formula, load_star
from .subspace_system import (SubspaceSystem, decode_matrix, encode_matrix,
                              generalized_dimension, verify_relations)

# Bisected for eps = 0.1 at dim L = 4 (see tests/test_acceptance.py).
DEFAULT_WILD_ALPHA = 0.044


def _parse_number(text: str) -> float:
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    import sympy
    try:
        value = sympy.sympify(text, rational=True)
        return float(value)
    except (sympy.SympifyError, TypeError, ValueError) as exc:
        raise ValidationError(f"cannot parse number {text!r}") from exc


def _parse_tau(text: str) -> tuple:
    return tuple(_parse_number(t) for t in text.split(",") if t.strip())


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _params_from(args, data=None) -> StarParams:
    if data is not None:
        if "tau_pairs" in data:
            raw = cl.RawAngles(int(data["m"]), int(data["r"]), data["tau_pairs"], data.get("tau_rays", []))
            return cl.normalize(raw, args.eq_tol)
        return StarParams(int(data["m"]), int(data["r"]), tuple(data["tau"]))
    if args.m is None or args.r is None or args.tau is None:
        raise ValidationError("give --input FILE or all of --m, --r, --tau")
    return StarParams(args.m, args.r, _parse_tau(args.tau))


def _star_from(args):
    """(params, family) from a star JSON file or from flags plus --case."""
    if args.input:
        data = _read_json(args.input)
        if "projectors" in data:
            return load_star(data)
        params = _params_from(args, data)
    else:
        params = _params_from(args)
    if not args.case:
        raise ValidationError("without explicit projectors, pick a representative with --case ID")
    fam, _ = cl.representative(params, args.case, args.phi, args.eq_tol, args.tolerance)
    return params, fam


def _emit(args, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def cmd_classify(args) -> int:
    data = _read_json(args.input) if args.input else None
    params = _params_from(args, data)
    report = cl.classify(params, args.eq_tol)
    _emit(args, {"params": params.to_json(), **report.to_json()})
    return 0


def cmd_sweep(args) -> int:
    rows = cl.sweep(args.family, args.min, args.max, args.steps, args.eq_tol)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cl.SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    _emit(args, buf.getvalue())
    return 0


def cmd_construct(args) -> int:
    if args.input:
        data = _read_json(args.input)
        if "block_dims" in data:
            S = construct(BlockOperator.from_json(data), args.tolerance)
            _emit(args, {"system": S.to_json(), "gen_dim": list(generalized_dimension(S).collapsed())})
            return 0
    params, fam = _star_from(args)
    S = construct(assemble(params, fam), args.tolerance)
    rel = verify_relations(S, params, args.tolerance, threshold=cl.RELATION_TOL)
    _emit(args, {"system": S.to_json(), "gen_dim": list(generalized_dimension(S).collapsed()),
                 "verification": rel.to_json()})
    return 0 if rel.ok else 1


def cmd_verify(args) -> int:
    if args.input:
        data = _read_json(args.input)
        if "subspaces" in data:
            S = SubspaceSystem.from_json(data)
            params = _params_from(args)
            rel = verify_relations(S, params, args.tolerance, threshold=cl.RELATION_TOL)
            _emit(args, rel.to_json())
            return 0 if rel.ok else 1
    params, fam = _star_from(args)
    expected = None
    if args.case:
        _, expected = cl.representative(params, args.case, args.phi, args.eq_tol, args.tolerance)
    report = cl.verify_representative(params, fam, expected, args.tolerance)
    _emit(args, {"star": dump_star(params, fam), **report.to_json()})
    return 0 if report.ok else 1


def cmd_kernel(args) -> int:
    params, fam = _star_from(args)
    B = assemble(params, fam)
    K = kernel_basis(B.matrix, args.tolerance)
    try:
        formula = kernel_dim_formula(params, fam, args.tolerance)
    except ValidationError as exc:
        formula = None
        note = str(exc)
    else:
        note = None
    out = {"formula_dim": formula, "numeric_dim": K.shape[1], "kernel_basis": encode_matrix(K),
           "family_irreducible": family_irreducible_Q(fam, args.tolerance)}
    if note:
        out["note"] = note
    _emit(args, out)
    return 0 if formula is None or formula == K.shape[1] else 1


def cmd_wild_embed(args) -> int:
    if args.input:
        data = _read_json(args.input)
        A, B = decode_matrix(data["A"]), decode_matrix(data["B"])
    elif args.seed is not None:
        A, B = random_admissible_pair(args.dim, args.alpha, np.random.default_rng(args.seed))
    else:
        A = B = np.zeros((args.dim, args.dim))
    S = wild_embed(A, B, args.alpha, args.tolerance)
    _emit(args, {"alpha": args.alpha, "system": S.to_json(),
                 "commutant_dim": commutant_dim(S.projectors, args.tolerance, n=S.ambient_dim),
                 "sum_excess": wild_sum_excess(S)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="relative eigenvalue threshold")
    common.add_argument("--eq-tol", type=float, default=cl.EQ_TOL,
                        help="absolute band for equalities between squared cosines")
    common.add_argument("--out", help="write output here instead of stdout")

    star = argparse.ArgumentParser(add_help=False)
    star.add_argument("--input", help="JSON input file")
    star.add_argument("--m", type=int)
    star.add_argument("--r", type=int)
    star.add_argument("--tau", help="comma-separated cosines; expressions such as sqrt(2)/4 allowed")
    star.add_argument("--case", help="representative case id, e.g. zero, e2, l0, l0+1, family")
    star.add_argument("--phi", type=float, help="angle for the family representative")

    ap = argparse.ArgumentParser(prog="subspace-star", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common, star]).set_defaults(func=cmd_classify)

    sw = sub.add_parser("sweep", parents=[common])
    sw.add_argument("--family", default="paper-example")
    sw.add_argument("--min", type=float, required=True)
    sw.add_argument("--max", type=float, required=True)
    sw.add_argument("--steps", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)

    sub.add_parser("construct", parents=[common, star]).set_defaults(func=cmd_construct)
    sub.add_parser("verify", parents=[common, star]).set_defaults(func=cmd_verify)
    sub.add_parser("kernel", parents=[common, star]).set_defaults(func=cmd_kernel)

    we = sub.add_parser("wild-embed", parents=[common])
    we.add_argument("--input", help="JSON with self-adjoint matrices A and B")
    we.add_argument("--dim", type=int, default=2)
    we.add_argument("--alpha", type=float, default=DEFAULT_WILD_ALPHA)
    we.add_argument("--seed", type=int, help="draw a random admissible pair with this seed")
    we.set_defaults(func=cmd_wild_embed)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.tolerance = Tolerance(eps_rel=args.tol)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
