"""Command-line front end: ``polyhom [--json] SCRIPT COMMAND ...``.

Output is ``key = value`` lines with exact fractions ``a/b``; ``--json``
prints the same fields as one JSON object.  Exit codes: 0 success,
1 a check failed, 2 usage, parse, name or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PartialIsometryViolated, PolyhomError
from .fp import (
    FpPolyhom,
    FpWindow,
    box_discrepancy,
    chi,
    coset_family,
    realize_finitary,
    sandwich,
    theta,
)
from .groups import Subgroup
from .morphisms import MeasuredGroup, Polyhom, decompose, involution, ph_compose
from .operators import angle_check, format_fraction, pi
from .relations import MultRelation
from .textfmt import Session, parse, parse_file
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2
QUICK_SCALE = 0.1


class CheckFailed(Exception):
    """A command ran but its check did not hold."""

    def __init__(self, report: dict):
        super().__init__("check failed")
        self.report = report


# formatting

def fmt_set(xs) -> str:
    return "{" + ", ".join(str(x) for x in sorted(xs)) + "}"


def fmt_rows(M) -> str:
    rows = np.asarray(M, dtype=np.int64).reshape(len(M), -1) if len(M) else []
    return "[" + ", ".join("[" + ", ".join(str(int(x)) for x in r) + "]" for r in rows) + "]"


def digit_grid(M) -> list[str]:
    return [" ".join(str(int(x)) for x in row) for row in np.asarray(M)]


def generating_pairs(rel: MultRelation) -> list[tuple[int, int]]:
    """A small generating set: keep each pair not already generated by the earlier ones."""
    gens: list[tuple[int, int]] = []
    have = MultRelation.generated(rel.source, rel.target, [])
    for pair in rel.pairs():
        if pair not in have:
            gens.append(pair)
            have = MultRelation.generated(rel.source, rel.target, gens)
            if len(have) == len(rel):
                break
    return gens


def polyhom_definition(session: Session, name: str, P: Polyhom) -> str:
    src, tgt = session.space_text(P.source), session.space_text(P.target)
    if P.is_zero:
        return f"polyhom {name} = zero {src} {tgt}"
    pairs = ", ".join(f"({a}, {b})" for a, b in generating_pairs(P.relation))
    return (
        f"polyhom {name} : {src} -> {tgt} "
        f"{{ relation = generated {{ {pairs} }}; weight = {format_fraction(P.weight)} }}"
    )


def describe_polyhom(session: Session, name: str, P: Polyhom) -> dict:
    out = {
        "name": name,
        "source": session.space_text(P.source),
        "target": session.space_text(P.target),
        "source_pointmass": format_fraction(P.source.point_mass),
        "target_pointmass": format_fraction(P.target.point_mass),
        "zero": "true" if P.is_zero else "false",
    }
    if not P.is_zero:
        dom, im, ker, indef = P.marginals()
        out.update(
            dom=fmt_set(dom.elements),
            im=fmt_set(im.elements),
            ker=fmt_set(ker.elements),
            indef=fmt_set(indef.elements),
            pairs=str(len(P.relation)),
            weight=format_fraction(P.weight),
        )
    out["alpha"] = format_fraction(P.alpha)
    out["beta"] = format_fraction(P.beta)
    groups_bound = all(session.group_name(M.group) is not None for M in (P.source, P.target))
    if groups_bound:
        out["definition"] = polyhom_definition(session, name, P)
    return out


def window_definition(name: str, W: FpWindow) -> str:
    return f"fpwindow {name} = p {W.p} range {W.lo} {W.hi}"


def describe_fp(session: Session, name: str, F: FpPolyhom) -> dict:
    W = F.window
    wname = session.window_name(W)
    out = {"name": name, "window": str(W), "zero": "true" if F.is_zero else "false"}
    if not F.is_zero:
        dom, im, ker, indef = F.marginal_dims()
        out.update(
            dim=str(F.dim),
            dom_dim=str(dom),
            im_dim=str(im),
            ker_dim=str(ker),
            indef_dim=str(indef),
            weight=format_fraction(F.weight),
            basis=fmt_rows(F.basis),
        )
    out["alpha"] = format_fraction(F.alpha)
    out["beta"] = format_fraction(F.beta)
    if wname is None:
        wname = f"{name}_window"
        out["window_definition"] = window_definition(wname, W)
    if F.is_zero:
        out["definition"] = f"fppolyhom {name} in {wname} = zero"
    else:
        out["definition"] = (
            f"fppolyhom {name} in {wname} {{ basis = {fmt_rows(F.basis)}; weight = {format_fraction(F.weight)} }}"
        )
    return out


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, indent=2)
    lines = []

    def emit(prefix: str, value) -> None:
        if isinstance(value, dict):
            for k, v in value.items():
                emit(f"{prefix}.{k}", v)
        elif isinstance(value, list):
            for i, v in enumerate(value):
                emit(f"{prefix}.{i}" if isinstance(v, dict) else prefix, v)
        else:
            lines.append(f"{prefix} = {value}")

    for k, v in report.items():
        emit(k, v)
    return "\n".join(lines)


# commands

def _polyhom(session: Session, name: str) -> Polyhom:
    return session.lookup("polyhom", name)


def _fp(session: Session, name: str) -> FpPolyhom:
    return session.lookup("fppolyhom", name)


def cmd_inspect(session: Session, args) -> dict:
    try:
        return describe_polyhom(session, args.name, _polyhom(session, args.name))
    except PolyhomError:
        if args.name in session.names("fppolyhom"):
            return describe_fp(session, args.name, _fp(session, args.name))
        raise


def cmd_compose(session: Session, args) -> dict:
    T, R = _polyhom(session, args.t), _polyhom(session, args.r)
    return describe_polyhom(session, args.as_name or f"{args.t}_{args.r}", ph_compose(T, R))


def cmd_matrix(session: Session, args) -> dict:
    M = pi(_polyhom(session, args.name))
    if args.json:
        return {"name": args.name, "rows": M.rows_text()}
    text = M.to_csv() if args.format == "csv" else M.to_grid()
    return {"__text__": text}


def cmd_involution(session: Session, args) -> dict:
    return describe_polyhom(session, f"{args.name}_star", involution(_polyhom(session, args.name)))


def cmd_decompose(session: Session, args) -> dict:
    P = _polyhom(session, args.name)
    D = decompose(P)
    out = {}
    for part in ("first", "middle", "last"):
        out[part] = describe_polyhom(session, f"{args.name}_{part}", getattr(D, part))
    ok = D.recompose() == P
    out["recomposes"] = "true" if ok else "false"
    if not ok:
        raise CheckFailed(out)
    return out


def cmd_angle(session: Session, args) -> dict:
    subs: list[Subgroup] = [session.lookup("subgroup", n) for n in (args.phi, args.delta, args.psi, args.gamma)]
    parent = subs[0].parent
    if any(S.parent != parent for S in subs):
        raise PolyhomError("all four subgroups must lie in one group")
    try:
        sigma = angle_check(MeasuredGroup(parent), *subs)
    except PartialIsometryViolated as exc:
        raise CheckFailed({"angle": "fail", "reason": str(exc)}) from exc
    return {"sigma": format_fraction(sigma), "spectrum": "{0/1, " + format_fraction(sigma) + "}"}


def _matrix_arg(text: str) -> np.ndarray:
    try:
        rows = json.loads(text)
        M = np.array(rows, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise PolyhomError(f"cannot read matrix {text!r}: {exc}") from exc
    if M.ndim != 2:
        raise PolyhomError("matrix must be a list of rows")
    return M


def _split_arg(text: str) -> tuple[int, int, int]:
    try:
        a, b, c = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise PolyhomError(f"split must be three integers like 1,2,1, got {text!r}") from exc
    return a, b, c


def cmd_fp(session: Session, args) -> dict:
    if args.fp_command == "theta":
        W = session.lookup("fpwindow", args.window)
        return describe_fp(session, f"theta_{args.m}", theta(W, args.m))
    if args.fp_command == "chi":
        return describe_fp(session, "chi", chi(_matrix_arg(args.matrix), _split_arg(args.split), args.p, args.orientation))
    if args.fp_command == "sandwich":
        return describe_fp(session, f"{args.name}_m{args.m}", sandwich(_fp(session, args.name), args.m))
    if args.fp_command == "discrepancy":
        A, B = _fp(session, args.a), _fp(session, args.b)
        fam = coset_family(A.window, args.k, args.l)
        return {"boxes": str(len(fam)), "discrepancy": format_fraction(box_discrepancy(A, B, fam))}
    # realize
    R = _fp(session, args.name)
    found = realize_finitary(R, args.m, budget=args.budget, method=args.method, seed=args.seed)
    if found is None:
        raise CheckFailed({"witness": "none", "tried": "budget exhausted"})
    return {
        "method": found.method,
        "tried": str(found.tried),
        "split": ",".join(str(x) for x in found.split),
        "witness": digit_grid(found.g),
    }


def cmd_verify(session: Session, args) -> dict:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    extra = session.values("polyhom") + session.values("fppolyhom")
    scale = QUICK_SCALE if args.quick else 1.0
    suites = []
    failed = False
    for n in names:
        res = run_suite(n, scale=scale, extra=extra)
        failed |= not res.passed
        entry = {
            "suite": n,
            "criterion": str(SUITES[n][0]),
            "status": "pass" if res.passed else "fail",
            "checked": str(res.checked),
            "failed": str(res.failed),
        }
        if res.failures:
            entry["failures"] = list(res.failures)
        if res.notes:
            entry["notes"] = list(res.notes)
        suites.append(entry)
    out = {"suites": suites, "status": "fail" if failed else "pass"}
    if failed:
        raise CheckFailed(out)
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyhom", description=__doc__.split("\n")[0])
    ap.add_argument("--json", action="store_true", help="print one JSON object instead of key = value lines")
    ap.add_argument("script", help="definition file, or - for standard input")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="marginals, weight, alpha and beta of a binding")
    p.add_argument("name")
    p = sub.add_parser("compose", help="T after R")
    p.add_argument("t")
    p.add_argument("r")
    p.add_argument("--as", dest="as_name")
    p = sub.add_parser("matrix", help="the summation operator of a polyhom")
    p.add_argument("name")
    p.add_argument("--format", choices=("grid", "csv"), default="grid")
    p = sub.add_parser("involution", help="the reversed polyhom")
    p.add_argument("name")
    p = sub.add_parser("decompose", help="three-factor decomposition through the quotients")
    p.add_argument("name")
    p = sub.add_parser("angle", help="sigma for two subgroup/normal-subgroup pairs")
    for n in ("phi", "delta", "psi", "gamma"):
        p.add_argument(n)

    fp = sub.add_parser("fp", help="linear relations over F_p").add_subparsers(dest="fp_command", required=True)
    q = fp.add_parser("theta")
    q.add_argument("window")
    q.add_argument("m", type=int)
    q = fp.add_parser("chi")
    q.add_argument("matrix", help="JSON rows, e.g. [[1,0],[0,1]]")
    q.add_argument("--split", required=True, help="block sizes a,b,c")
    q.add_argument("--p", type=int, default=2)
    q.add_argument("--orientation", choices=("row", "column"), default="row")
    q = fp.add_parser("sandwich")
    q.add_argument("name")
    q.add_argument("m", type=int)
    q = fp.add_parser("discrepancy")
    for n in ("a", "b"):
        q.add_argument(n)
    q.add_argument("k", type=int)
    q.add_argument("l", type=int)
    q = fp.add_parser("realize")
    q.add_argument("name")
    q.add_argument("m", type=int)
    q.add_argument("--budget", type=int, default=20000)
    q.add_argument("--method", choices=("auto", "construct", "search"), default="auto")
    q.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="run a named check suite")
    p.add_argument("suite", choices=["all", *SUITES])
    p.add_argument("--quick", action="store_true", help=f"scale sampled suites by {QUICK_SCALE}")
    return ap


COMMANDS = {
    "inspect": cmd_inspect,
    "compose": cmd_compose,
    "matrix": cmd_matrix,
    "involution": cmd_involution,
    "decompose": cmd_decompose,
    "angle": cmd_angle,
    "fp": cmd_fp,
    "verify": cmd_verify,
}


def _load(path: str) -> Session:
    if path == "-":
        return parse(sys.stdin.read())
    return parse_file(path)


def _print(report: dict, as_json: bool) -> None:
    if "__text__" in report:
        print(report["__text__"])
    else:
        print(render(report, as_json))


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        session = _load(args.script)
        report = COMMANDS[args.command](session, args)
    except CheckFailed as exc:
        _print(exc.report, args.json)
        return EXIT_FAILED
    except (PolyhomError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _print(report, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
