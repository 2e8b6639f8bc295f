"""``bkforms`` command-line interface.

Exit codes: 0 equivalent / Isomorphic / success, 1 not equivalent,
2 Unknown or PathDegenerate, 3 library or input error, 4 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__
from .bk_forms import iota_L, laurent_normal_form
from .classify import (
    DEFAULT_TOL,
    PoissonVerdict,
    bk_symplectomorphic,
    ll_decomposition,
    poisson_isomorphic_bk_type,
)
from .errors import BkFormsError, PathDegenerate
from .generators import constant_form, torus_fixture
from .normalize import ResidueVector, poly_pick, residue_expansion
from .serialize import dumps, dumps_form, loads_form, render_text
from .series_ring import DEFAULT_ORDER
from .volume import DEFAULT_EPS_GRID, asymptotic_gap, format_polynomial, volume_polynomial

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _read_form(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return loads_form(text)


def _num(x: float) -> str:
    # shortest round-trip form for the human-readable summary
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _circle_functions(values) -> list[dict]:
    return [v.to_dict() for v in values]


def _ll_dict(f) -> dict:
    ll = ll_decomposition(f, check=False)
    return {
        "liouville_volume": ll.liouville_volume,
        "residues": [list(row) for row in ll.residues],
    }


def _decompose_report(f) -> dict:
    lnf = laurent_normal_form(f)
    lead = iota_L(f)
    circles = []
    for data in lnf.circles:
        circles.append(
            {
                "id": data.circle_id,
                "orientation": data.orientation,
                "alpha": _circle_functions(data.alphas),
                "beta": data.beta.to_dict(),
                "iota_L": lead[data.circle_id].to_dict(),
            }
        )
    ll = _ll_dict(f)
    summary = [f"k = {f.k}, {len(circles)} circle(s)"]
    for cid, row in zip(f.circle_ids, ll["residues"]):
        summary.append(f"residues on {cid}: [" + ", ".join(_num(v) for v in row) + "]")
    return {"command": "decompose", "summary": summary, "k": f.k, "normal_form": circles, "residues": ll["residues"]}


def _volume_report(f, eps_grid) -> dict:
    P = volume_polynomial(f)
    gaps = asymptotic_gap(f, eps_grid) if f.collars else [(float(e), 0.0) for e in eps_grid]
    summary = [
        f"P(t) = {P.format()}",
        f"Liouville volume: {_num(P.constant_term)}",
    ]
    summary += [f"gap at eps = {_num(e)}: {_num(g)}" for e, g in gaps]
    return {
        "command": "volume",
        "summary": summary,
        "volume_polynomial": list(P.coefficients),
        "liouville_volume": P.constant_term,
        "asymptotic_gaps": [[e, g] for e, g in gaps],
    }


def cmd_decompose(args) -> tuple[dict, int]:
    return _decompose_report(_read_form(args.spec)), EXIT_OK


def cmd_volume(args) -> tuple[dict, int]:
    return _volume_report(_read_form(args.spec), args.eps_grid), EXIT_OK


def cmd_classify(args) -> tuple[dict, int]:
    f0 = _read_form(args.spec0)
    f1 = _read_form(args.spec1)
    report = {"command": "classify", "mode": args.mode, "tol": args.tol}
    if args.mode == "symplecto":
        try:
            same = bk_symplectomorphic(f0, f1, args.tol)
        except PathDegenerate as exc:
            verdict, code = "PathDegenerate", EXIT_UNKNOWN
            report["detail"] = str(exc)
        else:
            verdict = "equivalent" if same else "not equivalent"
            code = EXIT_OK if same else EXIT_NOT_EQUIVALENT
    else:
        result = poisson_isomorphic_bk_type(f0, f1, args.tol)
        verdict = result.value
        code = EXIT_OK if result is PoissonVerdict.ISOMORPHIC else EXIT_UNKNOWN
    report["verdict"] = verdict
    report["summary"] = [f"verdict: {verdict}"]
    report["invariants"] = [_ll_dict(f0), _ll_dict(f1)]
    return report, code


def cmd_normalize(args) -> tuple[dict, int]:
    try:
        a = ResidueVector(tuple(args.residues))
    except ValueError as exc:
        raise BkFormsError(f"invalid residue vector: {exc}") from exc
    P = poly_pick(a, args.order)
    e = residue_expansion(a, P)
    coeffs = [float(c) for c in P.coefficients]
    expansion = [float(e.coefficient(d)) for d in range(-a.k, 0)]
    summary = [
        f"P(y) = {format_polynomial(coeffs, 'y')}",
        "expansion (b_-k .. b_-1): [" + ", ".join(_num(b) for b in expansion) + "]",
    ]
    return {"command": "normalize", "summary": summary, "P": coeffs, "expansion": expansion}, EXIT_OK


def cmd_selftest(args) -> tuple[dict, int]:
    from .selftest import run_all

    results = run_all(args.scale)
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    report = {
        "command": "selftest",
        "summary": lines,
        "results": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    return report, EXIT_OK if ok else EXIT_NOT_EQUIVALENT


def cmd_generate(args) -> tuple[dict | str, int]:
    if args.fixture == "torus":
        densities = tuple(args.density) if args.density else (1.0, -1.0)
        if len(densities) != 2:
            raise BkFormsError("the torus fixture takes two densities")
        f = torus_fixture(args.k, densities, R=args.R, bulk=args.bulk)
    else:
        value = args.density[0] if args.density else 1.0
        f = constant_form(args.k, value, R=args.R, bulk=args.bulk)
    return dumps_form(f), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bkforms", description="Laurent normal forms, volume polynomials and classification of b^k-forms on surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--order", type=int, default=DEFAULT_ORDER)
    common.add_argument("--eps-grid", type=_float_list, default=list(DEFAULT_EPS_GRID))
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", parents=[common], help="Laurent normal form and residue integrals")
    d.add_argument("spec", nargs="?", default="-", help="form specification (default: stdin)")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("volume", parents=[common], help="volume polynomial, Liouville volume and gaps")
    v.add_argument("spec", nargs="?", default="-")
    v.set_defaults(func=cmd_volume)

    c = sub.add_parser("classify", parents=[common], help="compare two forms")
    c.add_argument("spec0")
    c.add_argument("spec1")
    c.add_argument("--mode", choices=("symplecto", "poisson"), default="symplecto")
    c.set_defaults(func=cmd_classify)

    n = sub.add_parser("normalize", parents=[common], help="polynomial bringing constant pole data to normal shape")
    n.add_argument("--residues", type=_float_list, required=True, help="a_-1, ..., a_-k")
    n.set_defaults(func=cmd_normalize)

    s = sub.add_parser("selftest", parents=[common], help="run the randomized invariant suites")
    s.add_argument("--scale", type=float, default=1.0, help="fraction of the default sample sizes")
    s.set_defaults(func=cmd_selftest)

    g = sub.add_parser("generate", help="write a fixture form specification")
    g.add_argument("fixture", choices=("torus", "constant"))
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--R", type=float, default=None)
    g.add_argument("--bulk", type=float, default=0.0)
    g.add_argument("--density", type=float, action="append", help="constant density per circle (repeatable)")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "generate" and args.R is None:
        args.R = 0.25 if args.fixture == "torus" else 1.0
    try:
        report, code = args.func(args)
    except Exception as exc:  # every failure maps to the documented error code
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if isinstance(report, str):
        sys.stdout.write(report)
    elif args.format == "text":
        sys.stdout.write(render_text(report))
    else:
        sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
