"""Command-line front end (``braidedsuq``).

Exit status: 0 when every assertion of the command holds, 1 when a check
fails, 2 for usage or input errors.  JSON output always carries
``"schema": 1``; wall-clock time goes in a top-level ``"timing"`` field so
the rest of the document is byte-for-byte reproducible.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import geom
from .expr import Gen, ParseError, _generator, evaluate, parse
from .ncalg import SG, SPIN, CopyId, normalize, render_poly, render_word
from .spinops import UP, OperatorMatrix, classical_eval, commutator, prob_op
from .suq2 import make_system
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _count(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-spin", type=_count, default=2, help="number of spin copies")
    common.add_argument("--n-sg", type=_count, default=2, help="number of device copies")
    common.add_argument("--rotation", action="store_true", help="append a rotation copy")
    common.add_argument("--conjugates", choices=("star", "braided"), default="star")
    common.add_argument("--order", type=_count, default=2, help="eps = 1-q truncation order")
    common.add_argument("--q", type=_fraction, default=None, help="numeric q for bound commands")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = _Parser(prog="braidedsuq", description="Braided SU_q(2) algebra and bound checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("normalize", parents=[common], help="canonical form of an expression")
    s.add_argument("expression")
    s = sub.add_parser("commutator", parents=[common], help="[P_up(i), P_up(j)]")
    s.add_argument("i", type=int)
    s.add_argument("j", type=int)
    s = sub.add_parser("expand", parents=[common], help="eps-expansion of each coefficient")
    s.add_argument("expression")
    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s = sub.add_parser("bound", parents=[common], help="evaluate an uncertainty bound")
    s.add_argument("kind", choices=("rotation", "probabilities"))
    s.add_argument("--indices", default="xxyz", help="four axis letters for the rotation bound")
    s.add_argument("--matrix", default=None, help="nine comma-separated entries (row-major); identity if omitted")
    for name in ("n-i", "m-i", "n-j", "m-j"):
        s.add_argument(f"--{name}", default="0,0", help="direction as THETA,OMEGA in radians")
    s = sub.add_parser("etensor", parents=[common], help="the 81 E values of a rotation")
    s.add_argument("--matrix", default=None)
    sub.add_parser("sweep", parents=[common], help="bounds over seeded random rotations").add_argument(
        "--indices", default=None
    )
    s = sub.add_parser("classical-eval", parents=[common], help="evaluate with commuting numbers")
    s.add_argument("expression")
    s.add_argument("--assign", action="append", default=[], help="GEN=COMPLEX, e.g. y1=0.6-0.8j")
    s.add_argument("--angles", action="append", default=[], help="COPY=THETA,OMEGA for S<i> or SG<i>")
    sub.add_parser("dump-rules", parents=[common], help="print the rewrite table")
    return p


# -- helpers ---------------------------------------------------------------

def _system(args):
    return make_system(args.n_spin, args.n_sg, args.rotation, conjugates=args.conjugates)


def _config(args) -> dict:
    return {
        "n_spin": args.n_spin,
        "n_sg": args.n_sg,
        "rotation": args.rotation,
        "conjugates": args.conjugates,
        "order": args.order,
        "q": None if args.q is None else str(args.q),
        "seed": args.seed,
        "samples": args.samples,
    }


def _parse_expr(text, sys_):
    try:
        return parse(text, sys_)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _render_value(v) -> str:
    return str(v) if isinstance(v, OperatorMatrix) else render_poly(v)


def _matrix(text):
    if text is None:
        return np.eye(3)
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad matrix {text!r}") from None
    if len(vals) != 9:
        raise UsageError("--matrix needs nine numbers")
    return np.array(vals).reshape(3, 3)


def _angles(text):
    try:
        th, om = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected THETA,OMEGA, got {text!r}") from None
    return th, om


def _copy_name(name: str) -> CopyId:
    if name.startswith("SG") and name[2:].isdigit():
        return CopyId(SG, int(name[2:]))
    if name.startswith("S") and name[1:].isdigit():
        return CopyId(SPIN, int(name[1:]))
    raise UsageError(f"unknown copy {name!r}; use S<i> or SG<i>")


# -- commands --------------------------------------------------------------

def cmd_normalize(args):
    sys_ = _system(args)
    value = evaluate(_parse_expr(args.expression, sys_), sys_)
    value = value.normalized(sys_) if isinstance(value, OperatorMatrix) else normalize(value, sys_)
    text = _render_value(value)
    return {"input": args.expression, "result": text}, text, True


def cmd_commutator(args):
    sys_ = _system(args)
    try:
        c = commutator(prob_op(args.i, UP, sys_), prob_op(args.j, UP, sys_), sys_)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    text = render_poly(c)
    return {"indices": [args.i, args.j], "terms": len(c), "result": text}, text, True


def cmd_expand(args):
    sys_ = _system(args)
    value = evaluate(_parse_expr(args.expression, sys_), sys_)
    if isinstance(value, OperatorMatrix):
        raise UsageError("expand works on scalar elements, not matrices")
    value = normalize(value, sys_)
    rows = [(render_word(w), str(c.expand_eps(args.order))) for w, c in value.items()]
    text = "\n".join(f"{w}: {s}" for w, s in rows) or "0"
    return {"order": args.order, "terms": [{"word": w, "series": s} for w, s in rows]}, text, True


def cmd_verify(args):
    res = run_suite(
        args.suite,
        {
            "n_spin": args.n_spin,
            "n_sg": args.n_sg,
            "seed": args.seed,
            "samples": args.samples,
            "order": args.order,
            "conjugates": args.conjugates,
        },
    )
    failures = [
        {
            "check": r.get("check"),
            "inputs": {k: v for k, v in r.items() if k in ("indices", "apparatus", "copies", "copy", "system")},
            "residual-rendering": r.get("residual", r.get("residuals", "")),
            "first-nonzero-eps-order": r.get("first_nonzero_eps_order"),
        }
        for r in res.records
        if not r["passed"]
    ]
    lines = [f"{'PASS' if r['passed'] else 'FAIL'} {r.get('check')}" for r in res.records]
    lines.append(f"suite {res.name}: {'PASS' if res.passed else 'FAIL'}")
    payload = res.as_dict()
    payload["failures"] = failures
    return payload, "\n".join(lines), res.passed, res.elapsed


def cmd_bound(args):
    q = Fraction(1) if args.q is None else args.q
    try:
        if args.kind == "rotation":
            idx = args.indices
            if len(idx) != 4:
                raise UsageError("--indices needs four axis letters, e.g. xxyz")
            rep = geom.bound_rotation_elements(_matrix(args.matrix), *idx, q)
        else:
            vecs = [geom.angles_to_direction(*_angles(getattr(args, n))) for n in ("n_i", "m_i", "n_j", "m_j")]
            rep = geom.bound_probabilities(*vecs, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = f"bound = ({rep.prefactor}) * {rep.vector_part:.12g} = {rep.bound:.12g}"
    return rep.as_dict(), text, True


def cmd_etensor(args):
    try:
        E = geom.e_tensor(_matrix(args.matrix))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [
        {"i": geom.AXES[i], "j": geom.AXES[j], "k": geom.AXES[k], "l": geom.AXES[l], "E": float(E[i, j, k, l])}
        for i in range(3)
        for j in range(3)
        for k in range(3)
        for l in range(3)
    ]
    text = "\n".join(f"E_{r['i']}{r['j']}{r['k']}{r['l']} = {r['E']:.12g}" for r in rows)
    return {"max_abs": float(np.max(np.abs(E))), "values": rows}, text, True


def cmd_sweep(args):
    q = Fraction(1) if args.q is None else args.q
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rows = geom.sweep(args.samples, args.seed, q, args.indices)
    return {"rows": rows}, None, True


def cmd_classical_eval(args):
    sys_ = _system(args)
    value = evaluate(_parse_expr(args.expression, sys_), sys_)
    if isinstance(value, OperatorMatrix):
        raise UsageError("classical-eval works on scalar elements")
    assignment = {}
    for item in args.angles:
        name, _, rest = item.partition("=")
        assignment.update(geom.spinor_assignment(_copy_name(name), *_angles(rest)))
    for item in args.assign:
        name, _, rest = item.partition("=")
        node = _parse_expr(name, sys_)
        if not isinstance(node, Gen):
            raise UsageError(f"left side of {item!r} is not a generator")
        try:
            number = complex(rest.replace("i", "j"))
        except ValueError:
            raise UsageError(f"bad number in {item!r}") from None
        assignment[_generator(node)] = number
    q = Fraction(1) if args.q is None else args.q
    try:
        v = classical_eval(value, assignment, q)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    text = f"{v.real:.15g}{v.imag:+.15g}i"
    return {"q": str(q), "re": v.real, "im": v.imag}, text, True


def cmd_dump_rules(args):
    lines = _system(args).dump_rules()
    return {"rules": lines}, "\n".join(lines), True


COMMANDS = {
    "normalize": cmd_normalize,
    "commutator": cmd_commutator,
    "expand": cmd_expand,
    "verify": cmd_verify,
    "bound": cmd_bound,
    "etensor": cmd_etensor,
    "sweep": cmd_sweep,
    "classical-eval": cmd_classical_eval,
    "dump-rules": cmd_dump_rules,
}


def _csv(result: dict) -> str:
    buf = io.StringIO()
    if "rows" in result:
        w = csv.DictWriter(buf, fieldnames=geom.SWEEP_HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(result["rows"])
    elif "values" in result:
        w = csv.DictWriter(buf, fieldnames=("i", "j", "k", "l", "E"), lineterminator="\n")
        w.writeheader()
        w.writerows(result["values"])
    else:
        w = csv.writer(buf, lineterminator="\n")
        for k, v in result.items():
            w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        t0 = time.perf_counter()
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result, text, passed = out[:3]
    elapsed = out[3] if len(out) > 3 else time.perf_counter() - t0
    fmt = args.format
    if args.command == "sweep" and fmt == "text":
        fmt = "csv"
    if fmt == "json":
        doc = {"schema": SCHEMA, "command": args.command, "config": _config(args), "passed": passed, "result": result}
        doc["timing"] = {"elapsed_s": round(elapsed, 6)}
        body = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        body = _csv(result)
    else:
        body = (text if text is not None else _csv(result)).rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
