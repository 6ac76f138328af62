"""Command-line front end.

Exit status is 0 on success, 1 when the input is well-formed but violates a
domain condition, and 2 on a usage error.  Numbers are printed exactly
("p/q", "a + b*sqrt(s)"); ``--float`` adds a decimal column or field.

Output schemas
  weights       text: "cf [a0;a1,...]" and "W p/q: w1,w2,..."; json {p, q, cf, W}
  cut           json {tuple, per, vol, a0, n_cuts, cut_sizes}
  capacities    csv  k,c_k            json {tuple, capacities}
  subleading    csv  k,e_k            json {tuple, vol, min, argmin, max, argmax, zero_at}
  cremona       json {chain, length} for --tuple; ReductionTrace for --class
  classes       json list of {d, mtilde, m, center, mu_at_center, volume_at_center, obstructive, live}
  embed-fn      csv  z,ech_lower,class_lower,volume,best (+ corner)
  accumulation  json {target, a0, V_a0, bound, source, exceeds_volume, verdict, trace}
  staircase     json list of {n, k, center, quasi_perfect, perfect, obstructive, mu_center, V_center}
                plus checks; csv k,p,q,center,z_inf,gap
  ghost         json {alpha, k, rows: [{n, p, q, mu, expected, matches, below_e_prime, ...}]}
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from . import capacityfn, classes, cremona, domains, ech, staircase
from .domains import DomainError, WeightTuple
from .exactnum import format_number, parse_number, parse_rational, parse_surd
from .weights import cf_of, integral_weights


class UsageError(Exception):
    pass


# -- argument types ----------------------------------------------------------------

def _tuple_arg(text: str):
    if ":" not in text:
        raise argparse.ArgumentTypeError(f"tuple must look like 'b:b1,b2,...', got {text!r}")
    head, tail = text.split(":", 1)
    try:
        b = parse_number(head.strip())
        cuts = tuple(parse_number(s) for s in tail.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return b, cuts


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _surd_arg(text: str):
    try:
        return parse_surd(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _grid_arg(text: str) -> list[Fraction]:
    """``lo:hi:n`` gives n midpoints of equal cells of [lo, hi]."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = parse_rational(lo), parse_rational(hi), int(n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:n, got {text!r}") from exc
    if n < 1 or hi <= lo:
        raise argparse.ArgumentTypeError("grid needs n >= 1 and lo < hi")
    step = (hi - lo) / n
    return [lo + (i + Fraction(1, 2)) * step for i in range(n)]


def _build_tuple(args) -> WeightTuple:
    if getattr(args, "polygon", None):
        poly = domains.read_polygon(args.polygon)
        return domains.cut_decomposition(poly)[0]
    if getattr(args, "tuple", None) is None:
        raise UsageError("give --tuple or --polygon")
    b, cuts = args.tuple
    return WeightTuple(b, cuts)


def _fmt(x, as_float: bool):
    text = format_number(x)
    return {"exact": text, "float": float(x)} if as_float else text


# -- commands ------------------------------------------------------------------------

def cmd_weights(args) -> str:
    z = args.z
    p, q = z.numerator, z.denominator
    cf = cf_of(p, q)
    W = integral_weights(p, q)
    if args.format == "json":
        return json.dumps({"p": p, "q": q, "cf": list(cf.entries), "W": list(W)})
    out = f"cf {cf}\nW {p}/{q}: {','.join(map(str, W))}\n"
    if args.float:
        out += f"value {float(z)!r}\n"
    return out


def cmd_cut(args) -> str:
    if not args.polygon:
        raise UsageError("cut needs --polygon")
    poly = domains.read_polygon(args.polygon)
    t, tree = domains.cut_decomposition(poly)
    st = domains.stats(t)
    return json.dumps({"tuple": str(t), "per": _fmt(st.per, args.float), "vol": _fmt(st.vol, args.float),
                       "a0": None if st.a0 is None else _fmt(st.a0, args.float),
                       "n_cuts": len(t.cuts), "cut_sizes": [format_number(c) for c in t.cuts]})


def cmd_capacities(args) -> str:
    t = _build_tuple(args)
    seq = ech.convex_capacities(t, args.K)
    if args.format == "json":
        return json.dumps({"tuple": str(t), "capacities": [_fmt(c, args.float) for c in seq]})
    if args.float:
        rows = ["k,c_k,float"] + [f"{k},{format_number(c)},{float(c)!r}" for k, c in enumerate(seq)]
        return "\n".join(rows) + "\n"
    return seq.to_csv()


def cmd_subleading(args) -> str:
    t = _build_tuple(args)
    tr = ech.subleading_trace(t, args.K)
    if args.format == "json":
        return json.dumps({"tuple": str(t), "vol": format_number(tr.vol), "min": tr.min_value,
                           "argmin": tr.min_indices, "max": tr.max_value, "argmax": tr.max_indices,
                           "zero_at": tr.zero_at})
    return tr.to_csv()


def cmd_cremona(args) -> str:
    if args.cls:
        try:
            parts = [int(x) for x in args.cls.replace(";", " ").replace(":", " ").replace(",", " ").split()]
        except ValueError as exc:
            raise UsageError(f"class entries must be integers: {args.cls!r}") from exc
        if not parts:
            raise UsageError("empty class")
        ok, trace = cremona.is_exceptional(cremona.ClassVector(parts[0], tuple(parts[1:])))
        return trace.to_json()
    t = _build_tuple(args)
    chain = cremona.cremona_reduce_tuple(t)
    return json.dumps({"chain": [str(x) for x in chain], "length": len(chain[-1].cuts)})


def cmd_classes(args) -> str:
    t = _build_tuple(args)
    found = classes.enumerate_classes(t, args.dmax, obstructive_only=not args.all)
    return json.dumps([classes.class_report(c, t, found) for c in found])


def cmd_embed_fn(args) -> str:
    t = _build_tuple(args)
    grid = args.grid if args.grid else capacityfn.ball_grid(10)
    if args.jobs and args.jobs > 1:
        # grid points are independent; ordered map keeps the output deterministic
        cls_list = classes.enumerate_classes(t, args.dmax, obstructive_only=True)
        # plain values pickle; the sequence object carries a local extender
        caps = ech.convex_capacities(t, args.K).values if args.K else None
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            samples = list(ex.map(capacityfn._sample, [t] * len(grid), grid, [args.K] * len(grid),
                                  [cls_list] * len(grid), [caps] * len(grid)))
        for prev, cur in zip(samples, samples[1:]):
            cur.corner = cur.piece != prev.piece
    else:
        samples = capacityfn.scan(t, grid, args.K, args.dmax)
    lines = ["z,ech_lower,class_lower,volume,best,corner"]
    lines += [f"{s.csv_row()},{int(s.corner)}" for s in samples]
    return "\n".join(lines) + "\n"


def cmd_accumulation(args) -> str:
    if args.per is not None or args.vol is not None:
        if args.per is None or args.vol is None:
            raise UsageError("--per and --vol go together")
        target = domains.DomainStats.from_values(args.per, args.vol)
    else:
        target = _build_tuple(args)
    rep = capacityfn.accumulation_report(target, args.K, args.dmax, args.gromov)
    return json.dumps(rep.to_json())


def cmd_staircase(args) -> str:
    n, k = args.n, args.k
    if args.format == "csv":
        return staircase.centers_csv(n, k)
    wanted = {"all", "steps"} if args.verify == "all" else {args.verify}
    out: dict = {"n": n, "k_max": k}
    if wanted & {"all", "steps"}:
        out["steps"] = [r.to_json() for r in staircase.step_reports(n, k)]
        dom = staircase.limit_domain(staircase.make_family(n))
        out["limit"] = {"z_inf": format_number(dom.z_inf), "V_inf": format_number(dom.v_inf),
                        "vol": format_number(dom.vol), "per": format_number(dom.per), "checks": dom.checks}
        out["blocking_class"] = {key: (format_number(v) if not isinstance(v, bool) else v)
                                 for key, v in staircase.blocking_class_check(n).items()}
    if wanted & {"all", "matrix"}:
        out["matrix"] = staircase.matrix_relation_check(n, k)
    if wanted & {"all", "overshadow"}:
        rep = staircase.overshadow_search(n)
        out["overshadow"] = {"candidates": [str(c.mtilde) for c in rep.candidates],
                             "eliminated": [{"d": c.d, "C": c.C, "A": c.A, "mtilde": list(c.mtilde),
                                             "reason": c.reason} for c in rep.arithmetic_survivors],
                             "counts": rep.counts}
    if wanted & {"all", "perfect"} and "steps" not in out:
        ok, _ = staircase.verify_perfect(staircase.make_family(n), k)
        out["perfect"] = ok
    if wanted & {"all", "obstructive"} and "steps" not in out:
        ok, _, inc = staircase.verify_obstructive(staircase.make_family(n), k)
        out["obstructive"] = ok
        out["ratio_increasing"] = inc
    verdicts = []
    for s in out.get("steps", []):
        verdicts += [s["quasi_perfect"], s["perfect"], s["obstructive"]]
    verdicts += list(out.get("matrix", {}).values())
    verdicts += list(out.get("limit", {}).get("checks", {}).values())
    if "overshadow" in out:
        verdicts.append(not out["overshadow"]["candidates"])
    for key in ("perfect", "obstructive"):
        if key in out:
            verdicts.append(out[key])
    out["all_true"] = all(verdicts)
    return json.dumps(out)


def cmd_ghost(args) -> str:
    if args.alpha is None:
        raise UsageError("ghost needs --alpha")
    rep = staircase.ghost_stairs(args.alpha, args.k)
    rows = [{"n": r.n, "p": r.p, "q": r.q, "class": str(r.cls), "mu": _fmt(r.mu, args.float),
             "expected": format_number(r.expected), "matches": r.matches, "obstructive": r.obstructive,
             "reference": format_number(r.reference), "below_reference": r.below_reference,
             "e_prime": format_number(r.e_prime_value), "below_e_prime": r.below_e_prime}
            for r in rep.rows]
    return json.dumps({"alpha": format_number(rep.alpha), "k": rep.k, "rows": rows,
                       "e_prime_equals_z_over_alpha": rep.e_prime_on_interval})


# -- parser --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, tuple_input=True):
    if tuple_input:
        p.add_argument("--tuple", type=_tuple_arg, help='weight tuple "b:b1,b2,..."')
        p.add_argument("--polygon", help="file with one 'x y' vertex per line")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--float", action="store_true", help="add decimal values")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (embed-fn)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricembed", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weights", help="continued fraction and W(p,q)")
    p.add_argument("z", type=_rational_arg)
    _common(p, tuple_input=False)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("cut", help="weight tuple of a polygon")
    _common(p)
    p.set_defaults(func=cmd_cut)

    for name, func in (("capacities", cmd_capacities), ("subleading", cmd_subleading)):
        p = sub.add_parser(name, help=f"{name} of a convex toric domain")
        _common(p)
        p.add_argument("--K", type=int, default=20)
        p.set_defaults(func=func)

    p = sub.add_parser("cremona", help="reduce a tuple or test a class for exceptionality")
    _common(p)
    p.add_argument("--class", dest="cls", help='class vector "d; n1,n2,..." (or "d:n1,...")')
    p.set_defaults(func=cmd_cremona)

    p = sub.add_parser("classes", help="obstructive classes up to a degree")
    _common(p)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--all", action="store_true", help="include non-obstructive classes")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("embed-fn", help="lower bounds for the embedding function on a grid")
    _common(p)
    p.add_argument("--K", type=int, default=200)
    p.add_argument("--dmax", type=int, default=5)
    p.add_argument("--grid", type=_grid_arg, help="lo:hi:n")
    p.set_defaults(func=cmd_embed_fn)

    p = sub.add_parser("accumulation", help="bound at the accumulation point")
    _common(p)
    p.add_argument("--K", type=int, default=200)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--per", type=parse_number_arg)
    p.add_argument("--vol", type=parse_number_arg)
    p.add_argument("--gromov", type=parse_number_arg, help="upper bound for the Gromov width")
    p.set_defaults(func=cmd_accumulation)

    p = sub.add_parser("staircase", help="verify a staircase family")
    _common(p, tuple_input=False)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--verify", choices=("all", "perfect", "obstructive", "overshadow", "matrix"),
                   default="all")
    p.set_defaults(func=cmd_staircase)

    p = sub.add_parser("ghost", help="ghost stairs of an irrational ellipsoid")
    _common(p, tuple_input=False)
    p.add_argument("--alpha", type=_surd_arg)
    p.add_argument("--k", type=int, default=6, help="number of convergents")
    p.set_defaults(func=cmd_ghost)
    return ap


def parse_number_arg(text: str):
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 2
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
