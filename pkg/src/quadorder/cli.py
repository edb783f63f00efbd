"""Command-line interface.

Exit codes: 0 success, 2 argument error, 3 resource limit, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from quadorder.arith import ArgumentError
from quadorder.factor_engine import (
    ALL_FROM_2,
    delta_of,
    enumerate_factorizations,
    length_set,
    catenary_degree,
    unions_closed_form,
    window_sweep,
)
from quadorder.global_monoid import (
    DEFAULT_SEARCH_BUDGET,
    classify,
    min_delta_check,
    rho_k_closed_form,
    verify_classification,
)
from quadorder.local_monoid import (
    LocalMonoid,
    OracleMismatch,
    ResourceLimitError,
    Triple,
    atom_census,
)
from quadorder.order import DataError, OrderContext, make_order, picard_number, read_pic_data

SCHEMA = 1
DEFAULT_BOUND = 10

EXIT_OK, EXIT_ARGS, EXIT_RESOURCE, EXIT_MISMATCH = 0, 2, 3, 4


@dataclass
class Result:
    payload: dict[str, Any]
    rows: list[list[Any]] | None = None
    header: list[str] | None = None
    ok: bool = True


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    return str(obj)


def _triple(text: str) -> Triple:
    try:
        parts = [int(s) for s in text.strip("()[] ").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z but got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z but got {text!r}")
    return Triple(*parts)


def _ks(text: str) -> list[int]:
    """Parse "2-6" or "2,3,5"."""
    out: list[int] = []
    try:
        for chunk in text.split(","):
            lo, _, hi = chunk.partition("-")
            out.extend(range(int(lo), int(hi or lo) + 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list like 2-6 or 2,3,5, got {text!r}") from None
    return out


def _order(args: argparse.Namespace) -> OrderContext:
    return make_order(args.d, args.f)


def _prime(args: argparse.Namespace, ctx: OrderContext) -> int:
    primes = [p for p, _ in ctx.conductor_primes]
    if args.p is None:
        if len(primes) == 1:
            return primes[0]
        raise ArgumentError(f"--p is required; conductor primes are {primes}")
    if args.p not in primes:
        raise ArgumentError(f"--p {args.p} does not divide f; choices are {primes}")
    return args.p


def _monoid(args: argparse.Namespace) -> LocalMonoid:
    ctx = _order(args)
    return LocalMonoid(ctx, _prime(args, ctx))


# -- subcommands ---------------------------------------------------------------


def cmd_atoms(args: argparse.Namespace) -> Result:
    mon = _monoid(args)
    rows = []
    ok = True
    for m in range(1, args.max_m + 1):
        closed = mon.atom_count_closed_form(m)
        brute = len(mon.atoms_of_norm(m, invertible_only=True))
        rows.append([m, closed, brute, closed == brute])
        ok &= closed == brute
    return Result(
        {"d": mon.ctx.d, "f": mon.ctx.f, "p": mon.p, "splitting": mon.kind.value, "rows": rows},
        rows,
        ["m", "closed_form", "enumerated", "match"],
        ok,
    )


def cmd_star(args: argparse.Namespace) -> Result:
    mon = _monoid(args)
    u, v = mon.check(args.u), mon.check(args.v)
    prod, oracle = mon.mul(u, v), mon.lattice_mul(u, v)
    return Result(
        {"u": list(u), "v": list(v), "star": list(prod), "oracle": list(oracle), "equal": prod == oracle},
        [[str(u), str(v), str(prod), str(oracle), prod == oracle]],
        ["u", "v", "star", "oracle", "equal"],
        prod == oracle,
    )


def cmd_factor(args: argparse.Namespace) -> Result:
    mon = _monoid(args)
    fs = enumerate_factorizations(args.t, mon, args.invertible)
    lengths = length_set(fs)
    rows = [[len(z), " ".join(str(a) for a in z)] for z in fs]
    return Result(
        {
            "target": list(fs.target),
            "factorizations": [[list(a) for a in z] for z in fs],
            "lengths": lengths,
            "delta": sorted(delta_of(lengths)),
            "catenary": catenary_degree(fs),
        },
        rows,
        ["length", "atoms"],
    )


def cmd_elements(args: argparse.Namespace) -> Result:
    mon = _monoid(args)
    els = mon.elements(args.bound, args.invertible)
    rows = [[str(t), 2 * t.x + t.y, mon.is_invertible(t)] for t in els]
    return Result(
        {"elements": [list(t) for t in els], "count": len(els)},
        rows,
        ["triple", "norm_exponent", "invertible"],
    )


def cmd_classify(args: argparse.Namespace) -> Result:
    ctx = _order(args)
    cls = classify(ctx)
    payload: dict[str, Any] = {
        "d": ctx.d,
        "f": ctx.f,
        "case": cls.case.value,
        "half_factorial": cls.half_factorial,
        "delta": cls.delta,
        "ca_full": cls.ca_full,
        "ca_invertible": cls.ca_invertible,
        "catenary": cls.catenary,
    }
    ok = True
    if args.verify:
        primes = [args.p] if args.p is not None else None
        ver = verify_classification(ctx, args.bound, primes)
        payload["verification"] = ver
        ok = all(ver[k]["delta_match"] and ver[k]["ca_match"] for k in ("full", "invertible"))
    rows = [[k, _flat(v)] for k, v in sorted(payload.items())]
    return Result(payload, rows, ["key", "value"], ok)


def cmd_sweep(args: argparse.Namespace) -> Result:
    mon = _monoid(args)
    rep = window_sweep(mon, args.bound, args.invertible, args.k)
    d = rep.to_dict()
    return Result(d, [[k, _flat(v)] for k, v in sorted(d.items())], ["key", "value"])


def cmd_unions(args: argparse.Namespace) -> Result:
    mon = _monoid(args)
    rep = window_sweep(mon, args.bound, args.invertible, args.k)
    rows = []
    for k in args.k:
        upper = sorted(x for x in rep.unions[k] if x >= k)
        closed = unions_closed_form(mon, k)
        rho = rho_k_closed_form(mon.ctx, k)
        rows.append(
            [
                k,
                upper,
                closed if closed == ALL_FROM_2 else list(closed),
                rho if rho == ALL_FROM_2 else rho[0],
                rep.window_complete[k],
            ]
        )
    payload = {
        "d": mon.ctx.d,
        "f": mon.ctx.f,
        "p": mon.p,
        "bound": args.bound,
        "rows": rows,
    }
    return Result(payload, rows, ["k", "window_U_k_from_k", "closed_form", "rho_k", "window_complete"])


def cmd_min_delta(args: argparse.Namespace) -> Result:
    ctx = _order(args)
    pic, h_K = args.pic, args.h_K
    if args.pic_data:
        data = read_pic_data(args.pic_data).get((ctx.d, ctx.f))
        if data is not None:
            h_K = data.h_K
            pic = picard_number(ctx, data.h_K, data.unit_index)
    elif args.h_K is not None and args.unit_index is not None:
        pic = picard_number(ctx, args.h_K, args.unit_index)
    verdict = min_delta_check(ctx, pic, h_K, args.budget)
    payload = {"d": ctx.d, "f": ctx.f, "pic": pic, **verdict.to_dict()}
    rows = [["value", verdict.value]] + [["certificate", c] for c in verdict.certificates]
    rows += [["warning", w] for w in verdict.warnings]
    return Result(payload, rows, ["kind", "text"])


def cmd_verify_atom_census(args: argparse.Namespace) -> Result:
    mismatches, checked = atom_census(args.max_abs_d, args.max_f, args.max_modulus)
    rows = [list(m) for m in mismatches]
    return Result(
        {"checked": checked, "mismatches": rows},
        rows,
        ["d", "f", "p", "m", "closed_form", "enumerated"],
        not mismatches,
    )


CLASSIFICATION_CASES = ((5, 2, None, 10), (-2, 2, None, 10), (5, 9, 3, 10), (17, 4, 2, 12))


def cmd_verify_classification(args: argparse.Namespace) -> Result:
    rows = []
    ok = True
    out = []
    for d, f, p, bound in CLASSIFICATION_CASES:
        ver = verify_classification(make_order(d, f), bound, [p] if p else None)
        inv, full = ver["invertible"], ver["full"]
        match = all(x["delta_match"] and x["ca_match"] for x in (inv, full))
        ok &= match
        out.append({"d": d, "f": f, "p": p, "bound": bound, **ver, "match": match})
        rows.append([d, f, ver["case"], inv["delta"], full["ca"], inv["ca"], match])
    return Result({"cases": out}, rows, ["d", "f", "case", "delta", "ca_full", "ca_inv", "match"], ok)


def _flat(v: Any) -> str:
    if isinstance(v, (set, frozenset)):
        v = sorted(v)
    if isinstance(v, dict):
        return json.dumps(_jsonable(v), sort_keys=True)
    return str(v)


# -- plumbing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "human"), default="human")

    order = argparse.ArgumentParser(add_help=False)
    order.add_argument("--d", type=int, required=True, help="squarefree d of Q(sqrt(d))")
    order.add_argument("--f", type=int, required=True, help="conductor")
    order.add_argument("--p", type=int, default=None, help="conductor prime")

    window = argparse.ArgumentParser(add_help=False)
    window.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="max norm exponent")
    window.add_argument("--invertible", action="store_true", help="invertible ideals only")

    parser = argparse.ArgumentParser(prog="quadorder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, parents: list, **kw) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common, *parents], **kw)
        sp.set_defaults(func=fn)
        return sp

    sp = add("atoms", cmd_atoms, [order], help="atom census per norm exponent")
    sp.add_argument("--max-m", type=int, default=8)
    sp = add("star", cmd_star, [order], help="product of two triples, checked by the lattice oracle")
    sp.add_argument("--u", type=_triple, required=True)
    sp.add_argument("--v", type=_triple, required=True)
    sp = add("factor", cmd_factor, [order], help="all factorizations of one triple")
    sp.add_argument("--t", type=_triple, required=True)
    sp.add_argument("--invertible", action="store_true")
    add("elements", cmd_elements, [order, window], help="all triples in a norm window")
    sp = add("classify", cmd_classify, [order, window], help="predicted invariants of I(O), I*(O)")
    sp.add_argument("--verify", action="store_true", help="compare against window sweeps")
    sp = add("sweep", cmd_sweep, [order, window], help="Delta, Ca and U_k over a window")
    sp.add_argument("--k", type=_ks, default=[])
    sp = add("unions", cmd_unions, [order, window], help="U_k in a window vs closed forms")
    sp.add_argument("--k", type=_ks, default=list(range(2, 7)))
    sp = add("min-delta", cmd_min_delta, [order], help="decide min Delta(O)")
    sp.add_argument("--pic", type=int, default=None, help="|Pic(O)|")
    sp.add_argument("--h-K", dest="h_K", type=int, default=None, help="|Pic(O_K)|")
    sp.add_argument("--unit-index", type=int, default=None, help="(O_K^x : O^x)")
    sp.add_argument("--pic-data", default=None, help="file of `d f h_K unit_index` lines")
    sp.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    sp = add(
        "verify-atom-census",
        cmd_verify_atom_census,
        [],
        aliases=["verify-table1"],
        help="closed-form atom counts vs enumeration",
    )
    sp.add_argument("--max-abs-d", type=int, default=50)
    sp.add_argument("--max-f", type=int, default=48)
    sp.add_argument("--max-modulus", type=int, default=2**16)
    add(
        "verify-classification",
        cmd_verify_classification,
        [],
        aliases=["verify-thm11"],
        help="classification windows of the acceptance suite",
    )
    return parser


def render(result: Result, fmt: str, command: str) -> str:
    if fmt == "json":
        body = {"schema": SCHEMA, "command": command, "ok": result.ok, "result": result.payload}
        return json.dumps(_jsonable(body), sort_keys=True, indent=2)
    rows = result.rows or []
    if fmt == "tsv":
        lines = ["\t".join(result.header or [])] if result.header else []
        lines += ["\t".join(_flat(c) for c in row) for row in rows]
        return "\n".join(lines)
    widths = [len(h) for h in result.header or []]
    cells = [[_flat(c) for c in row] for row in rows]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)] if widths else [len(c) for c in row]
    lines = []
    if result.header:
        lines.append("  ".join(h.ljust(w) for h, w in zip(result.header, widths)))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    if not result.ok:
        lines.append("MISMATCH")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (ArgumentError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    print(render(result, args.format, args.command))
    return EXIT_OK if result.ok else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
