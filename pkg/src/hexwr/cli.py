"""Command line interface: counting, ranking, tree export, oracle checks."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .enumeration import count_N, index_set_member, list_representations, wr_survey
from .errors import InvariantViolation
from .lattice import ClassParams
from .optimizer import max_min, rank_by_snr
from .triples import generate_tree

# the eleven classical small indices replayed by `maxmin --table1`
TABLE1_INDICES = (8, 15, 21, 24, 32, 35, 40, 45, 55, 60, 65)


class _UsageError(Exception):
    """Bad flag combination detected after argparse ran."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a positive integer")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"{text!r} is not positive")
    return value


def _print_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


def _print_csv(header: list[str], rows: list[list[str]]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _witness_name(params: ClassParams, k: int) -> str:
    """Human name of the scaled minimal lattice, e.g. 2*sqrt(21)*Gamma_theta(1,1)."""
    f = math.isqrt(k)
    while k % (f * f):
        f -= 1
    squarefree = k // (f * f)
    parts = []
    if f > 1:
        parts.append(str(f))
    if squarefree > 1:
        parts.append(f"sqrt({squarefree})")
    parts.append(f"Gamma_theta({params.m},{params.n})")
    return "*".join(parts)


def cmd_count(args) -> int:
    reps = list_representations(args.J)
    header = ["u", "j", "d", "m", "n", "k", "minimum"]
    rows = [
        [str(v) for v in (r.u, r.j, r.d, r.params.m, r.params.n, r.k, r.minimum)]
        for r in reps
    ]
    if args.format == "json":
        _print_json(
            {
                "J": args.J,
                "count": len(reps),
                "representations": [
                    dict(r.to_json_obj(), k=r.k, minimum=r.minimum) for r in reps
                ],
            }
        )
    elif args.format == "csv":
        _print_csv(header, rows)
    else:
        print(f"N({args.J}) = {len(reps)}")
        if rows:
            _print_table(header, rows)
    return 0


def _maxmin_row(J: int):
    res = max_min(J)
    names = "; ".join(_witness_name(p, k) for p, k in res.witnesses)
    return res, names


def cmd_maxmin(args) -> int:
    if args.table1 == (args.J is not None):
        raise _UsageError("give exactly one of J or --table1")
    if args.table1:
        header = ["J", "max_minimum", "lattice"]
        rows = []
        json_rows = []
        for J in TABLE1_INDICES:
            res, names = _maxmin_row(J)
            rows.append([str(J), str(res.best_minimum), names])
            json_rows.append({"J": J, "lattice": names, "max_minimum": res.best_minimum})
        if args.format == "json":
            _print_json({"rows": json_rows})
        elif args.format == "csv":
            _print_csv(header, rows)
        else:
            _print_table(header, rows)
        return 0
    res, names = _maxmin_row(args.J)
    if args.format == "json":
        _print_json(
            {
                "J": args.J,
                "exists": res.exists,
                "max_minimum": res.best_minimum,
                "witnesses": [
                    {"k": k, "lattice": _witness_name(p, k), "m": p.m, "n": p.n}
                    for p, k in res.witnesses
                ],
            }
        )
    elif args.format == "csv":
        _print_csv(
            ["J", "max_minimum", "lattice"],
            [[str(args.J), str(res.best_minimum) if res.exists else "", names]],
        )
    elif res.exists:
        print(f"max minimum of index-{args.J} well-rounded sublattices: {res.best_minimum}")
        print(f"attained by {names}")
    else:
        print(f"no well-rounded sublattice of index {args.J}")
    return 0


def cmd_snr(args) -> int:
    ranking = rank_by_snr(args.J, rel_tol=args.tol)
    header = ["rank", "m", "n", "minimum", "snr_db", "error_bound"]
    rows = [
        [str(i + 1), str(p.m), str(p.n), str(mini), f"{s.db:.9f}", f"{s.abs_error_bound:.2e}"]
        for i, (p, mini, s) in enumerate(ranking)
    ]
    if args.format == "json":
        _print_json(
            {
                "J": args.J,
                "ranking": [
                    {
                        "abs_error_bound": s.abs_error_bound,
                        "m": p.m,
                        "minimum": mini,
                        "n": p.n,
                        "snr_db": s.db,
                    }
                    for p, mini, s in ranking
                ],
            }
        )
    elif args.format == "csv":
        _print_csv(header, rows)
    elif ranking:
        _print_table(header, rows)
    else:
        print(f"no well-rounded sublattice of index {args.J}")
    return 0


def cmd_tree(args) -> int:
    if args.cmax is None and args.depth is None:
        raise _UsageError("give at least one of --cmax or --depth")
    tree = generate_tree(c_max=args.cmax, max_depth=args.depth)
    ids = tree.node_ids()
    edge_rows = [
        [f"{e[0].upper.a},{e[0].upper.b},{e[0].upper.c}",
         e[1],
         f"{e[2].upper.a},{e[2].upper.b},{e[2].upper.c}"]
        for e in tree.edges
    ]
    if args.format == "dot":
        print(tree.to_dot())
    elif args.format == "json":
        _print_json(tree.to_json_obj())
    elif args.format == "csv":
        _print_csv(["from", "label", "to"], edge_rows)
    else:
        print(f"nodes: {len(ids)}")
        print(f"edges: {len(tree.edges)}")
        for src, label, dst in edge_rows:
            print(f"{src} -{label}-> {dst}")
    return 0


def _oracle_check(J: int) -> tuple[int, int, int, int | None, int | None]:
    survey = wr_survey(J)
    best = max_min(J).best_minimum
    return (J, len(survey), count_N(J), survey[0].minimum if survey else None, best)


def _oracle_workers() -> int:
    raw = os.environ.get("HEXWR_THREADS", "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            raise _UsageError(f"HEXWR_THREADS={raw!r} is not an integer")
    return max(1, os.cpu_count() or 1)


def cmd_oracle(args) -> int:
    jmax = args.jmax
    workers = min(_oracle_workers(), jmax)
    indices = range(1, jmax + 1)
    if workers == 1:
        results = [_oracle_check(J) for J in indices]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, jmax // (4 * workers))
            results = list(pool.map(_oracle_check, indices, chunksize=chunk))
    results.sort(key=lambda r: r[0])
    bad = [r for r in results if r[1] != r[2] or r[3] != r[4]]
    if args.format == "json":
        _print_json(
            {
                "agree": not bad,
                "checked": len(results),
                "disagreements": [
                    {
                        "J": J,
                        "enumerated_classes": ec,
                        "enumerated_max": em,
                        "parameterized_classes": pc,
                        "parameterized_max": pm,
                    }
                    for J, ec, pc, em, pm in bad
                ],
                "j_max": jmax,
            }
        )
    elif args.format == "csv":
        _print_csv(
            ["J", "enumerated_classes", "parameterized_classes",
             "enumerated_max", "parameterized_max"],
            [[str(J), str(ec), str(pc), "" if em is None else str(em),
              "" if pm is None else str(pm)] for J, ec, pc, em, pm in results],
        )
    elif bad:
        for J, ec, pc, em, pm in bad:
            print(f"J={J}: classes {ec} vs {pc}, max minimum {em} vs {pm}")
        print(f"DISAGREE: {len(bad)}/{len(results)} indices differ")
    else:
        print(f"OK: {len(results)}/{len(results)} indices agree")
    return 2 if bad else 0


def cmd_classes(args) -> int:
    found = []
    for n in range(1, math.isqrt(args.cmax) + 1):
        for m in range(n, 2 * n + 1):
            try:
                params = ClassParams(m, n)
            except ValueError:
                continue
            if params.class_minimum <= args.cmax:
                found.append(params)
    found.sort(key=lambda p: (p.class_minimum, p.m))
    header = ["m", "n", "class_minimum", "minimal_index", "cos"]
    rows = [
        [str(p.m), str(p.n), str(p.class_minimum), str(p.minimal_index),
         f"{p.cosine.numerator}/{p.cosine.denominator}"]
        for p in found
    ]
    if args.format == "json":
        _print_json(
            {
                "c_max": args.cmax,
                "classes": [
                    {
                        "class_minimum": p.class_minimum,
                        "cos_den": p.cosine.denominator,
                        "cos_num": p.cosine.numerator,
                        "m": p.m,
                        "minimal_index": p.minimal_index,
                        "n": p.n,
                    }
                    for p in found
                ],
                "count": len(found),
            }
        )
    elif args.format == "csv":
        _print_csv(header, rows)
    else:
        print(f"similarity classes with minimum <= {args.cmax}: {len(found)}")
        _print_table(header, rows)
    return 0


def cmd_index_set(args) -> int:
    members = [J for J in range(1, args.jmax + 1) if index_set_member(J)]
    if args.format == "json":
        _print_json({"count": len(members), "j_max": args.jmax, "members": members})
    elif args.format == "csv":
        _print_csv(["J"], [[str(J)] for J in members])
    else:
        print(f"realizable indices up to {args.jmax}: {len(members)}")
        print(" ".join(str(J) for J in members))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="hexwr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, formats=("table", "csv", "json")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=formats, default="table")
        p.set_defaults(func=func)
        return p

    p = add("count", cmd_count, "count index-J similarity classes")
    p.add_argument("J", type=_positive_int)

    p = add("maxmin", cmd_maxmin, "maximal minimum at fixed index")
    p.add_argument("J", type=_positive_int, nargs="?")
    p.add_argument("--table1", action="store_true",
                   help="replay the eleven classical small-index rows")

    p = add("snr", cmd_snr, "rank index-J classes by signal-to-noise ratio")
    p.add_argument("J", type=_positive_int)
    p.add_argument("--tol", type=_positive_float, default=1e-9,
                   help="relative tolerance for the zeta values")

    p = add("tree", cmd_tree, "generate the pair tree",
            formats=("table", "csv", "json", "dot"))
    p.add_argument("--cmax", type=_positive_int)
    p.add_argument("--depth", type=_positive_int)

    p = add("oracle", cmd_oracle, "cross-validate against exhaustive enumeration")
    p.add_argument("jmax", type=_positive_int)

    p = add("classes", cmd_classes, "list admissible classes by minimum")
    p.add_argument("--cmax", type=_positive_int, required=True)

    p = add("index-set", cmd_index_set, "list realizable indices")
    p.add_argument("--jmax", type=_positive_int, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
