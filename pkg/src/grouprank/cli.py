"""Command-line interface: verify, search, bounds, oracle, dihedral, classes.

Exit codes: 0 when every checked claim passes, 1 when a claim fails or a
search comes up empty, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from .bounds import TableFormatError, load_table, propagate_bounds
from .catalog import SHIPPED_DIHEDRAL_ORDERS, group_by_name
from .genset import (
    CertificateFormatError,
    load_certificates,
    verify_certificate,
)
from .oracle import OracleCapError, rank_report
from .permcore import EnumerationCapError, PermGroup, parse_cycles
from .search import SearchConfig, dihedral_orders, scan

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2


def commify(n: int) -> str:
    """Thousands separators, a comma every three digits."""
    return f"{n:,}"


def format_elapsed(ms: int) -> str:
    """Fixed-field d/h/m/s/ms rendering used by progress lines."""
    d, ms = divmod(int(ms), 24 * 60 * 60 * 1000)
    h, ms = divmod(ms, 60 * 60 * 1000)
    m, ms = divmod(ms, 60 * 1000)
    s, ms = divmod(ms, 1000)
    return f"{d:>2}d{h:>1}h{m:>1}m{s:>1}s{ms:>3}ms"


def _machine_block(fields: dict[str, str]):
    for key, value in fields.items():
        print(f"{key}={value}")


def _resolve_group(args) -> PermGroup:
    if getattr(args, "gens", None):
        degree = args.degree
        if not degree:
            raise ValueError("--gens requires --degree")
        gens = [parse_cycles(s, degree) for s in args.gens]
        return PermGroup(gens, degree=degree, name=args.group)
    return group_by_name(args.group)


def cmd_verify(args) -> int:
    try:
        certs = load_certificates(args.path)
    except FileNotFoundError:
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    all_ok = True
    for idx, cert in enumerate(certs, start=1):
        report = verify_certificate(cert)
        label = f" class {cert.class_label}" if cert.class_label else ""
        print(f"certificate {idx}: {cert.group_name} (degree {cert.degree}),"
              f" claim {cert.claim},{label} {len(cert.elements)} elements")
        if report.deleted_orders:
            orders = ", ".join(commify(o) for o in report.deleted_orders)
            print(f"  deleted subgroup orders: {orders}")
        checks = [("parse", report.parse_ok),
                  ("membership", report.membership_ok),
                  ("irredundant", report.irredundant)]
        if cert.claim == "irredundant-generating":
            checks.append(("generating", report.generating))
        if cert.class_label is not None:
            checks.append((f"class {cert.class_label}",
                           report.class_consistent))
        for name, ok in checks:
            print(f"  {name}: {'PASS' if ok else 'FAIL'}")
        for msg in report.messages:
            print(f"  note: {msg}")
        print(f"  overall: {'PASS' if report.passed else 'FAIL'}")
        if args.machine:
            _machine_block({
                "certificate": str(idx),
                "group": cert.group_name,
                "irredundant": str(report.irredundant),
                "generating": str(report.generating),
                "class_consistent": str(report.class_consistent),
                "passed": str(report.passed),
            })
        all_ok = all_ok and report.passed
    return EXIT_OK if all_ok else EXIT_CLAIM_FAILED


def cmd_search(args) -> int:
    try:
        group = _resolve_group(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.size < 2:
        print("error: --size must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    tails = None
    if args.tails:
        try:
            tails = frozenset(int(t) for t in args.tails.split(","))
        except ValueError:
            print(f"error: bad --tails value {args.tails!r}", file=sys.stderr)
            return EXIT_USAGE
        known = SHIPPED_DIHEDRAL_ORDERS.get(args.group)
        if known is not None and not tails <= known:
            print(f"error: tail orders {sorted(tails - known)} are not "
                  f"dihedral orders of {args.group} (allowed: {sorted(known)})",
                  file=sys.stderr)
            return EXIT_USAGE
    cfg = SearchConfig(
        target_size=args.size,
        pool_order=args.pool_order,
        pool_class=getattr(args, "pool_class", None),
        tail_orders=tails,
        seed=args.seed,
        max_combinations=args.limit,
        max_seconds=args.max_seconds,
        max_certificates=args.max_certs,
        workers=args.workers,
        progress_every=args.progress_every,
    )
    def progress(visited, total, elapsed):
        line = (f"{commify(visited):>14}/{commify(total)}  {args.group}  "
                f"{format_elapsed(int(elapsed * 1000))}")
        print(line, flush=True)

    try:
        result = scan(group, cfg, group_name=args.group, progress=progress)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out and result.certificates:
        with open(args.out, "a", encoding="utf-8") as fh:
            for cert in result.certificates:
                fh.write(cert.to_text())
        print(f"wrote {len(result.certificates)} certificate(s) to {args.out}")
    print(f"status: {result.status}")
    print(f"combinations visited: {commify(result.combinations_visited)}"
          f" of {commify(result.combinations_total)}")
    print(f"pool size: {result.pool_size}; tail pool: {result.tail_pool_size}")
    print(f"certificates found: {len(result.certificates)}")
    print(f"elapsed: {format_elapsed(int(result.elapsed_seconds * 1000))}")
    for cert in result.certificates:
        for elt in cert.elements:
            print(f"  elt {elt}")
        print()
    if args.machine:
        _machine_block({
            "status": result.status,
            "visited": str(result.combinations_visited),
            "total": str(result.combinations_total),
            "certificates": str(len(result.certificates)),
        })
    return EXIT_OK if result.certificates else EXIT_CLAIM_FAILED


def cmd_bounds(args) -> int:
    try:
        table = load_table(args.path)
    except FileNotFoundError:
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return EXIT_USAGE
    except TableFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ledger = propagate_bounds(table, m_lower=args.m_lower)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"bounds for {ledger.group_name} "
          f"(order {commify(ledger.group_order)})")
    for line in ledger.trace:
        print(f"  {line}")
    if args.machine:
        _machine_block(ledger.machine_fields())
    else:
        fields = ledger.machine_fields()
        print("  " + " ".join(f"{k}={v}" for k, v in fields.items()
                              if k != "group"))
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        group = _resolve_group(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = rank_report(group, args.group, with_classes=args.classes,
                             cap=args.cap)
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"group {args.group}: order {commify(report.order)}")
    print(f"  m = {report.m}   witness: "
          + " ".join(str(p) for p in report.m_witness))
    print(f"  i = {report.i}   witness: "
          + " ".join(str(p) for p in report.i_witness))
    sizes = ", ".join(str(s) for s in sorted(report.generating_sizes))
    print(f"  irredundant generating sizes: {sizes}")
    if report.class_ranks:
        for label, (mc, ic) in sorted(report.class_ranks.items()):
            print(f"  class {label}: m = {mc}, i = {ic}")
    print(f"  elapsed: {format_elapsed(int(report.elapsed * 1000))}")
    if args.machine:
        _machine_block(report.machine_fields())
    return EXIT_OK


def cmd_dihedral(args) -> int:
    try:
        group = _resolve_group(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ks = dihedral_orders(group)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for k in sorted(ks):
        print(f"yes: {2 * k}")
    print("{" + ",".join(str(k) for k in sorted(ks)) + "}")
    if args.machine:
        _machine_block({"group": args.group,
                        "dihedral_orders":
                        ",".join(str(k) for k in sorted(ks))})
    return EXIT_OK


def cmd_classes(args) -> int:
    try:
        group = _resolve_group(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        classes = group.conjugacy_classes()
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"group {args.group}: order {commify(group.order())}, "
          f"{len(classes)} conjugacy classes")
    totals: dict[int, int] = {}
    for cls in classes:
        totals[cls.element_order] = totals.get(cls.element_order, 0) + cls.size
        print(f"  class {cls.label}: order {cls.element_order}, "
              f"size {commify(cls.size)}, rep {cls.representative}")
    for order in sorted(totals):
        print(f"order {order} total {commify(totals[order])}")
    if args.machine:
        fields = {"group": args.group, "classes": str(len(classes))}
        for cls in classes:
            fields[f"size[{cls.label}]"] = str(cls.size)
        _machine_block(fields)
    return EXIT_OK


def _add_group_arg(sub):
    sub.add_argument("group", help="catalog name (M11, M12), a construct "
                     "spec like symmetric(4), or a name for --gens")
    sub.add_argument("--gens", action="append",
                     help="explicit generator in cycle notation (repeatable)")
    sub.add_argument("--degree", type=int, help="degree for --gens")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grouprank",
        description="irredundant generating sets: verify certificates, "
                    "search for new ones, and propagate subgroup bounds")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true",
                        help="append machine-readable key=value lines")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify", help="verify a certificate file",
                        parents=[common])
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("search", help="scan for irredundant generating sets",
                        parents=[common])
    _add_group_arg(p)
    p.add_argument("--size", type=int, required=True,
                   help="target sequence length")
    p.add_argument("--pool-order", type=int, default=2,
                   help="element order of the combination pool (default 2)")
    p.add_argument("--class", dest="pool_class",
                   help="conjugacy class label for the combination pool")
    p.add_argument("--tails",
                   help="comma-separated tail orders (default: all dihedral "
                        "orders)")
    p.add_argument("--seed", type=int, help="shuffle the pool with this seed")
    p.add_argument("--limit", type=int, help="max combinations to visit")
    p.add_argument("--max-seconds", type=float, help="wall-clock budget")
    p.add_argument("--max-certs", type=int, default=1,
                   help="stop after this many certificates (0 = unlimited)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--progress-every", type=int, default=5000)
    p.add_argument("--out", help="append found certificates to this file")
    p.set_defaults(func=cmd_search)

    p = subs.add_parser("bounds", parents=[common], help="propagate bounds from a table file")
    p.add_argument("path")
    p.add_argument("--m-lower", type=int, dest="m_lower",
                   help="established lower bound on m, e.g. from a "
                        "verified certificate")
    p.set_defaults(func=cmd_bounds)

    p = subs.add_parser("oracle", parents=[common], help="exact small-group ranks by brute force")
    _add_group_arg(p)
    p.add_argument("--classes", action="store_true",
                   help="also compute per-conjugacy-class ranks")
    p.add_argument("--cap", type=int, default=400,
                   help="order cap for the brute-force search")
    p.set_defaults(func=cmd_oracle)

    p = subs.add_parser("dihedral", parents=[common],
                        help="orders k with a dihedral subgroup of order 2k")
    _add_group_arg(p)
    p.set_defaults(func=cmd_dihedral)

    p = subs.add_parser("classes", parents=[common], help="conjugacy class table")
    _add_group_arg(p)
    p.set_defaults(func=cmd_classes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
