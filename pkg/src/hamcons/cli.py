"""Command-line front end.

Exit status: 0 verified/found, 1 property fails or nothing found, 2 Unknown
(budget exhausted), 64 usage error or malformed input.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from . import __version__
from .accept import (
    FOUND,
    NONE_EXISTS,
    PatternSet,
    cycle_acceptable,
    find_acceptable_cycle,
    find_acceptable_path,
    path_acceptable,
)
from .bipartite import (
    b_lower,
    complement,
    composite_H,
    find_acceptable_matching,
    matching_acceptable,
    parse_bipartite,
    pg_incidence_graph,
    simple_H,
    two_regular_counterexample,
    verify_expansion,
)
from .certificate import Certificate, sha256_text
from .core import FormatError, IntervalPattern, parse_family, parse_sequence
from .exact import (
    CYCLE,
    PATH,
    NotBlocking,
    bound_report,
    build_cover_instance,
    degree,
    minimality_check,
    solve_cover,
    universe_size,
    verify_blocking,
)
from .families import c4free_family, covering_family, pair_degree_family, partition_family, star_family

OK, FAIL, UNKNOWN_STATUS, USAGE = 0, 1, 2, 64
SEARCH_STATUS = {FOUND: OK, NONE_EXISTS: FAIL}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _pattern(text: str) -> IntervalPattern:
    try:
        return IntervalPattern.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _family(path: str):
    text = _read(path)
    try:
        return parse_family(text), text
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}")


def _graph(path: str):
    text = _read(path)
    try:
        return parse_bipartite(text), text
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}")


def _patterns(args) -> PatternSet:
    try:
        return PatternSet(args.pattern)
    except ValueError as exc:
        raise UsageError(str(exc))


def _sequence(args) -> tuple[int, ...]:
    text = args.seq if args.seq is not None else _read(args.seq_file)
    try:
        return parse_sequence(text)
    except FormatError as exc:
        raise UsageError(str(exc))


def _fmt_violation(v) -> str:
    return f"pattern={v.pattern} member={' '.join(map(str, v.member))} starts={' '.join(str(s + 1) for s in v.starts)}"


# --- verbs ---------------------------------------------------------------


def cmd_construct(args, cert: Certificate) -> int:
    kind = args.kind
    try:
        if kind == "star":
            fam = star_family(args.n, args.pattern[0])
        elif kind == "covering":
            fam = covering_family(args.n, args.pattern[0])
        elif kind == "partition":
            fam = partition_family(args.n, args.r)
        elif kind == "c4free":
            fam = c4free_family(args.n, args.q)
        else:
            fam = pair_degree_family(args.n)
    except (ValueError, TypeError, IndexError) as exc:
        raise UsageError(f"construct {kind}: {exc}")
    text = fam.to_text()
    cert.outcome = "constructed"
    cert.add("size", len(fam))
    if args.stats:
        lines = [f"# size={len(fam)}"]
        for t in range(fam.r):
            d, where = degree(fam, t)
            lines.append(f"# d{t}={d} at={' '.join(map(str, where)) or '-'}")
            cert.add(f"d{t}", d)
        text += "\n".join(lines) + "\n"
    cert.add("family_sha256", sha256_text(text))
    _emit_artifact(args, text)
    return OK


def _emit_artifact(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    args.quiet_records = args.output is None


def cmd_construct_bipartite(args, cert: Certificate) -> int:
    kind = args.kind
    try:
        if kind == "pg":
            g = pg_incidence_graph(args.d, args.q)
        elif kind == "composite":
            g = composite_H(args.q)
        elif kind == "simple":
            g = simple_H(args.q)
        else:
            pair = two_regular_counterexample(args.n)
            if pair is None:
                cert.outcome = "not_found"
                cert.add("n", args.n)
                return FAIL
            g, h = pair
    except ValueError as exc:
        raise UsageError(f"construct-bipartite {kind}: {exc}")
    text = g.to_text()
    cert.outcome = "constructed"
    cert.add("n", g.n)
    cert.add("edges", g.n_edges())
    cert.add("regular_degree", g.regular_degree())
    cert.add("max_degree", g.max_degree())
    if kind == "cycle2reg":
        if args.h_output:
            Path(args.h_output).write_text(h.to_text())
        else:
            text += "# H\n" + h.to_text()
        cert.add("h_sha256", sha256_text(h.to_text()))
    cert.add("graph_sha256", sha256_text(g.to_text()))
    _emit_artifact(args, text)
    return OK


def _check(args, cert: Certificate, checker) -> int:
    fam, text = _family(args.family)
    ps = _patterns(args)
    seq = _sequence(args)
    cert.inputs["family"] = sha256_text(text)
    cert.inputs["patterns"] = str(ps)
    cert.inputs["sequence"] = seq
    try:
        res = checker(seq, fam, ps)
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = "acceptable" if res else "violated"
    if res.violation is not None:
        v = res.violation
        cert.add("violation.pattern", str(v.pattern))
        cert.add("violation.member", v.member)
        cert.add("violation.starts", [s + 1 for s in v.starts])
        cert.add("violation.intervals", v.intervals)
    return OK if res else FAIL


def cmd_check_cycle(args, cert):
    return _check(args, cert, cycle_acceptable)


def cmd_check_path(args, cert):
    return _check(args, cert, path_acceptable)


def _search(args, cert: Certificate, finder) -> int:
    fam, text = _family(args.family)
    ps = _patterns(args)
    cert.inputs["family"] = sha256_text(text)
    cert.inputs["patterns"] = str(ps)
    cert.inputs["budget_nodes"] = args.budget_nodes
    try:
        out = finder(fam.n, fam, ps, budget_nodes=args.budget_nodes)
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = out.kind
    cert.add("witness", out.witness)
    cert.add("nodes", out.nodes)
    cert.add("subtrees", [f"{k}:{v}" for k, v in out.subtrees.items()])
    args.elapsed = out.elapsed
    return SEARCH_STATUS.get(out.kind, UNKNOWN_STATUS)


def cmd_search_cycle(args, cert):
    return _search(args, cert, find_acceptable_cycle)


def cmd_search_path(args, cert):
    return _search(args, cert, find_acceptable_path)


def cmd_search_matching(args, cert: Certificate) -> int:
    h, htext = _graph(args.h)
    if args.g:
        g, gtext = _graph(args.g)
    else:
        g, gtext = complement(h), "complement"
    cert.inputs["g"] = sha256_text(gtext)
    cert.inputs["h"] = sha256_text(htext)
    cert.inputs["budget_nodes"] = args.budget_nodes
    try:
        out = find_acceptable_matching(g, h, budget_nodes=args.budget_nodes, allow_overlap=args.allow_overlap)
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = out.kind
    if out.witness is not None:
        cert.add("witness", [b + 1 for b in out.witness])
        cert.add("witness_acceptable", bool(matching_acceptable(out.witness, h)))
    cert.add("nodes", out.nodes)
    args.elapsed = out.elapsed
    return SEARCH_STATUS.get(out.kind, UNKNOWN_STATUS)


def cmd_solve_exact(args, cert: Certificate) -> int:
    ps = _patterns(args)
    if args.n < ps.r:
        raise UsageError(f"n={args.n} is smaller than r={ps.r}")
    cert.inputs["n"] = args.n
    cert.inputs["patterns"] = str(ps)
    cert.inputs["variant"] = args.variant
    cert.inputs["budget_nodes"] = args.budget_nodes
    try:
        inst = build_cover_instance(args.n, ps, args.variant)
    except ValueError as exc:
        raise UsageError(str(exc))
    res = solve_cover(inst, args.budget_nodes, deterministic=args.deterministic)
    cert.outcome = "optimal" if res.kind == FOUND else "Unknown"
    cert.add("classes", len(inst.classes))
    cert.add("candidates", len(inst.candidates))
    cert.add("size", res.size)
    cert.add("lower", res.lower)
    cert.add("upper", res.upper)
    cert.add("nodes", res.nodes)
    if res.family is not None:
        cert.add("family", res.family.members)
    args.elapsed = res.elapsed
    return OK if res.kind == FOUND else UNKNOWN_STATUS


def cmd_verify(args, cert: Certificate) -> int:
    fam, text = _family(args.family)
    ps = _patterns(args)
    cert.inputs["family"] = sha256_text(text)
    cert.inputs["patterns"] = str(ps)
    cert.inputs["variant"] = args.variant
    cert.inputs["mode"] = args.mode
    try:
        res = verify_blocking(fam, ps, args.variant, mode=args.mode, budget_nodes=args.budget_nodes,
                              multiplicity=args.mode == "exhaustive")
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = {True: "blocked", False: "not_blocked", None: "Unknown"}[res.blocked]
    cert.add("classes", res.classes)
    cert.add("counterexample", res.counterexample)
    cert.add("nodes", res.nodes)
    if res.multiplicity:
        cert.add("multiplicity", [f"{k}:{v}" for k, v in sorted(res.multiplicity.items())])
    return {True: OK, False: FAIL, None: UNKNOWN_STATUS}[res.blocked]


def cmd_minimal(args, cert: Certificate) -> int:
    fam, text = _family(args.family)
    ps = _patterns(args)
    cert.inputs["family"] = sha256_text(text)
    cert.inputs["patterns"] = str(ps)
    cert.inputs["variant"] = args.variant
    try:
        minimal, removable = minimality_check(fam, ps, args.variant)
    except NotBlocking as exc:
        cert.outcome = "not_blocking"
        cert.add("detail", str(exc))
        return FAIL
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = "minimal" if minimal else "not_minimal"
    cert.add("removable", removable)
    return OK if minimal else FAIL


def cmd_bounds(args, cert: Certificate) -> int:
    x = args.pattern[0]
    if args.n < x.r:
        raise UsageError(f"n={args.n} is smaller than r={x.r}")
    rep = bound_report(x, args.n, args.variant, exact=args.exact)
    cert.inputs["n"] = args.n
    cert.inputs["pattern"] = str(x)
    cert.inputs["variant"] = args.variant
    cert.add("lb", rep.lower)
    cert.add("ub", rep.upper)
    cert.add("lb_avg", rep.lb_avg)
    cert.add("hf", rep.hf)
    cert.add("hf_source", rep.hf_source)
    cert.add("ub_star", rep.ub_star)
    cert.add("lb_avg_const", rep.lb_avg_const)
    if rep.lb_improved is not None:
        cert.add("lb_improved_const", f"{rep.lb_improved.constant} n^{rep.lb_improved.exponent} (asymptotic)")
    if rep.ub_covering is not None:
        cert.add("ub_covering_const", f"{rep.ub_covering.constant} n^{rep.ub_covering.exponent} (asymptotic)")
    for key, val in rep.specialized.items():
        if hasattr(val, "constant"):
            val = f"{val.constant} n^{val.exponent} (asymptotic)"
        elif isinstance(val, float):
            val = f"{val:.6f} (asymptotic)"
        cert.add(key, val)
    if rep.exact is not None:
        cert.add("exact", rep.exact)
        cert.add("m1_bracket", f"{rep.m1_bracket[0]}..{rep.m1_bracket[1]}")
        cert.outcome = "sandwich_ok" if rep.sandwich_ok else "sandwich_failed"
        return OK if rep.sandwich_ok else FAIL
    cert.outcome = "evaluated"
    return OK


def cmd_bounds_b(args, cert: Certificate) -> int:
    res = b_lower(args.n)
    cert.inputs["n"] = args.n
    cert.outcome = "evaluated"
    cert.add("b_lower", f"{res.value:.12g}")
    cert.add("s_max", res.s_max)
    return OK


def cmd_degree(args, cert: Certificate) -> int:
    fam, text = _family(args.family)
    cert.inputs["family"] = sha256_text(text)
    cert.inputs["t"] = args.t
    try:
        d, where = degree(fam, args.t)
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = "evaluated"
    cert.add("d", d)
    cert.add("attained_by", where)
    if args.max is not None:
        cert.outcome = "within" if d <= args.max else "exceeds"
        return OK if d <= args.max else FAIL
    return OK


def cmd_verify_expansion(args, cert: Certificate) -> int:
    if args.graph:
        g, text = _graph(args.graph)
        cert.inputs["graph"] = sha256_text(text)
    else:
        try:
            g = pg_incidence_graph(args.d, args.q)
        except ValueError as exc:
            raise UsageError(str(exc))
        cert.inputs["q"] = args.q
    cert.inputs["d"] = args.d
    try:
        res = verify_expansion(g, args.d)
    except ValueError as exc:
        raise UsageError(str(exc))
    cert.outcome = "holds" if res.holds else "violated"
    cert.add("subsets", res.checked)
    cert.add("violation", None if res.violation is None else [i + 1 for i in res.violation])
    cert.add("worst_slack", f"{res.worst_slack:.6f}")
    return OK if res.holds else FAIL


def parse_instances(text: str):
    rows = []
    for lineno, ln in enumerate(text.splitlines(), 1):
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise FormatError(lineno, f"expected 'pattern n [variant]', got {ln!r}")
        try:
            x = IntervalPattern.parse(parts[0])
            n = int(parts[1])
        except ValueError as exc:
            raise FormatError(lineno, str(exc)) from None
        variant = parts[2] if len(parts) == 3 else CYCLE
        if variant not in (CYCLE, PATH):
            raise FormatError(lineno, f"variant must be cycle or path, got {variant!r}")
        if n < x.r:
            raise FormatError(lineno, f"n={n} is smaller than r={x.r}")
        if n < 3:
            raise FormatError(lineno, "need n >= 3")
        rows.append((x, n, variant))
    return rows


def report_rows(rows, budget_nodes: int | None, solve_limit: int = 2600):
    """Bounds, exact value (when the universe is small enough) and construction sizes per row."""
    table = []
    for x, n, variant in rows:
        exact = None
        if universe_size(n, variant) <= solve_limit:
            res = solve_cover(build_cover_instance(n, x, variant), budget_nodes)
            exact = res.size
        rep = bound_report(x, n, variant, exact=exact)
        sizes = {"star": len(star_family(n, x))}
        if x.t < x.k:
            sizes["covering"] = len(covering_family(n, x))
        if x.t == 1 and x.lengths[0] == 2 and x.r >= 2:
            sizes["partition"] = len(partition_family(n, x.r))
        table.append((x, n, variant, rep, sizes))
    return table


def cmd_report(args, cert: Certificate) -> int:
    text = _read(args.instances)
    try:
        rows = parse_instances(text)
    except FormatError as exc:
        raise UsageError(f"{args.instances}: {exc}")
    cert.inputs["instances"] = sha256_text(text)
    table = report_rows(rows, args.budget_nodes)
    failed = False
    header = "pattern n variant lb_avg lower exact upper constructions sandwich"
    lines = [header]
    for x, n, variant, rep, sizes in table:
        ok = rep.sandwich_ok
        failed |= ok is False
        cons = ",".join(f"{k}:{v}" for k, v in sizes.items())
        status = {True: "ok", False: "FAIL", None: "-"}[ok]
        exact = "-" if rep.exact is None else rep.exact
        lines.append(f"{x} {n} {variant} {rep.lb_avg} {rep.lower} {exact} {rep.upper} {cons} {status}")
    for ln in lines:
        cert.add("row", ln)
    cert.outcome = "sandwich_failed" if failed else "ok"
    return FAIL if failed else OK


# --- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hamcons", description=__doc__.splitlines()[0] if __doc__ else None)
    p.add_argument("--version", action="version", version=f"hamcons {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=None, help="node budget for searches")
    common.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=True)
    common.add_argument("--threads", type=int, default=1,
                        help="worker count (searches run sequentially in deterministic mode)")
    common.add_argument("--cert", help="also write the certificate to this file")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    def patterns(sp, multiple=True):
        sp.add_argument("--pattern", type=_pattern, action="append", required=True,
                        help="interval lengths, e.g. 2,2" + (" (repeatable)" if multiple else ""))

    def seq_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--seq", help="vertices separated by spaces")
        g.add_argument("--seq-file")

    sp = verb("construct", cmd_construct, help="emit a blocking family")
    sp.add_argument("kind", choices=["star", "covering", "partition", "c4free", "pairdeg"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pattern", type=_pattern, action="append")
    sp.add_argument("--r", type=int)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--stats", action="store_true")
    sp.add_argument("-o", "--output")

    sp = verb("construct-bipartite", cmd_construct_bipartite, help="emit a bipartite graph")
    sp.add_argument("kind", choices=["pg", "composite", "simple", "cycle2reg"])
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int, default=7)
    sp.add_argument("-o", "--output")
    sp.add_argument("--h-output")

    for name, fn in (("check-cycle", cmd_check_cycle), ("check-path", cmd_check_path)):
        sp = verb(name, fn)
        sp.add_argument("family")
        patterns(sp)
        seq_args(sp)

    for name, fn in (("search-cycle", cmd_search_cycle), ("search-path", cmd_search_path)):
        sp = verb(name, fn)
        sp.add_argument("family")
        patterns(sp)

    sp = verb("search-matching", cmd_search_matching)
    sp.add_argument("--h", required=True, help="constraint graph H")
    sp.add_argument("--g", help="host graph G (default: complement of H)")
    sp.add_argument("--allow-overlap", action="store_true")

    sp = verb("solve-exact", cmd_solve_exact)
    sp.add_argument("--n", type=int, required=True)
    patterns(sp)
    sp.add_argument("--variant", choices=[CYCLE, PATH], default=CYCLE)

    sp = verb("verify", cmd_verify)
    sp.add_argument("family")
    patterns(sp)
    sp.add_argument("--variant", choices=[CYCLE, PATH], default=CYCLE)
    sp.add_argument("--mode", choices=["exhaustive", "search"], default="exhaustive")

    sp = verb("minimal", cmd_minimal)
    sp.add_argument("family")
    patterns(sp)
    sp.add_argument("--variant", choices=[CYCLE, PATH], default=CYCLE)

    sp = verb("bounds", cmd_bounds)
    sp.add_argument("--n", type=int, required=True)
    patterns(sp, multiple=False)
    sp.add_argument("--variant", choices=[CYCLE, PATH], default=CYCLE)
    sp.add_argument("--exact", type=int)

    sp = verb("bounds-b", cmd_bounds_b)
    sp.add_argument("--n", type=int, required=True)

    sp = verb("degree", cmd_degree)
    sp.add_argument("family")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--max", type=int, help="fail when the degree exceeds this value")

    sp = verb("verify-expansion", cmd_verify_expansion)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--graph")

    sp = verb("report", cmd_report)
    sp.add_argument("instances")
    return p


def _recorded_args(argv) -> list[str]:
    """The command line minus ``--cert FILE``, which does not affect any result."""
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--cert":
            skip = True
        elif not a.startswith("--cert="):
            out.append(a)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else 0
    if getattr(args, "pattern", None) is None and args.verb == "construct" and args.kind in ("star", "covering"):
        print(f"hamcons: construct {args.kind} needs --pattern", file=sys.stderr)
        return USAGE
    if args.verb == "construct" and args.kind == "partition" and args.r is None:
        print("hamcons: construct partition needs --r", file=sys.stderr)
        return USAGE
    cert = Certificate(" ".join(["hamcons"] + _recorded_args(argv if argv is not None else sys.argv[1:])))
    args.elapsed = None
    args.quiet_records = False
    t0 = time.monotonic()
    try:
        status = args.fn(args, cert)
    except UsageError as exc:
        print(f"hamcons: {exc}", file=sys.stderr)
        return USAGE
    elapsed = args.elapsed if args.elapsed is not None else time.monotonic() - t0
    text = cert.render()
    if not args.quiet_records:
        sys.stdout.write(text)
    if args.cert:
        Path(args.cert).write_text(text)
    print(f"elapsed_s={elapsed:.3f} status={status}", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
