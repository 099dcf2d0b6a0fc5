"""Command line front end.

Exit codes: 0 commutes / valid / ok, 1 error, 2 does not commute (or a
quasicycle was found), 3 resources exhausted, 4 scan truncated.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import imc, suite
from .coherence import (
    CoherenceError, ResourceLimit, critical_spans, decide_commutes, maclane_report,
    verdict_dot,
)
from .graph import (
    Limits, default_seeds, detect_quasicycle, explore, graph_json, hom_paths, to_dot,
)
from .planar import PlanarError, enumerate_diamonds, regional_diamonds
from .rewriting import format_step, parse_morphism, validate_structure
from .structfile import resolve
from .terms import TermError, format_term, parse_term

EXIT_OK, EXIT_ERROR, EXIT_NOT_EQUAL, EXIT_EXHAUSTED, EXIT_TRUNCATED = 0, 1, 2, 3, 4
_VERDICT_EXIT = {"equal": EXIT_OK, "not-equal": EXIT_NOT_EQUAL, "exhausted": EXIT_EXHAUSTED}


class Output:
    """Collects the report and writes it once, to stdout or ``--out``."""

    def __init__(self, args):
        self.fmt = args.format
        self.out = args.out
        self.lines: list = []
        self.data = None
        self.dot = None

    def text(self, line: str = ""):
        self.lines.append(line)

    def flush(self):
        if self.fmt == "json":
            body = json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"
        elif self.fmt == "dot":
            if self.dot is None:
                raise ValueError("this command has no DOT output")
            body = self.dot
        else:
            body = "\n".join(self.lines) + "\n"
        if self.out:
            Path(self.out).write_text(body, encoding="utf-8")
        else:
            sys.stdout.write(body)


def _limits(args) -> Limits:
    return Limits(max_vertices=args.max_vertices, max_depth=args.max_depth,
                  max_path_length=args.max_path_length, unit_budget=args.unit_budget,
                  recursion_depth=args.recursion_depth)


def _figures(args) -> Path | None:
    if not args.figures:
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _path_text(p, sig) -> str:
    if not p:
        return "(identity)"
    return " ; ".join(f"{format_step(e)}" for e in p) + f"   => {format_term(p[-1].target, sig)}"


# ---------------------------------------------------------------------------
# sub-commands


def cmd_check(args, out: Output) -> int:
    s = resolve(args.file)
    rep = validate_structure(s)
    out.data = {"structure": s.name, "valid": rep.ok, "issues": [str(i) for i in rep.issues],
                "rules": len(s.rules), "axioms": len(s.axioms)}
    if rep.ok:
        out.text(f"{s.name}: ok ({len(s.rules)} rules, {len(s.axioms)} axioms)")
        return EXIT_OK
    out.text(f"{s.name}: invalid")
    for issue in rep.issues:
        out.text(f"  {issue}")
    return EXIT_ERROR


def cmd_decide(args, out: Output) -> int:
    s = resolve(args.file)
    m1 = parse_morphism(args.m1, s)
    m2 = parse_morphism(args.m2, s)
    v = decide_commutes(s, m1, m2, _limits(args))
    out.data = v.to_json(s.sig)
    out.dot = verdict_dot(v, s.sig)
    out.text(v.summary)
    for f in v.faces:
        out.text(f"  face [{f.justification.describe(s.sig)}]")
        out.text(f"    {_path_text(f.left, s.sig)}")
        out.text(f"    {_path_text(f.right, s.sig)}")
    if (d := _figures(args)) is not None:
        from .plotting import verdict_figure
        verdict_figure(v, s, d / "verdict.png")
    return _VERDICT_EXIT[v.status]


def cmd_maclane(args, out: Output) -> int:
    s = resolve(args.file)
    lim = _limits(args)
    sources = [parse_term(t, s.sig) for t in args.source] or None
    rep = maclane_report(s, args.max_term_size, lim, sources)
    out.data = rep.to_json(s.sig)
    out.text(f"sources: {len(rep.sources)}  diamonds: {rep.diamonds}  commuting: {rep.commuting}")
    for v in rep.counterexamples:
        out.text(f"  does not commute: {format_term(v.alpha[0].source, s.sig)}")
        out.text(f"    {_path_text(v.alpha, s.sig)}")
        out.text(f"    {_path_text(v.beta, s.sig)}")
    if rep.ok:
        out.text("all diamonds commute" + (" (scan truncated)" if rep.truncated else ""))
    if (d := _figures(args)) is not None:
        from .plotting import bars_figure
        bars_figure(["commuting", "counterexamples", "exhausted"],
                    [rep.commuting, len(rep.counterexamples), len(rep.exhausted)],
                    d / "maclane.png", f"diamonds of {s.name}")
    if rep.counterexamples:
        return EXIT_NOT_EQUAL
    if rep.exhausted:
        return EXIT_EXHAUSTED
    return EXIT_TRUNCATED if rep.truncated else EXIT_OK


def _diamond_scan(s, src, lim, source_only):
    g = explore([src], s, lim)
    if source_only:
        scan = enumerate_diamonds(g, src, lim, report=True)
        return g, {src: scan}
    return g, regional_diamonds(g, lim)


def cmd_diamonds(args, out: Output) -> int:
    s = resolve(args.file)
    src = s.canon(parse_term(args.term, s.sig))
    lim = _limits(args)
    if args.depths:
        lo, hi = args.depths
        counts = []
        for depth in range(lo, hi + 1):
            dl = Limits(lim.max_vertices, depth, lim.max_path_length, lim.unit_budget,
                        lim.recursion_depth)
            _, scans = _diamond_scan(s, src, dl, args.source_only)
            counts.append(sum(len(x.diamonds) for x in scans.values()))
        depths = list(range(lo, hi + 1))
        out.data = {"depths": depths, "diamonds": counts}
        for d, c in zip(depths, counts):
            out.text(f"depth {d}: {c} diamonds")
        if (fd := _figures(args)) is not None:
            from .plotting import counts_figure
            counts_figure(depths, counts, fd / "diamond_counts.png", "depth limit", "diamonds",
                          f"diamonds from {format_term(src, s.sig)}")
        return EXIT_OK
    g, scans = _diamond_scan(s, src, lim, args.source_only)
    truncated = any(x.truncated for x in scans.values())
    items = [(v, a, b) for v, x in scans.items() for a, b in x.diamonds]
    out.data = {"diamonds": [{"source": format_term(v, s.sig),
                              "alpha": [format_step(e) for e in a],
                              "beta": [format_step(e) for e in b]} for v, a, b in items],
                "truncated": truncated}
    out.text(f"{len(items)} diamonds" + (" (truncated)" if truncated else ""))
    for v, a, b in items:
        out.text(f"  from {format_term(v, s.sig)}")
        out.text(f"    {_path_text(a, s.sig)}")
        out.text(f"    {_path_text(b, s.sig)}")
    return EXIT_TRUNCATED if truncated else EXIT_OK


_IMC_NAME = re.compile(r"imc(\d+)$")


def cmd_quasicycle(args, out: Output) -> int:
    s = resolve(args.file)
    lim = _limits(args)
    seeds = [s.canon(parse_term(t, s.sig)) for t in args.seed] or default_seeds(s, args.seed_size)
    ranking = cert = None
    if (m := _IMC_NAME.match(s.name)) and not args.no_ranking:
        n = int(m.group(1))
        ranking = imc.ranking_for(n)
        cert = suite.sources(n, 3)
    v = detect_quasicycle(s, seeds, lim, ranking, cert)
    out.data = {"verdict": v.summary, "status": v.status, "certificate": v.certificate,
                "witness": [format_step(e) for e in v.witness or []], "reason": v.reason}
    out.text(v.summary)
    for e in v.witness or []:
        out.text(f"  {format_term(e.source, s.sig)} --{format_step(e)}--> {format_term(e.target, s.sig)}")
    return {"free": EXIT_OK, "found": EXIT_NOT_EQUAL}.get(v.status, EXIT_EXHAUSTED)


def cmd_hom(args, out: Output) -> int:
    s = resolve(args.file)
    lim = _limits(args)
    src = s.canon(parse_term(args.source, s.sig))
    tgt = s.canon(parse_term(args.target, s.sig))
    g = explore([src], s, lim)
    if tgt not in g:
        paths, exact = [], g.complete
    else:
        paths, exact = hom_paths(g, src, tgt, lim, report=True)
    out.data = {"count": len(paths), "exact": exact,
                "paths": [[format_step(e) for e in p] for p in paths]}
    out.text(f"{len(paths)} paths" + ("" if exact else " (truncated)"))
    for p in paths:
        out.text(f"  {_path_text(p, s.sig)}")
    return EXIT_OK if exact else EXIT_TRUNCATED


def cmd_graph(args, out: Output) -> int:
    s = resolve(args.file)
    seeds = [s.canon(parse_term(t, s.sig)) for t in args.seeds]
    g = explore(seeds, s, _limits(args))
    out.data = graph_json(g, s)
    out.dot = to_dot(g, s, s.name)
    out.text(f"{len(g.vertices)} vertices, {len(g.edges)} edges"
             + ("" if g.complete else " (truncated)"))
    for v in g.vertices:
        for e in g.out_edges[v]:
            out.text(f"  {format_term(v, s.sig)} --{format_step(e)}--> {format_term(e.target, s.sig)}")
    if (d := _figures(args)) is not None:
        from .plotting import graph_figure
        graph_figure(g, s, d / "graph.png", f"reductions in {s.name}")
    return EXIT_OK if g.complete else EXIT_TRUNCATED


def cmd_critical(args, out: Output) -> int:
    s = resolve(args.file)
    spans = critical_spans(s, _limits(args))
    out.data = [{"source": format_term(c.first.source, s.sig), "first": format_step(c.first),
                 "second": format_step(c.second)} for c in spans]
    out.text(f"{len(spans)} overlapping critical spans")
    for c in spans:
        out.text(f"  {format_term(c.first.source, s.sig)}: {format_step(c.first)} / {format_step(c.second)}")
    return EXIT_OK


def _instances(label, checks, out, data) -> bool:
    ok = all(c.ok for c in checks)
    data[label] = [{"name": c.name, "verdict": c.verdict, "oracle": c.oracle} for c in checks]
    out.text(f"{label}: {sum(c.ok for c in checks)}/{len(checks)} commute, oracle agrees")
    for c in checks:
        if not c.ok:
            out.text(f"  {c.name}: {c.verdict}, oracle {c.oracle}")
    return ok


def cmd_imc(args, out: Output) -> int:
    n = args.n
    lim = _limits(args)
    parts = set(args.suite) if args.suite else {"termination", "maps", "coherence", "hexagons",
                                                "eckmann-hilton", "nonconfluence"}
    data: dict = {"n": n}
    ok = True
    if "termination" in parts:
        r = suite.termination(n, args.max_vars + 1, lim.unit_budget)
        ok &= r.ok
        data["termination"] = {"terms": r.terms, "edges": r.edges, "failures": len(r.failures)}
        out.text(f"termination: {r.terms} terms, {r.edges} edges, {len(r.failures)} failures")
    if "maps" in parts:
        r = suite.maps(n, args.max_vars, lim)
        ok &= r.ok
        data["maps"] = {"pairs": r.pairs, "maps": r.maps, "discrepancies": len(r.discrepancies)}
        out.text(f"maps: {r.pairs} pairs, {r.maps} maps, {len(r.discrepancies)} discrepancies")
    if "coherence" in parts:
        r = suite.coherence(n, args.max_vars, lim, oracle=not args.no_oracle)
        ok &= r.ok
        data["coherence"] = {"sources": r.sources, "hom_sets": r.hom_sets, "pairs": r.pairs,
                             "not_equal": len(r.not_equal), "disagreements": len(r.disagreements),
                             "quotient_sizes": {str(k): v for k, v in sorted(r.quotient_sizes.items())}}
        out.text(f"coherence: {r.hom_sets} hom-sets, {r.pairs} pairs decided, "
                 f"{len(r.not_equal)} not equal, {len(r.disagreements)} oracle disagreements")
        out.text(f"  hom-set sizes after quotient: {dict(sorted(r.quotient_sizes.items()))}")
        if (d := _figures(args)) is not None:
            from .plotting import bars_figure
            sizes = sorted(r.quotient_sizes)
            bars_figure([str(k) for k in sizes], [r.quotient_sizes[k] for k in sizes],
                        d / f"imc{n}_hom_sizes.png", f"hom-set sizes after quotient, n={n}")
    if "hexagons" in parts:
        ok &= _instances("hexagons", suite.hexagons(n, lim), out, data)
    if "eckmann-hilton" in parts:
        ok &= _instances("eckmann-hilton", suite.eckmann_hilton(n, lim), out, data)
    if "nonconfluence" in parts:
        w = suite.nonconfluence(n)
        ok &= w["disjoint"] and not w["joinable"]
        data["nonconfluence"] = w
        out.text(f"non-confluence: {w['source']} -> {w['left']} / {w['right']}, "
                 f"disjoint={w['disjoint']}, joinable={w['joinable']}")
    data["ok"] = bool(ok)
    out.data = data
    return EXIT_OK if ok else EXIT_NOT_EQUAL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = Limits()
    common.add_argument("--max-depth", type=int, default=d.max_depth)
    common.add_argument("--max-vertices", type=int, default=d.max_vertices)
    common.add_argument("--max-path-length", type=int, default=d.max_path_length)
    common.add_argument("--unit-budget", type=int, default=d.unit_budget)
    common.add_argument("--recursion-depth", type=int, default=d.recursion_depth)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")

    p = argparse.ArgumentParser(prog="twocells",
                                description="Coherence questions for covariant 2-structures.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="parse and validate a structure file")
    c.add_argument("file", help="structure file or bundled name")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("decide", parents=[common], help="does a diagram commute?")
    c.add_argument("file")
    c.add_argument("m1", help="reduction expression")
    c.add_argument("m2", help="reduction expression")
    c.set_defaults(func=cmd_decide)

    c = sub.add_parser("maclane", parents=[common], help="check all diamonds in general position")
    c.add_argument("file")
    c.add_argument("--max-term-size", type=int, default=7)
    c.add_argument("--source", action="append", default=[], help="scan only these sources")
    c.set_defaults(func=cmd_maclane)

    c = sub.add_parser("diamonds", parents=[common], help="enumerate diamonds")
    c.add_argument("file")
    c.add_argument("term", help="root term; diamonds out of every reduct are listed")
    c.add_argument("--source-only", action="store_true", help="only diamonds out of the root")
    c.add_argument("--depths", type=int, nargs=2, metavar=("LO", "HI"),
                   help="report counts for each depth limit in LO..HI")
    c.set_defaults(func=cmd_diamonds)

    c = sub.add_parser("quasicycle", parents=[common], help="search for quasicycles")
    c.add_argument("file")
    c.add_argument("--seed", action="append", default=[], help="seed term (repeatable)")
    c.add_argument("--seed-size", type=int, default=3, help="size of default ground seeds")
    c.add_argument("--no-ranking", action="store_true",
                   help="do not use the built-in ranking for imcN structures")
    c.set_defaults(func=cmd_quasicycle)

    c = sub.add_parser("hom", parents=[common], help="list reduction paths between two terms")
    c.add_argument("file")
    c.add_argument("source")
    c.add_argument("target")
    c.set_defaults(func=cmd_hom)

    c = sub.add_parser("graph", parents=[common], help="explore the reduction graph")
    c.add_argument("file")
    c.add_argument("seeds", nargs="+")
    c.set_defaults(func=cmd_graph)

    c = sub.add_parser("critical", parents=[common], help="overlapping critical spans")
    c.add_argument("file")
    c.set_defaults(func=cmd_critical)

    c = sub.add_parser("imc", parents=[common], help="run the iterated monoidal suite")
    c.add_argument("n", type=int)
    c.add_argument("--suite", action="append",
                   choices=("termination", "maps", "coherence", "hexagons", "eckmann-hilton",
                            "nonconfluence"))
    c.add_argument("--max-vars", type=int, default=3,
                   help="variables for maps and coherence; termination uses one more")
    c.add_argument("--no-oracle", action="store_true", help="skip the brute-force cross-check")
    c.set_defaults(func=cmd_imc)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _limits(args)
        out = Output(args)
        code = args.func(args, out)
        out.flush()
        return code
    except (ResourceLimit, PlanarError) as e:
        print(f"twocells: resources exhausted: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (TermError, CoherenceError, ValueError, KeyError, OSError) as e:
        print(f"twocells: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
