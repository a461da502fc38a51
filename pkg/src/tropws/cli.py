"""Command line front end: ``tropws <command> [options]``.

Exit status is 0 on success, 2 when a verified identity fails and 1 on
bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog, crosscheck, io
from .divisor import Divisor, GapSequence, canonical_divisor
from .graph import fmt_rational
from .rank import gap_sequence, rank_with_witness
from .reduction import base_point, reduce
from .tables import render_edge_table
from .weierstrass import (
    Report,
    SweepError,
    gap_jump_check,
    maximal_loci,
    mu,
    sweep,
    sweep_edge,
    verify_totals,
    wl,
    wl_ge,
)


class InputError(ValueError):
    pass


class CheckFailed(AssertionError):
    pass


# ---------------------------------------------------------------- inputs


def _load_json(text: str):
    """Inline JSON or a path to a JSON file."""
    try:
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {text!r}: {exc.msg} at line {exc.lineno}") from None


def _family(args):
    if not args.family:
        return None
    lengths = [Fraction(x) for x in args.lengths.split(",")] if args.lengths else None
    params = {}
    for kv in args.param or ():
        k, _, v = kv.partition("=")
        params[k] = v if k != "verticals" else tuple(v.split(","))
    return catalog.build_family(args.family, args.genus, lengths, **params)


def _graph(args):
    fam = _family(args)
    if fam is not None:
        return fam.graph, fam
    if args.graph:
        return io.graph_from_json(_load_json(args.graph)), None
    raise InputError("give a graph with --graph FILE or --family NAME")


def _divisor(args, G, default_K=True) -> Divisor:
    if not args.divisor:
        if default_K:
            return canonical_divisor(G)
        raise InputError("this command needs --divisor")
    text = args.divisor
    if text.lstrip().startswith("[") or os.path.exists(text):
        return io.divisor_from_json(G, _load_json(text))
    return io.parse_divisor_text(G, text)


def _sweep(args, G, D):
    return sweep(G, D, method=args.method, qmax=args.qmax, grid=args.grid)


def _emit(args, obj, text: str) -> None:
    if args.json:
        print(io.dumps(obj))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_info(args) -> int:
    G, fam = _graph(args)
    K = canonical_divisor(G)
    g = G.genus
    data = {
        "genus": g,
        "vertices": len(G.vertices),
        "edges": len(G.edges),
        "canonical": io.divisor_to_json(G, K),
        "degree_K": K.degree,
    }
    lines = [f"genus {g}", f"{len(G.vertices)} vertices, {len(G.edges)} edges", f"K = {K.fmt(G)}"]
    ok = K.degree == 2 * g - 2
    lines.append(f"deg K = {K.degree} = 2g−2 {'✓' if ok else '✗'}")
    if fam is not None:
        data["hyperelliptic"] = fam.hyperelliptic
        lines.append(f"hyperelliptic: {'yes' if fam.hyperelliptic else 'not declared'}")
        if fam.v0 is not None:
            data["v0"] = io.point_to_json(G, fam.v0)
            lines.append(f"v0 = {G.fmt_point(fam.v0)}")
    _emit(args, data, "\n".join(lines))
    return 0 if ok else 2


def cmd_rank(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    res = rank_with_witness(G, D)
    obj = {"rank": res.rank, "method": res.method}
    text = str(res.rank)
    if res.witness is not None and res.rank < D.degree:
        obj["witness"] = io.divisor_to_json(G, res.witness)
        text += f"\nwitness E = {res.witness.fmt(G)} (D − E has no effective representative)"
    _emit(args, obj, text)
    return 0


def cmd_reduce(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    q = G.parse_point(args.at) if args.at else base_point(G)
    res = reduce(G, D, q)
    obj = {"q": io.point_to_json(G, q), "reduced": io.divisor_to_json(G, res.reduced)}
    lines = [f"{G.fmt_point(q)}-reduced: {res.reduced.fmt(G)}"]
    if args.slopes_at:
        p = G.parse_point(args.slopes_at)
        sl = res.boundary_slopes(p)
        obj["witness_slopes_at"] = {
            "at": io.point_to_json(G, p),
            "slopes": [{"edge": G.edge_name(nu.edge), "sign": nu.sign, "slope": s} for nu, s in sl.items()],
        }
        lines.append(f"slopes of f_q at {G.fmt_point(p)}: " + ", ".join(f"{G.edge_name(nu.edge)}{'+' if nu.sign > 0 else '-'}: {s}" for nu, s in sl.items()))
    if args.trace:
        obj["firing_log"] = [_log_entry(G, x) for x in res.firing_log]
        lines.extend(f"  fire {_log_entry(G, x)}" for x in res.firing_log)
    _emit(args, obj, "\n".join(lines))
    return 0


def _log_entry(G, x) -> str:
    delta, verts, edges = x
    fired = ", ".join(G.vertices[i] for i in verts) or "-"
    moved = ", ".join(G.edge_name(j) for j in edges) or "-"
    return f"δ={fmt_rational(delta)} vertices {{{fired}}} partial edges {{{moved}}}"


def cmd_gaps(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    if not args.at:
        raise InputError("gaps needs --at POINT")
    p = G.parse_point(args.at)
    n = gap_sequence(G, D, p)
    _emit(args, {"at": io.point_to_json(G, p), "gaps": list(n), "wt": n.weight}, f"{n} wt={n.weight}")
    return 0


def cmd_sweep(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    if args.edge:
        j = G.edge_index(args.edge)
        m = sweep_edge(G, D, j, method=args.method, qmax=args.qmax, grid=args.grid)
        r = rank_with_witness(G, D).rank
        if args.table:
            sys.stdout.write(render_edge_table(G, D, m, r))
            return 0
        _emit(args, io.edge_map_to_json(G, m), _edge_text(G, m))
        return 0
    gm = _sweep(args, G, D)
    if args.table:
        sys.stdout.write("\n".join(render_edge_table(G, D, m, gm.r) for m in gm.edges))
        return 0
    text = "\n".join([*(f"{G.vertices[v]} {n} wt={n.weight}" for v, n in sorted(gm.vertices.items()))] + [_edge_text(G, m) for m in gm.edges])
    _emit(args, io.gap_map_to_json(gm), text)
    return 0


def _edge_text(G, m) -> str:
    out = []
    for a, b, n in m.pieces():
        where = fmt_rational(a) if a == b else f"({fmt_rational(a)},{fmt_rational(b)})"
        out.append(f"{G.edge_name(m.edge)} {where} {n} wt={n.weight}")
    return "\n".join(out)


def cmd_wl(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    R = wl(G, D, _sweep(args, G, D))
    _emit(args, io.region_to_json(R), R.describe())
    return 0


def cmd_wl_ge(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    if not args.seq:
        raise InputError("wl-ge needs --seq n1,n2,...")
    n = [int(x) for x in args.seq.split(",")]
    R = wl_ge(G, D, n, _sweep(args, G, D))
    _emit(args, io.region_to_json(R), R.describe())
    return 0


def cmd_maximal(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    loci = maximal_loci(G, D, _sweep(args, G, D), with_mu=True)
    total = sum(L.weight for L in loci)
    obj = {
        "loci": [{"region": io.region_to_json(L.region), "gap": list(L.gap), "wt": L.weight, "mu": L.mu} for L in loci],
        "total_weight": total,
    }
    lines = [f"{L.region.describe()}  {L.gap} wt={L.weight} mu={L.mu}" for L in loci]
    lines.append(f"{len(loci)} maximal loci, Σ wt = {total}")
    _emit(args, obj, "\n".join(lines))
    return 0


def cmd_mu(args) -> int:
    G, _ = _graph(args)
    D = _divisor(args, G)
    if not args.region:
        raise InputError("mu needs --region JSON")
    B = io.region_from_json(G, _load_json(args.region))
    val = mu(G, D, B, variant=args.variant)
    _emit(args, {"region": io.region_to_json(B), "mu": val, "variant": args.variant}, str(val))
    return 0


def _bounds(G, D, gm, rep: Report) -> None:
    g = G.genus
    d = D.degree
    seqs = gm.achieved()
    if D == canonical_divisor(G):
        worst = max(n.weight for n in seqs)
        rep.check(worst <= g * (g - 1) // 2, f"max wt = {worst} ≤ g(g−1)/2 = {g * (g - 1) // 2}", "canonical weight bound")
    elif d > 2 * g - 2:
        worst = max(n.weight for n in seqs)
        rep.check(worst <= g * (g + 1) // 2, f"max wt = {worst} ≤ g(g+1)/2 = {g * (g + 1) // 2}", "large degree weight bound")
    rep.check(gm.check_semicontinuity(), "gap map upper-semicontinuous", "semicontinuity")
    rep.check(all(gap_jump_check(m) for m in gm.edges), "gap jumps leave room at every breakpoint", "gap jump")


def cmd_verify(args) -> int:
    G, fam = _graph(args)
    D = _divisor(args, G)
    gm = _sweep(args, G, D)
    rep = verify_totals(G, D, gm)
    if not rep.data.get("finite"):
        rep.lines.append(f"WL(D) has {len(rep.data['components'])} components and is not finite; the isolated-point identities do not apply")
    _bounds(G, D, gm, rep)
    if D == canonical_divisor(G) and rep.data.get("finite"):
        g = G.genus
        for A in wl(G, D, gm).components():
            n = gm.cells_in(A)[0]
            rep.check(n.weight <= g - 1, f"isolated {A.describe()}: wt = {n.weight} ≤ g−1", "isolated weight bound")
    if fam is not None and fam.expected_total is not None and D == canonical_divisor(G):
        loci = maximal_loci(G, D, gm)
        total = sum(L.weight for L in loci)
        rep.check(total == fam.expected_total, f"Σ wt over {len(loci)} maximal loci = {total} = {fam.expected_total}", "maximal locus census")
    _emit(args, {"ok": rep.ok, "checks": rep.lines, "data": _jsonable(rep.data)}, "\n".join(rep.lines))
    return 0 if rep.ok else 2


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return fmt_rational(x)
    return x


def cmd_classify(args) -> int:
    g = args.genus
    if g not in (2, 3, 4):
        raise InputError("classify supports --genus 2, 3 or 4")
    got = catalog.classify(g, jobs=args.jobs)
    want = {GapSequence(n) for n in catalog.ACHIEVABLE[g]}
    semi = catalog.semigroup_sequences(g)
    lines = [f"{n} wt={n.weight}{'' if n in semi else '  (complement not a semigroup)'}" for n in sorted(got)]
    ok = got == want
    lines.append(f"{len(got)} sequences; matches the known list: {'✓' if ok else '✗'}")
    obj = {"genus": g, "sequences": [list(n) for n in sorted(got)], "matches": ok}
    if g == 4 and args.samples:
        probe = catalog.exclusion_probe(args.samples, args.seed or 0)
        lines.append(f"exclusion probe over {probe.instances} random instances: {'no hits ✓' if probe.ok else 'HITS ✗'}")
        for name, params, n in probe.hits:
            lines.append(f"  {name} {_jsonable(params)} {n}")
        obj["probe"] = {"instances": probe.instances, "hits": [[h[0], _jsonable(h[1]), list(h[2])] for h in probe.hits]}
        ok = ok and probe.ok
    _emit(args, obj, "\n".join(lines))
    return 0 if ok else 2


def cmd_oracle_check(args) -> int:
    rep = crosscheck.run(args.cases, args.seed or 0)
    lines = [
        f"{rep.cases} cases: {rep.rank_checks} rank, {rep.witness_checks} witness, {rep.principal_checks} principality comparisons",
        f"disagreements: {len(rep.problems)} {'✓' if rep.ok else '✗'}",
    ]
    for p in rep.problems:
        lines.append(f"  {p.kind}: {p.divisor.fmt(p.graph)}  {p.detail}")
    _emit(args, {"cases": rep.cases, "disagreements": len(rep.problems)}, "\n".join(lines))
    return 0 if rep.ok else 2


def cmd_family(args) -> int:
    if not args.name and not args.family:
        raise InputError(f"family needs --name; known: {', '.join(sorted(catalog.FAMILIES))}")
    args.family = args.name or args.family
    G, fam = _graph(args)
    obj = {
        "name": fam.name,
        "genus": fam.genus,
        "graph": io.graph_to_json(G),
        "hyperelliptic": fam.hyperelliptic,
        "v0": io.point_to_json(G, fam.v0) if fam.v0 else None,
        "marked": {k: io.point_to_json(G, p) for k, p in fam.marked.items()},
        "expected_total": fam.expected_total,
        "golden": fam.golden,
    }
    print(io.dumps(obj))
    return 0


COMMANDS = {
    "info": cmd_info,
    "rank": cmd_rank,
    "reduce": cmd_reduce,
    "gaps": cmd_gaps,
    "sweep": cmd_sweep,
    "wl": cmd_wl,
    "wl-ge": cmd_wl_ge,
    "maximal": cmd_maximal,
    "mu": cmd_mu,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "oracle-check": cmd_oracle_check,
    "family": cmd_family,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropws", description="Divisors, ranks and Weierstrass loci on metric graphs.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    src = ap.add_argument_group("input")
    src.add_argument("--graph", help="graph JSON (file or inline)")
    src.add_argument("--family", help="catalog family name")
    src.add_argument("--name", help="family name (for the family command)")
    src.add_argument("--genus", type=int)
    src.add_argument("--lengths", help="comma separated edge lengths, e.g. 1,1/2,3")
    src.add_argument("--param", action="append", help="extra family parameter key=value")
    src.add_argument("--divisor", help="divisor JSON, or text like '2*v + e0:1/3'; default K")
    q = ap.add_argument_group("queries")
    q.add_argument("--at", help="point: vertex name or e<j>:<offset>")
    q.add_argument("--edge", help="restrict sweep to one edge")
    q.add_argument("--seq", help="gap sequence for wl-ge")
    q.add_argument("--region", help="region JSON for mu")
    q.add_argument("--variant", choices=["normative", "agr"], default="normative")
    q.add_argument("--slopes-at", help="report witness slopes at this point (reduce)")
    out = ap.add_argument_group("output and tuning")
    out.add_argument("--json", action="store_true")
    out.add_argument("--table", action="store_true")
    out.add_argument("--trace", action="store_true", help="include the firing log (reduce)")
    out.add_argument("--method", choices=["exact", "bisect"], default="exact")
    out.add_argument("--qmax", type=int)
    out.add_argument("--grid", type=int)
    out.add_argument("--seed", type=int)
    out.add_argument("--cases", type=int, default=200)
    out.add_argument("--samples", type=int, default=0, help="random instances for the genus-4 exclusion probe")
    out.add_argument("--jobs", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CheckFailed, AssertionError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 2
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InputError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"input error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
