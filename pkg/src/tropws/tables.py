"""Plain-text tables of a gap map along one edge.

One row per gap sequence: where it occurs on the edge, the rank column
block, the sequence and its weight. For the canonical divisor the rank
columns are r(k(p)) for k = 1..2g-1; for any other D they are
r(D - k(p)) for k = 1..deg(D)+1. Both are functions of the gap
sequence alone, since r(D - m(p)) = r - #{i : n_i <= m}.
"""

from __future__ import annotations

from .divisor import Divisor, GapSequence, canonical_divisor
from .graph import MetricGraph, fmt_rational


def ranks_from_gaps(n: GapSequence, r: int, m_max: int) -> list[int]:
    """r(D - m(p)) for m = 1..m_max."""
    return [r - sum(1 for x in n if x <= m) for m in range(1, m_max + 1)]


def canonical_ranks(n: GapSequence, g: int) -> list[int]:
    """r(k(p)) for k = 1..2g-1 by Riemann-Roch from the canonical gaps."""
    rk = ranks_from_gaps(n, g - 1, 2 * g - 1)
    return [x + k - g + 1 for k, x in enumerate(rk, start=1)]


def _runs(m):
    """Maximal runs of consecutive pieces carrying one sequence."""
    runs = []
    for a, b, n in m.pieces():
        closed = a == b
        if runs and runs[-1][4] == n:
            runs[-1][2], runs[-1][3] = b, closed
        else:
            runs.append([a, closed, b, closed, n])
    return runs


def _interval(a, lc, b, rc) -> str:
    f = fmt_rational
    if a == b:
        return f"{{{f(a)}}}"
    return f"{'[' if lc else '('}{f(a)},{f(b)}{']' if rc else ')'}"


def edge_rows(m) -> list[tuple[GapSequence, str]]:
    by: dict[GapSequence, list[str]] = {}
    for a, lc, b, rc, n in _runs(m):
        by.setdefault(n, []).append(_interval(a, lc, b, rc))
    order = sorted(by, key=lambda n: (n.weight, tuple(n)))
    return [(n, " ∪ ".join(by[n])) for n in order]


def render_edge_table(G: MetricGraph, D: Divisor, m, r: int) -> str:
    canonical = D == canonical_divisor(G)
    g = G.genus
    if canonical:
        top = 2 * g - 1
        head = f"r(k(p)) for 1 <= k <= {top}"
        cols = lambda n: canonical_ranks(n, g)  # noqa: E731
    else:
        top = D.degree + 1
        head = f"r(D - k(p)) for 1 <= k <= {top}"
        cols = lambda n: ranks_from_gaps(n, r, top)  # noqa: E731
    rows = [(f"p in {where}", cols(n), str(n), str(n.weight)) for n, where in edge_rows(m)]
    w0 = max(len(head), *(len(x[0]) for x in rows))
    wn = max(len("gaps"), *(len(x[2]) for x in rows))
    lines = [f"{G.edge_name(m.edge)}, length {fmt_rational(m.length)}"]
    lines.append(f"{head:<{w0}} | {' '.join(f'{k:>2}' for k in range(1, top + 1))} | {'gaps':<{wn}} | wt")
    lines.append("-" * len(lines[-1]))
    for where, rk, n, wt in rows:
        lines.append(f"{where:<{w0}} | {' '.join(f'{x:>2}' for x in rk)} | {n:<{wn}} | {wt}")
    return "\n".join(lines) + "\n"


__all__ = ["canonical_ranks", "edge_rows", "ranks_from_gaps", "render_edge_table"]
