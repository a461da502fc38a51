"""Ground truth for small instances, independent of the reduction engine.

Scale the metric by the lcm of all denominators involved and subdivide
into unit edges. The result is a finite multigraph whose integer
Laplacian L presents the degree-zero class group of lattice-supported
divisors: D0 is principal iff L x = D0 has an integer solution. The
q-reduced representative of a lattice divisor is again lattice
supported, so questions about ranks of lattice divisors can be settled
entirely on this finite model.

Nothing here calls into :mod:`tropws.reduction` or :mod:`tropws.rank`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm

from .divisor import Divisor
from .graph import MetricGraph, Point

MAX_VERTICES = 14
MAX_DEGREE = 4


class OracleTooLarge(ValueError):
    pass


def smith_normal_form(A: list[list[int]]):
    """Return ``(U, S, V)`` with ``U @ A @ V == S`` diagonal, each d_i | d_{i+1}.

    U and V are unimodular. Plain pivoting on the smallest nonzero entry.
    """
    m, n = len(A), len(A[0]) if A else 0
    S = [row[:] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (S, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        for M in (S, U):
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(src, dst, k):
        for M in (S, V):
            for row in M:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(t, i, -(S[i][t] // p))
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(t, j, -(S[t][j] // p))
                    if S[t][j]:
                        dirty = True
            if not dirty:
                # divisibility: a pivot must divide every later entry
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            nz = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
            nz += [(abs(S[t][j]), t, j) for j in range(t, n) if S[t][j]]
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, S, V


@dataclass
class LatticeModel:
    """Unit subdivision of ``G`` after scaling lengths by ``scale``."""

    G: MetricGraph
    scale: int
    index: dict  # (edge, integer offset) or ("v", i) -> lattice vertex
    laplacian: list
    U: list
    diag: list  # nonzero invariant factors d_1 | d_2 | ... (one zero dropped)

    @property
    def size(self) -> int:
        return len(self.laplacian)

    def vertex_of(self, p: Point) -> int:
        if p.is_vertex:
            return self.index[("v", p.vertex)]
        s = p.t * self.scale
        if s.denominator != 1:
            raise ValueError("point is not on the lattice")
        return self.index[(p.edge, int(s))]

    def vector(self, D: Divisor) -> list[int]:
        b = [0] * self.size
        for p, k in D.items():
            b[self.vertex_of(p)] += k
        return b

    def class_of(self, b: list[int]) -> tuple:
        """Coordinates of ``b`` in the cokernel Z/d_1 x ... x Z (degree last)."""
        y = [sum(u * x for u, x in zip(row, b)) for row in self.U]
        tors = tuple(y[i] % d for i, d in enumerate(self.diag))
        return tors + (sum(b),)

    def is_principal(self, D0: Divisor) -> bool:
        if D0.degree != 0:
            raise ValueError("principal divisors have degree 0")
        return all(c == 0 for c in self.class_of(self.vector(D0)))

    def points(self) -> list[Point]:
        out = [None] * self.size
        for key, i in self.index.items():
            if key[0] == "v":
                out[i] = Point(vertex=key[1])
            else:
                j, k = key
                out[i] = Point(edge=j, t=Fraction(k, self.scale))
        return out


def lattice_model(G: MetricGraph, extra=(), max_vertices: int = MAX_VERTICES) -> LatticeModel:
    """Build the lattice model fine enough for the points in ``extra``."""
    dens = [e.length.denominator for e in G.edges]
    dens += [p.t.denominator for p in extra if not p.is_vertex]
    scale = lcm(*dens) if dens else 1
    n = len(G.vertices) + sum(int(e.length * scale) - 1 for e in G.edges)
    if n > max_vertices:
        raise OracleTooLarge("oracle instance too large")
    index: dict = {("v", i): i for i in range(len(G.vertices))}
    adj: list[tuple[int, int]] = []
    for j, e in enumerate(G.edges):
        steps = int(e.length * scale)
        prev = e.u
        for k in range(1, steps):
            index[(j, k)] = len(index)
            adj.append((prev, index[(j, k)]))
            prev = index[(j, k)]
        adj.append((prev, e.v))
    L = [[0] * n for _ in range(n)]
    for a, b in adj:
        L[a][a] += 1
        L[b][b] += 1
        L[a][b] -= 1
        L[b][a] -= 1
    U, S, _ = smith_normal_form(L)
    diag = [S[i][i] for i in range(n) if S[i][i]]
    if len(diag) != n - 1:
        raise AssertionError("Laplacian of a connected graph has corank 1")
    return LatticeModel(G, scale, index, L, U, diag)


def is_principal(G: MetricGraph, D0: Divisor, max_vertices: int = MAX_VERTICES) -> bool:
    return lattice_model(G, D0.support, max_vertices).is_principal(D0)


def _effective_classes(M: LatticeModel, base: list[int], m: int) -> set:
    """Classes of ``base + F`` over effective F of degree m on the lattice."""
    out = set()
    for combo in combinations_with_replacement(range(M.size), m):
        b = base[:]
        for i in combo:
            b[i] += 1
        out.add(M.class_of(b))
    return out


def brute_rank(
    G: MetricGraph, D: Divisor, *, max_vertices: int = MAX_VERTICES, max_degree: int = MAX_DEGREE
) -> int:
    """Rank straight from the definition on the lattice model."""
    d = D.degree
    if d > max_degree:
        raise OracleTooLarge("oracle instance too large")
    if d < 0:
        return -1
    M = lattice_model(G, D.support, max_vertices)
    zero = [0] * M.size
    r = -1
    for k in range(d + 1):
        reach = _effective_classes(M, zero, d - k)
        # every E of degree k must leave D - E in an effective class
        for combo in combinations_with_replacement(range(M.size), k):
            b = M.vector(D)
            for i in combo:
                b[i] -= 1
            if M.class_of(b) not in reach:
                return r
        r = k
    return r


__all__ = [
    "LatticeModel",
    "MAX_DEGREE",
    "MAX_VERTICES",
    "OracleTooLarge",
    "brute_rank",
    "is_principal",
    "lattice_model",
    "smith_normal_form",
]
