"""Divisors on metric graphs and gap sequences."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .graph import MetricGraph, Point


class Divisor(Mapping[Point, int]):
    """Finite formal sum of points with integer coefficients.

    Immutable. Zero coefficients are never stored, so two divisors are
    equal exactly when they have the same coefficients.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[Point, int] | Iterable[tuple[Point, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[Point, int] = {}
        for p, k in items:
            if not isinstance(k, int):
                raise TypeError("divisor coefficients must be integers")
            c[p] = c.get(p, 0) + k
        self._c = {p: k for p, k in sorted(c.items()) if k != 0}
        self._hash = None

    @classmethod
    def point(cls, p: Point, k: int = 1) -> "Divisor":
        return cls({p: k})

    def __getitem__(self, p: Point) -> int:
        return self._c[p]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Divisor):
            return self._c == other._c
        return NotImplemented

    def __repr__(self) -> str:
        body = " + ".join(f"{k}*{p}" for p, k in self._c.items())
        return f"Divisor({body or '0'})"

    def coeff(self, p: Point) -> int:
        return self._c.get(p, 0)

    @property
    def degree(self) -> int:
        return sum(self._c.values())

    @property
    def support(self) -> list[Point]:
        return list(self._c)

    def is_effective(self) -> bool:
        return all(k > 0 for k in self._c.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor([*self._c.items(), *other._c.items()])

    def __neg__(self) -> "Divisor":
        return Divisor({p: -k for p, k in self._c.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, n: int) -> "Divisor":
        return Divisor({p: n * k for p, k in self._c.items()})

    __rmul__ = __mul__

    def restrict_sum(self, region) -> int:
        """Sum of coefficients over the points of ``region``."""
        return sum(k for p, k in self._c.items() if region.contains(p))

    def fmt(self, G: MetricGraph) -> str:
        if not self._c:
            return "0"
        parts = []
        for p, k in self._c.items():
            name = G.fmt_point(p)
            coef = {1: "", -1: "-"}.get(k, str(k))
            parts.append(f"{coef}({name})")
        return " + ".join(parts).replace("+ -", "- ")


def canonical_divisor(G: MetricGraph) -> Divisor:
    """K = sum of (val(p) - 2)(p) over the vertices of the model."""
    return Divisor({Point(vertex=i): len(G.incident[i]) - 2 for i in range(len(G.vertices))})


class GapSequence(tuple):
    """Strictly increasing gaps ``1 <= n_1 < ... < n_{r+1} <= d+1``.

    ``d`` is the degree of the divisor the sequence belongs to; pass
    ``None`` to skip the upper bound check.
    """

    def __new__(cls, gaps: Iterable[int], d: int | None = None):
        gaps = tuple(int(x) for x in gaps)
        if not gaps:
            raise ValueError("empty gap sequence")
        if gaps[0] < 1 or any(a >= b for a, b in zip(gaps, gaps[1:])):
            raise ValueError(f"not a strictly increasing positive sequence: {gaps}")
        if d is not None and gaps[-1] > d + 1:
            raise ValueError(f"gap {gaps[-1]} exceeds d+1 = {d + 1}")
        return super().__new__(cls, gaps)

    @property
    def r(self) -> int:
        return len(self) - 1

    @property
    def weight(self) -> int:
        return weight(self)

    def is_trivial(self) -> bool:
        return self[-1] == len(self)

    def dominates(self, other: "GapSequence") -> bool:
        """Coordinatewise ``self >= other``."""
        if len(self) != len(other):
            raise ValueError("sequences of different length are incomparable")
        return all(a >= b for a, b in zip(self, other))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self)) + ")"

    def __repr__(self) -> str:
        return f"GapSequence{tuple(self)}"


def weight(n: Iterable[int]) -> int:
    return sum(x - i for i, x in enumerate(n, start=1))


def trivial_sequence(r: int) -> GapSequence:
    return GapSequence(range(1, r + 2))
