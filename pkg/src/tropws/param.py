"""Affine numbers ``a + b*t`` for running exact algorithms on a whole interval of t.

Inside :func:`over` the parameter t ranges over an open interval. Ordering
comparisons are answered when their sign is constant on that interval;
otherwise :class:`Split` is raised with the root, and the caller re-runs on
the two halves and on the root itself. A computation that finishes without
a split follows one and the same control path for every t in the interval,
so its integer outputs are constant there.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

_domain: list[tuple[Fraction, Fraction] | None] = [None]


class Split(Exception):
    def __init__(self, at: Fraction):
        super().__init__(at)
        self.at = at


@contextmanager
def over(lo: Fraction, hi: Fraction):
    if not lo < hi:
        raise ValueError("empty parameter interval")
    saved = _domain[0]
    _domain[0] = (lo, hi)
    try:
        yield
    finally:
        _domain[0] = saved


def current() -> tuple[Fraction, Fraction] | None:
    return _domain[0]


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class Lin:
    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    @staticmethod
    def param() -> "Lin":
        return Lin(0, 1)

    def __repr__(self) -> str:
        return f"Lin({self.a} + {self.b}t)"

    def _parts(self, other):
        if isinstance(other, Lin):
            return other.a, other.b
        return _frac(other), Fraction(0)

    def __add__(self, other):
        a, b = self._parts(other)
        return Lin(self.a + a, self.b + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._parts(other)
        return Lin(self.a - a, self.b - b)

    def __rsub__(self, other):
        a, b = self._parts(other)
        return Lin(a - self.a, b - self.b)

    def __neg__(self):
        return Lin(-self.a, -self.b)

    def __mul__(self, k):
        if isinstance(k, Lin):
            raise TypeError("product of two parametric values is not affine")
        return Lin(self.a * k, self.b * k)

    __rmul__ = __mul__

    def sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        dom = _domain[0]
        if dom is None:
            raise RuntimeError("parametric comparison outside a parameter interval")
        lo, hi = dom
        root = -self.a / self.b
        if lo < root < hi:
            raise Split(root)
        mid = self.a + self.b * ((lo + hi) / 2)
        return (mid > 0) - (mid < 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        if not isinstance(other, (Lin, int, Fraction)):
            return NotImplemented
        return (self - other).sign() == 0

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def at(self, t: Fraction) -> Fraction:
        return self.a + self.b * t


def evaluate(x, t: Fraction):
    return x.at(t) if isinstance(x, Lin) else x
