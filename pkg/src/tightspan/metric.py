"""Exact finite metric spaces and real-valued functions on them.

Distances and function values are kept as :class:`fractions.Fraction`
(integral distances are stored as plain ``int``), so every comparison in
this package is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import InvalidMetric, LengthMismatch

Number = "int | Fraction"
MetricFunction = tuple  # tuple of Fraction, indexed by point id


def to_rational(value) -> Fraction:
    """Parse ``value`` (int, Fraction or a ``"p/q"`` string) exactly.

    Floats are refused: a binary float is almost never the number the
    caller meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def _compact(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def as_function(values: Iterable) -> MetricFunction:
    return tuple(to_rational(v) for v in values)


class Violation(NamedTuple):
    kind: str  # NonSquare | NegativeEntry | NonZeroDiagonal | ZeroDistance | AsymmetricPair | TriangleViolation
    points: tuple

    def __str__(self):
        return f"{self.kind}{self.points}"


@dataclass(frozen=True)
class FinMetric:
    """A validated finite metric space on the points ``0 .. n-1``.

    Build instances with :func:`validate_metric`; the constructor does no
    checking.
    """

    d: tuple
    labels: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def integer_valued(self) -> bool:
        return all(isinstance(v, int) for row in self.d for v in row)

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def index(self, label) -> int:
        """Point id for a label (or a plain integer id)."""
        if isinstance(label, int):
            if not 0 <= label < self.n:
                raise IndexError(f"point {label} out of range")
            return label
        if self.labels and label in self.labels:
            return self.labels.index(label)
        if isinstance(label, str) and label.isdigit():
            return self.index(int(label))
        raise KeyError(f"unknown point {label!r}")

    def eccentricity(self, x: int):
        return max(self.d[x])

    def diameter(self):
        return max((max(row) for row in self.d), default=0)

    def submetric(self, ids: Sequence[int]) -> "FinMetric":
        labels = tuple(self.label(i) for i in ids) if self.labels else None
        return FinMetric(tuple(tuple(self.d[i][j] for j in ids) for i in ids), labels)

    def int_matrix(self) -> list:
        if not self.integer_valued:
            raise ValueError("metric is not integer valued")
        return [list(row) for row in self.d]


def validate_metric(matrix, labels: Sequence[str] | None = None) -> FinMetric:
    """Check the metric axioms exactly and return a :class:`FinMetric`.

    Raises :class:`InvalidMetric` listing every violation found.
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvalidMetric([Violation("NonSquare", (n, tuple(len(r) for r in rows)))])
    d = [[to_rational(v) for v in r] for r in rows]
    bad = []
    for x in range(n):
        if d[x][x] != 0:
            bad.append(Violation("NonZeroDiagonal", (x,)))
        for y in range(n):
            if d[x][y] < 0:
                bad.append(Violation("NegativeEntry", (x, y)))
            if x < y:
                if d[x][y] != d[y][x]:
                    bad.append(Violation("AsymmetricPair", (x, y)))
                elif d[x][y] == 0:
                    bad.append(Violation("ZeroDistance", (x, y)))
    if not any(v.kind == "AsymmetricPair" for v in bad):
        for x in range(n):
            for z in range(x + 1, n):
                dxz = d[x][z]
                for y in range(n):
                    if y != x and y != z and dxz > d[x][y] + d[y][z]:
                        bad.append(Violation("TriangleViolation", (x, z, y)))
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n or len(set(labels)) != n:
            bad.append(Violation("BadLabels", (len(labels),)))
    if bad:
        raise InvalidMetric(bad)
    return FinMetric(tuple(tuple(_compact(v) for v in r) for r in d), labels)


def interval(M: FinMetric, x: int, y: int) -> frozenset:
    """Points between ``x`` and ``y``: ``d(x,v) + d(v,y) = d(x,y)``."""
    dx, dy, dxy = M.d[x], M.d[y], M.d[x][y]
    return frozenset(v for v in range(M.n) if dx[v] + dy[v] == dxy)


def cone(M: FinMetric, x: int, v: int) -> frozenset:
    """The cone of the directed pair ``(x, v)``: all ``y`` with ``v`` in I(x,y)."""
    dx, dv, dxv = M.d[x], M.d[v], M.d[x][v]
    return frozenset(y for y in range(M.n) if dxv + dv[y] == dx[y])


def gromov_product(M: FinMetric, x: int, y: int, z: int) -> Fraction:
    d = M.d
    return Fraction(d[z][x] + d[z][y] - d[x][y], 2)


def median_points(M: FinMetric, x: int, y: int, z: int) -> frozenset:
    return interval(M, x, y) & interval(M, y, z) & interval(M, z, x)


def embed(M: FinMetric, z: int) -> MetricFunction:
    """The distance function ``d_z``, the image of ``z`` in the hull."""
    return tuple(Fraction(v) for v in M.d[z])


def sup_distance(f: Sequence, g: Sequence) -> Fraction:
    if len(f) != len(g):
        raise LengthMismatch(f"lengths {len(f)} and {len(g)} differ")
    return Fraction(max((abs(a - b) for a, b in zip(f, g)), default=0))


@dataclass(frozen=True)
class FunctionClass:
    in_delta: bool
    lip1: bool
    extremal: bool
    witness: tuple | None = None


def _check_length(M: FinMetric, f: Sequence):
    if len(f) != M.n:
        raise LengthMismatch(f"function has {len(f)} values, space has {M.n} points")


def delta_violation(M: FinMetric, f: Sequence):
    """First pair ``(x, y)`` with ``f(x) + f(y) < d(x, y)``, else None."""
    d = M.d
    for x in range(M.n):
        fx, dx = f[x], d[x]
        for y in range(x, M.n):
            if fx + f[y] < dx[y]:
                return (x, y)
    return None


def in_delta(M: FinMetric, f: Sequence) -> bool:
    _check_length(M, f)
    return delta_violation(M, f) is None


def classify_function(M: FinMetric, f: Sequence) -> FunctionClass:
    """Decide membership of ``f`` in Δ(X), Δ(X) ∩ Lip1 and E(X).

    ``witness`` explains the first failure: ``("pair", x, y)`` for a Δ
    violation, ``("slack", x)`` for a point where ``f(x)`` exceeds
    ``max_y d(x,y) - f(y)``, ``("lipschitz", x, y)`` when ``f`` is in Δ
    but not 1-Lipschitz.
    """
    _check_length(M, f)
    d = M.d
    bad = delta_violation(M, f)
    lip = next(((x, y) for x in range(M.n) for y in range(x + 1, M.n)
                if abs(f[x] - f[y]) > d[x][y]), None)
    if bad is not None:
        return FunctionClass(False, lip is None, False, ("pair",) + bad)
    for x in range(M.n):
        if f[x] != max(d[x][y] - f[y] for y in range(M.n)):
            witness = ("slack", x) if lip is None else ("lipschitz",) + lip
            return FunctionClass(True, lip is None, False, witness)
    return FunctionClass(True, True, True, None)


def is_extremal(M: FinMetric, f: Sequence) -> bool:
    return classify_function(M, f).extremal
