"""Operators that produce extremal functions.

Dress's retraction ``p`` (iterated ``q``), a one-pass greedy
extremalizer, the geodesic bicombing built from ``p``, rounding onto a
finer grid, and the extension operators between a space, its
superspaces and 1-Lipschitz maps into Δ1(X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (EmptyDomain, EmptySubset, LengthMismatch, NotExtremal,
                     NotInDelta, NotIntegerMetric, NotLipschitz, NotSubspace)
from .metric import (FinMetric, MetricFunction, classify_function, cone,
                     delta_violation, embed, is_extremal, sup_distance)

DEFAULT_MAX_ITER = 64
DEFAULT_RESIDUAL_CAP = Fraction(1, 2 ** 40)


def _require_delta(M: FinMetric, f: Sequence):
    if len(f) != M.n:
        raise LengthMismatch(f"function has {len(f)} values, space has {M.n} points")
    bad = delta_violation(M, f)
    if bad is not None:
        raise NotInDelta(f"f({bad[0]}) + f({bad[1]}) < d({bad[0]},{bad[1]})")


def _star(M: FinMetric, f: Sequence) -> MetricFunction:
    d, n = M.d, M.n
    return tuple(Fraction(max(d[x][z] - f[z] for z in range(n))) for x in range(n))


def star(M: FinMetric, f: Sequence) -> MetricFunction:
    """``f*(x) = max_z d(x,z) - f(z)``; equals ``f`` exactly when f is extremal."""
    _require_delta(M, f)
    return _star(M, f)


def _q(M: FinMetric, f: Sequence) -> MetricFunction:
    return tuple((a + b) / 2 for a, b in zip(f, _star(M, f)))


def q_step(M: FinMetric, f: Sequence) -> MetricFunction:
    _require_delta(M, f)
    return _q(M, f)


@dataclass(frozen=True)
class PMapReport:
    result: MetricFunction
    iterations: int
    converged_exactly: bool
    residual: Fraction
    method: str = "fixed-point"   # fixed-point | geometric-tail | greedy

    def to_json(self):
        from .io import fmt_rational
        return {
            "result": [fmt_rational(v) for v in self.result],
            "iterations": self.iterations,
            "converged_exactly": self.converged_exactly,
            "method": self.method,
            "residual": fmt_rational(self.residual),
        }


def _argmax_set(M: FinMetric, f: Sequence, x: int):
    row = [M.d[x][z] - f[z] for z in range(M.n)]
    top = max(row)
    return {z for z, v in enumerate(row) if v == top}


def _geometric_limit(M: FinMetric, a, b, c):
    """Exact limit of the q-orbit through ``a, b = q(a), c = q(b)``, if certified.

    If ``c - b = r (b - a)`` for one scalar ``0 < r < 1``, the candidate
    limit is ``L = c + (c - b) r / (1 - r)``. It is accepted only when
    ``q(L) = L`` and, for every x, some z attains ``max_z d(x,z) - g(z)``
    both at ``g = L`` and at ``g = a``. Then ``f*`` is affine on the
    segment [L, a], hence so is ``q``, and all later iterates stay on the
    segment and converge to L.
    """
    d1 = [y - x for x, y in zip(a, b)]
    d2 = [y - x for x, y in zip(b, c)]
    r = None
    for u, v in zip(d1, d2):
        if u == 0:
            if v != 0:
                return None
            continue
        ratio = v / u
        if r is None:
            r = ratio
        elif ratio != r:
            return None
    if r is None or not 0 < r < 1:
        return None
    L = tuple(z + w * r / (1 - r) for z, w in zip(c, d2))
    if delta_violation(M, L) is not None or _q(M, L) != L:
        return None
    for x in range(M.n):
        if not _argmax_set(M, L, x) & _argmax_set(M, a, x):
            return None
    return L


def p_map(M: FinMetric, f: Sequence, max_iter: int = DEFAULT_MAX_ITER,
          residual_cap: Fraction = DEFAULT_RESIDUAL_CAP) -> PMapReport:
    """Iterate ``q`` towards Dress's retraction ``p(f)``.

    Stops at an exact fixed point of ``q``, or as soon as the orbit is
    certified to be geometric on a segment, in which case its limit is
    computed exactly (``method="geometric-tail"``). Otherwise, once the
    sup-norm step drops to ``residual_cap`` or ``max_iter`` steps have
    been taken, the last iterate is finished with
    :func:`extremalize_greedy`, so the result is always extremal and below
    ``f``; ``converged_exactly`` is then False.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    _require_delta(M, f)
    g = tuple(Fraction(v) for v in f)
    prev = None
    residual = Fraction(0)
    for k in range(max_iter + 1):
        h = _q(M, g)
        residual = sup_distance(g, h)
        if residual == 0:
            return PMapReport(g, k, True, residual)
        if prev is not None:
            L = _geometric_limit(M, prev, g, h)
            if L is not None:
                return PMapReport(L, k + 1, True, Fraction(0), "geometric-tail")
        if k == max_iter or residual <= residual_cap:
            break
        prev, g = g, h
    return PMapReport(extremalize_greedy(M, g), k, False, residual, "greedy")


def extremalize_greedy(M: FinMetric, f: Sequence, order: Sequence[int] | None = None) -> MetricFunction:
    """Lower each coordinate once, in ``order``, to its least admissible value.

    Once ``x`` has been lowered it is tight with some ``y``, and ``y`` can
    never be lowered afterwards, so a single pass reaches an extremal
    function.
    """
    _require_delta(M, f)
    d, n = M.d, M.n
    g = [Fraction(v) for v in f]
    for x in (range(n) if order is None else order):
        g[x] = Fraction(max(0, max(d[x][y] - g[y] for y in range(n) if y != x)))
    return tuple(g)


def bicombing(M: FinMetric, x: int, y: int, t, max_iter: int = DEFAULT_MAX_ITER,
              residual_cap: Fraction = DEFAULT_RESIDUAL_CAP) -> PMapReport:
    """Point at parameter ``t`` on the bicombing geodesic from d_x to d_y."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    dx, dy = embed(M, x), embed(M, y)
    mix = tuple((1 - t) * a + t * b for a, b in zip(dx, dy))
    return p_map(M, mix, max_iter, residual_cap)


def round_extremal(M: FinMetric, f: Sequence, m: int) -> MetricFunction:
    """An extremal function with values in (1/m)Z within 1/(2m) of ``f``.

    Start from the largest (1/m)Z-valued function below ``f + 1/(2m)``
    and lower uncovered points by 1/m, in ascending index order, until
    every point lies on a tight pair.
    """
    if not M.integer_valued:
        raise NotIntegerMetric("rounding needs an integer valued metric")
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not is_extremal(M, f):
        raise NotExtremal("round_extremal expects an extremal function")
    step = Fraction(1, m)
    eps = step / 2
    g = [math.floor((Fraction(v) + eps) * m) * step for v in f]
    d, n = M.d, M.n
    while True:
        uncovered = next((x for x in range(n)
                          if all(g[x] + g[y] != d[x][y] for y in range(n))), None)
        if uncovered is None:
            return tuple(g)
        g[uncovered] -= step


def lipschitz_extend(M: FinMetric, B: FinMetric, A_ids: Sequence[int],
                     F: Mapping[int, Sequence]) -> dict:
    """Extend a 1-Lipschitz map ``A -> Δ1(X)`` to all of ``B``.

    ``F`` maps each id in ``A_ids`` (points of ``B``) to a function on
    ``M``. The extension is ``b -> min_a f_a + d_B(a, b)`` coordinatewise.
    """
    A = list(A_ids)
    if not A:
        raise EmptyDomain("the domain A is empty")
    for a in A:
        cls = classify_function(M, F[a])
        if not (cls.in_delta and cls.lip1):
            raise NotLipschitz(f"F({a}) is not in Δ1(X)")
    for i, a in enumerate(A):
        for b in A[i + 1:]:
            if sup_distance(F[a], F[b]) > B.d[a][b]:
                raise NotLipschitz(f"|F({a}) - F({b})| exceeds d({a},{b})")
    out = {}
    for b in range(B.n):
        out[b] = tuple(Fraction(min(F[a][x] + B.d[a][b] for a in A)) for x in range(M.n))
    return out


def _check_subspace(M: FinMetric, Mp: FinMetric, ids: Sequence[int]):
    if len(ids) != M.n or len(set(ids)) != M.n:
        raise NotSubspace("ids must list one distinct point of X' per point of X")
    for i, a in enumerate(ids):
        for j, b in enumerate(ids):
            if Mp.d[a][b] != M.d[i][j]:
                raise NotSubspace(f"d'({a},{b}) != d({i},{j})")


def extend_extremal(M: FinMetric, Mp: FinMetric, f: Sequence, ids: Sequence[int] | None = None,
                    max_iter: int = DEFAULT_MAX_ITER,
                    residual_cap: Fraction = DEFAULT_RESIDUAL_CAP) -> MetricFunction:
    """Carry an extremal function on X to one on a superspace X'.

    ``ids[i]`` is the point of ``Mp`` that plays the role of point ``i``
    of ``M`` (default: the first ``M.n`` points). The result restricts
    to ``f`` on X.
    """
    ids = list(range(M.n)) if ids is None else list(ids)
    _check_subspace(M, Mp, ids)
    if not is_extremal(M, f):
        raise NotExtremal("extend_extremal expects an extremal function")
    ext = tuple(Fraction(min(f[i] + Mp.d[a][y] for i, a in enumerate(ids))) for y in range(Mp.n))
    return p_map(Mp, ext, max_iter, residual_cap).result


@dataclass(frozen=True)
class RestrictionReport:
    hypothesis_holds: bool
    witness: tuple | None
    verified: bool | None = None
    mismatches: tuple = ()


def restrict_hull_check(Mp: FinMetric, X_ids: Sequence[int], budget: int | None = None) -> RestrictionReport:
    """Test whether every cone of ``Mp`` meets ``X``; if so, confirm on the hulls.

    The confirmation restricts every hull vertex of ``Mp`` to ``X`` and
    extends every hull vertex of ``X`` back, checking extremality on both
    sides and that sup distances between all these points are preserved.
    (Vertex sets themselves need not correspond: the cell structures of
    the two hulls can differ.) It runs only for integer valued metrics.
    """
    from .cells import DEFAULT_BUDGET, enumerate_vertices

    X = sorted(set(X_ids))
    if not X:
        raise EmptySubset("X must be non-empty")
    Xset = set(X)
    for x in range(Mp.n):
        for y in range(Mp.n):
            if not cone(Mp, x, y) & Xset:
                return RestrictionReport(False, (x, y))
    if not Mp.integer_valued:
        return RestrictionReport(True, None, None)
    M = Mp.submetric(X)
    budget = DEFAULT_BUDGET if budget is None else budget
    big = enumerate_vertices(Mp, budget=budget)
    small = enumerate_vertices(M, budget=budget)
    mismatches = []
    restricted = [tuple(v[i] for i in X) for v in big]
    for k, r in enumerate(restricted):
        if not is_extremal(M, r):
            mismatches.append(("restriction-not-extremal", k))
    lifted = [extend_extremal(M, Mp, g, X) for g in small]
    for k, (g, h) in enumerate(zip(small, lifted)):
        if tuple(h[i] for i in X) != g or not is_extremal(Mp, h):
            mismatches.append(("extension-mismatch", k))
    points_big = list(big) + lifted
    points_small = restricted + list(small)
    for i in range(len(points_big)):
        for j in range(i + 1, len(points_big)):
            if sup_distance(points_big[i], points_big[j]) != sup_distance(points_small[i], points_small[j]):
                mismatches.append(("distance", i, j))
    return RestrictionReport(True, None, not mismatches, tuple(mismatches))
