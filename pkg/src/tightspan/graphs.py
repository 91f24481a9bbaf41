"""Graph metrics, interval stability, cone types and hyperbolicity.

Also the generators for the example families used throughout the
package: hypercubes, cycles, paths, complete graphs, balls in Z^n and in
free groups, and chained cubes.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import BudgetExceeded, Disconnected, NotIntegerMetric, StabilityHypothesisFails
from .metric import FinMetric, cone, gromov_product, interval, validate_metric

DEFAULT_GENERATOR_BUDGET = 5000


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple
    labels: tuple | None = None

    @classmethod
    def from_edges(cls, n, edges, labels=None):
        clean = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"loop at vertex {a}; graphs must be simple")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a},{b}) leaves the vertex range")
            clean.add((min(a, b), max(a, b)))
        return cls(n, tuple(sorted(clean)), tuple(labels) if labels is not None else None)

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(a) for a in adj]


def graph_metric(G: Graph) -> FinMetric:
    """All-pairs BFS distances of a connected graph.

    A connected graph metric is discretely geodesic by construction (every
    shortest path is a discrete geodesic).
    """
    adj = G.adjacency()
    rows = []
    for s in range(G.n):
        dist = [-1] * G.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if -1 in dist:
            raise Disconnected(f"vertex {dist.index(-1)} is not reachable from {s}")
        rows.append(dist)
    return validate_metric(rows, G.labels)


def discretely_geodesic(M: FinMetric) -> bool:
    """Integer valued, and each pair at distance k > 1 has a point one step along."""
    if not M.integer_valued:
        return False
    d, n = M.d, M.n
    for x in range(n):
        for y in range(n):
            if d[x][y] > 1 and not any(d[x][v] == 1 and d[v][y] == d[x][y] - 1 for v in range(n)):
                return False
    return True


def _int_array(M: FinMetric):
    if not M.integer_valued:
        raise NotIntegerMetric("this check needs an integer valued metric")
    return np.array(M.d, dtype=np.int64)


# --------------------------------------------------------------------------
# interval stability


@dataclass(frozen=True)
class StabilityReport:
    beta_checked: int
    holds: bool
    witness: tuple | None   # (x, y, y2, v): v in I(x,y) has no point of I(x,y2) within beta
    required: int           # least beta that would pass on the checked triples
    triples_checked: int


@dataclass(frozen=True)
class Interior:
    """Restrict stability checks to triples far from the boundary of a ball."""

    center: int
    radius: int

    def keeps(self, D, x, y, y2, Ixy, Ixy2):
        reach = self.radius - max(D[x, y], D[x, y2])
        pts = Ixy | Ixy2
        return bool(np.all(D[self.center, pts] <= reach))


def _stability_scan(M: FinMetric, interior: Interior | None = None):
    D = _int_array(M)
    n = M.n
    big = np.iinfo(np.int64).max // 4
    worst, witness, count = 0, None, 0
    adj_pairs = [(y, y2) for y in range(n) for y2 in range(n) if D[y, y2] == 1]
    for x in range(n):
        mask = (D[x][None, :] + D) == D[x][:, None]   # mask[y, v]: v in I(x, y)
        near = np.empty((n, n), dtype=np.int64)        # near[y2, v] = d(v, I(x, y2))
        for y2 in range(n):
            near[y2] = np.where(mask[y2][None, :], D, big).min(axis=1)
        for y, y2 in adj_pairs:
            if interior is not None and not interior.keeps(D, x, y, y2, mask[y], mask[y2]):
                continue
            count += 1
            vals = np.where(mask[y], near[y2], -1)
            v = int(vals.argmax())
            if vals[v] > worst:
                worst, witness = int(vals[v]), (x, y, y2, v)
    return worst, witness, count


def check_stable_intervals(M: FinMetric, beta: int, interior: Interior | None = None) -> StabilityReport:
    """Exhaustive check of β-stability over all triples with d(y, y') = 1.

    Both orders of each adjacent pair are scanned, which covers the two
    halves of the Hausdorff distance.
    """
    worst, witness, count = _stability_scan(M, interior)
    holds = worst <= beta
    if holds:
        witness = None
    else:
        # report a triple that fails at this beta, not just the worst one
        witness = _first_failure(M, beta, interior) or witness
    return StabilityReport(beta, holds, witness, worst, count)


def _first_failure(M, beta, interior):
    D = _int_array(M)
    n = M.n
    for x in range(n):
        for y in range(n):
            for y2 in range(n):
                if D[y, y2] != 1:
                    continue
                Ixy = interval(M, x, y)
                Ixy2 = interval(M, x, y2)
                if interior is not None:
                    m1 = np.zeros(n, bool)
                    m1[list(Ixy)] = True
                    m2 = np.zeros(n, bool)
                    m2[list(Ixy2)] = True
                    if not interior.keeps(D, x, y, y2, m1, m2):
                        continue
                for v in sorted(Ixy):
                    if min(D[v, w] for w in Ixy2) > beta:
                        return (x, y, y2, v)
    return None


def min_beta(M: FinMetric, interior: Interior | None = None) -> int:
    """Least β for which the space has β-stable intervals."""
    return _stability_scan(M, interior)[0]


# --------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ConeTypeTable:
    apex: int
    beta: int
    cones: tuple          # distinct cones C(x, apex), as sorted tuples
    f_classes: tuple      # distinct restrictions u -> d(x,u) - d(x,apex) on B(apex, beta)
    classes_determine_cones: bool  # equal restrictions always gave equal cones

    @property
    def count(self):
        return len(self.cones)


def cone_types(M: FinMetric, v: int, beta: int) -> ConeTypeTable:
    """Distinct cones at apex ``v`` and the local data that should predict them."""
    d = M.d
    ball = [u for u in range(M.n) if d[v][u] <= beta]
    cone_of, fclass_of = {}, {}
    for x in range(M.n):
        cone_of[x] = tuple(sorted(cone(M, x, v)))
        fclass_of[x] = tuple(d[x][u] - d[x][v] for u in ball)
    by_class = {}
    consistent = True
    for x in range(M.n):
        prev = by_class.setdefault(fclass_of[x], cone_of[x])
        if prev != cone_of[x]:
            consistent = False
    cones = tuple(sorted(set(cone_of.values())))
    classes = tuple(sorted(set(fclass_of.values())))
    return ConeTypeTable(v, beta, cones, classes, consistent)


def cone_count(M: FinMetric, v: int) -> int:
    return len({cone(M, x, v) for x in range(M.n)})


# --------------------------------------------------------------------------
# hyperbolicity


def delta_hyperbolicity(M: FinMetric) -> Fraction:
    """Least δ with d(w,x) + d(y,z) <= max(d(w,y) + d(x,z), d(x,y) + d(w,z)) + δ.

    Exhaustive over ordered quadruples; rational metrics are scaled to
    integers first, so the result is exact.
    """
    n = M.n
    if n == 0:
        return Fraction(0)
    scale = lcm(*(Fraction(v).denominator for row in M.d for v in row))
    D = np.array([[int(Fraction(v) * scale) for v in row] for row in M.d], dtype=np.int64)
    worst = 0
    for w in range(n):
        # axes: x, y, z
        s1 = D[w][:, None, None] + D[None, :, :]            # d(w,x) + d(y,z)
        s2 = D[w][None, :, None] + D[:, None, :]            # d(w,y) + d(x,z)
        s3 = D[:, :, None] + D[w][None, None, :]            # d(x,y) + d(w,z)
        val = int((s1 - np.maximum(s2, s3)).max())
        worst = max(worst, val)
    return Fraction(worst, scale)


def interval_point_near(M: FinMetric, x: int, y: int, z: int, beta: int) -> int:
    """A point v of I(x, y) with d(z, v) <= 2β(x|y)_z, found by walking.

    Follows the inductive argument: walk a discrete geodesic from the
    current anchor towards ``y``, find the last point ``k`` that keeps the
    anchor in I(x, γ(k)), and move the anchor to a point of I(x, γ(k+1))
    within β. Each move lowers 2(x|y) at the anchor by at least one.
    """
    if not M.integer_valued:
        raise NotIntegerMetric("needs a discretely geodesic metric")
    d = M.d
    anchor = z
    while gromov_product(M, x, y, anchor) > 0:
        path = _geodesic(M, anchor, y)
        k = max(i for i, p in enumerate(path) if anchor in interval(M, x, p))
        if k + 1 >= len(path):
            raise AssertionError("anchor already lies on a geodesic to y")
        y1 = path[k + 1]
        options = [u for u in sorted(interval(M, x, y1)) if d[anchor][u] <= beta]
        if not options:
            raise StabilityHypothesisFails(f"no point of I({x},{y1}) within {beta} of {anchor}")
        anchor = min(options, key=lambda u: (gromov_product(M, x, y, u), d[anchor][u], u))
    bound = beta * 2 * gromov_product(M, x, y, z)
    if d[z][anchor] > bound:
        raise StabilityHypothesisFails(f"walk ended {d[z][anchor]} from {z}, bound {bound}")
    return anchor


def _geodesic(M: FinMetric, a: int, b: int) -> list:
    d = M.d
    path = [a]
    while path[-1] != b:
        cur = path[-1]
        step = next((v for v in range(M.n) if d[cur][v] == 1 and d[v][b] == d[cur][b] - 1), None)
        if step is None:
            raise NotIntegerMetric("metric is not discretely geodesic")
        path.append(step)
    return path


# --------------------------------------------------------------------------
# generators

FAMILIES = ("zn_ball", "hypercube", "cycle", "free_ball", "chained_cubes", "path", "complete")


def _check_budget(size, budget):
    if size > budget:
        raise BudgetExceeded(f"generator would build {size} vertices, budget is {budget}")


def hypercube(n: int) -> Graph:
    pts = list(itertools.product((0, 1), repeat=n))
    idx = {p: i for i, p in enumerate(pts)}
    edges = [(idx[p], idx[p[:k] + (1 - p[k],) + p[k + 1:]]) for p in pts for k in range(n) if p[k] == 0]
    return Graph.from_edges(len(pts), edges, ["".join(map(str, p)) for p in pts])


def cycle(m: int) -> Graph:
    if m < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(m, [(i, (i + 1) % m) for i in range(m)], [f"c{i}" for i in range(m)])


def path(m: int) -> Graph:
    return Graph.from_edges(m, [(i, i + 1) for i in range(m - 1)], [f"p{i}" for i in range(m)])


def complete(m: int) -> Graph:
    return Graph.from_edges(m, list(itertools.combinations(range(m), 2)), [f"k{i}" for i in range(m)])


def zn_ball(n: int, R: int, norm: str = "l1") -> Graph:
    """Ball of radius R about 0 in Z^n with the l1 or l∞ word metric."""
    if norm not in ("l1", "linf"):
        raise ValueError("norm must be 'l1' or 'linf'")
    pts = [p for p in itertools.product(range(-R, R + 1), repeat=n)
           if (sum(map(abs, p)) if norm == "l1" else max(map(abs, p), default=0)) <= R]
    pts.sort(key=lambda p: ((sum(map(abs, p)) if norm == "l1" else max(map(abs, p), default=0)), p))
    idx = {p: i for i, p in enumerate(pts)}
    if norm == "l1":
        gens = [tuple(s if k == j else 0 for k in range(n)) for j in range(n) for s in (1, -1)]
    else:
        gens = [g for g in itertools.product((-1, 0, 1), repeat=n) if any(g)]
    edges = set()
    for p in pts:
        for g in gens:
            q = tuple(a + b for a, b in zip(p, g))
            if q in idx:
                edges.add((idx[p], idx[q]))
    return Graph.from_edges(len(pts), edges, [",".join(map(str, p)) for p in pts])


def free_ball(rank: int, R: int) -> Graph:
    """Ball of radius R in the free group on ``rank`` generators (reduced words)."""
    letters = [c for i in range(rank) for c in (chr(ord("a") + i), chr(ord("A") + i))]
    inverse = {c: (c.upper() if c.islower() else c.lower()) for c in letters}
    words = [""]
    frontier = [""]
    for _ in range(R):
        nxt = []
        for w in frontier:
            for c in letters:
                if not w or inverse[c] != w[-1]:
                    nxt.append(w + c)
        words.extend(nxt)
        frontier = nxt
    idx = {w: i for i, w in enumerate(words)}
    edges = [(idx[w[:-1]], idx[w]) for w in words if w]
    return Graph.from_edges(len(words), edges, [w or "1" for w in words])


def chained_cubes(N: int) -> Graph:
    """W_1, ..., W_N glued, the all-ones corner of W_k onto the origin of W_{k+1}."""
    edges, labels = [], []
    offset = 0
    prev_top = None
    for k in range(1, N + 1):
        cube = hypercube(k)
        ids = {}
        for i in range(cube.n):
            if i == 0 and prev_top is not None:
                ids[i] = prev_top
            else:
                ids[i] = offset
                labels.append(f"W{k}:{cube.labels[i]}")
                offset += 1
        edges.extend((ids[a], ids[b]) for a, b in cube.edges)
        prev_top = ids[cube.n - 1]
    return Graph.from_edges(offset, edges, labels)


def generate(family: str, *params, budget: int = DEFAULT_GENERATOR_BUDGET) -> Graph:
    """Build a named example family; see ``FAMILIES``."""
    ints = [int(p) for p in params if str(p).lstrip("-").isdigit()]
    if family == "hypercube":
        (n,) = ints
        _check_budget(2 ** n, budget)
        return hypercube(n)
    if family == "cycle":
        (m,) = ints
        _check_budget(m, budget)
        return cycle(m)
    if family == "path":
        (m,) = ints
        _check_budget(m, budget)
        return path(m)
    if family == "complete":
        (m,) = ints
        _check_budget(m, budget)
        return complete(m)
    if family == "zn_ball":
        n, R = ints[:2]
        norm = next((str(p) for p in params if str(p) in ("l1", "linf")), "l1")
        _check_budget((2 * R + 1) ** n, budget)
        return zn_ball(n, R, norm)
    if family == "free_ball":
        rank_, R = ints
        _check_budget(1 + 2 * rank_ * sum((2 * rank_ - 1) ** k for k in range(R)), budget)
        return free_ball(rank_, R)
    if family == "chained_cubes":
        (N,) = ints
        _check_budget(sum(2 ** k for k in range(1, N + 1)), budget)
        return chained_cubes(N)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def parse_generator(spec: str, budget: int = DEFAULT_GENERATOR_BUDGET) -> Graph:
    """``"family:p1,p2,..."`` as used on the command line, e.g. ``hypercube:3``."""
    family, _, rest = spec.partition(":")
    params = [p.strip() for p in rest.split(",") if p.strip()] if rest else []
    return generate(family.strip(), *params, budget=budget)
