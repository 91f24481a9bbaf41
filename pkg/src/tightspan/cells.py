"""Polyhedral structure of the injective hull of an integer valued metric.

Cells are keyed by their admissible edge set ``A`` (pairs of points,
loops included, that are tight for every function in the cell). Vertices
are the rank-0 extremal functions; they take values in ½Z, so they are
found by an exhaustive search over doubled integer grids. Higher cells
come from closing the vertex equality graphs under intersection.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from .errors import (BudgetExceeded, NotAdmissible, NotCellular, NotExtremal,
                     NotIntegerMetric, ZeroDimensional)
from .metric import FinMetric, MetricFunction, is_extremal

DEFAULT_BUDGET = 10 ** 9

Pair = tuple  # (x, y) with x <= y


# --------------------------------------------------------------------------
# equality graphs and parity


def tight_pairs(M: FinMetric, f: Sequence) -> frozenset:
    d, n = M.d, M.n
    return frozenset((x, y) for x in range(n) for y in range(x, n) if f[x] + f[y] == d[x][y])


def equality_graph(M: FinMetric, f: Sequence) -> frozenset:
    """The set A(f) of tight pairs of an extremal function."""
    if not is_extremal(M, f):
        raise NotExtremal("equality_graph expects an extremal function")
    return tight_pairs(M, f)


class _ParityUnionFind:
    """Union-find that also tracks the parity of each node relative to its root."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.parity = [0] * n
        self.odd = [False] * n

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # path compression, accumulating parity from the top down
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        pa, pb = self.parity[a] if a != ra else 0, self.parity[b] if b != rb else 0
        if ra == rb:
            if pa == pb:
                self.odd[ra] = True
            return
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ 1
        self.odd[ra] = self.odd[ra] or self.odd[rb]


@dataclass(frozen=True)
class ParityPartition:
    components: tuple   # tuple of sorted point tuples, ordered by least point
    odd: tuple          # bool per component
    sides: tuple        # per component: (S_plus, S_minus) for even ones, None for odd
    rank: int

    @property
    def even_components(self):
        return [k for k, o in enumerate(self.odd) if not o]


def parity_analysis(A: Iterable[Pair], n_points: int) -> ParityPartition:
    """Split the points into A-components and classify each as odd or even.

    A component is odd when it carries an odd cycle (a loop counts as a
    cycle of length one). Even components come with their bipartition,
    the side holding the least point listed first. The rank is the number
    of even components.
    """
    A = list(A)
    uf = _ParityUnionFind(n_points)
    covered = set()
    for x, y in A:
        covered.update((x, y))
        if x == y:
            r = uf.find(x)
            uf.odd[r] = True
        else:
            uf.union(x, y)
    if len(covered) != n_points:
        missing = sorted(set(range(n_points)) - covered)
        raise NotAdmissible(f"points {missing} lie on no pair of A")
    groups = {}
    for x in range(n_points):
        groups.setdefault(uf.find(x), []).append(x)
    comps, odd, sides = [], [], []
    for root, members in sorted(groups.items(), key=lambda kv: kv[1][0]):
        comps.append(tuple(members))
        is_odd = uf.odd[root]
        odd.append(is_odd)
        if is_odd:
            sides.append(None)
        else:
            ref = uf.parity[members[0]] if members[0] != root else 0
            plus = tuple(v for v in members if (uf.parity[v] if v != root else 0) == ref)
            minus = tuple(v for v in members if (uf.parity[v] if v != root else 0) != ref)
            sides.append((plus, minus))
    return ParityPartition(tuple(comps), tuple(odd), tuple(sides), odd.count(False))


def rank(A: Iterable[Pair], n_points: int) -> int:
    return parity_analysis(A, n_points).rank


# --------------------------------------------------------------------------
# vertex enumeration


def grid_size(M: FinMetric) -> int:
    return prod(2 * M.eccentricity(x) + 1 for x in range(M.n))


def _vertex_search(D2, ecc2, order, first_values):
    """Depth-first search over doubled half-integer grids.

    Coordinates are filled in ``order``; each new value is confined to
    the window allowed by Δ(X) and 1-Lipschitz constraints against the
    values already placed. The final coordinate is forced by
    extremality. Yields doubled-integer vectors of rank-0 extremal
    functions, in lexicographic order of the search.
    """
    n = len(order)
    h = [0] * len(D2)
    out = []

    def leaf():
        # extremality: every point lies on a tight pair
        pairs = []
        for x in range(n):
            hx, dx = h[x], D2[x]
            hit = False
            for y in range(x, n):
                if hx + h[y] == dx[y]:
                    pairs.append((x, y))
                    hit = True
            if not hit and not any(h[y] + h[x] == D2[y][x] for y in range(x)):
                return
        if parity_analysis(pairs, n).rank == 0:
            out.append(tuple(h))

    def place(i):
        x = order[i]
        lo, hi = 0, ecc2[x]
        dx = D2[x]
        for j in range(i):
            y = order[j]
            hy, dxy = h[y], dx[y]
            if dxy - hy > lo:
                lo = dxy - hy
            if hy + dxy < hi:
                hi = hy + dxy
        if lo > hi:
            return
        if i == n - 1:
            # f(x) = max_y d(x,y) - f(y), with f(x) >= 0
            h[x] = lo
            leaf()
            return
        for v in range(lo, hi + 1):
            h[x] = v
            place(i + 1)

    x0 = order[0]
    for v in first_values:
        h[x0] = v
        if n == 1:
            h[x0] = 0
            if v == 0:
                leaf()
        else:
            place(1)
    return out


def _search_chunk(args):
    return _vertex_search(*args)


def _search_order(M: FinMetric):
    # Start at a most central point, then grow by nearest neighbours, so
    # each new coordinate is pinned by nearby values.
    d, n = M.d, M.n
    start = min(range(n), key=lambda x: (M.eccentricity(x), x))
    order, rest = [start], set(range(n)) - {start}
    while rest:
        nxt = min(rest, key=lambda y: (min(d[y][z] for z in order), -sum(d[y][z] == 1 for z in order), y))
        order.append(nxt)
        rest.remove(nxt)
    return order


def enumerate_vertices(M: FinMetric, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list:
    """All vertices of the hull: extremal ½Z-valued functions of rank 0.

    The search space is the grid ``0 <= f(x) <= ecc(x)`` in steps of ½;
    :class:`BudgetExceeded` is raised when its size exceeds ``budget``.
    With ``jobs > 1`` the grid is split by the first coordinate and the
    chunks are searched in worker processes; results are merged in a
    fixed order, so the output does not depend on ``jobs``.
    """
    if not M.integer_valued:
        raise NotIntegerMetric("vertex enumeration needs an integer valued metric")
    size = grid_size(M)
    if size > budget:
        raise BudgetExceeded(f"grid has {size} candidate functions, budget is {budget}")
    n = M.n
    D2 = [[2 * v for v in row] for row in M.d]
    ecc2 = [2 * M.eccentricity(x) for x in range(n)]
    order = _search_order(M)
    values = list(range(ecc2[order[0]] + 1))
    if jobs > 1 and len(values) > 1:
        chunks = [(D2, ecc2, order, [v]) for v in values]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = [h for part in pool.map(_search_chunk, chunks) for h in part]
    else:
        found = _vertex_search(D2, ecc2, order, values)
    found = sorted(set(found))
    return [tuple(Fraction(v, 2) for v in h) for h in found]


# --------------------------------------------------------------------------
# the complex


@dataclass(frozen=True)
class Cell:
    admissible_set: frozenset
    vertex_ids: tuple
    dim: int
    representative: MetricFunction


@dataclass
class HullComplex:
    metric: FinMetric
    vertices: list
    cells: list
    face_relation: list = field(default_factory=list)   # (child, parent), child a proper face
    isometry_class: list = field(default_factory=list)  # label per cell

    def cells_of_dim(self, k):
        return [i for i, c in enumerate(self.cells) if c.dim == k]

    def f_vector(self):
        top = max((c.dim for c in self.cells), default=-1)
        return [len(self.cells_of_dim(k)) for k in range(top + 1)]

    def vertex_cell(self, v):
        """Index of the 0-cell of vertex ``v``."""
        return next(i for i, c in enumerate(self.cells) if c.dim == 0 and c.vertex_ids == (v,))

    def maximal_cells(self):
        has_parent = {c for c, _ in self.face_relation}
        return [i for i in range(len(self.cells)) if i not in has_parent]

    def cell_index(self):
        return {c.admissible_set: i for i, c in enumerate(self.cells)}


def barycenter(functions: Sequence[Sequence]) -> MetricFunction:
    k = len(functions)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*functions))


def _pairs_of(M: FinMetric):
    n = M.n
    return [(x, y) for x in range(n) for y in range(x, n)]


def build_complex(M: FinMetric, budget: int = DEFAULT_BUDGET, jobs: int = 1,
                  check: bool = True, classify: bool = True) -> HullComplex:
    """Vertices, cells, face poset and isometry classes of the hull.

    Every cell is ``P(A)`` for an admissible ``A``; these are exactly the
    intersections of vertex equality graphs that still cover every point.
    With ``check`` the construction is verified: each cell's barycenter
    has equality graph exactly ``A``, and two cells meet in a cell or
    not at all.
    """
    vertices = enumerate_vertices(M, budget=budget, jobs=jobs)
    n = M.n
    pairs = _pairs_of(M)
    bit = {p: 1 << i for i, p in enumerate(pairs)}
    cover = [(1 << x) | (1 << y) for x, y in pairs]
    full = (1 << n) - 1

    def mask_of(A):
        return sum(bit[p] for p in A)

    def covers(mask):
        acc, i = 0, 0
        while mask:
            if mask & 1:
                acc |= cover[i]
                if acc == full:
                    return True
            mask >>= 1
            i += 1
        return acc == full

    vmasks = [mask_of(tight_pairs(M, v)) for v in vertices]
    seen = set(vmasks)
    queue = list(dict.fromkeys(vmasks))
    while queue:
        a = queue.pop()
        for m in vmasks:
            c = a & m
            if c not in seen and covers(c):
                seen.add(c)
                queue.append(c)

    raw = []
    for mask in seen:
        vids = tuple(i for i, m in enumerate(vmasks) if mask & m == mask)
        A = frozenset(p for p in pairs if mask & bit[p])
        dim = parity_analysis(A, n).rank
        raw.append((dim, vids, tuple(sorted(A)), A, mask))
    raw.sort(key=lambda r: (r[0], r[1], r[2]))
    cells = [Cell(A, vids, dim, barycenter([vertices[i] for i in vids]))
             for dim, vids, _, A, _ in raw]
    masks = [r[4] for r in raw]
    faces = [(i, j) for i in range(len(cells)) for j in range(len(cells))
             if i != j and masks[i] & masks[j] == masks[j]]
    cx = HullComplex(M, vertices, cells, faces)
    if check:
        _check_complex(cx)
    if classify:
        cx.isometry_class = isometry_classes(cx)
    return cx


def _check_complex(cx: HullComplex):
    M = cx.metric
    by_vertices = {}
    for i, c in enumerate(cx.cells):
        if tight_pairs(M, c.representative) != c.admissible_set:
            raise AssertionError(f"cell {i}: barycenter does not lie in the relative interior")
        if c.dim == 0 and len(c.vertex_ids) != 1:
            raise AssertionError(f"cell {i}: rank 0 cell with {len(c.vertex_ids)} vertices")
        by_vertices[frozenset(c.vertex_ids)] = i
    if sorted(v for c in cx.cells if c.dim == 0 for v in c.vertex_ids) != list(range(len(cx.vertices))):
        raise AssertionError("0-cells do not match the vertex list")
    vsets = [frozenset(c.vertex_ids) for c in cx.cells]
    for i in range(len(vsets)):
        for j in range(i + 1, len(vsets)):
            common = vsets[i] & vsets[j]
            if common and common not in by_vertices:
                raise AssertionError(f"cells {i} and {j} do not meet in a cell")


# --------------------------------------------------------------------------
# polytope systems and isometry types


@dataclass(frozen=True)
class PolytopeSystem:
    """Inequalities cutting out a cell in coordinates centred at ``offset``.

    Coordinates are ``t_k = g(x_k) - offset(x_k)`` for the reference
    points ``x_k`` (one per even component). ``cbar[(k, s)]`` bounds
    ``s*t_k`` from below and ``cpair[(k, s, l, u)]`` bounds
    ``s*t_k + u*t_l`` from below (``k < l``, signs in {1, -1}).
    """

    n: int
    reference_points: tuple
    offset: MetricFunction
    cbar: dict
    cpair: dict

    def inequalities(self):
        """All ``2n²`` rows as ``(coefficient vector, constant)``."""
        rows = []
        for (k, s), c in sorted(self.cbar.items()):
            u = [0] * self.n
            u[k] = s
            rows.append((tuple(u), c))
        for (k, s, l, t), c in sorted(self.cpair.items()):
            u = [0] * self.n
            u[k], u[l] = s, t
            rows.append((tuple(u), c))
        return rows

    def contains(self, t) -> bool:
        return all(sum(a * b for a, b in zip(u, t)) >= c for u, c in self.inequalities())

    def tight_rows(self, t):
        return [u for u, c in self.inequalities() if sum(a * b for a, b in zip(u, t)) == c]


def cell_coordinates(cx: HullComplex, i: int, system: PolytopeSystem | None = None) -> list:
    """Vertices of cell ``i`` mapped into the cell's own l∞^n chart."""
    system = system or cell_system(cx.metric, cx.cells[i])
    refs, off = system.reference_points, system.offset
    return [tuple(cx.vertices[v][x] - off[x] for x in refs) for v in cx.cells[i].vertex_ids]


def cell_system(M: FinMetric, cell: Cell, vertices: Sequence | None = None) -> PolytopeSystem:
    """Build the ``2n²`` inequalities describing a cell of dimension ``n >= 1``.

    The offset is the cell's representative (its barycenter). When the
    cell's vertices are supplied they are checked against the system:
    each must satisfy it and be a vertex of the polytope it defines.
    """
    if cell.dim < 1:
        raise ZeroDimensional("a vertex has no polytope system")
    f, d = cell.representative, M.d
    part = parity_analysis(cell.admissible_set, M.n)
    even = part.even_components
    sides = [part.sides[k] for k in even]
    refs = tuple(s[0][0] for s in sides)
    in_comp = set(v for k in even for v in part.components[k])
    X0 = [v for v in range(M.n) if v not in in_comp]

    def slack(x, y):
        return d[x][y] - f[x] - f[y]

    def side(k, s):
        return sides[k][0] if s == 1 else sides[k][1]

    n = len(refs)
    cbar, cpair = {}, {}
    for k in range(n):
        for s in (1, -1):
            S = side(k, s)
            c = max(slack(x, y) for x in S for y in S) / 2
            if X0:
                c = max(c, max(slack(x, y) for x in S for y in X0))
            cbar[(k, s)] = Fraction(c)
    for k, l in itertools.combinations(range(n), 2):
        for s in (1, -1):
            for t in (1, -1):
                cpair[(k, s, l, t)] = Fraction(max(slack(x, y) for x in side(k, s) for y in side(l, t)))
    system = PolytopeSystem(n, refs, f, cbar, cpair)
    if any(c >= 0 for c in itertools.chain(cbar.values(), cpair.values())):
        raise AssertionError("polytope constants must be strictly negative")
    if vertices is not None:
        for v in cell.vertex_ids:
            t = tuple(vertices[v][x] - f[x] for x in refs)
            if not system.contains(t):
                raise AssertionError(f"vertex {v} violates the cell system")
            if _matrix_rank(system.tight_rows(t)) != n:
                raise AssertionError(f"vertex {v} is not a vertex of the cell polytope")
    return system


def _matrix_rank(rows) -> int:
    rows = [[Fraction(a) for a in r] for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                factor = rows[r][c] / rows[rank][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _directions(n):
    dirs = []
    for k in range(n):
        for s in (1, -1):
            u = [0] * n
            u[k] = s
            dirs.append(tuple(u))
    for k, l in itertools.combinations(range(n), 2):
        for s in (1, -1):
            for t in (1, -1):
                u = [0] * n
                u[k], u[l] = s, t
                dirs.append(tuple(u))
    return dirs


def canonical_form(points: Sequence[Sequence]) -> tuple:
    """Isometry invariant of a full-dimensional polytope in l∞^n.

    The polytope is centred at the barycenter of ``points`` and described
    by its support values in the ``2n²`` directions ``±e_k`` and
    ``±e_k ± e_l``; the invariant is the lexicographically least such
    vector over all signed coordinate permutations.
    """
    n = len(points[0])
    c = barycenter(points)
    pts = [tuple(p[k] - c[k] for k in range(n)) for p in points]
    dirs = _directions(n)
    best = None
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            moved = [tuple(signs[k] * p[perm[k]] for k in range(n)) for p in pts]
            key = tuple(min(sum(a * b for a, b in zip(u, p)) for p in moved) for u in dirs)
            if best is None or key < best:
                best = key
    return (n,) + best


def cell_canonical_form(cx: HullComplex, i: int) -> tuple:
    cell = cx.cells[i]
    if cell.dim == 0:
        return (0,)
    return canonical_form(cell_coordinates(cx, i))


def isometry_classes(cx: HullComplex) -> list:
    """Label cells ``"<dim>.<k>"`` so that equal labels mean isometric cells."""
    forms = [cell_canonical_form(cx, i) for i in range(len(cx.cells))]
    labels = []
    per_dim = {}
    for i, form in enumerate(forms):
        per_dim.setdefault(cx.cells[i].dim, set()).add(form)
    index = {}
    for dim, fs in per_dim.items():
        for k, form in enumerate(sorted(fs)):
            index[form] = f"{dim}.{k}"
    labels = [index[f] for f in forms]
    return labels


def class_counts(cx: HullComplex) -> dict:
    counts = {}
    for c, label in zip(cx.cells, cx.isometry_class):
        counts.setdefault(c.dim, set()).add(label)
    return {dim: len(v) for dim, v in sorted(counts.items())}


def edge_length(cx: HullComplex, i: int) -> Fraction:
    a, b = cx.cells[i].vertex_ids
    va, vb = cx.vertices[a], cx.vertices[b]
    return max(abs(p - q) for p, q in zip(va, vb))


def hull_dimension(cx: HullComplex) -> int:
    return max(c.dim for c in cx.cells)


# --------------------------------------------------------------------------
# barycentric subdivision


@dataclass(frozen=True)
class SimplicialComplex:
    barycenters: tuple       # one per cell of the source complex
    simplices: tuple         # chains of cell ids, smallest cell first

    def of_dim(self, k):
        return [s for s in self.simplices if len(s) == k + 1]


def barycentric_subdivision(cx: HullComplex) -> SimplicialComplex:
    """Simplices are the strictly increasing chains of cells."""
    up = {i: [] for i in range(len(cx.cells))}
    for child, parent in cx.face_relation:
        up[child].append(parent)
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        for nxt in sorted(up[chain[-1]]):
            extend(chain + [nxt])

    for i in range(len(cx.cells)):
        extend([i])
    chains.sort(key=lambda s: (len(s), s))
    return SimplicialComplex(tuple(c.representative for c in cx.cells), tuple(chains))


def check_cellular(cx: HullComplex, perm: Sequence[int]) -> list:
    """Image of every cell under the point permutation ``perm``.

    Raises :class:`NotCellular` if some cell is not mapped onto a cell.
    """
    index = cx.cell_index()
    images = []
    for i, c in enumerate(cx.cells):
        img = frozenset(tuple(sorted((perm[x], perm[y]))) for x, y in c.admissible_set)
        if img not in index:
            raise NotCellular(f"cell {i} is not mapped onto a cell")
        images.append(index[img])
    return images
