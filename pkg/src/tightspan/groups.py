"""Isometry groups of finite spaces and their action on the hull."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cells import HullComplex, barycentric_subdivision, check_cellular
from .errors import NotAGroup, NotCellular
from .metric import FinMetric

Isometry = tuple  # perm[x] is the image of x


def isometry_group(M: FinMetric) -> list:
    """All distance preserving permutations, sorted lexicographically."""
    d, n = M.d, M.n
    profile = [tuple(sorted(row)) for row in d]
    out = []
    img = [None] * n
    used = [False] * n

    def place(x):
        if x == n:
            out.append(tuple(img))
            return
        for y in range(n):
            if used[y] or profile[y] != profile[x]:
                continue
            if all(d[img[w]][y] == d[w][x] for w in range(x)):
                img[x], used[y] = y, True
                place(x + 1)
                used[y] = False
        img[x] = None

    place(0)
    return out


def compose(a: Sequence[int], b: Sequence[int]) -> Isometry:
    """``a ∘ b``: apply ``b`` first."""
    return tuple(a[b[x]] for x in range(len(b)))


def inverse(a: Sequence[int]) -> Isometry:
    inv = [0] * len(a)
    for x, y in enumerate(a):
        inv[y] = x
    return tuple(inv)


def identity(n: int) -> Isometry:
    return tuple(range(n))


def induced_map(L: Sequence[int], f: Sequence) -> tuple:
    """``f ∘ L⁻¹``, the action of ``L`` on functions (so d_v goes to d_{L(v)})."""
    g = [None] * len(f)
    for x, y in enumerate(L):
        g[y] = f[x]
    return tuple(g)


def check_isometry(M: FinMetric, L: Sequence[int]) -> bool:
    n = M.n
    if sorted(L) != list(range(n)):
        return False
    return all(M.d[L[x]][L[y]] == M.d[x][y] for x in range(n) for y in range(n))


def check_group(M: FinMetric, elements: Sequence[Sequence[int]]) -> list:
    """Validate a subgroup given as a list of permutations; returns it deduplicated."""
    G = sorted(set(tuple(g) for g in elements))
    if not G:
        raise NotAGroup("the subgroup is empty")
    for g in G:
        if len(g) != M.n or not check_isometry(M, g):
            raise NotAGroup(f"{list(g)} is not an isometry of the space")
    members = set(G)
    if identity(M.n) not in members:
        raise NotAGroup("identity missing")
    for g in G:
        if inverse(g) not in members:
            raise NotAGroup(f"inverse of {list(g)} missing")
        for h in G:
            if compose(g, h) not in members:
                raise NotAGroup(f"product of {list(g)} and {list(h)} missing")
    return G


def closure(gens: Sequence[Sequence[int]], n: int, cap: int | None = None) -> list | None:
    """Group generated by ``gens``; None once it grows past ``cap`` elements."""
    e = identity(n)
    members = {e}
    frontier = [e]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(g, a)
                if b not in members:
                    members.add(b)
                    if cap is not None and len(members) > cap:
                        return None
                    nxt.append(b)
        frontier = nxt
    return sorted(members)


def subgroups(group: Sequence[Sequence[int]], max_order: int = 12) -> list:
    """Every subgroup of order at most ``max_order``.

    A subgroup H is reached by adjoining its elements one at a time, and
    all intermediate groups lie in H, so a search that discards anything
    larger than ``max_order`` still finds all of them.
    """
    group = [tuple(g) for g in group]
    n = len(group[0])
    start = (identity(n),)
    found = {start}
    queue = [start]
    while queue:
        H = queue.pop()
        Hset = set(H)
        for g in group:
            if g in Hset:
                continue
            K = closure(list(H) + [g], n, cap=max_order)
            if K is None:
                continue
            K = tuple(K)
            if K not in found:
                found.add(K)
                queue.append(K)
    return sorted(found, key=lambda H: (len(H), H))


def orbits(elements: Sequence[Sequence[int]], n: int) -> list:
    seen = [None] * n
    out = []
    for x in range(n):
        if seen[x] is None:
            orb = sorted({g[x] for g in elements})
            for y in orb:
                seen[y] = len(out)
            out.append(orb)
    return out


def fixed_point_function(M: FinMetric, subgroup: Sequence[Sequence[int]]) -> tuple:
    """An extremal function that every element of ``subgroup`` fixes.

    Work on the orbit space with D(o, o') the largest distance between the
    two orbits (D(o, o) may be positive), take a minimal F in Δ for D by
    one greedy pass starting from F(o) = max D(o, ·), and pull F back to
    the points.
    """
    G = check_group(M, subgroup)
    d = M.d
    orbs = orbits(G, M.n)
    k = len(orbs)
    D = [[max(d[x][y] for x in a for y in b) for b in orbs] for a in orbs]
    F = [Fraction(max(row)) for row in D]
    for o in range(k):
        F[o] = max([Fraction(D[o][o], 2)] + [D[o][p] - F[p] for p in range(k) if p != o])
    which = {x: i for i, orb in enumerate(orbs) for x in orb}
    return tuple(F[which[x]] for x in range(M.n))


@dataclass(frozen=True)
class ActionReport:
    group_order: int
    cell_orbits: dict          # dim -> list of orbits (sorted cell ids)
    stabilizer_orders: dict    # representative cell id -> order of its stabilizer
    simplex_orbits: dict       # dim -> number of orbits of subdivision simplices
    simplicial_rigidity: bool

    def to_json(self):
        return {
            "group_order": self.group_order,
            "cell_orbits": {str(k): v for k, v in sorted(self.cell_orbits.items())},
            "stabilizer_orders": {str(k): v for k, v in sorted(self.stabilizer_orders.items())},
            "simplex_orbits": {str(k): v for k, v in sorted(self.simplex_orbits.items())},
            "simplicial_rigidity": self.simplicial_rigidity,
        }


def act_on_complex(cx: HullComplex, group: Sequence[Sequence[int]]) -> ActionReport:
    """Orbits and stabilizers of ``group`` acting on cells and on the subdivision.

    Each element must carry every cell onto a cell (checked; a failure
    raises :class:`NotCellular`). A simplex of the subdivision is a chain
    of cells of increasing dimension, so fixing it setwise fixes each of
    its cells; rigidity then asks that each of those barycenters is fixed.
    """
    G = check_group(cx.metric, group)
    images = [check_cellular(cx, g) for g in G]
    for g, img in zip(G, images):
        for i, c in enumerate(cx.cells):
            moved = tuple(sorted(cx.vertices.index(induced_map(g, cx.vertices[v])) for v in c.vertex_ids))
            if moved != cx.cells[img[i]].vertex_ids:
                raise NotCellular(f"vertices of cell {i} do not follow the induced map")

    cell_orbits, stab = {}, {}
    seen = set()
    for i, c in enumerate(cx.cells):
        if i in seen:
            continue
        orb = sorted({img[i] for img in images})
        seen.update(orb)
        cell_orbits.setdefault(c.dim, []).append(orb)
        stab[i] = sum(1 for img in images if img[i] == i)
        if len(orb) * stab[i] != len(G):
            raise AssertionError("orbit-stabilizer count failed")

    sub = barycentric_subdivision(cx)
    simplex_set = set(sub.simplices)
    simplex_orbits = {}
    done = set()
    rigid = True
    for s in sub.simplices:
        if s in done:
            continue
        orb = set()
        for g, img in zip(G, images):
            t = tuple(sorted((img[i] for i in s), key=lambda i: cx.cells[i].dim))
            if t not in simplex_set:
                raise NotCellular(f"simplex {s} is not mapped to a simplex")
            orb.add(t)
            if set(t) == set(s):
                for i in s:
                    b = sub.barycenters[i]
                    if induced_map(g, b) != b:
                        rigid = False
        done.update(orb)
        simplex_orbits[len(s) - 1] = simplex_orbits.get(len(s) - 1, 0) + 1
    return ActionReport(len(G), cell_orbits, stab, simplex_orbits, rigid)
