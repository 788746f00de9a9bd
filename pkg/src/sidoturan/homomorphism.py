"""Exact homomorphism, injective-homomorphism and copy counting.

All counts are exact Python integers (or Fractions for weighted targets).
Searches run a backtracking over a most-constrained-first vertex order of F,
drawing candidates from the (r-1)-subset co-occurrence index of the target
and pruning any partial edge whose image is not inside an edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Optional, Union

from .constructions import WeightedHypergraph, shadow_weighting
from .hypergraph import BudgetExceeded, Hypergraph, HypergraphError, automorphisms

DEFAULT_BUDGET = 10**9

GRAPHON = "graphon"
EDGE_INJECTIVE = "edge_injective"


@dataclass(frozen=True)
class DensityValue:
    """hom_count / base**exponent, kept exact."""

    hom_count: Union[int, Fraction]
    base: int
    exponent: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.hom_count) / Fraction(self.base) ** self.exponent

    @property
    def log_value(self) -> Optional[float]:
        if self.hom_count <= 0:
            return None
        h = Fraction(self.hom_count)
        return math.log(h.numerator) - math.log(h.denominator) - self.exponent * math.log(self.base)

    def __str__(self):
        v = self.value
        return f"{v.numerator}/{v.denominator}"


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit):
        self.limit = limit
        self.left = limit

    def tick(self, k=1):
        self.left -= k
        if self.left < 0:
            raise BudgetExceeded(f"search exceeded {self.limit} partial assignments")


def _check_uniformity(F, H):
    if F.r != H.r:
        raise HypergraphError(f"uniformity mismatch: F is {F.r}-uniform, target is {H.r}-uniform")


def _greedy_order(vertices, edges_of, deg, seed_vertex=None):
    """Order vertices so each next one shares the most edges with those already placed."""
    remaining = set(vertices)
    order = []
    placed = set()
    if seed_vertex is not None:
        order.append(seed_vertex)
        placed.add(seed_vertex)
        remaining.discard(seed_vertex)
    while remaining:
        def key(x):
            links = sum(len(placed.intersection(e)) for e in edges_of[x])
            return (-links, -deg[x], x)
        x = min(remaining, key=key)
        order.append(x)
        placed.add(x)
        remaining.discard(x)
    return order


# -- unweighted counting ---------------------------------------------------------


def _component_hom(F: Hypergraph, comp, H: Hypergraph, budget: _Budget) -> int:
    r = F.r
    deg = F.degrees
    comp_set = set(comp)
    edges = [e for e in F.edges if e[0] in comp_set]
    if not edges:
        return H.n
    core = [x for x in comp if deg[x] >= 2]
    if not core:
        # a lone edge whose vertices meet nothing else
        return math.factorial(r) * H.e
    edges_of = {x: [e for e in edges if x in e] for x in core}
    order = _greedy_order(core, edges_of, deg)
    pos = {x: i for i, x in enumerate(order)}

    sub_deg = H.subset_degree
    cooc = H.cooccurrence
    edge_set = H.edge_set
    fact = [math.factorial(i) for i in range(r + 1)]

    # per depth: edges touching the new vertex, as (assigned core vertices, kind, private count)
    checks = []
    anchors = []
    for d, x in enumerate(order):
        cs = []
        best_anchor = ()
        for e in edges_of[x]:
            core_part = [y for y in e if deg[y] >= 2]
            assigned = tuple(y for y in core_part if pos[y] <= d)
            before = tuple(y for y in assigned if pos[y] < d)
            if len(before) > len(best_anchor):
                best_anchor = before
            npriv = r - len(core_part)
            if len(assigned) == len(core_part):
                cs.append((assigned, "private" if npriv else "full", npriv))
            else:
                cs.append((assigned, "partial", 0))
        checks.append(cs)
        anchors.append(best_anchor)

    n = H.n
    phi = [0] * F.n
    depth_max = len(order) - 1
    all_vertices = tuple(range(n))

    def weight_at(d):
        w = 1
        for verts, kind, npriv in checks[d]:
            imgs = [phi[y] for y in verts]
            key = tuple(sorted(imgs))
            if len(set(key)) != len(key):
                return 0
            if kind == "full":
                if key not in edge_set:
                    return 0
            elif kind == "private":
                c = sub_deg.get(key, 0)
                if not c:
                    return 0
                w *= fact[npriv] * c
            elif key not in sub_deg:
                return 0
        return w

    def rec(d):
        x = order[d]
        anchor = anchors[d]
        if anchor:
            cands = cooc.get(tuple(sorted(phi[y] for y in anchor)), ())
        else:
            cands = all_vertices
        budget.tick(len(cands))
        total = 0
        if d == depth_max:
            for c in cands:
                phi[x] = c
                total += weight_at(d)
            return total
        for c in cands:
            phi[x] = c
            w = weight_at(d)
            if w:
                total += w * rec(d + 1)
        return total

    return rec(0)


def hom_count(F: Hypergraph, H: Hypergraph, budget: int = DEFAULT_BUDGET) -> int:
    """hom(F, H): number of vertex maps sending every edge of F onto an edge of H."""
    _check_uniformity(F, H)
    b = _Budget(budget)
    total = 1
    for comp in F.components():
        total *= _component_hom(F, comp, H, b)
        if total == 0:
            return 0
    return total


# -- explicit map enumeration ------------------------------------------------------


def iter_homomorphisms(
    F: Hypergraph,
    H: Hypergraph,
    injective: bool = False,
    fixed: Optional[dict] = None,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[tuple]:
    """Yield homomorphisms F -> H as tuples ``phi[x]``.

    ``fixed`` pre-assigns some vertices of F. With ``injective`` the map must
    be injective on all of V(F).
    """
    _check_uniformity(F, H)
    b = _Budget(budget)
    fixed = dict(fixed or {})
    n = H.n
    deg = F.degrees
    edges_of = {x: [] for x in range(F.n)}
    for e in F.edges:
        for x in e:
            edges_of[x].append(e)
    free = [x for x in range(F.n) if x not in fixed]
    # order: fixed vertices first, then greedily
    placed = list(fixed)
    order = list(placed)
    rest = set(free)
    while rest:
        def key(x):
            links = sum(sum(1 for y in e if y in placed_set) for e in edges_of[x])
            return (-links, -deg[x], x)
        placed_set = set(order)
        x = min(rest, key=key)
        order.append(x)
        rest.discard(x)
    pos = {x: i for i, x in enumerate(order)}

    checks = []
    anchors = []
    for d, x in enumerate(order):
        cs = []
        best_anchor = ()
        for e in edges_of[x]:
            assigned = tuple(y for y in e if pos[y] <= d)
            before = tuple(y for y in assigned if pos[y] < d)
            if len(before) > len(best_anchor):
                best_anchor = before
            cs.append((assigned, len(assigned) == len(e)))
        checks.append(cs)
        anchors.append(best_anchor)

    sub_deg = H.subset_degree
    edge_set = H.edge_set
    cooc = H.cooccurrence
    phi = [-1] * F.n
    used = [0] * n
    all_vertices = tuple(range(n))
    nfixed = len(placed)

    def ok(d):
        for verts, full in checks[d]:
            key = tuple(sorted(phi[y] for y in verts))
            if len(set(key)) != len(key):
                return False
            if full:
                if key not in edge_set:
                    return False
            elif key not in sub_deg:
                return False
        return True

    def rec(d):
        if d == len(order):
            yield tuple(phi)
            return
        x = order[d]
        if d < nfixed:
            cands = (fixed[x],)
        elif anchors[d]:
            cands = cooc.get(tuple(sorted(phi[y] for y in anchors[d])), ())
        else:
            cands = all_vertices
        b.tick(len(cands))
        for c in cands:
            if not 0 <= c < n:
                continue
            if injective and used[c]:
                continue
            phi[x] = c
            if ok(d):
                used[c] += 1
                yield from rec(d + 1)
                used[c] -= 1
        phi[x] = -1

    yield from rec(0)


def injective_hom_count(F: Hypergraph, H: Hypergraph, budget: int = DEFAULT_BUDGET) -> int:
    return sum(1 for _ in iter_homomorphisms(F, H, injective=True, budget=budget))


@dataclass(frozen=True)
class Copy:
    """One copy of F in G: the map of a canonical representative and the image edges."""

    vertex_map: tuple
    edges: frozenset


def enumerate_copies(F: Hypergraph, G: Hypergraph, budget: int = DEFAULT_BUDGET) -> Iterator[Copy]:
    """Yield each copy of F in G once: the orbit of injective maps under Aut(F)
    is represented by its lexicographically smallest member."""
    auts = [a for a in automorphisms(F) if any(a[i] != i for i in range(F.n))]
    for phi in iter_homomorphisms(F, G, injective=True, budget=budget):
        if all(tuple(phi[a[i]] for i in range(F.n)) >= phi for a in auts):
            img = frozenset(tuple(sorted(phi[x] for x in e)) for e in F.edges)
            yield Copy(phi, img)


def copy_count(F: Hypergraph, G: Hypergraph, labeled: bool = False, budget: int = DEFAULT_BUDGET) -> int:
    """N_F(G): copies of F in G up to automorphism (``labeled`` gives injective maps)."""
    inj = injective_hom_count(F, G, budget)
    if labeled:
        return inj
    aut = len(automorphisms(F))
    q, rem = divmod(inj, aut)
    if rem:
        raise AssertionError(f"injective count {inj} not divisible by |Aut(F)| = {aut}")
    return q


def has_copy(F: Hypergraph, G: Hypergraph, through_edge=None, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether G contains a copy of F; with ``through_edge``, one using that edge of G."""
    if through_edge is None:
        return next(iter_homomorphisms(F, G, injective=True, budget=budget), None) is not None
    target = tuple(sorted(through_edge))
    for f in F.edges:
        for img in permutations(target):
            fixed = dict(zip(f, img))
            if next(iter_homomorphisms(F, G, injective=True, fixed=fixed, budget=budget), None) is not None:
                return True
    return False


# -- weighted counting -------------------------------------------------------------


def _weighted_component(F, comp, W: WeightedHypergraph, injective: bool, budget: _Budget) -> Fraction:
    r = F.r
    comp_set = set(comp)
    edges = [e for e in F.edges if e[0] in comp_set]
    n = W.n
    if not edges:
        return Fraction(n)
    deg = F.degrees
    edges_of = {x: [e for e in edges if x in e] for x in comp}
    order = _greedy_order(comp, edges_of, deg)
    pos = {x: i for i, x in enumerate(order)}

    denom = 1
    for w in list(W.weights.values()) + [W.default_proper, W.default_degenerate]:
        denom = denom * w.denominator // math.gcd(denom, w.denominator)
    cache: dict = {}

    def wt(key):
        v = cache.get(key)
        if v is None:
            v = int(W.weight(key) * denom)
            cache[key] = v
        return v

    checks = []
    for d, x in enumerate(order):
        cs = []
        for e in edges_of[x]:
            assigned = tuple(y for y in e if pos[y] <= d)
            cs.append((assigned, len(assigned) == r))
        checks.append(cs)

    phi = [0] * F.n
    last = len(order) - 1

    def weight_at(d):
        w = 1
        for verts, full in checks[d]:
            key = tuple(sorted(phi[y] for y in verts))
            if injective and len(set(key)) != len(key):
                return 0
            if full:
                w *= wt(key)
                if not w:
                    return 0
        return w

    def rec(d):
        x = order[d]
        budget.tick(n)
        total = 0
        for c in range(n):
            phi[x] = c
            w = weight_at(d)
            if w:
                total += w if d == last else w * rec(d + 1)
        return total

    return Fraction(rec(0), denom ** len(edges))


def weighted_hom_count(F: Hypergraph, W: WeightedHypergraph, mode: str = GRAPHON, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Sum over vertex maps of the product of edge weights.

    ``graphon`` sums over all maps and reads degenerate multisets as stored;
    ``edge_injective`` keeps only maps injective on every edge of F.
    """
    if mode not in (GRAPHON, EDGE_INJECTIVE):
        raise HypergraphError(f"unknown weighted mode {mode!r}")
    if F.r != W.r:
        raise HypergraphError(f"uniformity mismatch: F is {F.r}-uniform, W is {W.r}-uniform")
    b = _Budget(budget)
    total = Fraction(1)
    for comp in F.components():
        total *= _weighted_component(F, comp, W, mode == EDGE_INJECTIVE, b)
        if total == 0:
            break
    return total


def density(F: Hypergraph, target, mode: str = GRAPHON, budget: int = DEFAULT_BUDGET) -> DensityValue:
    """t_F(target) = hom(F, target) / v(target)^v(F), exact."""
    if isinstance(target, Hypergraph):
        return DensityValue(hom_count(F, target, budget), target.n, F.n)
    count = weighted_hom_count(F, target, mode, budget)
    if count.denominator == 1:
        count = count.numerator
    return DensityValue(count, target.n, F.n)


def edge_density(target, mode: str = GRAPHON) -> DensityValue:
    """t_{K_r^r}(target)."""
    r = target.r
    return density(Hypergraph(r, r, [tuple(range(r))]), target, mode)


def subgraph_expansion_density(F: Hypergraph, W: WeightedHypergraph, p, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Sum over edge subsets F' of F of p^(e(F)-e(F')) (1-p)^e(F') t_F'(W), graphon semantics.

    Each F' keeps the full vertex set of F. A 0/1 indicator W is counted with
    the unweighted engine.
    """
    p = Fraction(p)
    q = 1 - p
    plain = W.as_hypergraph()
    nv = Fraction(W.n) ** F.n
    m = F.e
    total = Fraction(0)
    for mask in range(1 << m):
        sub = [F.edges[i] for i in range(m) if mask >> i & 1]
        k = len(sub)
        coeff = p ** (m - k) * q ** k
        if coeff == 0:
            continue
        Fp = Hypergraph(F.r, F.n, sub)
        if plain is not None:
            count = Fraction(hom_count(Fp, plain, budget))
        else:
            count = weighted_hom_count(Fp, W, GRAPHON, budget)
        total += coeff * count / nv
    return total


def shadow_expansion_count(F: Hypergraph, H: Hypergraph, budget: int = DEFAULT_BUDGET) -> int:
    """hom(E^r(F), H) computed as an edge-injective weighted count of F against
    the shadow weighting (r-k)! deg_H on k-sets."""
    k, r = F.r, H.r
    if r < k:
        raise HypergraphError(f"shadow needs r >= k, got r={r}, k={k}")
    W = shadow_weighting(H, k)
    count = weighted_hom_count(F, W, EDGE_INJECTIVE, budget)
    assert count.denominator == 1
    return count.numerator
