"""Finite r-uniform hypergraphs with canonical storage and a plain text format.

Vertices are dense integer ids ``0..n-1``. Edges are stored as sorted tuples
and the edge collection is kept sorted lexicographically, so two
``Hypergraph`` objects with the same vertex count and edge set compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

DEFAULT_ISO_CAP = 12


class HypergraphError(ValueError):
    """Domain error: malformed input or a violated precondition."""


class BudgetExceeded(RuntimeError):
    """A search or enumeration hit its configured work limit."""


@dataclass(frozen=True)
class Hypergraph:
    r: int
    n: int
    edges: tuple = ()
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.r < 2:
            raise HypergraphError(f"uniformity must be at least 2, got {self.r}")
        if self.n < 0:
            raise HypergraphError(f"vertex count must be nonnegative, got {self.n}")
        canon = []
        for e in self.edges:
            t = tuple(sorted(int(x) for x in e))
            if len(t) != self.r:
                raise HypergraphError(f"edge {tuple(e)} does not have {self.r} vertices")
            if len(set(t)) != self.r:
                raise HypergraphError(f"edge {tuple(e)} repeats a vertex")
            if t[0] < 0 or t[-1] >= self.n:
                raise HypergraphError(f"edge {tuple(e)} has a vertex id outside 0..{self.n - 1}")
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise HypergraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Hypergraph{label} r={self.r} n={self.n} e={len(self.edges)}>"

    @property
    def v(self) -> int:
        return self.n

    @property
    def e(self) -> int:
        return len(self.edges)

    def named(self, name: str) -> "Hypergraph":
        return Hypergraph(self.r, self.n, self.edges, name)

    def relabel(self, perm: Sequence[int]) -> "Hypergraph":
        """Image of self under the vertex map ``i -> perm[i]`` (a permutation)."""
        return Hypergraph(self.r, self.n, [tuple(perm[x] for x in e) for e in self.edges], self.name)

    def add_isolated(self, k: int = 1) -> "Hypergraph":
        return Hypergraph(self.r, self.n + k, self.edges, self.name)

    def with_edges(self, edges: Iterable) -> "Hypergraph":
        return Hypergraph(self.r, self.n, tuple(edges), self.name)

    # -- cached indices -----------------------------------------------------

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def degrees(self) -> tuple:
        deg = [0] * self.n
        for e in self.edges:
            for x in e:
                deg[x] += 1
        return tuple(deg)

    @cached_property
    def subset_degree(self) -> dict:
        """Map each nonempty sorted subset of an edge to the number of edges containing it."""
        index: dict = {}
        for e in self.edges:
            for k in range(1, self.r + 1):
                for sub in combinations(e, k):
                    index[sub] = index.get(sub, 0) + 1
        return index

    @cached_property
    def cooccurrence(self) -> dict:
        """Map a sorted proper subset X of an edge to the sorted vertices y not in X
        such that X + {y} lies inside some edge."""
        acc: dict = {}
        for e in self.edges:
            for k in range(1, self.r):
                for sub in combinations(e, k):
                    s = acc.setdefault(sub, set())
                    s.update(x for x in e if x not in sub)
        return {k: tuple(sorted(v)) for k, v in acc.items()}

    def components(self) -> list:
        """Vertex sets of connected components, isolated vertices as singletons."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a = find(e[0])
            for x in e[1:]:
                b = find(x)
                if a != b:
                    parent[b] = a
        groups: dict = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def induced_on_edges(self, edge_subset: Iterable) -> "Hypergraph":
        """Sub-hypergraph with the given edges, relabelled onto its non-isolated support."""
        edge_subset = list(edge_subset)
        support = sorted({x for e in edge_subset for x in e})
        pos = {x: i for i, x in enumerate(support)}
        return Hypergraph(self.r, len(support), [tuple(pos[x] for x in e) for e in edge_subset])


# -- text format -------------------------------------------------------------


def parse_hypergraph(text: str, name: Optional[str] = None) -> Hypergraph:
    """Parse the ``r n m`` header format; ``#`` lines are comments."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise HypergraphError("empty hypergraph file")
    try:
        r, n, m = (int(t) for t in lines[0].split())
    except ValueError:
        raise HypergraphError(f"malformed header {lines[0]!r}; expected 'r n m'") from None
    if r < 2 or n < 0 or m < 0:
        raise HypergraphError(f"malformed header {lines[0]!r}")
    body = lines[1:]
    if len(body) != m:
        raise HypergraphError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        try:
            e = tuple(int(t) for t in ln.split())
        except ValueError:
            raise HypergraphError(f"malformed edge line {ln!r}") from None
        if len(e) != r:
            raise HypergraphError(f"uniformity mismatch: edge {ln!r} does not have {r} vertices")
        edges.append(e)
    return Hypergraph(r, n, edges, name)


def serialize_hypergraph(H: Hypergraph, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"{H.r} {H.n} {H.e}")
    out.extend(" ".join(map(str, e)) for e in H.edges)
    return "\n".join(out) + "\n"


# -- structure ---------------------------------------------------------------


def k_set_degree(H: Hypergraph, X: Iterable[int]) -> int:
    """Number of edges of H containing the vertex set X."""
    X = tuple(sorted(set(X)))
    for x in X:
        if not 0 <= x < H.n:
            raise HypergraphError(f"vertex {x} not in 0..{H.n - 1}")
    if len(X) > H.r:
        raise HypergraphError(f"|X| = {len(X)} exceeds uniformity {H.r}")
    if not X:
        return H.e
    return H.subset_degree.get(X, 0)


def is_r_partite(F: Hypergraph) -> Optional[list]:
    """Partition V(F) into r parts meeting every edge exactly once, or None.

    Exhaustive backtracking over colourings; colour symmetry is broken by
    never opening more than one new colour at a time.
    """
    r = F.r
    incident = [[] for _ in range(F.n)]
    for e in F.edges:
        for x in e:
            incident[x].append(e)
    order = sorted(range(F.n), key=lambda x: -len(incident[x]))
    colour = [-1] * F.n

    def ok(x):
        for e in incident[x]:
            seen = set()
            for y in e:
                c = colour[y]
                if c >= 0:
                    if c in seen:
                        return False
                    seen.add(c)
        return True

    def solve(i, used):
        if i == len(order):
            return True
        x = order[i]
        for c in range(min(used + 1, r)):
            colour[x] = c
            if ok(x) and solve(i + 1, max(used, c + 1)):
                return True
        colour[x] = -1
        return False

    if not solve(0, 0):
        return None
    parts = [[] for _ in range(r)]
    for x in range(F.n):
        parts[colour[x]].append(x)
    return parts


@dataclass(frozen=True)
class DensityProfile:
    m_r: Fraction
    balanced: bool
    witness: tuple  # edges of one maximising subgraph


def r_density(F: Hypergraph) -> DensityProfile:
    """m_r(F) = max (e(F')-1)/(v(F')-r) over edge subsets with more than r support vertices."""
    if F.n <= F.r:
        raise HypergraphError(f"r-density needs v(F) > r (v={F.n}, r={F.r})")
    best, best_sub = None, None
    edges = F.edges
    for mask in range(1, 1 << len(edges)):
        sub = [edges[i] for i in range(len(edges)) if mask >> i & 1]
        v = len({x for e in sub for x in e})
        if v <= F.r:
            continue
        ratio = Fraction(len(sub) - 1, v - F.r)
        if best is None or ratio > best:
            best, best_sub = ratio, tuple(sub)
    if best is None:
        # every edge subset lives on r vertices (at most one edge); isolated vertices supply v > r
        best, best_sub = Fraction(F.e - 1, F.n - F.r), F.edges
    full = Fraction(F.e - 1, F.n - F.r)
    return DensityProfile(best, full == best, best_sub)


# -- automorphisms and canonical form -----------------------------------------


def _check_cap(F: Hypergraph, cap: int):
    if F.n > cap:
        raise HypergraphError(f"v(F) = {F.n} exceeds the isomorphism cap {cap}")


def automorphisms(F: Hypergraph, cap: int = DEFAULT_ISO_CAP) -> list:
    """All vertex permutations preserving the edge set, as tuples ``perm[x]``."""
    _check_cap(F, cap)
    n = F.n
    deg = F.degrees
    edge_set = F.edge_set
    incident = [[] for _ in range(n)]
    for e in F.edges:
        for x in e:
            incident[x].append(e)
    order = sorted(range(n), key=lambda x: (-deg[x], x))
    pos = {x: i for i, x in enumerate(order)}
    # edges checked once their last vertex (in order) is assigned
    closing = [[] for _ in range(n)]
    for e in F.edges:
        closing[max(e, key=pos.get)].append(e)
    perm = [-1] * n
    used = [False] * n
    found = []

    def rec(i):
        if i == n:
            found.append(tuple(perm))
            return
        x = order[i]
        for y in range(n):
            if used[y] or deg[y] != deg[x]:
                continue
            perm[x] = y
            if all(tuple(sorted(perm[z] for z in e)) in edge_set for e in closing[x]):
                used[y] = True
                rec(i + 1)
                used[y] = False
        perm[x] = -1

    rec(0)
    return found


def automorphism_count(F: Hypergraph, cap: int = DEFAULT_ISO_CAP) -> int:
    return len(automorphisms(F, cap))


def _refine(F: Hypergraph, colours: list, incident: list) -> list:
    """Iterated colour refinement on vertices; returns canonical integer colours."""
    n = F.n
    while True:
        sigs = []
        for x in range(n):
            nb = sorted(tuple(sorted(colours[y] for y in e if y != x)) for e in incident[x])
            sigs.append((colours[x], tuple(nb)))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def canonical_form(F: Hypergraph, cap: int = DEFAULT_ISO_CAP) -> tuple:
    """Isomorphism-invariant certificate ``(r, n, sorted relabelled edges)``.

    Individualisation-refinement search; each leaf fixes a vertex order and
    the lexicographically smallest relabelled edge list wins. Branches on
    vertices interchangeable by a transposition automorphism are skipped.
    """
    _check_cap(F, cap)
    n = F.n
    incident = [[] for _ in range(n)]
    for e in F.edges:
        for x in e:
            incident[x].append(e)
    edge_set = F.edge_set

    def twins(a, b):
        swap = {a: b, b: a}
        return all(tuple(sorted(swap.get(z, z) for z in e)) in edge_set for e in incident[a])

    best = [None]

    def rec(colours):
        colours = _refine(F, colours, incident)
        cells: dict = {}
        for x in range(n):
            cells.setdefault(colours[x], []).append(x)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            cert = tuple(sorted(tuple(sorted(colours[x] for x in e)) for e in F.edges))
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        tried = []
        for x in cells[target]:
            if any(twins(x, y) for y in tried):
                continue
            tried.append(x)
            # individualise x: it gets the smallest colour of its cell, others shift up
            nc = [2 * c + (0 if (c != target or y == x) else 1) for y, c in enumerate(colours)]
            rec(nc)

    rec([0] * n)
    return (F.r, n, best[0] if best[0] is not None else ())


def are_isomorphic(F1: Hypergraph, F2: Hypergraph, cap: int = DEFAULT_ISO_CAP) -> bool:
    if (F1.r, F1.n, F1.e) != (F2.r, F2.n, F2.e):
        return False
    if sorted(F1.degrees) != sorted(F2.degrees):
        return False
    return canonical_form(F1, cap) == canonical_form(F2, cap)


def canonical_hypergraph(F: Hypergraph, cap: int = DEFAULT_ISO_CAP) -> Hypergraph:
    r, n, edges = canonical_form(F, cap)
    return Hypergraph(r, n, edges, F.name)
