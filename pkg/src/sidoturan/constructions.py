"""Generators for the hypergraph families used throughout the package.

Plain families come first, then tensor products and G(n,p). Weighted
hypergraphs (indicator, shadow and constant-mixed weightings) close the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from typing import Mapping, Optional, Sequence

import numpy as np

from .hypergraph import BudgetExceeded, Hypergraph, HypergraphError

DEFAULT_TENSOR_EDGE_BUDGET = 10**6


# -- basic families ------------------------------------------------------------


def complete(n: int, r: int) -> Hypergraph:
    """K_n^r."""
    return Hypergraph(r, n, list(combinations(range(n), r)), f"complete:{n}:{r}")


def single_edge(r: int) -> Hypergraph:
    """K_r^r, the one-edge r-graph."""
    return Hypergraph(r, r, [tuple(range(r))], f"complete:{r}:{r}")


def empty(n: int, r: int) -> Hypergraph:
    return Hypergraph(r, n, (), f"empty:{n}:{r}")


def graph_cycle(length: int) -> Hypergraph:
    if length < 3:
        raise HypergraphError(f"a simple graph cycle needs length >= 3, got {length}")
    return Hypergraph(2, length, [(i, (i + 1) % length) for i in range(length)], f"cycle:{length}")


def graph_path(length: int) -> Hypergraph:
    """Path with ``length`` edges."""
    return Hypergraph(2, length + 1, [(i, i + 1) for i in range(length)], f"path:{length}")


def simplex(k: int) -> Hypergraph:
    """K_{k+1}^k: all k-subsets of a (k+1)-set."""
    return complete(k + 1, k).named(f"simplex:{k}")


def fano_plane() -> Hypergraph:
    lines = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    return Hypergraph(3, 7, lines, "fano")


def expansion(F: Hypergraph, r: int) -> Hypergraph:
    """E^r(F): each k-edge of F gains r-k fresh degree-one vertices.

    Original vertices keep their ids; new vertices follow, edge by edge in
    canonical edge order.
    """
    k = F.r
    if r < k:
        raise HypergraphError(f"cannot expand a {k}-graph to uniformity {r} < {k}")
    nxt = F.n
    edges = []
    for e in F.edges:
        edges.append(tuple(e) + tuple(range(nxt, nxt + r - k)))
        nxt += r - k
    name = f"expansion:{r}:{F.name}" if F.name else None
    return Hypergraph(r, nxt, edges, name)


def loose_cycle(length: int, r: int) -> Hypergraph:
    """C_length^r = E^r(C_length); cores are 0..length-1, pendants follow.

    Lengths 1 and 2 would put a repeated vertex in an edge or a doubled edge,
    so they are rejected.
    """
    if length < 3:
        raise HypergraphError(f"loose cycles need length >= 3, got {length}")
    if r < 2:
        raise HypergraphError(f"uniformity must be at least 2, got {r}")
    return expansion(graph_cycle(length), r).named(f"loose-cycle:{length}:{r}")


def tight_tree_check(T: Hypergraph) -> Optional[list]:
    """An edge ordering certifying T is a tight tree, or None.

    Each later edge must add exactly one new vertex and its other r-1
    vertices must sit inside a single earlier edge.
    """
    edges = T.edges
    m = len(edges)
    if m == 0:
        return None
    sets = [frozenset(e) for e in edges]
    dead: set = set()

    def can_follow(placed_mask, covered, i):
        new = sets[i] - covered
        if len(new) != 1:
            return False
        rest = sets[i] - new
        return any(placed_mask >> j & 1 and rest <= sets[j] for j in range(m))

    def rec(mask, covered, order):
        if len(order) == m:
            return list(order)
        if mask in dead:
            return None
        for i in range(m):
            if mask >> i & 1 or not can_follow(mask, covered, i):
                continue
            order.append(i)
            got = rec(mask | 1 << i, covered | sets[i], order)
            if got is not None:
                return got
            order.pop()
        dead.add(mask)
        return None

    for first in range(m):
        got = rec(1 << first, sets[first], [first])
        if got is not None:
            return [edges[i] for i in got]
    return None


# -- tensor products -------------------------------------------------------------


def tensor_product(G: Hypergraph, H: Hypergraph, budget: int = DEFAULT_TENSOR_EDGE_BUDGET) -> Hypergraph:
    """G (x) H on V(G) x V(H); the pair (x, y) gets id ``x * v(H) + y``."""
    if G.r != H.r:
        raise HypergraphError(f"uniformity mismatch: {G.r} vs {H.r}")
    r = G.r
    size = math.factorial(r) * G.e * H.e
    if size > budget:
        raise BudgetExceeded(f"tensor product would have {size} edges, over budget {budget}")
    nh = H.n
    perms = list(permutations(range(r)))
    edges = []
    for e in G.edges:
        for f in H.edges:
            for p in perms:
                edges.append(tuple(e[i] * nh + f[p[i]] for i in range(r)))
    return Hypergraph(r, G.n * H.n, edges)


def tensor_power(H: Hypergraph, N: int, budget: int = DEFAULT_TENSOR_EDGE_BUDGET) -> Hypergraph:
    """H^{(x)N} = H (x) H^{(x)(N-1)}; vertex ids are base-v(H) numbers, first coordinate most significant."""
    if N < 1:
        raise HypergraphError(f"tensor exponent must be >= 1, got {N}")
    out = H
    for _ in range(N - 1):
        out = tensor_product(H, out, budget)
    name = f"tensor:{N}:{H.name}" if H.name else None
    return Hypergraph(H.r, out.n, out.edges, name)


def tensor_vertex_id(coords: Sequence[int], base: int) -> int:
    """Id of a tuple vertex of H^{(x)N} as laid out by ``tensor_power``."""
    idx = 0
    for c in coords:
        idx = idx * base + c
    return idx


# -- random hypergraphs ------------------------------------------------------


def random_hypergraph(n: int, p, r: int, seed: int) -> Hypergraph:
    """G_{n,p}^r: one uniform draw per r-set in lexicographic order (numpy PCG64)."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise HypergraphError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    sets = list(combinations(range(n), r))
    keep = rng.random(len(sets)) < p
    return Hypergraph(r, n, [s for s, k in zip(sets, keep) if k], f"random:{n}:{p}:{r}:{seed}")


# -- weighted hypergraphs --------------------------------------------------------


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True, eq=False)
class WeightedHypergraph:
    """Nonnegative rational weights on sorted r-multisets of ``0..n-1``.

    Unlisted proper sets read ``default_proper``; unlisted multisets with a
    repeated vertex read ``default_degenerate``.
    """

    r: int
    n: int
    weights: Mapping = field(default_factory=dict)
    default_proper: Fraction = Fraction(0)
    default_degenerate: Fraction = Fraction(0)
    name: Optional[str] = None

    def __post_init__(self):
        clean = {}
        for key, w in dict(self.weights).items():
            k = tuple(sorted(int(x) for x in key))
            if len(k) != self.r:
                raise HypergraphError(f"weight key {key} is not an {self.r}-multiset")
            if k[0] < 0 or k[-1] >= self.n:
                raise HypergraphError(f"weight key {key} has a vertex outside 0..{self.n - 1}")
            w = _frac(w)
            if w < 0:
                raise HypergraphError(f"negative weight {w} on {key}")
            clean[k] = w
        dp, dd = _frac(self.default_proper), _frac(self.default_degenerate)
        if dp < 0 or dd < 0:
            raise HypergraphError("default weights must be nonnegative")
        object.__setattr__(self, "weights", clean)
        object.__setattr__(self, "default_proper", dp)
        object.__setattr__(self, "default_degenerate", dd)

    def __eq__(self, other):
        if not isinstance(other, WeightedHypergraph):
            return NotImplemented
        if (self.r, self.n) != (other.r, other.n):
            return False
        keys = set(self.weights) | set(other.weights)
        return (
            self.default_proper == other.default_proper
            and self.default_degenerate == other.default_degenerate
            and all(self.weight(k) == other.weight(k) for k in keys)
        )

    def weight(self, multiset) -> Fraction:
        key = tuple(sorted(multiset))
        w = self.weights.get(key)
        if w is not None:
            return w
        if len(set(key)) < len(key):
            return self.default_degenerate
        return self.default_proper

    def table(self) -> dict:
        """Weight of every sorted r-multiset, listed explicitly."""
        return {k: self.weight(k) for k in combinations_with_replacement(range(self.n), self.r)}

    def as_hypergraph(self) -> Optional[Hypergraph]:
        """The hypergraph this weighting indicates, if it is a 0/1 indicator on proper sets."""
        if self.default_proper != 0 or self.default_degenerate != 0:
            return None
        edges = []
        for k, w in self.weights.items():
            if w == 0:
                continue
            if w != 1 or len(set(k)) < len(k):
                return None
            edges.append(k)
        return Hypergraph(self.r, self.n, edges, self.name)

    @classmethod
    def from_hypergraph(cls, H: Hypergraph) -> "WeightedHypergraph":
        return cls(H.r, H.n, {e: Fraction(1) for e in H.edges}, name=H.name)

    @classmethod
    def constant(cls, r: int, n: int, c) -> "WeightedHypergraph":
        return cls(r, n, {}, c, c, name=f"const:{c}")


def indicator_weighting(H: Hypergraph) -> WeightedHypergraph:
    return WeightedHypergraph.from_hypergraph(H)


def shadow_weighting(H: Hypergraph, k: int) -> WeightedHypergraph:
    """Weighted k-graph on V(H) with W(X) = (r-k)! * deg_H(X) on k-sets."""
    r = H.r
    if not 1 <= k <= r:
        raise HypergraphError(f"shadow order k={k} must satisfy 1 <= k <= r={r}")
    c = math.factorial(r - k)
    deg: dict = {}
    for e in H.edges:
        for sub in combinations(e, k):
            deg[sub] = deg.get(sub, 0) + 1
    return WeightedHypergraph(k, H.n, {X: c * d for X, d in deg.items()}, name=f"shadow:{k}:{H.name}")


def mix_with_constant(W: WeightedHypergraph, p) -> WeightedHypergraph:
    """Pointwise p + (1-p) W, degenerate multisets included."""
    p = _frac(p)
    if not 0 <= p <= 1:
        raise HypergraphError(f"mixing parameter must lie in [0, 1], got {p}")
    q = 1 - p
    return WeightedHypergraph(
        W.r,
        W.n,
        {k: p + q * w for k, w in W.weights.items()},
        p + q * W.default_proper,
        p + q * W.default_degenerate,
        name=f"mix:{p}:{W.name}",
    )


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_weighted(text: str, name: Optional[str] = None) -> WeightedHypergraph:
    """Parse ``w r n m d_proper d_degenerate`` followed by m lines ``v1 .. vr weight``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise HypergraphError("empty weighted hypergraph file")
    head = lines[0].split()
    if len(head) != 6 or head[0] != "w":
        raise HypergraphError(f"malformed weighted header {lines[0]!r}")
    try:
        r, n, m = int(head[1]), int(head[2]), int(head[3])
        dp, dd = _frac(head[4]), _frac(head[5])
    except (ValueError, ZeroDivisionError):
        raise HypergraphError(f"malformed weighted header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != m:
        raise HypergraphError(f"header declares {m} weights, found {len(body)}")
    weights = {}
    for ln in body:
        parts = ln.split()
        if len(parts) != r + 1:
            raise HypergraphError(f"uniformity mismatch in weight line {ln!r}")
        try:
            key = tuple(sorted(int(t) for t in parts[:r]))
            w = _frac(parts[r])
        except (ValueError, ZeroDivisionError):
            raise HypergraphError(f"malformed weight line {ln!r}") from None
        if key in weights:
            raise HypergraphError(f"duplicate weight key {key}")
        weights[key] = w
    return WeightedHypergraph(r, n, weights, dp, dd, name)


def serialize_weighted(W: WeightedHypergraph, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    items = sorted(W.weights.items())
    out.append(f"w {W.r} {W.n} {len(items)} {_fmt(W.default_proper)} {_fmt(W.default_degenerate)}")
    out.extend(" ".join(map(str, k)) + " " + _fmt(w) for k, w in items)
    return "\n".join(out) + "\n"
