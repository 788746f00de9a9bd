"""Finite witnesses built from progression-free sets or greedy partial Steiner
systems, with validators for linearity, freeness and rigidity."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations, product
from typing import Optional

import numpy as np

from .constructions import expansion, simplex
from .homomorphism import DEFAULT_BUDGET, has_copy, iter_homomorphisms
from .hypergraph import Hypergraph, HypergraphError

EXACT_CAP = 40


def is_progression_free(S) -> bool:
    """True if S contains no a < b < c with a + c = 2b."""
    s = set(S)
    items = sorted(s)
    for i, a in enumerate(items):
        for c in items[i + 1:]:
            if (a + c) % 2 == 0 and (a + c) // 2 in s:
                return False
    return True


def _extends(chosen_mask: int, chosen: list, x: int) -> bool:
    """Whether x (larger than everything chosen) can join without closing an AP."""
    for b in chosen:
        a = 2 * b - x
        if a >= 1 and chosen_mask >> a & 1:
            return False
    return True


_R3 = [0, 1]  # _R3[L] = largest progression-free subset of [1..L]
_R3_SETS = [(), (1,)]


def _exact(m: int) -> tuple:
    while len(_R3) <= m:
        L = len(_R3)
        target = _R3[L - 1] + 1
        found = None
        # a set of the larger size must contain both 1 and L, else a shift fits in [1..L-1]
        chosen = [1]

        def dfs(x, mask):
            nonlocal found
            if found is not None:
                return
            need = target - len(chosen) - 1  # room still needed in [x..L-1]
            if need <= 0:
                if _extends(mask, chosen, L):
                    found = tuple(chosen) + (L,)
                return
            if x > L - 1 or _R3[L - x] < need:
                return
            if _extends(mask, chosen, x):
                chosen.append(x)
                dfs(x + 1, mask | 1 << x)
                chosen.pop()
            dfs(x + 1, mask)

        if L >= 2:
            dfs(2, 1 << 1)
        if found is not None:
            _R3.append(target)
            _R3_SETS.append(found)
        else:
            _R3.append(_R3[L - 1])
            _R3_SETS.append(_R3_SETS[L - 1])
    return _R3_SETS[m]


def _sphere(m: int) -> tuple:
    """Behrend's sphere construction, best over a small grid of (dimension, digit bound).

    Numbers are 1 + sum a_i (2M-1)^i with digits a_i < M, so sums of two never
    carry; keeping one sphere sum a_i^2 = R makes x + z = 2y force x = y = z.
    """
    best: tuple = (1,) if m >= 1 else ()
    for d in range(1, 7):
        for M in range(2, m + 1):
            B = 2 * M - 1
            # the top digit must be usable, and the grid must stay small
            if 1 + B ** (d - 1) > m or M ** d > 200_000:
                break
            spheres: dict = {}
            for digits in product(range(M), repeat=d):
                x = 1 + sum(a * B ** i for i, a in enumerate(digits))
                if x <= m:
                    spheres.setdefault(sum(a * a for a in digits), []).append(x)
            if not spheres:
                continue
            R = max(sorted(spheres), key=lambda k: len(spheres[k]))
            cand = tuple(sorted(spheres[R]))
            if len(cand) > len(best):
                best = cand
    return best


def _greedy(m: int) -> tuple:
    s = set(_sphere(m))
    for x in range(1, m + 1):
        if x in s:
            continue
        ok = True
        for y in s:
            if 2 * y - x in s or 2 * x - y in s or ((x + y) % 2 == 0 and (x + y) // 2 in s):
                ok = False
                break
        if ok:
            s.add(x)
    return tuple(sorted(s))


def behrend_set(m: int, mode: str = "auto") -> tuple:
    """A 3-AP-free subset of [1..m].

    ``exact`` returns a maximum set (m <= 40), ``sphere`` the Behrend sphere
    construction, ``greedy`` the sphere set greedily augmented. ``auto`` picks
    exact up to the cap and greedy beyond it.
    """
    if m < 1:
        raise HypergraphError(f"m must be positive, got {m}")
    if mode == "auto":
        mode = "exact" if m <= EXACT_CAP else "greedy"
    if mode == "exact":
        if m > EXACT_CAP:
            raise HypergraphError(f"exact mode is capped at m = {EXACT_CAP}")
        return _exact(m)
    if mode == "sphere":
        return _sphere(m)
    if mode == "greedy":
        return _greedy(m)
    raise HypergraphError(f"unknown behrend mode {mode!r}")


def rs_triangle_system(m: int, S) -> Hypergraph:
    """3-graph on X=[m], Y=[2m], Z=[3m] with edges {x, x+s, x+2s} for x in X, s in S.

    Ids: x -> x-1, y -> m+y-1, z -> 3m+z-1.
    """
    S = sorted(set(S))
    if any(not 1 <= s <= m for s in S):
        raise HypergraphError(f"S must lie in [1..{m}]")
    if not is_progression_free(S):
        raise HypergraphError("S contains a 3-term arithmetic progression")
    edges = [(x - 1, m + x + s - 1, 3 * m + x + 2 * s - 1) for x in range(1, m + 1) for s in S]
    return Hypergraph(3, 6 * m, edges, f"rs:{m}")


def greedy_partial_steiner(n: int, r: int, k: int, seed: int) -> Hypergraph:
    """Random-order greedy r-graph whose edges pairwise share at most k-1 vertices
    and which contains no E^r(K_{k+1}^k). Maximal for its order."""
    if not (n >= r > k >= 2):
        raise HypergraphError(f"need n >= r > k >= 2, got n={n}, r={r}, k={k}")
    forbidden = expansion(simplex(k), r)
    rng = np.random.default_rng(seed)
    sets = list(combinations(range(n), r))
    covered: set = set()
    edges: list = []
    for i in rng.permutation(len(sets)):
        cand = sets[i]
        subs = list(combinations(cand, k))
        if any(s in covered for s in subs):
            continue
        trial = Hypergraph(r, n, edges + [cand])
        if has_copy(forbidden, trial, through_edge=cand):
            continue
        edges.append(cand)
        covered.update(subs)
    return Hypergraph(r, n, edges, f"greedy:{n}:{r}:{k}:{seed}")


@dataclass
class WitnessReport:
    linear: bool
    expansion_free: bool
    rigid: Optional[bool]
    edges: int
    vertices: int
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def is_k_linear(H: Hypergraph, k: int) -> bool:
    """Any two edges share at most k-1 vertices."""
    seen = set()
    for e in H.edges:
        for sub in combinations(e, k):
            if sub in seen:
                return False
            seen.add(sub)
    return True


def validate_witness_properties(H: Hypergraph, k: int, r: int, rigidity: bool = False, **params) -> WitnessReport:
    if H.r != r:
        raise HypergraphError(f"H is {H.r}-uniform, expected {r}")
    forbidden = expansion(simplex(k), r)
    rigid = rigidity_check(H, k, r) if rigidity else None
    return WitnessReport(
        linear=is_k_linear(H, k),
        expansion_free=not has_copy(forbidden, H),
        rigid=rigid,
        edges=H.e,
        vertices=H.n,
        params={"k": k, "r": r, "construction": H.name, **params},
    )


def rigidity_check(H: Hypergraph, k: int, r: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff every homomorphism of E^r(K_{k+1}^k) into H sends all its edges
    to one common edge."""
    if H.r != r:
        raise HypergraphError(f"H is {H.r}-uniform, expected {r}")
    F = expansion(simplex(k), r)
    for phi in iter_homomorphisms(F, H, budget=budget):
        first = None
        for e in F.edges:
            img = frozenset(phi[x] for x in e)
            if first is None:
                first = img
            elif img != first:
                return False
    return True
