"""Sidorenko gaps of candidate witnesses, plus the searches and closed-form bounds built on them.

A positive gap s with t_F(H) = t_edge(H)^(s + e(F)) certifies s(F) >= s.
Calculator outputs are upper bounds on s(F) (or exponents of Turan-type
lower bounds); nothing here claims the value of s(F) itself.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from .constructions import (
    WeightedHypergraph,
    complete,
    indicator_weighting,
    mix_with_constant,
    single_edge,
    tensor_power,
)
from .homomorphism import (
    GRAPHON,
    DEFAULT_BUDGET,
    DensityValue,
    density,
    edge_density,
    subgraph_expansion_density,
)
from .hypergraph import Hypergraph, HypergraphError, canonical_form, is_r_partite
from .witnesses import behrend_set, greedy_partial_steiner, rs_triangle_system

Witness = Union[Hypergraph, WeightedHypergraph]


@dataclass
class GapResult:
    f: Hypergraph
    witness: Witness
    mode: str
    t_f: DensityValue
    t_edge: DensityValue
    gap: Optional[float]
    delta: Optional[float]
    flags: dict = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def valid(self) -> bool:
        return self.gap is not None

    def to_dict(self) -> dict:
        return {
            "f": self.f.name or f"F(r={self.f.r},n={self.f.n},e={self.f.e})",
            "witness": self.witness.name or f"H(r={self.witness.r},n={self.witness.n})",
            "mode": self.mode,
            "t_f": str(self.t_f),
            "t_edge": str(self.t_edge),
            "gap": self.gap,
            "delta": self.delta,
            "flags": self.flags,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _result(F, witness, mode, t_f: DensityValue, t_edge: DensityValue, seed=None) -> GapResult:
    flags = {
        "t_f_positive": t_f.hom_count > 0,
        "t_edge_positive": t_edge.hom_count > 0,
        "t_edge_below_one": t_edge.value < 1,
        "bound": "lower",
    }
    if isinstance(witness, WeightedHypergraph):
        flags["category"] = "weighted witness"
    g = d = None
    if flags["t_f_positive"] and flags["t_edge_positive"] and flags["t_edge_below_one"]:
        lt = t_edge.log_value
        g = t_f.log_value / lt - F.e
        if witness.n > 1:
            d = -lt / math.log(witness.n)
    return GapResult(F, witness, mode, t_f, t_edge, g, d, flags, seed)


def gap(F: Hypergraph, witness: Witness, mode: str = GRAPHON, budget: int = DEFAULT_BUDGET) -> GapResult:
    """Densities of F and of a single edge in the witness, and the gap
    s = ln t_F / ln t_edge - e(F) when both are positive and t_edge < 1."""
    if F.r != witness.r:
        raise HypergraphError(f"uniformity mismatch: F is {F.r}-uniform, witness {witness.r}-uniform")
    if F.e < 1:
        raise HypergraphError("F needs at least one edge")
    t_f = density(F, witness, mode, budget)
    t_edge = edge_density(witness, mode)
    label = "hypergraph" if isinstance(witness, Hypergraph) else mode
    return _result(F, witness, label, t_f, t_edge)


def gap_high_precision(t_f: Fraction, t_edge: Fraction, e_f: int, dps: int = 50):
    """The gap recomputed from exact densities with ``dps`` significant digits."""
    with mpmath.workdps(dps):
        tf = mpmath.mpf(t_f.numerator) / t_f.denominator
        te = mpmath.mpf(t_edge.numerator) / t_edge.denominator
        return mpmath.log(tf) / mpmath.log(te) - e_f


def trivial_bound_check(result: GapResult, tol: float = 1e-9) -> bool:
    """t_edge >= v(H)^(-(v(F)-r)/(s+e(F)-1)) with s the computed gap.

    This holds for every r-partite F, so a failure means a counting bug.
    """
    F = result.f
    if is_r_partite(F) is None:
        raise HypergraphError("F is not r-partite")
    if result.gap is None:
        raise HypergraphError("gap undefined for this result")
    denom = result.gap + F.e - 1
    if denom <= 0:
        raise HypergraphError("s + e(F) - 1 must be positive")
    rhs = -(F.n - F.r) / denom * math.log(result.witness.n)
    return result.t_edge.log_value >= rhs - tol


# -- witness search ----------------------------------------------------------------


@dataclass
class SearchOutcome:
    best: Optional[GapResult]
    evaluations: int
    exhausted: bool
    trajectory: list = field(default_factory=list)


def _score(res: Optional[GapResult]) -> float:
    return res.gap if res is not None and res.gap is not None else -math.inf


def _better(a: Optional[GapResult], b: Optional[GapResult]) -> bool:
    """Whether a beats b: larger gap, ties to the smaller canonical witness."""
    if a is None or a.gap is None:
        return False
    if b is None or b.gap is None:
        return True
    if a.gap != b.gap:
        return a.gap > b.gap
    return _witness_key(a.witness) < _witness_key(b.witness)


def _witness_key(W) -> tuple:
    if isinstance(W, Hypergraph):
        try:
            return (0,) + canonical_form(W)
        except HypergraphError:
            return (1, W.r, W.n, W.edges)
    return (2, W.r, W.n, tuple(sorted(W.weights.items())))


def _exhaustive(F, v_max, budget):
    r = F.r
    best = None
    evals = 0
    traj = []
    for n in range(r, v_max + 1):
        sets = list(combinations(range(n), r))
        seen = set()
        for mask in range(1, 1 << len(sets)):
            H = Hypergraph(r, n, [sets[i] for i in range(len(sets)) if mask >> i & 1])
            key = canonical_form(H)
            if key in seen:
                continue
            seen.add(key)
            if evals >= budget:
                return best, evals, True, traj
            res = gap(F, H.named(f"exhaustive:{n}:{mask}"))
            evals += 1
            if _better(res, best):
                best = res
                traj.append((n, mask, res.gap))
    return best, evals, False, traj


def _climb(F, start: Hypergraph, rng, budget):
    """First-improvement single-edge toggling until a plateau or the budget runs out."""
    r, n = F.r, start.n
    sets = list(combinations(range(n), r))
    current = set(start.edges)
    cur_res = gap(F, start)
    evals = 1
    traj = [_score(cur_res)]
    while evals < budget:
        improved = False
        for i in rng.permutation(len(sets)):
            if evals >= budget:
                break
            trial = current ^ {sets[i]}
            if not trial:
                continue
            res = gap(F, Hypergraph(r, n, sorted(trial)))
            evals += 1
            if _score(res) > _score(cur_res):
                current, cur_res = trial, res
                traj.append(_score(res))
                improved = True
                break
        if not improved:
            break
    return cur_res, evals, traj


def _restart(F, n, seed, restart, budget):
    ss = np.random.SeedSequence([seed, restart])
    rng = np.random.default_rng(ss)
    sets = list(combinations(range(n), F.r))
    pick = rng.random(len(sets)) < 0.5
    if not pick.any():
        pick[int(rng.integers(len(sets)))] = True
    start = Hypergraph(F.r, n, [s for s, k in zip(sets, pick) if k])
    res, evals, traj = _climb(F, start, rng, budget)
    if res is not None:
        res.witness = res.witness.named(f"local:{n}:{seed}:{restart}")
        res.seed = seed
    return res, evals, traj


def seed_family(r: int, seed: int = 0) -> list:
    """Canned candidate witnesses for uniformity r."""
    fam = [single_edge(r), complete(r + 1, r), complete(r + 2, r), tensor_power(single_edge(r), 2)]
    if r == 3:
        fam += [rs_triangle_system(m, behrend_set(m)) for m in (3, 9)]
    if r > 2:
        fam += [greedy_partial_steiner(n, r, 2, seed + i) for i, n in enumerate((r + 4, r + 6))]
    return fam


def witness_search(
    F: Hypergraph,
    strategy: str = "seeded",
    budget: int = 10_000,
    seed: int = 0,
    v_max: int = 5,
    n: Optional[int] = None,
    restarts: int = 4,
    threads: int = 1,
) -> SearchOutcome:
    """Best gap found for F by one of three strategies.

    ``exhaustive`` scans every r-graph on r..v_max vertices up to isomorphism;
    ``local`` runs ``restarts`` seeded hill climbs on n-vertex witnesses;
    ``seeded`` evaluates the canned family then hill-climbs from its best
    member when that is small. Deterministic for a given seed, whatever
    ``threads`` is.
    """
    if strategy == "exhaustive":
        best, evals, exhausted, traj = _exhaustive(F, v_max, budget)
        return SearchOutcome(best, evals, exhausted, traj)

    if strategy == "local":
        n = n if n is not None else F.r + 2
        per = max(1, budget // restarts)
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            runs = list(pool.map(lambda i: _restart(F, n, seed, i, per), range(restarts)))
        best = None
        traj = []
        evals = 0
        for i, (res, ev, tr) in enumerate(runs):
            evals += ev
            traj.append((i, tr))
            if _better(res, best):
                best = res
        return SearchOutcome(best, evals, evals >= per * restarts, traj)

    if strategy == "seeded":
        best = None
        evals = 0
        traj = []
        for H in seed_family(F.r, seed):
            res = gap(F, H)
            evals += 1
            traj.append((H.name, res.gap))
            if _better(res, best):
                best = res
        if best is not None and best.witness.n <= 8 and evals < budget:
            rng = np.random.default_rng(np.random.SeedSequence([seed, 0xC11B]))
            res, ev, tr = _climb(F, best.witness, rng, budget - evals)
            evals += ev
            traj.append(("climb", tr))
            if _better(res, best):
                best = res
        if best is not None:
            best.seed = seed
        return SearchOutcome(best, evals, evals >= budget, traj)

    raise HypergraphError(f"unknown search strategy {strategy!r}")


# -- mixed (weighted) witnesses ------------------------------------------------------


def mixed_gap(F: Hypergraph, base: Hypergraph, p) -> GapResult:
    """Gap of F against the graphon-mode weighting p + (1-p) 1_base.

    Both densities come from the subgraph-expansion sum over the plain
    indicator, which equals the direct mixed density exactly.
    """
    p = Fraction(p)
    ind = indicator_weighting(base)
    W = mix_with_constant(ind, p)
    W = WeightedHypergraph(W.r, W.n, W.weights, W.default_proper, W.default_degenerate, name=f"mix:{p}:{base.name}")
    tf = subgraph_expansion_density(F, ind, p)
    te = subgraph_expansion_density(single_edge(F.r), ind, p)
    t_f = DensityValue(tf * Fraction(W.n) ** F.n, W.n, F.n)
    t_edge = DensityValue(te * Fraction(W.n) ** F.r, W.n, F.r)
    return _result(F, W, GRAPHON, _int_if_whole(t_f), _int_if_whole(t_edge))


def _int_if_whole(d: DensityValue) -> DensityValue:
    h = Fraction(d.hom_count)
    return DensityValue(h.numerator if h.denominator == 1 else h, d.base, d.exponent)


def mixed_witness_certify(
    F: Hypergraph,
    p_grid: Sequence = (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)),
    N_grid: Sequence[int] = (1, 2),
) -> Optional[GapResult]:
    """Best positive gap over mixes of tensor powers of the single edge, or None."""
    best = None
    for N in N_grid:
        base = tensor_power(single_edge(F.r), N)
        for p in p_grid:
            res = mixed_gap(F, base, p)
            if res.gap is not None and res.gap > 0 and _better(res, best):
                best = res
    return best


# -- closed forms ---------------------------------------------------------------------


def _num(x):
    if isinstance(x, bool):
        raise HypergraphError("boolean is not a number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def bound_calculator(mode: str, **params):
    """Evaluate one closed form; exact Fractions when every input is rational.

    general(v, e, r, alpha)      upper bound on s(F) from ex(n,F) = O(n^alpha)
    propagate(v, e, k, s, r)     upper bound on s(E^r(F)) from s(F) of a k-graph
    transfer(beta, e)            s <= beta (e-1)/(1-beta) from s/(e-1+s) <= beta
    classic(v, e, r, s)          Turan exponent r - (v-r)/(e-1) + (v-r)s/((e-1)(s+e-1))
    cls_quant(v, e, r, s, delta) Turan exponent r - (v-r)/(e-1) + delta s/(e-1)
    """
    p = {k: _num(v) for k, v in params.items()}

    def need(*names):
        missing = [k for k in names if k not in p]
        if missing:
            raise HypergraphError(f"{mode} needs parameters {missing}")
        return [p[k] for k in names]

    if mode == "general":
        v, e, r, a = need("v", "e", "r", "alpha")
        if not a < r:
            raise HypergraphError("general bound needs alpha < r")
        return (v - a) / (r - a) - e
    if mode == "propagate":
        v, e, k, s, r = need("v", "e", "k", "s", "r")
        if r < k:
            raise HypergraphError("propagate needs r >= k")
        den = v - k + (r - k) * (s + e - 1)
        if den == 0:
            raise HypergraphError("zero denominator")
        return (v - k) / den * s
    if mode == "transfer":
        beta, e = need("beta", "e")
        if not 0 <= beta < 1:
            raise HypergraphError("transfer needs 0 <= beta < 1")
        return beta * (e - 1) / (1 - beta)
    if mode == "classic":
        v, e, r, s = need("v", "e", "r", "s")
        if e == 1 or s + e - 1 == 0:
            raise HypergraphError("zero denominator")
        return r - (v - r) / (e - 1) + (v - r) * s / ((e - 1) * (s + e - 1))
    if mode == "cls_quant":
        v, e, r, s, delta = need("v", "e", "r", "s", "delta")
        if e == 1:
            raise HypergraphError("zero denominator")
        return r - (v - r) / (e - 1) + delta * s / (e - 1)
    raise HypergraphError(f"unknown calculator mode {mode!r}")


def propagate_chain(v, e, k, s, r_target):
    """Apply ``propagate`` one uniformity at a time from k up to r_target."""
    v, e, s = Fraction(v), Fraction(e), _num(s)
    for kk in range(k, r_target):
        s = bound_calculator("propagate", v=v, e=e, k=kk, s=s, r=kk + 1)
        v += e
    return s


def predicted_curve(F: Hypergraph, s, n, p) -> float:
    """log_n of n^(r - m) (p n^m)^(s/(e-1+s)) with m = (v(F)-r)/(e(F)-1)."""
    r, v, e = F.r, F.n, F.e
    if e < 2:
        raise HypergraphError("needs e(F) >= 2")
    m = (v - r) / (e - 1)
    if not m < r:
        raise HypergraphError("needs (v(F)-r)/(e(F)-1) < r")
    s = float(s)
    if s < 0:
        raise HypergraphError("s must be nonnegative")
    if not 0 < p <= 1:
        raise HypergraphError(f"p must lie in (0, 1], got {p}")
    lp = math.log(float(p)) / math.log(n) if p != 1 else 0.0
    if lp < -m - 1e-12:
        raise HypergraphError(f"p below the threshold n^(-{m})")
    return r - m + (lp + m) * s / (e - 1 + s)
