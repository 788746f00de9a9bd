"""Randomised F-free extraction through implicit tensor powers, and the
seeded random-Turan experiment harness.

A uniform map V(G) -> V(H)^N keeps an edge of G when, in every coordinate,
its r images are distinct and form an edge of H; the kept graph is then
cleaned of copies of F. H^{(x)N} is never built.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .constructions import random_hypergraph
from .families import parse_family
from .homomorphism import enumerate_copies, has_copy
from .hypergraph import BudgetExceeded, Hypergraph, HypergraphError
from .sidorenko import gap as gap_of, predicted_curve

DEFAULT_COPY_BUDGET = 10**7
RNG_NAME = "numpy.random.PCG64"
DELETION_STRATEGIES = ("max-degree-greedy", "first-found")


@dataclass(frozen=True)
class ExtractionPlan:
    alpha: Fraction
    s: float
    N: int
    q: float
    delta_n: float
    strategy: str = "max-degree-greedy"
    seed: Optional[int] = None


def _log_q(F: Hypergraph, s, n, p, delta_n) -> float:
    v, e, r = F.n, F.e, F.r
    k = e - 1 + s
    return math.log(delta_n) - (v - r) / k * math.log(n) - (e - 1) / k * math.log(p)


def choose_tensor_exponent(alpha, s, F: Hypergraph, n: int, p, delta_n=None, strategy="max-degree-greedy", seed=None) -> ExtractionPlan:
    """Smallest N >= 1 with alpha^N <= q, where
    q = delta_n n^(-(v-r)/(e-1+s)) p^(-(e-1)/(e-1+s)); delta_n defaults to 1/ln n."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise HypergraphError(f"alpha must lie in (0, 1), got {alpha}")
    if s < 0:
        raise HypergraphError(f"s must be nonnegative, got {s}")
    if F.e < 2:
        raise HypergraphError("F needs at least two edges")
    if delta_n is None:
        delta_n = 1 / math.log(n)
    if not 0 < delta_n <= 1:
        raise HypergraphError(f"delta_n must lie in (0, 1], got {delta_n}")
    m = (F.n - F.r) / (F.e - 1)
    if not 0 < p <= 1 or math.log(p) < -m * math.log(n) - 1e-12:
        raise HypergraphError(f"p = {p} is below the threshold n^(-{m})")
    lq = _log_q(F, s, n, p, delta_n)
    la = math.log(alpha)
    N = max(1, math.ceil(lq / la - 1e-12))
    while N > 1 and (N - 1) * la <= lq:
        N -= 1
    while N * la > lq:
        N += 1
    return ExtractionPlan(alpha, float(s), N, math.exp(lq), float(delta_n), strategy, seed)


def tensor_filter_mask(G: Hypergraph, H: Hypergraph, images: np.ndarray) -> list:
    """Which edges of G survive under ``images`` (shape v(G) x N, entries in V(H))."""
    edge_set = H.edge_set
    r = G.r
    keep = []
    for e in G.edges:
        cols = images[list(e)]
        ok = True
        for c in range(cols.shape[1]):
            t = tuple(sorted(int(x) for x in cols[:, c]))
            if len(set(t)) != r or t not in edge_set:
                ok = False
                break
        keep.append(ok)
    return keep


@dataclass
class ExtractionStats:
    edges_sampled: int
    edges_after_filter: int = 0
    copies_in_filtered: int = 0
    deletions: int = 0
    edges_final: Optional[int] = None
    certified_f_free: bool = False


class ExtractionAborted(BudgetExceeded):
    def __init__(self, msg, stats):
        super().__init__(msg)
        self.stats = stats


def _delete_copies(edges, copies, strategy, rng=None):
    alive = set(edges)
    if strategy == "first-found":
        for c in copies:
            if c <= alive:
                alive.discard(min(c))
        return alive
    if strategy == "random":
        for c in copies:
            if c <= alive:
                choices = sorted(c)
                alive.discard(choices[int(rng.integers(len(choices)))])
        return alive
    if strategy == "max-degree-greedy":
        live = [set(c) for c in copies]
        by_edge: dict = {}
        for i, c in enumerate(live):
            for e in c:
                by_edge.setdefault(e, set()).add(i)
        open_copies = set(range(len(live)))
        while open_copies:
            e = min(by_edge, key=lambda x: (-len(by_edge[x]), x))
            alive.discard(e)
            for i in list(by_edge.pop(e)):
                open_copies.discard(i)
                for f in live[i]:
                    if f != e and f in by_edge:
                        by_edge[f].discard(i)
                        if not by_edge[f]:
                            del by_edge[f]
        return alive
    raise HypergraphError(f"unknown deletion strategy {strategy!r}")


def _clean(G_kept: Hypergraph, F, stats, strategy, budget, rng=None):
    try:
        copies = [c.edges for c in enumerate_copies(F, G_kept, budget=budget)]
    except BudgetExceeded as exc:
        raise ExtractionAborted(str(exc), stats) from None
    stats.copies_in_filtered = len(copies)
    alive = _delete_copies(G_kept.edges, copies, strategy, rng)
    out = Hypergraph(G_kept.r, G_kept.n, sorted(alive))
    stats.deletions = G_kept.e - out.e
    stats.edges_final = out.e
    try:
        stats.certified_f_free = not has_copy(F, out, budget=budget)
    except BudgetExceeded as exc:
        raise ExtractionAborted(str(exc), stats) from None
    if not stats.certified_f_free:
        raise AssertionError("extraction left a copy of F behind")
    return out


def extract_f_free(G: Hypergraph, F: Hypergraph, H: Hypergraph, N: int, seed, strategy: str = "max-degree-greedy", budget: int = DEFAULT_COPY_BUDGET):
    """Keep the edges of G mapped onto edges of H^{(x)N} by a random map, then
    delete edges until no copy of F remains. Returns (F-free graph, stats)."""
    if not (G.r == F.r == H.r):
        raise HypergraphError("G, F and H must share a uniformity")
    if H.e == 0:
        raise HypergraphError("witness H has no edges")
    if N < 1:
        raise HypergraphError(f"N must be >= 1, got {N}")
    rng = np.random.default_rng(seed)
    images = rng.integers(0, H.n, size=(G.n, N))
    keep = tensor_filter_mask(G, H, images)
    stats = ExtractionStats(edges_sampled=G.e)
    kept = Hypergraph(G.r, G.n, [e for e, k in zip(G.edges, keep) if k])
    stats.edges_after_filter = kept.e
    return _clean(kept, F, stats, strategy, budget), stats


def random_deletion_baseline(G: Hypergraph, F: Hypergraph, seed, budget: int = DEFAULT_COPY_BUDGET):
    """Delete one random edge from every surviving copy of F in G itself."""
    rng = np.random.default_rng(seed)
    stats = ExtractionStats(edges_sampled=G.e, edges_after_filter=G.e)
    return _clean(G, F, stats, "random", budget, rng), stats


def exact_ex(G: Hypergraph, F: Hypergraph) -> tuple:
    """Maximum F-free subgraph of a small G by exhaustive subset search.

    Returns (size, edges). Copies are edge bitmasks; a subset is F-free iff it
    contains no copy mask.
    """
    index = {e: i for i, e in enumerate(G.edges)}
    masks = []
    for c in enumerate_copies(F, G):
        mk = 0
        for e in c.edges:
            mk |= 1 << index[e]
        masks.append(mk)
    m = G.e
    for k in range(m, -1, -1):
        for combo in combinations(range(m), k):
            s = 0
            for i in combo:
                s |= 1 << i
            if all(mk & s != mk for mk in masks):
                return k, tuple(G.edges[i] for i in combo)
    return 0, ()


# -- experiment harness ------------------------------------------------------------

CSV_COLUMNS = (
    "run_id", "seed", "n", "p", "r", "f_name", "witness_name", "strategy", "N",
    "edges_sampled", "edges_after_filter", "copies_in_filtered", "edges_final",
    "certified_f_free", "runtime_ms", "predicted_exponent",
)
STRATEGIES = {"tensor-auto": 1, "tensor-fixed": 2, "random-deletion": 3}


@dataclass
class ExperimentRecord:
    run_id: str
    seed: int
    n: int
    p: float
    r: int
    f_name: str
    witness_name: str
    strategy: str
    N: int
    edges_sampled: int
    edges_after_filter: Optional[int]
    copies_in_filtered: Optional[int]
    edges_final: Optional[int]
    certified_f_free: bool
    runtime_ms: float
    predicted_exponent: Optional[float]


@dataclass
class ExperimentConfig:
    n_grid: list = field(default_factory=lambda: [8, 10])
    p_grid: list = field(default_factory=lambda: [0.5, 1.0])
    r: int = 3
    f: str = "loose-cycle:3:3"
    witness: str = "complete:3:3"
    trials: int = 2
    strategies: list = field(default_factory=lambda: ["tensor-auto", "random-deletion"])
    fixed_N: int = 2
    deletion: str = "max-degree-greedy"
    seed: int = 0
    delta: Optional[float] = None
    s: Optional[float] = None
    budget: int = DEFAULT_COPY_BUDGET
    threads: int = 1
    timing: bool = True

    def validate(self):
        if not self.n_grid or not self.p_grid:
            raise HypergraphError("n_grid and p_grid must be nonempty")
        if self.trials < 1:
            raise HypergraphError("trials must be >= 1")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise HypergraphError(f"unknown strategy {s!r}; choose from {sorted(STRATEGIES)}")
        if self.deletion not in DELETION_STRATEGIES:
            raise HypergraphError(f"unknown deletion strategy {self.deletion!r}")
        for p in self.p_grid:
            if not 0 < p <= 1:
                raise HypergraphError(f"p = {p} outside (0, 1]")

    def to_text(self) -> str:
        lines = []
        for f_ in fields(self):
            v = getattr(self, f_.name)
            if isinstance(v, list):
                v = ",".join(str(x) for x in v)
            elif v is None:
                v = "auto"
            elif isinstance(v, bool):
                v = "on" if v else "off"
            lines.append(f"{f_.name}={v}")
        return "\n".join(lines) + "\n"


_LISTS = {"n_grid": int, "p_grid": float, "strategies": str}
_SCALARS = {"r": int, "f": str, "witness": str, "trials": int, "fixed_N": int, "deletion": str,
            "seed": int, "delta": float, "s": float, "budget": int, "threads": int}


def parse_config(text: str) -> ExperimentConfig:
    """Flat ``key=value`` lines; lists are comma-separated; ``#`` starts a comment."""
    cfg = ExperimentConfig()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise HypergraphError(f"malformed config line {raw!r}")
        key, val = (t.strip() for t in line.split("=", 1))
        try:
            if key in _LISTS:
                setattr(cfg, key, [_LISTS[key](x.strip()) for x in val.split(",") if x.strip()])
            elif key in _SCALARS:
                if key in ("delta", "s") and val == "auto":
                    setattr(cfg, key, None)
                else:
                    setattr(cfg, key, _SCALARS[key](val))
            elif key == "timing":
                cfg.timing = val.lower() in ("1", "on", "true", "yes")
            else:
                raise HypergraphError(f"unknown config key {key!r}")
        except ValueError:
            raise HypergraphError(f"bad value for {key!r}: {val!r}") from None
    cfg.validate()
    return cfg


def derive_seed(*parts: int) -> int:
    """Stateless mixing of integers into a 63-bit seed (numpy SeedSequence)."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def _trial(cfg: ExperimentConfig, F, H, alpha, s, i_n, n, i_p, p, trial):
    seed = derive_seed(cfg.seed, i_n, i_p, trial)
    G = random_hypergraph(n, p, cfg.r, seed)
    try:
        pred = predicted_curve(F, s, n, p)
    except HypergraphError:
        pred = None
    out = []
    for strat in cfg.strategies:
        t0 = time.perf_counter()
        run_seed = derive_seed(seed, STRATEGIES[strat])
        if strat == "random-deletion":
            N = 0
        elif strat == "tensor-fixed":
            N = cfg.fixed_N
        else:
            N = choose_tensor_exponent(alpha, s, F, n, p, cfg.delta).N
        try:
            if N == 0:
                _, st = random_deletion_baseline(G, F, run_seed, cfg.budget)
            else:
                _, st = extract_f_free(G, F, H, N, run_seed, cfg.deletion, cfg.budget)
        except ExtractionAborted as exc:
            st = exc.stats
            st.edges_final = None
            st.certified_f_free = False
        ms = (time.perf_counter() - t0) * 1000 if cfg.timing else 0.0
        if st.edges_final is not None:
            assert st.certified_f_free and st.edges_final <= st.edges_after_filter <= st.edges_sampled
        out.append(ExperimentRecord(
            run_id=f"n{n}-p{p}-t{trial}-{strat}", seed=seed, n=n, p=p, r=cfg.r,
            f_name=F.name or cfg.f, witness_name=H.name or cfg.witness, strategy=strat, N=N,
            edges_sampled=st.edges_sampled, edges_after_filter=st.edges_after_filter,
            copies_in_filtered=st.copies_in_filtered, edges_final=st.edges_final,
            certified_f_free=st.certified_f_free, runtime_ms=round(ms, 3), predicted_exponent=pred,
        ))
    return out


def run_experiment(cfg: ExperimentConfig) -> list:
    """One record per (n, p, trial, strategy), sorted by those keys.

    Trial t at grid position (i_n, i_p) samples G with seed
    derive_seed(master, i_n, i_p, t); each strategy then runs with
    derive_seed(that seed, strategy code). Output does not depend on threads.
    """
    cfg.validate()
    F = parse_family(cfg.f)
    H = parse_family(cfg.witness)
    if F.r != cfg.r or H.r != cfg.r:
        raise HypergraphError("f and witness must have uniformity r")
    g = gap_of(F, H)
    if g.gap is None:
        raise HypergraphError("witness gives no defined gap for F")
    alpha = g.t_edge.value
    s = cfg.s if cfg.s is not None else max(g.gap, 0.0)
    if "tensor-auto" in cfg.strategies:
        for n in cfg.n_grid:
            for p in cfg.p_grid:
                choose_tensor_exponent(alpha, s, F, n, p, cfg.delta)  # domain check up front
    tasks = [(i_n, n, i_p, p, t) for i_n, n in enumerate(cfg.n_grid)
             for i_p, p in enumerate(cfg.p_grid) for t in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        chunks = list(pool.map(lambda a: _trial(cfg, F, H, alpha, s, *a), tasks))
    records = [r for c in chunks for r in c]
    records.sort(key=lambda r: (r.n, r.p, int(r.run_id.split("-t")[1].split("-")[0]), r.strategy))
    return records


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        d = asdict(rec)
        w.writerow([_cell(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()
