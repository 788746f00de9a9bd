import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from sidoturan.constructions import complete, empty, loose_cycle, random_hypergraph, tensor_power, tensor_vertex_id
from sidoturan.homomorphism import copy_count
from sidoturan.hypergraph import Hypergraph, HypergraphError
from sidoturan.turan import (
    CSV_COLUMNS,
    ExperimentConfig,
    choose_tensor_exponent,
    derive_seed,
    exact_ex,
    extract_f_free,
    parse_config,
    random_deletion_baseline,
    records_to_csv,
    run_experiment,
    tensor_filter_mask,
)
from oracles import naive_copy_sets, naive_max_free

C3, K33 = loose_cycle(3, 3), complete(3, 3)
ALPHA = Fraction(2, 9)


def _hp_q(alpha, s, v, e, r, n, p, delta):
    with mpmath.workdps(50):
        s, n, p, delta = (mpmath.mpf(x) for x in (s, n, p, delta))
        k = e - 1 + s
        return delta * n ** (-(v - r) / k) * p ** (-(e - 1) / k)


def test_choose_tensor_exponent_example():
    plan = choose_tensor_exponent(ALPHA, 0.1913, C3, 729, 1.0)
    q = _hp_q(ALPHA, 0.1913, 6, 3, 3, 729, 1, 1 / mpmath.log(729))
    assert plan.N == 8
    assert abs(plan.q - float(q)) < 1e-12 * float(q)
    assert abs(plan.q - 1.83e-5) < 0.01e-5
    assert abs(plan.delta_n - 0.1517) < 1e-4


@given(st.integers(8, 5000), st.floats(0.05, 1.0), st.floats(0.0, 2.0))
def test_choose_tensor_exponent_postcondition(n, p, s):
    if math.log(p) < -1.5 * math.log(n):
        return
    plan = choose_tensor_exponent(ALPHA, s, C3, n, p)
    a = float(ALPHA)
    assert a ** plan.N <= plan.q * (1 + 1e-12)
    if plan.N > 1:
        assert plan.q < a ** (plan.N - 1)


def test_choose_tensor_exponent_large_q_and_errors():
    plan = choose_tensor_exponent(Fraction(1, 100), 0.0, C3, 2, 1.0, delta_n=1.0)
    assert plan.q >= 0.01 and plan.N == 1
    for kw in [dict(alpha=1), dict(alpha=0), dict(s=-1), dict(p=1e-9), dict(delta_n=2.0)]:
        args = dict(alpha=ALPHA, s=0.2, F=C3, n=100, p=1.0)
        args.update(kw)
        with pytest.raises(HypergraphError):
            choose_tensor_exponent(**args)


def test_tensor_membership_example():
    G = Hypergraph(3, 3, [(0, 1, 2)])
    keep = tensor_filter_mask(G, K33, np.array([[0, 0], [1, 1], [2, 2]]))
    drop = tensor_filter_mask(G, K33, np.array([[0, 0], [1, 1], [2, 1]]))
    assert keep == [True] and drop == [False]


def test_implicit_matches_explicit_tensor():
    G = complete(7, 3)
    T = tensor_power(K33, 2)
    rng = np.random.default_rng(11)
    for _ in range(50):
        images = rng.integers(0, 3, size=(7, 2))
        explicit = [tuple(sorted(tensor_vertex_id(images[x], 3) for x in e)) in T.edge_set for e in G.edges]
        assert tensor_filter_mask(G, K33, images) == explicit


def test_extract_empty_host():
    out, st_ = extract_f_free(empty(8, 3), C3, K33, 2, 0)
    assert out.e == 0 and st_.deletions == 0 and st_.certified_f_free


@pytest.mark.parametrize("strategy", ["max-degree-greedy", "first-found"])
def test_extract_certified(strategy):
    for seed in range(30):
        G = random_hypergraph(9, 0.6, 3, seed)
        out, st_ = extract_f_free(G, C3, K33, 1, seed, strategy)
        assert not naive_copy_sets(C3, out)
        assert st_.edges_final == out.e <= st_.edges_after_filter <= st_.edges_sampled
        assert set(out.edges) <= set(G.edges)


def test_extract_deterministic_and_errors():
    G = random_hypergraph(10, 0.5, 3, 2)
    assert extract_f_free(G, C3, K33, 2, 5) == extract_f_free(G, C3, K33, 2, 5)
    with pytest.raises(HypergraphError):
        extract_f_free(G, C3, complete(3, 2).__class__(2, 3, [(0, 1)]), 1, 0)
    with pytest.raises(HypergraphError):
        extract_f_free(G, C3, empty(3, 3), 1, 0)
    with pytest.raises(HypergraphError):
        extract_f_free(G, C3, K33, 1, 0, "nosuch")


def test_random_deletion_baseline():
    G = random_hypergraph(9, 0.5, 3, 4)
    out, st_ = random_deletion_baseline(G, C3, 1)
    assert copy_count(C3, out) == 0 and st_.edges_after_filter == G.e


def test_filtered_mean_near_alpha_power():
    G = complete(8, 3)
    vals = [extract_f_free(G, C3, K33, 1, s)[1].edges_after_filter for s in range(400)]
    mean, se = np.mean(vals), np.std(vals, ddof=1) / math.sqrt(len(vals))
    assert abs(mean - float(ALPHA) * G.e) <= 4 * se


@pytest.mark.parametrize("seed", range(6))
def test_exact_ex_matches_naive(seed):
    G = random_hypergraph(7, 0.3, 3, seed)
    size, edges = exact_ex(G, C3)
    assert size == naive_max_free(G, C3) == len(edges)
    assert not naive_copy_sets(C3, Hypergraph(3, 7, edges))


def _small_cfg(**kw):
    base = dict(n_grid=[8, 9], p_grid=[0.5, 1.0], trials=2,
                strategies=["tensor-auto", "tensor-fixed", "random-deletion"], timing=False)
    base.update(kw)
    return ExperimentConfig(**base)


def test_run_experiment_schema_and_invariants():
    cfg = _small_cfg()
    recs = run_experiment(cfg)
    assert len(recs) == 2 * 2 * 2 * 3
    for r in recs:
        assert r.certified_f_free and r.edges_final <= r.edges_after_filter <= r.edges_sampled
    header = records_to_csv(recs).splitlines()[0]
    assert tuple(header.split(",")) == CSV_COLUMNS and len(CSV_COLUMNS) == 16
    keys = [(r.n, r.p, r.run_id) for r in recs]
    assert [k[:2] for k in keys] == sorted(k[:2] for k in keys)


def test_run_experiment_deterministic_across_threads():
    a = records_to_csv(run_experiment(_small_cfg(threads=1)))
    b = records_to_csv(run_experiment(_small_cfg(threads=4)))
    assert a == b


def test_run_experiment_budget_abort_is_flagged():
    recs = run_experiment(_small_cfg(strategies=["random-deletion"], p_grid=[1.0], budget=20))
    assert recs and all(not r.certified_f_free and r.edges_final is None for r in recs)
    assert ",false," in records_to_csv(recs)


def test_flat_prediction_with_s_zero():
    recs = run_experiment(_small_cfg(s=0.0, strategies=["tensor-fixed"], trials=1))
    for n in (8, 9):
        col = {r.predicted_exponent for r in recs if r.n == n}
        assert len(col) == 1


def test_config_parse_round_trip():
    cfg = _small_cfg(delta=0.25, seed=9)
    assert parse_config(cfg.to_text()) == cfg
    text = "# comment\nn_grid = 8, 10\np_grid=0.5\nstrategies=tensor-auto\ntiming=off\n"
    c = parse_config(text)
    assert c.n_grid == [8, 10] and c.p_grid == [0.5] and not c.timing
    for bad in ["n_grid", "bogus=1", "trials=x", "trials=0", "strategies=magic", "p_grid=2"]:
        with pytest.raises(HypergraphError):
            parse_config(bad)


def test_derive_seed_stateless():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3) != derive_seed(1, 2, 4)
    assert 0 <= derive_seed(0) < 2 ** 63
