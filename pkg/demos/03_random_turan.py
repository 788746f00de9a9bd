# F-free subgraphs of G(n,p) by mapping into tensor powers of a witness.
from fractions import Fraction

import numpy as np

from sidoturan import choose_tensor_exponent, complete, extract_f_free, loose_cycle, random_hypergraph
from sidoturan.turan import ExperimentConfig, records_to_csv, run_experiment

C3, K = loose_cycle(3, 3), complete(3, 3)
alpha, s = Fraction(2, 9), 0.19126813092755546

# %% the tensor exponent grows with n
for n in (27, 81, 243, 729):
    plan = choose_tensor_exponent(alpha, s, C3, n, 1.0)
    print(f"n={n:4d}  q={plan.q:.3e}  N={plan.N}")

# %% one extraction, step by step
G = random_hypergraph(12, 0.6, 3, seed=1)
out, st = extract_f_free(G, C3, K, 1, seed=2)
print(st)

# %% expected survivors on K_8^3 with N=2: alpha^N e(G) - alpha^((s+e)N) N_F(G)
G = complete(8, 3)
vals = [extract_f_free(G, C3, K, 2, seed=i)[1].edges_final for i in range(2000)]
print("mean edges_final:", np.mean(vals), " bound:", float(alpha) ** 2 * 56 - float(alpha) ** (2 * (s + 3)) * 3360)

# %% a small grid, all three strategies
cfg = ExperimentConfig(n_grid=[8, 10, 12], p_grid=[0.3, 0.6], trials=2,
                       strategies=["tensor-auto", "tensor-fixed", "random-deletion"], timing=False)
print(records_to_csv(run_experiment(cfg)))
