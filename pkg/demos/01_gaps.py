# Sidorenko gaps: how far a loose triangle falls short of the Sidorenko bound.
from fractions import Fraction

from sidoturan import complete, gap, loose_cycle, mixed_witness_certify, tensor_power, witness_search
from sidoturan.homomorphism import density

C3, C4, K = loose_cycle(3, 3), loose_cycle(4, 3), complete(3, 3)

# %% exact densities against the single edge
print("t_C3(K)   =", density(C3, K))
print("t_edge(K) =", density(K, K))

# %% the gap ln t_F / ln t_edge - e(F); positive means F is not Sidorenko
for F in (C3, C4):
    g = gap(F, K)
    print(f"gap({F.name}, K_3^3) = {g.gap:+.6f}")

# %% tensor powers keep the gap fixed while the edge density drops
for N in (1, 2, 3):
    g = gap(C3, tensor_power(K, N))
    print(f"N={N}: v={3 ** N:3d}  t_edge={float(g.t_edge.value):.3e}  gap={g.gap:.12f}")

# %% nothing on five vertices beats K_3^3 for C3; even cycles stay at or below zero
print("best C3 gap, v<=5:", witness_search(C3, "exhaustive", v_max=5).best.gap)
best4 = witness_search(C4, "exhaustive", v_max=4).best
print("best C4 gap, v<=4:", None if best4 is None else best4.gap)

# %% mixing with a constant weighting
res = mixed_witness_certify(C3, [Fraction(0), Fraction(1, 4), Fraction(1, 2)], [1, 2])
print("mixed witness for C3:", res.witness.name, f"{res.gap:.6f}")
print("mixed witness for C4:", mixed_witness_certify(C4))
