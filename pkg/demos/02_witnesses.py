# Progression-free sets feed the Ruzsa-Szemeredi triangle system: linear,
# loose-triangle-free, and rigid (every loose triangle collapses onto one edge).
from sidoturan import behrend_set, greedy_partial_steiner, rigidity_check, rs_triangle_system
from sidoturan import validate_witness_properties
from sidoturan.constructions import fano_plane

for m in (9, 27, 81, 243):
    S = behrend_set(m)
    print(f"m={m:3d}: |S|={len(S):3d}  S[:8]={S[:8]}")

# %%
for m in (9, 27, 81):
    H = rs_triangle_system(m, behrend_set(m))
    rep = validate_witness_properties(H, 2, 3)
    print(f"rs:{m}  v={H.n} e={H.e} linear={rep.linear} C3-free={rep.expansion_free} rigid={rigidity_check(H, 2, 3)}")

# %% the Fano plane is linear but contains loose triangles
print(validate_witness_properties(fano_plane(), 2, 3).to_json())

# %% greedy analogue for k = 3
H = greedy_partial_steiner(10, 4, 3, seed=1)
print("greedy 4-graph:", H.e, "edges;", validate_witness_properties(H, 3, 4).to_json())
