# %% [markdown]
# # Sum-id, psi and phi
#
# The identity-sum condition asks that every pure family x -> y sums to 1 in
# R2(y). When it holds, psi and phi are inverse; when it fails, psi(M) can lose
# coherence. FIX2 passes, FIX3 fails.

# %%
import json

from lingroth.equivalence import StructureFailureReport, check_gr_coherence, phi, psi, roundtrip_check
from lingroth.fixtures import load_corpus
from lingroth.grothendieck import GrCategory, check_sum_id, replay_sum_id_witness

corpus = load_corpus()
G2, G3 = GrCategory(corpus["FIX2"]), GrCategory(corpus["FIX3"])

# %%
for G in (G2, G3):
    rep = check_sum_id(G)
    print(G.name, "sum-id:", "pass" if rep.ok else "fail", f"({rep.checked} families)")

# %%
# FIX3 fails on x -> y: the single term (1, 0)@f sums to 0 in R2(y)
witness = check_sum_id(G3).per_pair[("x", "y")]["witness"]
print(json.dumps(witness))
print("replays:", replay_sum_id_witness(G3, witness))

# %%
# counting the all-absent family too makes every nontrivial R2 fail on its empty sum
rep = check_sum_id(G3, "include_zero_morphism")
print("include-zero witness:", rep.witness, "sum =", rep.witness_sum)

# %%
# over FIX2 the round trip is exact and carries real content
rt = roundtrip_check(corpus["FIX4"], G2)
print("FIX4:", rt.to_dict())

# %%
# over FIX3 psi still produces something, but coherence breaks
F = psi(corpus["MOD3"], G3)
for v in check_gr_coherence(F).violations[:3]:
    print(v.law, v.witness)

# %%
# the trivial ring forces 0 = 1, so phi refuses to build a module
out = phi(corpus["GR_TRIVIAL"])
assert isinstance(out, StructureFailureReport)
for v in out.violations:
    print(v.law, v.witness, v.lhs, "!=", v.rhs)
