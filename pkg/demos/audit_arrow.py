# %% [markdown]
# # Auditing the abelian-category axioms on arrow/{0, Z2}
#
# The universe holds every Ab-bipresheaf on the arrow category whose groups
# are 0 or Z2. The audit builds kernels and cokernels for every morphism and
# checks each axiom; a finding is a replayable counterexample.

# %%
import time

from lingroth.audit import Universe, find_nonabelian_witness, replay_finding
from lingroth.fixtures import load_corpus

corpus = load_corpus()

# %%
u = corpus["U_ARROW"]
t0 = time.perf_counter()
report = find_nonabelian_witness(u)
print(f"{report.objects} objects, {report.morphisms} morphisms in {time.perf_counter() - t0:.1f}s")
print("checked:", report.checked)
print("findings:", len(report.findings), "exhaustive:", report.exhaustive)

# %%
# a hand-picked sub-universe of two objects lacks the cokernel object, so the
# inclusion S_Y -> P_C2 looks epi without being a cokernel: findings appear
trunc = corpus["U_TRUNC"]
small = find_nonabelian_witness(trunc)
for f in small.findings:
    print(f.axiom, f.witness, "replays:", replay_finding(trunc, f))

# %%
# a tight budget stops early and says so
tight = Universe(u.base, u.groups, budget=50, name="tight")
r = find_nonabelian_witness(tight)
print("exhaustive:", r.exhaustive, "|", r.truncation)
