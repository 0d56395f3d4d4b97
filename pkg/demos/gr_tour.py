# %% [markdown]
# # A tour of Gr(R) on the square
#
# FIX5 is a bipresheaf of rings over the commuting square x -> {y1, y2} -> z.
# Morphisms of Gr(R) are formal sums of triples (f, r1, r2); we build a few,
# compose them, and watch the normal form merge equal terms.

# %%
import numpy as np

from lingroth.fixtures import load_corpus
from lingroth.grothendieck import GrCategory, check_category_laws, count_pure, gr_compose, summary

corpus = load_corpus()
G = GrCategory(corpus["FIX5"])
print("objects:", G.objects)

# %%
# hom-set sizes of the base category against the number of pure families on each pair
s = summary(G, samples=2)
for pair, info in s["homs"].items():
    print(f"{pair:6s} base={info['base']!s:12s} pure families={info['pure_families']}")

# %%
# compose two pure morphisms along x -> y1 -> z
phi = G.morphism("x", "y1", [("f1", "1", "e")])
psi = G.morphism("y1", "z", [("g1", "1", "e")])
print(G.describe(psi), "o", G.describe(phi), "=", G.describe(gr_compose(G, psi, phi)))

# %%
# FIX5B has two arrows x -> y and two y -> z, with g1f1 = g2f2 = d and g1f2 = g2f1 = e,
# so composing the two-term sums hits d and e twice each
H = GrCategory(corpus["FIX5B"])
a = H.morphism("x", "y", [("f1", "1", "e"), ("f2", "1", "e")])
b = H.morphism("y", "z", [("g1", "1", "e"), ("g2", "1", "e")])
print(H.describe(gr_compose(H, b, a)))
print("pure families x -> y:", count_pure(H, "x", "y"))

# %%
# identity and associativity, checked over every composable triple
for name in ["FIX1", "FIX2", "FIX3", "FIX5"]:
    rep = check_category_laws(GrCategory(corpus[name]))
    print(f"{name}: category laws {'hold' if rep.ok else 'fail'}")

# %%
# the underlying tables are plain numpy arrays
R = G.R1("x")
print(R.elements)
print(np.asarray(R.mul))
