# %% [markdown]
# # Completing a two-point antichain
#
# Over the one-object base every Q-category is a preorder, and the MacNeille
# completion should agree with the classical Dedekind-MacNeille construction.
# The two-point antichain has no joins at all, so the completion has to add a
# bottom and a top.

# %%
from freeqcat import fixtures
from freeqcat.limits import is_total
from freeqcat.macneille import completion_properties, macneille

E = fixtures.E_AC()
print(E, "total:", is_total(E).value)

# %% [markdown]
# Cuts are the presheaves fixed by lower-bounds-of-upper-bounds.
# Each one is listed by the points it contains.

# %%
M = macneille(E)
for phi in M.cut_index:
    points = sorted(x for x, h in phi.components.items() if h.elems)
    print(phi.id, points)

# %% [markdown]
# The embedding sends each point to its principal cut. Homs in the completion
# are inclusions, so printing the nonempty ones draws the diamond.

# %%
R = M.completion
names = {p.id: "{" + ",".join(sorted(x for x, h in p.components.items() if h.elems)) + "}" for p in M.cut_index}
for (a, b), h in sorted(R.homs.items()):
    if h.elems and a != b:
        print(f"{names[a]:>7} <= {names[b]}")
print("J:", {x: names[M.embedding(x)] for x in E.ids})

# %%
print(completion_properties(E))
