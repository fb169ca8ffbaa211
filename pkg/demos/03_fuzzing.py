# %% [markdown]
# # Random instances and the conformance suite
#
# The harness draws a small random base category, then a random faithful
# functor into it. All draws are seeded, so every case can be regenerated
# from the seed and its index.

# %%
from collections import Counter

from freeqcat.harness import GenConfig, check_case, conformance, gen_instance
from freeqcat.limits import is_total

cfg = GenConfig(seed=42)
sample = [gen_instance(cfg, i) for i in range(200)]
print("base sizes:", Counter(len(E.base.morphisms) for E in sample))
print("object counts:", Counter(len(E) for E in sample))
print("total:", sum(is_total(E).value for E in sample), "of", len(sample))

# %% [markdown]
# A single case runs every check: agreement of the four characterizations of
# totality, both dualities, the completion properties and the Isbell laws.

# %%
E = sample[5]
print(E.to_json())
print(check_case(E))

# %% [markdown]
# The full suite runs the pinned fixtures followed by the random cases. Failing
# cases would be written as Q-category JSON under ``out_dir``.

# %%
report = conformance(cfg, 200)
print(report.summary())
