# %% [markdown]
# Closing generator sets in PGL(3)
#
# Projective elements are canonical matrices (first nonzero entry 1); the
# closure is a breadth-first search with a multiplication table.

# %%
import time
from collections import Counter

from icosacurves.generators import generator_catalog
from icosacurves.groups import center, closure, image_and_kernel, linear_projective_consistency

for d in (30, 20, 12):
    t = time.perf_counter()
    g = closure(generator_catalog("Gtilde", d))
    print(f"d={d}: {g.order} elements ({time.perf_counter() - t:.2f}s), center {center(g).order}")

# %% [markdown]
# Restricting to the upper 2x2 block gives the exact sequence
# 1 -> <lambda_d> -> G -> A5 -> 1.

# %%
g = closure(generator_catalog("Gtilde(20)"))
ik = image_and_kernel(g)
print("image", ik.image.order, "kernel", ik.kernel.order)

# %%
ico = closure(generator_catalog("icosahedral_2x2"), "linear")
print("binary icosahedral group:", ico.order)
print("element orders:", sorted(Counter(ico.orders().tolist()).items()))

# %% [markdown]
# The linear lift of the C30 generators contains ten scalar matrices, and the
# projective group is exactly the quotient by them.

# %%
print(linear_projective_consistency(generator_catalog("Gtilde(30)")))
