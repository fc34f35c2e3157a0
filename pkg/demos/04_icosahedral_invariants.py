# %% [markdown]
# Klein's icosahedral forms
#
# F12, F20, F30 are invariant under all 120 elements of the binary
# icosahedral group, are squarefree, and the Molien series matches the
# number of monomials in them up to degree 40.

# %%
from icosacurves.forms import (
    binary_squarefree,
    curve_catalog,
    invariance_character,
    invariant_monomial_counts,
    molien_series,
    tampered,
)
from icosacurves.generators import generator_catalog
from icosacurves.groups import closure

ico = closure(generator_catalog("icosahedral_2x2"), "linear")
for name in ("F12", "F20", "F30"):
    f = curve_catalog(name)
    print(name, invariance_character(f, ico).verdict, "squarefree:", binary_squarefree(f))

# %%
m = molien_series(ico, 40)
print([int(x) for x in m])
print("matches monomial counts:", m == invariant_monomial_counts((12, 20, 30), 40))

# %% [markdown]
# Changing a single coefficient destroys invariance.

# %%
with tampered("F20", 10, 495):
    print("F20 with 495:", invariance_character(curve_catalog("F20"), ico, stop_at_first_failure=True).verdict)

# %%
g = closure(generator_catalog("Gtilde(30)"))
print("C30 under its 1800 automorphisms:", invariance_character(curve_catalog("C30"), g).verdict)
