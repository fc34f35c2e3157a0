# %% [markdown]
# Exact arithmetic in Q(zeta_n)
#
# Elements are stored in the power basis modulo the n-th cyclotomic
# polynomial, so equality is a coordinate comparison.

# %%
from fractions import Fraction

from icosacurves.cyclo import cyclotomic_polynomial, field, sqrt5

print("Phi_5  =", cyclotomic_polynomial(5))
print("deg Phi_60 =", len(cyclotomic_polynomial(60)) - 1)

# %%
F5 = field(5)
z = F5.zeta()
r5 = z - z**2 - z**3 + z**4
print("(z - z^2 - z^3 + z^4)^2 =", r5 * r5)
print("same as sqrt5(F5):", r5 == sqrt5(F5))

# %%
a = 1 + z
print("1/(1 + z5) =", a.inv())
print("check:", a * a.inv())

# %% [markdown]
# Embeddings send zeta_m to zeta_n^(n/m). The twelfth root of zeta_5 used in
# the C12 generators is zeta_60.

# %%
F60 = field(60)
xi = F60.zeta()
print("xi^12 == zeta5:", xi**12 == z.embed(F60))
print("sqrt5 in Q(zeta60) squared:", sqrt5(F60) ** 2)
print("7/3 embedded:", F60(Fraction(7, 3)))

# %%
print(z.to_json())
