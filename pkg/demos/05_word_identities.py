# %% [markdown]
# Matrix word identities
#
# Every registered identity is measured exactly: equal, equal up to a scalar,
# or different (with the residual). Four catalogued forms do not hold; their
# repaired versions do.

# %%
from icosacurves.generators import RELATIONS, check_word_identity

for rel in RELATIONS:
    r = rel.check()
    extra = f" scalar {r.scalar}" if r.scalar is not None else ""
    print(f"{r.status:10} {rel.lhs} = {rel.rhs}{extra}")

# %%
print(check_word_identity("(sigma tau^4)^2", "D").status)
print(check_word_identity("(sigma tau^4)^3", "D").status)

# %% [markdown]
# The verdicts depend on the branch of sqrt(5); the groups do not.

# %%
for rel in RELATIONS[:9]:
    print(rel.relation_id, rel.check(1).status, rel.check(-1).status)
