"""The conic-side classification of conjugate pairs at q = 4.

Points are the 120 unordered pairs {t, t^(q^2)} with t outside GF(q^2).
A cross-ratio-like invariant rho feeds the trace invariant
rhat = 1/(rho + rho^(-1)), and membership of rhat in three subsets of the
zero-trace elements of GF(q^2) assigns one of three classes.
"""

from collections import Counter

from hxpw import conic
from hxpw.fields import tower

ctx = tower(2)
reps = conic.pair_reps(ctx)
print(f"index set: {len(reps)} conjugate pairs, first few reps {reps[:6]}")

s, t = reps[0], reps[1]
r = conic.rho(ctx, s, t)
print(f"\nrho({s},{t}) = {r}; swapping a representative inverts it:",
      conic.rho(ctx, s, ctx.conj(t)) == ctx.inv(r))
print("rhat =", conic.rho_hat(ctx, s, t), "-> class", conic.classify(ctx, s, t))

bundle = conic.table_bundle(ctx)
row = Counter(bundle["table"][0].tolist())
row.pop(0)
print("\nvalencies of point 0:", dict(sorted(row.items())))
print("closed-form identity held on every pair:", bundle["closed_form_ok"])

fine = bundle["fine_to_coarse"]
print(f"\nrefined scheme: {len(fine)} classes keyed by the value pair "
      "{rho, 1/rho}")
grouping = Counter(fine.values())
print("refined classes per coarse class:", dict(sorted(grouping.items())))

# one planar realization: the line of the pair misses the fixed conic
line = conic.pair_line(ctx, s)
print("\npair line misses the conic:", conic.line_misses_conic(ctx, line))
