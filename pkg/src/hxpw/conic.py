"""The conic-side 3-class scheme on Frobenius-conjugate pairs.

The index set is the (q^4 - q^2)/2 unordered pairs {t, t^(q^2)} with
t in GF(q^4) outside GF(q^2); each pair is stored through the orbit
representative with the smaller encoding.  The classifying invariant of an
unordered pair of pairs is

    rho(s, t)  = (s+t)(s^(q^2)+t^(q^2)) / ((s+t^(q^2))(s^(q^2)+t))
    rhat(s, t) = 1 / (rho + rho^(-1))  =  nu^2 + nu,   nu = 1/(rho + 1),

whose value always lies in the zero-trace subset of GF(q^2).  The class is
1, 2 or 3 according as rhat falls in the nonzero zero-trace part of GF(q),
the nonzero-trace part of GF(q), or outside GF(q).  Refining by the value
of {rho, rho^(-1)} itself instead gives q^2/2 - 1 classes, and grouping
those by rhat recovers the coarse classes.

rho = 1 is algebraically impossible for distinct pairs (rho + 1 is a ratio
of nonzero products), but since the class dictionary would degenerate
there, any occurrence is reported as a hard failure, never guessed around.

Every pair can also be realized as a line of PG(2, q^2) missing the fixed
conic {(1, c, c^2)} u {(0, 0, 1)}: the unique GF(q^2)-rational line whose
quadratic extension cuts the extended conic exactly in the pair's two
points.  That realization is kept as a consistency layer; the pair set
itself is the primary index set.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import geometry
from .fields import FieldTower


class ClassificationError(RuntimeError):
    """An invariant landed outside the class dictionary (certificate failure)."""


@lru_cache(maxsize=None)
def pair_reps(ctx: FieldTower) -> tuple[int, ...]:
    """Sorted minimal representatives of the conjugate pairs.

    This tuple is the shared index set for every scheme in the package;
    position in it is the point index.
    """
    arr = np.arange(ctx.size, dtype=np.int64)
    conj = ctx.frob_arr(arr, 2 * ctx.h)
    reps = arr[(conj != arr) & (arr < conj)]
    if reps.size != (ctx.q4 - ctx.q2) // 2:
        raise RuntimeError("conjugate pair census mismatch")
    return tuple(int(x) for x in reps)


@lru_cache(maxsize=None)
def trace_sets(ctx: FieldTower):
    """The classification subsets of the zero-trace elements of GF(q^2).

    Returns a dict with frozensets t0_q2, s0_star, s1, t0_outside and the
    numpy lookup table `cls` mapping a rhat value to its class 1..3
    (0 marks values outside every class, which certification treats as a
    hard error).
    """
    h = ctx.h
    t0_q2 = frozenset(x for x in ctx.subfield(2 * h) if ctx.abs_trace(x, 2 * h) == 0)
    t0_q = frozenset(x for x in ctx.subfield(h) if ctx.abs_trace(x, h) == 0)
    gq = frozenset(ctx.subfield(h))
    s0_star = t0_q - {0}
    s1 = gq - t0_q
    t0_outside = t0_q2 - gq
    cls = np.zeros(ctx.size, dtype=np.int8)
    for x in s0_star:
        cls[x] = 1
    for x in s1:
        cls[x] = 2
    for x in t0_outside:
        cls[x] = 3
    return {"t0_q2": t0_q2, "s0_star": s0_star, "s1": s1,
            "t0_outside": t0_outside, "cls": cls}


# ---------------------------------------------------------------------------
# scalar invariants

def rho(ctx, s, t):
    cj = ctx.conj
    s2, t2 = cj(s), cj(t)
    if {s, s2} == {t, t2} or s == s2 or t == t2:
        raise ValueError("rho needs two distinct conjugate pairs")
    num = ctx.mul(s ^ t, s2 ^ t2)
    den = ctx.mul(s ^ t2, s2 ^ t)
    return ctx.div(num, den)


def rho_hat(ctx, s, t):
    r = rho(ctx, s, t)
    d = r ^ ctx.inv(r)
    if d == 0:  # rho = 1; see module docstring
        raise ClassificationError(f"rho = 1 at pair ({s}, {t})")
    return ctx.inv(d)


def nu(ctx, s, t):
    """1/(rho + 1); the bridge invariant to the polar-space side."""
    return ctx.inv(rho(ctx, s, t) ^ 1)


def classify(ctx, s, t) -> int:
    c = int(trace_sets(ctx)["cls"][rho_hat(ctx, s, t)])
    if c == 0:
        raise ClassificationError(f"rhat outside every class at pair ({s}, {t})")
    return c


def fine_label(ctx, s, t):
    """The unordered value pair {rho, rho^(-1)}, smaller encoding first."""
    r = rho(ctx, s, t)
    ri = ctx.inv(r)
    return (r, ri) if r <= ri else (ri, r)


# ---------------------------------------------------------------------------
# bulk table construction

def _pair_arrays(ctx, reps=None):
    reps = np.array(pair_reps(ctx) if reps is None else reps, dtype=np.int64)
    conj = ctx.frob_arr(reps, 2 * ctx.h)
    return reps, conj


def rho_of_pairs(ctx, si, ti):
    """Vectorized rho over index arrays into the representative list."""
    reps, conj = _pair_arrays(ctx)
    s, s2, t, t2 = reps[si], conj[si], reps[ti], conj[ti]
    num = ctx.mul_arr(s ^ t, s2 ^ t2)
    den = ctx.mul_arr(s ^ t2, s2 ^ t)
    if np.any(num == 0) or np.any(den == 0):
        raise ClassificationError("vanishing cross-ratio factor on distinct pairs")
    return ctx.div_arr(num, den)


def table_bundle(ctx):
    """Full n x n class table plus the raw invariant sweep data.

    Returns a dict with:
      table       n x n int8 class matrix (0 on the diagonal)
      rho, rhat   condensed upper-triangle value arrays
      closed_form_ok   whether rhat == nu^2 + nu held on every pair
      fine_labels      condensed array of fine class indices 1..q^2/2 - 1
      fine_table       n x n int8 fine class matrix
      fine_to_coarse   dict fine index -> coarse class
    """
    n = len(pair_reps(ctx))
    iu, ju = np.triu_indices(n, 1)
    r = rho_of_pairs(ctx, iu, ju)
    rinv = ctx.inv_arr(r)
    d = r ^ rinv
    if np.any(d == 0):
        raise ClassificationError("rho = 1 occurred in bulk sweep")
    rhat = ctx.inv_arr(d)
    nu_arr = ctx.inv_arr(r ^ 1)
    closed = ctx.mul_arr(nu_arr, nu_arr) ^ nu_arr
    closed_form_ok = bool(np.array_equal(closed, rhat))

    cls = trace_sets(ctx)["cls"][rhat]
    if np.any(cls == 0):
        bad = int(np.argmax(cls == 0))
        raise ClassificationError(
            f"rhat value {int(rhat[bad])} outside every class at condensed index {bad}")
    table = np.zeros((n, n), dtype=np.int8)
    table[iu, ju] = cls
    table[ju, iu] = cls

    lo = np.minimum(r, rinv)
    labels, fine_idx = np.unique(lo, return_inverse=True)
    fine_idx = (fine_idx + 1).astype(np.int16)
    fine_table = np.zeros((n, n), dtype=np.int16)
    fine_table[iu, ju] = fine_idx
    fine_table[ju, iu] = fine_idx
    cls_of = trace_sets(ctx)["cls"]
    fine_to_coarse = {}
    for k, lam in enumerate(labels, start=1):
        dd = int(lam) ^ int(ctx.inv(int(lam)))
        fine_to_coarse[k] = int(cls_of[ctx.inv(dd)]) if dd else 0
    return {"table": table, "rho": r, "rhat": rhat, "nu": nu_arr,
            "closed_form_ok": closed_form_ok, "fine_labels": fine_idx,
            "fine_table": fine_table, "fine_to_coarse": fine_to_coarse}


# ---------------------------------------------------------------------------
# planar consistency layer

def conic_points(ctx):
    """The fixed conic of PG(2, q^2): {(1, c, c^2)} u {(0, 0, 1)}."""
    pts = [(1, c, ctx.sqr(c)) for c in ctx.subfield(2 * ctx.h)]
    pts.append((0, 0, 1))
    return pts


def pair_line(ctx, t):
    """The GF(q^2)-rational line joining (1,t,t^2) to its conjugate point.

    The rational vectors in the extension span are c*(1,t,t^2) +
    c^(q^2)*(conjugate); taking c in {1, omega} gives a basis.
    """
    cj = ctx.conj
    a = (1, t, ctx.sqr(t))
    b = tuple(cj(x) for x in a)
    rows = []
    for lam in (1, ctx.omega):
        lam2 = cj(lam)
        rows.append(tuple(ctx.mul(lam, x) ^ ctx.mul(lam2, y) for x, y in zip(a, b)))
    red, _ = geometry.rref_rows(ctx, rows)
    if len(red) != 2:
        raise RuntimeError(f"conjugate point pair for t={t} did not span a line")
    return tuple(red)


def line_misses_conic(ctx, line):
    """True when no conic point satisfies both line equations."""
    kern = geometry.nullspace(ctx, list(line), 3)
    if len(kern) != 1:
        raise ValueError("expected a line of PG(2, q^2)")
    (f,) = kern  # the dual functional cutting the line out
    on_line = lambda p: ctx.mul(f[0], p[0]) ^ ctx.mul(f[1], p[1]) ^ ctx.mul(f[2], p[2]) == 0
    return not any(on_line(p) for p in conic_points(ctx))


def passant_census(ctx):
    """Count lines of PG(2, q^2) missing the conic (expected (q^4-q^2)/2)."""
    count = 0
    for dual in geometry.projective_points(ctx, 3):
        kern = geometry.nullspace(ctx, [dual], 3)
        line, _ = geometry.rref_rows(ctx, kern)
        if line_misses_conic(ctx, tuple(line)):
            count += 1
    return count
