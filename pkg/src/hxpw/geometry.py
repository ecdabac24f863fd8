"""Projective and polar geometry over GF(q^2) inside the field tower.

Conventions, fixed once so every set comparison is exact tuple equality:

* a point of PG(k-1, q^2) is a k-tuple of ints whose first nonzero
  coordinate is 1;
* a line is a 2-row tuple in reduced row echelon form over GF(q^2);
* the hermitian form is h(X,Y) = X1 Y4^q + X2 Y2^q + X3 Y3^q + X4 Y1^q,
  with totally isotropic lines forming a generalized quadrangle of order
  (q^2, q);
* the symplectic substructure lives on vectors (a, x^q, x, b) with
  a, b in GF(q) and x in GF(q^2); restricted to those, h becomes the
  alternating form b_w and pairs with the quadratic form q_w of minus type;
* the Klein image of a line with basis rows r, s is the 6-tuple
  (p01, p02, p03, p12, p31, p23) of 2x2 minors, ordered so the ambient
  quadric on images is X1 X6 + X2 X5 + X3 X4;
* the 6-dimensional GF(q)-space of "conjugate-pattern" 6-vectors
  (x, x^q, y, y^q, z, z^q) carries the restricted quadratic form
  q_t(w) = x z^q + x^q z + y^(q+1) and its polar alternating form b_t.

GF(q)-linear algebra (kernels, spans, perps) is done in explicit GF(q)
coordinates obtained by splitting GF(q^2) over the basis {1, e}, where e is
the smallest element of GF(q^2) outside GF(q).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

W0 = (0, 0, 1, 1, 0, 0)  # the distinguished radical direction of the fixed hyperplane


# ---------------------------------------------------------------------------
# generic exact linear algebra on int-encoded rows (entries in any subfield)

def rref_rows(ctx, rows):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    width = len(rows[0])
    pivots = []
    r = 0
    for c in range(width):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = ctx.inv(rows[r][c])
        rows[r] = [ctx.mul(pv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x ^ ctx.mul(f, y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def nullspace(ctx, rows, width):
    """RREF basis of {v : M v = 0} for the matrix M given by `rows`."""
    red, pivots = rref_rows(ctx, rows)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * width
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = red[i][fc]  # char 2: -x = x
        basis.append(tuple(v))
    basis, _ = rref_rows(ctx, basis)
    return basis


# ---------------------------------------------------------------------------
# points and lines of PG(3, q^2)

def normalize_point(ctx, v):
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        raise ValueError("zero vector spans no point")
    if lead == 1:
        return tuple(v)
    s = ctx.inv(lead)
    return tuple(ctx.mul(s, x) for x in v)


def line_through(ctx, u, v):
    """Canonical line spanned by two independent vectors."""
    rows, _ = rref_rows(ctx, [u, v])
    if len(rows) != 2:
        raise ValueError("vectors do not span a line (rank < 2)")
    return tuple(rows)


def line_points(ctx, line):
    """The q^2 + 1 canonical points on a canonical line."""
    r1, r2 = line
    pts = [normalize_point(ctx, r2)]
    for c in ctx.subfield(2 * ctx.h):
        pts.append(normalize_point(ctx, tuple(a ^ ctx.mul(c, b) for a, b in zip(r1, r2))))
    return pts


def lines_meet(ctx, la, lb):
    """Number of common points of two distinct canonical lines (0 or 1)."""
    rows, _ = rref_rows(ctx, list(la) + list(lb))
    rank = len(rows)
    if rank == 3:
        return 1
    if rank == 4:
        return 0
    raise ValueError("lines are equal")


def projective_points(ctx, width):
    """All canonical points of PG(width-1, q^2), lead-1 enumeration order."""
    F = ctx.subfield(2 * ctx.h)
    for lead in range(width):
        head = (0,) * lead + (1,)
        for tail in itertools.product(F, repeat=width - 1 - lead):
            yield head + tail


# ---------------------------------------------------------------------------
# the hermitian form and its polar space

def hermitian(ctx, u, v):
    fq = ctx.frob_q
    m = ctx.mul
    return (m(u[0], fq(v[3])) ^ m(u[1], fq(v[1]))
            ^ m(u[2], fq(v[2])) ^ m(u[3], fq(v[0])))


def is_isotropic(ctx, p):
    return hermitian(ctx, p, p) == 0


@lru_cache(maxsize=None)
def hermitian_points(ctx):
    """All (q^2+1)(q^3+1) isotropic points, vectorized enumeration."""
    F = np.array(ctx.subfield(2 * ctx.h), dtype=np.int64)
    h = ctx.h
    norm = lambda x: ctx.mul_arr(x, ctx.frob_arr(x, h))
    pts = []
    # lead pattern (1, a, b, c): h(p,p) = c + c^q + N(a) + N(b)
    a, b, c = (x.ravel() for x in np.meshgrid(F, F, F, indexing="ij"))
    mask = (c ^ ctx.frob_arr(c, h) ^ norm(a) ^ norm(b)) == 0
    pts.extend((1, int(x), int(y), int(z)) for x, y, z in zip(a[mask], b[mask], c[mask]))
    # lead pattern (0, 1, b, c): h(p,p) = 1 + N(b)
    b, c = (x.ravel() for x in np.meshgrid(F, F, indexing="ij"))
    mask = norm(b) == 1
    pts.extend((0, 1, int(x), int(y)) for x, y in zip(b[mask], c[mask]))
    # lead pattern (0, 0, 1, c): h(p,p) = 1, never isotropic
    pts.append((0, 0, 0, 1))
    return tuple(pts)


# ---------------------------------------------------------------------------
# GF(q^2) = GF(q)(e) coordinate splitting

@lru_cache(maxsize=None)
def q2_basis(ctx):
    """(e, 1/(e + e^q)) for the smallest e in GF(q^2) outside GF(q)."""
    gq = set(ctx.subfield(ctx.h))
    e = next(x for x in ctx.subfield(2 * ctx.h) if x not in gq)
    return e, ctx.inv(e ^ ctx.frob_q(e))


def split_q2(ctx, c):
    """Write c in GF(q^2) as c0 + c1*e with c0, c1 in GF(q)."""
    e, dinv = q2_basis(ctx)
    c1 = ctx.mul(c ^ ctx.frob_q(c), dinv)
    return c ^ ctx.mul(c1, e), c1


def join_q2(ctx, c0, c1):
    e, _ = q2_basis(ctx)
    return c0 ^ ctx.mul(c1, e)


# ---------------------------------------------------------------------------
# the symplectic substructure on (a, x^q, x, b) vectors

def is_wvector(ctx, v):
    h = ctx.h
    return (ctx.in_subfield(v[0], h) and ctx.in_subfield(v[3], h)
            and v[1] == ctx.frob_q(v[2]))


def _check_wvector(ctx, v):
    if not is_wvector(ctx, v):
        raise ValueError(f"{v} does not have the (a, x^q, x, b) pattern")


def bhat(ctx, u, v):
    """Alternating GF(q)-form pairing two pattern vectors."""
    _check_wvector(ctx, u)
    _check_wvector(ctx, v)
    m = ctx.mul
    return m(u[0], v[3]) ^ m(u[3], v[0]) ^ m(u[2], v[1]) ^ m(u[1], v[2])


def qhat(ctx, u):
    """Minus-type quadratic form a*b + x^(q+1) on a pattern vector."""
    _check_wvector(ctx, u)
    return ctx.mul(u[0], u[3]) ^ ctx.mul(u[1], u[2])


def w_coords(ctx, v):
    """(a, x0, x1, b) GF(q)-coordinates of a pattern vector."""
    _check_wvector(ctx, v)
    x0, x1 = split_q2(ctx, v[2])
    return (v[0], x0, x1, v[3])


def w_from_coords(ctx, c):
    x = join_q2(ctx, c[1], c[2])
    return (c[0], ctx.frob_q(x), x, c[3])


def is_w_point(ctx, p):
    """Whether the PG(3,q^2) point has a representative pattern vector.

    Solved in O(1) through ratio conditions rather than scanning scalars.
    """
    p1, p2, p3, p4 = p
    h = ctx.h
    if p1 != 0:
        return (ctx.in_subfield(ctx.div(p4, p1), h)
                and ctx.div(p2, p1) == ctx.frob_q(ctx.div(p3, p1)))
    if p4 != 0:
        return ctx.div(p2, p4) == ctx.frob_q(ctx.div(p3, p4))
    if p2 == 0 or p3 == 0:
        return False
    # need c with c*p2 = (c*p3)^q, i.e. c^(q-1) = p2 / p3^q: solvable iff norm 1
    u = ctx.div(p2, ctx.frob_q(p3))
    return ctx.mul(u, ctx.frob_q(u)) == 1


@lru_cache(maxsize=None)
def w_point_set(ctx):
    """Normalized points spanned by pattern vectors; size (q+1)(q^2+1)."""
    pts = set()
    Fq = ctx.subfield(ctx.h)
    F = ctx.subfield(2 * ctx.h)
    for a in Fq:
        for b in Fq:
            for x in F:
                if a or b or x:
                    pts.add(normalize_point(ctx, (a, ctx.frob_q(x), x, b)))
    return frozenset(pts)


def _w_proj_reps(ctx):
    """One pattern vector per point of the GF(q) projective 3-space."""
    F = ctx.subfield(ctx.h)
    reps = []
    for lead in range(4):
        head = (0,) * lead + (1,)
        for tail in itertools.product(F, repeat=3 - lead):
            reps.append(w_from_coords(ctx, head + tail))
    return reps


@lru_cache(maxsize=None)
def w_lines(ctx):
    """All totally isotropic GF(q)-lines, extended over GF(q^2).

    Returns a dict: canonical extended line -> frozenset of its GF(q)
    points (as normalized PG(3,q^2) points).  There are (q+1)(q^2+1) lines.
    """
    F = ctx.subfield(ctx.h)
    basis = [w_from_coords(ctx, tuple(1 if i == j else 0 for j in range(4)))
             for i in range(4)]
    out = {}
    for p in _w_proj_reps(ctx):
        row = [bhat(ctx, p, bv) for bv in basis]
        kern = nullspace(ctx, [row], 4)  # 3-dim, contains p (form is alternating)
        pc = w_coords(ctx, p)
        u = next(k for k in kern if len(rref_rows(ctx, [pc, k])[0]) == 2)
        v = next(k for k in kern if len(rref_rows(ctx, [pc, u, k])[0]) == 3)
        dirs = [v] + [tuple(a ^ ctx.mul(c, b) for a, b in zip(u, v)) for c in F]
        for d in dirs:
            wa, wb = w_from_coords(ctx, pc), w_from_coords(ctx, d)
            line = line_through(ctx, wa, wb)
            if line not in out:
                span, _ = rref_rows(ctx, [pc, d])
                gfq_pts = set()
                for lead in range(2):
                    combos = [(1,)] if lead else [(1, c) for c in F]
                    for co in combos:
                        vec = [0, 0, 0, 0]
                        for cf, bs in zip(co, span[lead:]):
                            vec = [a ^ ctx.mul(cf, b) for a, b in zip(vec, bs)]
                        gfq_pts.add(normalize_point(ctx, w_from_coords(ctx, tuple(vec))))
                out[line] = frozenset(gfq_pts)
    return out


# ---------------------------------------------------------------------------
# totally isotropic lines through a point

def h_lines_through(ctx, p):
    """The q+1 isotropic lines through an isotropic point.

    Returns [(line, meets_w)] in deterministic order; meets_w flags the
    lines containing at least one pattern-vector point.
    """
    p = normalize_point(ctx, p)
    if not is_isotropic(ctx, p):
        raise ValueError("point is not isotropic")
    fq = ctx.frob_q
    coeff = (fq(p[3]), fq(p[1]), fq(p[2]), fq(p[0]))  # x -> h(x, p)
    kern = nullspace(ctx, [coeff], 4)  # 3-dim, contains p
    u = next(k for k in kern if len(rref_rows(ctx, [p, k])[0]) == 2)
    v = next(k for k in kern if len(rref_rows(ctx, [p, u, k])[0]) == 3)
    dirs = [v] + [tuple(a ^ ctx.mul(c, b) for a, b in zip(u, v))
                  for c in ctx.subfield(2 * ctx.h)]
    out = []
    for x in dirs:
        if hermitian(ctx, x, x) == 0:
            line = line_through(ctx, p, x)
            meets = any(is_w_point(ctx, pt) for pt in line_points(ctx, line))
            out.append((line, meets))
    out.sort(key=lambda t: t[0])
    return out


def w_meeting_line_through(ctx, p):
    """The unique extended GF(q)-line through an external isotropic point.

    The pattern vectors orthogonal to p under the hermitian form are cut
    out by a 2x4 GF(q)-linear system whose kernel is exactly that line's
    GF(q)-point structure; anything but a 2-dimensional kernel would
    contradict the point structure of the polar space and raises.
    """
    fq = ctx.frob_q
    c1, c2, c3, c4 = fq(p[3]), fq(p[1]), fq(p[2]), fq(p[0])
    e, _ = q2_basis(ctx)
    cols = [c1, c2 ^ c3, ctx.mul(fq(e), c2) ^ ctx.mul(e, c3), c4]
    rows = [[], []]
    for c in cols:
        c0, c1b = split_q2(ctx, c)
        rows[0].append(c0)
        rows[1].append(c1b)
    kern = nullspace(ctx, rows, 4)
    if len(kern) != 2:
        raise ValueError(f"external point {p} has a {len(kern)}-dim orthogonal pattern space")
    wa, wb = (w_from_coords(ctx, k) for k in kern)
    return line_through(ctx, wa, wb)


# ---------------------------------------------------------------------------
# Klein correspondence

def plucker(ctx, r, s):
    """Minor vector (p01, p02, p03, p12, p31, p23) of a 2x4 basis."""
    m = ctx.mul
    return (m(r[0], s[1]) ^ m(r[1], s[0]),
            m(r[0], s[2]) ^ m(r[2], s[0]),
            m(r[0], s[3]) ^ m(r[3], s[0]),
            m(r[1], s[2]) ^ m(r[2], s[1]),
            m(r[3], s[1]) ^ m(r[1], s[3]),
            m(r[2], s[3]) ^ m(r[3], s[2]))


def klein_map(ctx, line):
    """Normalized Klein image point of a canonical line (basis-free)."""
    return normalize_point(ctx, plucker(ctx, *line))


def ambient_quadric(ctx, v6):
    """X1 X6 + X2 X5 + X3 X4 (vanishes exactly on Klein images)."""
    m = ctx.mul
    return m(v6[0], v6[5]) ^ m(v6[1], v6[4]) ^ m(v6[2], v6[3])


# ---------------------------------------------------------------------------
# the conjugate-pattern 6-space and its elliptic quadric

def is_vt(ctx, w):
    fq = ctx.frob_q
    return (w[1] == fq(w[0]) and w[3] == fq(w[2]) and w[5] == fq(w[4])
            and all(ctx.in_subfield(c, 2 * ctx.h) for c in w))


def _check_vt(ctx, w):
    if not is_vt(ctx, w):
        raise ValueError(f"{w} does not have the (x, x^q, y, y^q, z, z^q) pattern")


def qt(ctx, w):
    """Restricted quadratic form x z^q + x^q z + y^(q+1); lands in GF(q)."""
    _check_vt(ctx, w)
    return ambient_quadric(ctx, w)


def bt(ctx, w, w2):
    """The alternating polar form of qt; lands in GF(q)."""
    _check_vt(ctx, w)
    _check_vt(ctx, w2)
    m = ctx.mul
    return (m(w[0], w2[5]) ^ m(w[1], w2[4]) ^ m(w[2], w2[3])
            ^ m(w[3], w2[2]) ^ m(w[4], w2[1]) ^ m(w[5], w2[0]))


def to_vt(ctx, v6):
    """A scalar multiple of v6 with the conjugate pattern, or None."""
    for c in ctx.subfield(2 * ctx.h):
        if c == 0:
            continue
        w = tuple(ctx.mul(c, x) for x in v6)
        if is_vt(ctx, w):
            return w
    return None


def vt_coords(ctx, w):
    _check_vt(ctx, w)
    x0, x1 = split_q2(ctx, w[0])
    y0, y1 = split_q2(ctx, w[2])
    z0, z1 = split_q2(ctx, w[4])
    return (x0, x1, y0, y1, z0, z1)


def vt_from_coords(ctx, c):
    x = join_q2(ctx, c[0], c[1])
    y = join_q2(ctx, c[2], c[3])
    z = join_q2(ctx, c[4], c[5])
    fq = ctx.frob_q
    return (x, fq(x), y, fq(y), z, fq(z))


def vt_normalize(ctx, w):
    """Scale by a GF(q) unit so the first nonzero GF(q)-coordinate is 1."""
    co = vt_coords(ctx, w)
    lead = next((x for x in co if x != 0), None)
    if lead is None:
        raise ValueError("zero vector")
    if lead == 1:
        return tuple(w)
    s = ctx.inv(lead)
    return tuple(ctx.mul(s, x) for x in w)


@lru_cache(maxsize=None)
def vt_basis(ctx):
    return tuple(vt_from_coords(ctx, tuple(1 if i == j else 0 for j in range(6)))
                 for i in range(6))


def vt_perp(ctx, ws):
    """Canonical basis (as pattern 6-tuples) of the bt-orthogonal space."""
    basis = vt_basis(ctx)
    rows = [[bt(ctx, w, bv) for bv in basis] for w in ws]
    kern = nullspace(ctx, rows, 6)
    return [vt_from_coords(ctx, k) for k in kern]


def vt_span_points(ctx, ws):
    """Canonical GF(q)-projective points of the GF(q)-span of ws."""
    coords, _ = rref_rows(ctx, [vt_coords(ctx, w) for w in ws])
    F = ctx.subfield(ctx.h)
    k = len(coords)
    pts = []
    for lead in range(k):
        for tail in itertools.product(F, repeat=k - 1 - lead):
            co = (0,) * lead + (1,) + tail
            vec = [0] * 6
            for cf, bs in zip(co[lead:], coords[lead:]):
                if cf:
                    vec = [a ^ ctx.mul(cf, b) for a, b in zip(vec, bs)]
            pts.append(vt_normalize(ctx, vt_from_coords(ctx, tuple(vec))))
    return pts


@lru_cache(maxsize=None)
def gamma_basis(ctx):
    """Basis of the hyperplane {(x, x^q, c, c, z, z^q) : c in GF(q)}."""
    rows = [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
            (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)]
    return tuple(vt_from_coords(ctx, r) for r in rows)


def in_gamma(ctx, w):
    _check_vt(ctx, w)
    return ctx.in_subfield(w[2], ctx.h)


@lru_cache(maxsize=None)
def parabolic_point_set(ctx):
    """Klein images of the extended GF(q)-lines (a parabolic quadric)."""
    pts = set()
    for line in w_lines(ctx):
        w = to_vt(ctx, klein_map(ctx, line))
        if w is None:
            raise RuntimeError(f"Klein image of {line} left the pattern space")
        pts.add(vt_normalize(ctx, w))
    return frozenset(pts)


def klein_vt(ctx, line):
    """Canonical pattern-space representative of a line's Klein image."""
    w = to_vt(ctx, klein_map(ctx, line))
    if w is None:
        raise ValueError("Klein image has no pattern-space representative")
    return vt_normalize(ctx, w)
