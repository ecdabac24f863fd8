import itertools
import random

import pytest

from hxpw import geometry as g
from hxpw import hemisystem as hs
from hxpw.fields import tower


def _random_q2_vec(ctx, rng, width=4):
    F = ctx.subfield(2 * ctx.h)
    while True:
        v = tuple(rng.choice(F) for _ in range(width))
        if any(v):
            return v


def _random_wvec(ctx, rng):
    Fq = ctx.subfield(ctx.h)
    F = ctx.subfield(2 * ctx.h)
    while True:
        a, b, x = rng.choice(Fq), rng.choice(Fq), rng.choice(F)
        if a or b or x:
            return (a, ctx.frob_q(x), x, b)


def _random_line(ctx, rng):
    while True:
        u = _random_q2_vec(ctx, rng)
        v = _random_q2_vec(ctx, rng)
        try:
            return g.line_through(ctx, u, v)
        except ValueError:
            continue


def _all_lines(ctx):
    """Every line of PG(3, q^2), by point-pair spans (small q only)."""
    pts = list(g.projective_points(ctx, 4))
    seen = set()
    for i, p in enumerate(pts):
        for s in pts[i + 1:]:
            try:
                seen.add(g.line_through(ctx, p, s))
            except ValueError:
                continue
    return seen


# ---------------------------------------------------------------------------
# hermitian form

def test_hermitian_substitutions():
    ctx = tower(2)
    e1 = (1, 0, 0, 0)
    e4 = (0, 0, 0, 1)
    assert g.hermitian(ctx, e1, e1) == 0
    assert g.hermitian(ctx, e1, e4) == 1


def test_hermitian_sesquilinear_symmetry():
    ctx = tower(2)
    rng = random.Random(2)
    for _ in range(1000):
        u = _random_q2_vec(ctx, rng)
        v = _random_q2_vec(ctx, rng)
        assert g.hermitian(ctx, u, v) == ctx.frob_q(g.hermitian(ctx, v, u))


def test_isotropic_point_counts():
    for h, expected in ((1, 45), (2, 1105), (3, 33345)):
        ctx = tower(h)
        pts = g.hermitian_points(ctx)
        assert len(pts) == expected
        assert len(set(pts)) == expected


def test_isotropic_enumeration_matches_bruteforce_h1():
    ctx = tower(1)
    brute = {p for p in g.projective_points(ctx, 4) if g.is_isotropic(ctx, p)}
    assert brute == set(g.hermitian_points(ctx))


# ---------------------------------------------------------------------------
# pattern vectors and their forms

def test_qhat_bhat_substitutions():
    ctx = tower(2)
    assert g.qhat(ctx, (1, 0, 0, 0)) == 0
    assert g.bhat(ctx, (1, 0, 0, 0), (0, 0, 0, 1)) == 1


def test_polarization_identity():
    ctx = tower(2)
    rng = random.Random(12)
    for _ in range(1000):
        u = _random_wvec(ctx, rng)
        v = _random_wvec(ctx, rng)
        s = tuple(a ^ b for a, b in zip(u, v))
        if not any(s):
            continue
        assert g.qhat(ctx, s) == g.qhat(ctx, u) ^ g.qhat(ctx, v) ^ g.bhat(ctx, u, v)


def test_bhat_rejects_bad_pattern():
    ctx = tower(2)
    bad = (1, 1, 0, 0)  # second coordinate is not the q-power of the third
    with pytest.raises(ValueError):
        g.qhat(ctx, bad)
    with pytest.raises(ValueError):
        g.bhat(ctx, bad, (1, 0, 0, 0))


def test_w_point_set_count_and_isotropy():
    for h in (1, 2):
        ctx = tower(h)
        q = ctx.q
        wset = g.w_point_set(ctx)
        assert len(wset) == (q + 1) * (q * q + 1)
        assert all(g.is_isotropic(ctx, p) for p in wset)


def test_is_w_point_matches_membership_exhaustively_h1():
    ctx = tower(1)
    wset = g.w_point_set(ctx)
    for p in g.projective_points(ctx, 4):
        assert g.is_w_point(ctx, p) == (p in wset), p


# ---------------------------------------------------------------------------
# lines through points

def test_h_lines_through_counts():
    for h in (1, 2):
        ctx = tower(h)
        q = ctx.q
        wset = g.w_point_set(ctx)
        pts = g.hermitian_points(ctx)
        sample = pts if h == 1 else random.Random(4).sample(pts, 60)
        for p in sample:
            lt = g.h_lines_through(ctx, p)
            assert len(lt) == q + 1
            meets = sum(1 for _, m in lt if m)
            if p not in wset:
                assert meets == 1
                assert len(lt) - meets == q
            else:
                assert meets == q + 1  # every line through an interior point


def test_h_lines_through_rejects_anisotropic():
    ctx = tower(1)
    bad = next(p for p in g.projective_points(ctx, 4) if not g.is_isotropic(ctx, p))
    with pytest.raises(ValueError):
        g.h_lines_through(ctx, bad)


def test_fast_meeting_line_matches_search():
    for h in (1, 2):
        ctx = tower(h)
        wset = g.w_point_set(ctx)
        pts = [p for p in g.hermitian_points(ctx) if p not in wset]
        sample = pts if h == 1 else random.Random(9).sample(pts, 80)
        for p in sample:
            expected = [l for l, m in g.h_lines_through(ctx, p) if m]
            assert g.w_meeting_line_through(ctx, p) == expected[0]


# ---------------------------------------------------------------------------
# Klein correspondence

def test_klein_map_basis_line():
    ctx = tower(2)
    line = g.line_through(ctx, (1, 0, 0, 0), (0, 1, 0, 0))
    assert g.klein_map(ctx, line) == (1, 0, 0, 0, 0, 0)


def test_klein_images_on_quadric():
    ctx = tower(2)
    rng = random.Random(7)
    for _ in range(1000):
        line = _random_line(ctx, rng)
        assert g.ambient_quadric(ctx, g.klein_map(ctx, line)) == 0


def test_klein_injective_on_all_lines_h1():
    ctx = tower(1)
    lines = _all_lines(ctx)
    assert len(lines) == 357  # gaussian binomial [4 choose 2] at q^2 = 4
    images = {g.klein_map(ctx, l) for l in lines}
    assert len(images) == len(lines)


def test_line_through_rejects_rank1():
    ctx = tower(1)
    with pytest.raises(ValueError):
        g.line_through(ctx, (1, 0, 0, 0), (1, 0, 0, 0))


# ---------------------------------------------------------------------------
# the conjugate-pattern 6-space

def test_qt_substitution_and_alternating():
    ctx = tower(2)
    assert g.qt(ctx, (0, 0, 1, 1, 0, 0)) == 1
    rng = random.Random(3)
    F = ctx.subfield(2 * ctx.h)
    for _ in range(300):
        x, y, z = (rng.choice(F) for _ in range(3))
        w = (x, ctx.frob_q(x), y, ctx.frob_q(y), z, ctx.frob_q(z))
        if not any(w):
            continue
        assert g.bt(ctx, w, w) == 0
        assert ctx.in_subfield(g.qt(ctx, w), ctx.h)


def test_qt_rejects_non_pattern():
    ctx = tower(2)
    with pytest.raises(ValueError):
        g.qt(ctx, (1, 0, 0, 0, 0, 0))


def test_hemisystem_images_singular():
    ctx = tower(2)
    from hxpw.conic import pair_reps
    for t in pair_reps(ctx):
        assert g.qt(ctx, hs.w_vec(ctx, t)) == 0


def test_perp_of_gamma_is_w0():
    for h in (1, 2):
        ctx = tower(h)
        perp = g.vt_perp(ctx, list(g.gamma_basis(ctx)))
        assert len(perp) == 1
        assert g.vt_normalize(ctx, perp[0]) == g.W0


def test_double_perp_h1():
    ctx = tower(1)
    basis = g.vt_basis(ctx)
    rng = random.Random(17)
    for _ in range(40):
        k = rng.randrange(1, 5)
        ws = [basis[i] for i in rng.sample(range(6), k)]
        sub, _ = g.rref_rows(ctx, [g.vt_coords(ctx, w) for w in ws])
        pp = g.vt_perp(ctx, g.vt_perp(ctx, ws))
        back, _ = g.rref_rows(ctx, [g.vt_coords(ctx, w) for w in pp])
        assert back == sub


def test_perp_dimension_of_secant_lines():
    ctx = tower(2)
    from hxpw.conic import pair_reps
    for t in pair_reps(ctx):
        perp = g.vt_perp(ctx, [hs.w_vec(ctx, t), hs.w_prime_vec(ctx, t)])
        assert len(perp) == 4


def test_parabolic_quadric_inside_hyperplane():
    for h in (1, 2):
        ctx = tower(h)
        q = ctx.q
        q4 = g.parabolic_point_set(ctx)
        assert len(q4) == (q + 1) * (q * q + 1)
        assert all(g.in_gamma(ctx, w) for w in q4)
        assert all(g.qt(ctx, w) == 0 for w in q4)


def test_singular_points_are_exactly_line_images():
    """The singular pattern points coincide with the Klein images of the
    totally isotropic lines (counted: a generalized quadrangle of order
    (q, q^2))."""
    for h in (1, 2):
        ctx = tower(h)
        q = ctx.q
        singular = {p for p in g.vt_span_points(ctx, list(g.vt_basis(ctx)))
                    if g.qt(ctx, p) == 0}
        assert len(singular) == (q + 1) * (q ** 3 + 1)
        images = set()
        for p in g.hermitian_points(ctx):
            for line, _ in g.h_lines_through(ctx, p):
                images.add(g.klein_vt(ctx, line))
        assert images == singular
