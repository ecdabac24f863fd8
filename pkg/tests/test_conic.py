import itertools
import random

import numpy as np
import pytest

from hxpw import conic, geometry
from hxpw.conic import (ClassificationError, classify, fine_label, pair_line,
                        pair_reps, rho, rho_hat, trace_sets)
from hxpw.fields import tower


def test_pair_census():
    for h in (1, 2, 3):
        ctx = tower(h)
        reps = pair_reps(ctx)
        assert len(reps) == (ctx.q4 - ctx.q2) // 2
        for t in reps:
            c = ctx.conj(t)
            assert c != t and t < c
        assert list(reps) == sorted(reps)


def test_trace_set_sizes():
    for h in (1, 2, 3):
        ctx = tower(h)
        q = ctx.q
        ts = trace_sets(ctx)
        assert len(ts["s0_star"]) == q // 2 - 1
        assert len(ts["s1"]) == q // 2
        # GF(q) sits inside the zero-trace set of GF(q^2) wholesale
        assert len(ts["t0_outside"]) == q * q // 2 - q
        union = ts["s0_star"] | ts["s1"] | ts["t0_outside"]
        assert union == ts["t0_q2"] - {0}
        assert not ts["s0_star"] & ts["s1"]
        assert not ts["s0_star"] & ts["t0_outside"]
        assert not ts["s1"] & ts["t0_outside"]


def test_rho_symmetry_and_inverse_swap():
    for h in (1, 2):
        ctx = tower(h)
        reps = pair_reps(ctx)
        for s, t in itertools.combinations(reps, 2):
            r = rho(ctx, s, t)
            assert r != 0
            assert rho(ctx, t, s) == r
            assert rho(ctx, s, ctx.conj(t)) == ctx.inv(r)


def test_rho_rejects_equal_or_conjugate():
    ctx = tower(2)
    reps = pair_reps(ctx)
    t = reps[0]
    with pytest.raises(ValueError):
        rho(ctx, t, t)
    with pytest.raises(ValueError):
        rho(ctx, t, ctx.conj(t))


def test_rho_hat_symmetric_and_in_trace_zero():
    ctx = tower(2)
    reps = pair_reps(ctx)
    t0 = trace_sets(ctx)["t0_q2"]
    for s, t in itertools.combinations(reps, 2):
        v = rho_hat(ctx, s, t)
        assert v == rho_hat(ctx, t, s)
        assert v in t0 and v != 0


def test_closed_form_equality_exhaustive():
    """rhat from the reciprocal-sum definition equals nu^2 + nu everywhere."""
    for h in (1, 2):
        ctx = tower(h)
        reps = pair_reps(ctx)
        for s, t in itertools.combinations(reps, 2):
            nu = conic.nu(ctx, s, t)
            assert rho_hat(ctx, s, t) == ctx.mul(nu, nu) ^ nu
        assert conic.table_bundle(ctx)["closed_form_ok"]


def test_classify_row_valencies(hx_bundle_2):
    table = hx_bundle_2["table"]
    for i in range(table.shape[0]):
        row = table[i]
        counts = {k: int(np.count_nonzero(row == k)) for k in (1, 2, 3)}
        assert counts == {1: 17, 2: 34, 3: 68}


def test_h1_all_pairs_class_two():
    ctx = tower(1)
    reps = pair_reps(ctx)
    assert len(list(itertools.combinations(reps, 2))) == 15
    for s, t in itertools.combinations(reps, 2):
        assert classify(ctx, s, t) == 2


def test_classify_symmetric():
    ctx = tower(2)
    reps = pair_reps(ctx)
    rng = random.Random(3)
    for _ in range(300):
        s, t = rng.sample(reps, 2)
        assert classify(ctx, s, t) == classify(ctx, t, s)


def test_representative_independence():
    """Swapping either representative for its conjugate changes nothing."""
    for h in (1, 2):
        ctx = tower(h)
        reps = pair_reps(ctx)
        for s, t in itertools.combinations(reps, 2):
            base = rho_hat(ctx, s, t)
            for ss, tt in ((ctx.conj(s), t), (s, ctx.conj(t)),
                           (ctx.conj(s), ctx.conj(t))):
                assert rho_hat(ctx, ss, tt) == base


def test_fine_class_counts():
    for h, expected in ((1, 1), (2, 7), (3, 31)):
        ctx = tower(h)
        bundle = conic.table_bundle(ctx)
        assert len(bundle["fine_to_coarse"]) == expected == ctx.q2 // 2 - 1


def test_fine_labels_cover_all_unit_pairs():
    """Every unordered {lam, 1/lam} with lam outside {0, 1} occurs."""
    ctx = tower(2)
    reps = pair_reps(ctx)
    seen = set()
    for s, t in itertools.combinations(reps, 2):
        seen.add(fine_label(ctx, s, t))
    expected = set()
    for lam in ctx.subfield(2 * ctx.h):
        if lam in (0, 1):
            continue
        li = ctx.inv(lam)
        expected.add((lam, li) if lam <= li else (li, lam))
    assert seen == expected


def test_fine_refines_coarse(hx_bundle_2):
    ft = hx_bundle_2["fine_table"]
    ct = hx_bundle_2["table"]
    for k, cls in hx_bundle_2["fine_to_coarse"].items():
        sel = ft == k
        assert np.all(ct[sel] == cls)


def test_pair_lines_are_passants():
    for h in (1, 2):
        ctx = tower(h)
        for t in pair_reps(ctx):
            assert conic.line_misses_conic(ctx, pair_line(ctx, t))


def test_pair_line_injective_h2():
    ctx = tower(2)
    lines = {pair_line(ctx, t) for t in pair_reps(ctx)}
    assert len(lines) == 120


def test_passant_census_h1():
    ctx = tower(1)
    # oracle: every line of the plane, counted through its dual point
    total = sum(1 for _ in geometry.projective_points(ctx, 3))
    assert total == 21  # q^4 + q^2 + 1 at q = 2
    assert conic.passant_census(ctx) == 6 == (ctx.q4 - ctx.q2) // 2


def test_valency_identity_against_family_formula():
    from hxpw.schemes import expected_p_matrix
    for h in (1, 2, 3):
        q = tower(h).q
        row0 = expected_p_matrix(q)[0]
        assert sum(row0) == (q ** 4 - q ** 2) // 2


def test_bulk_matches_scalar_classification():
    for h in (1, 2):
        ctx = tower(h)
        reps = pair_reps(ctx)
        table = conic.table_bundle(ctx)["table"]
        for i, j in itertools.combinations(range(len(reps)), 2):
            assert table[i, j] == classify(ctx, reps[i], reps[j])
    ctx = tower(3)
    reps = pair_reps(ctx)
    table = conic.table_bundle(ctx)["table"]
    rng = random.Random(8)
    for _ in range(400):
        i, j = rng.sample(range(len(reps)), 2)
        assert table[i, j] == classify(ctx, reps[i], reps[j])
