import math
import random

import pytest

from instability_lab.binary_forms import (
    AT_INFINITY,
    BinaryForm,
    ProjectivePoint,
    act_on_form,
    act_on_root,
    analyze,
    hm_weight,
    multiplicity_profile,
    oracle_nu_max,
    reconstruct,
    sl2_matrices,
)
from instability_lab.bounds import padic_digits
from instability_lab.errors import InputError
from instability_lab.field_tower import TowerElement, TowerPoly
from instability_lab.kempf_torus import Nu


def X_poly(p):
    return TowerPoly.gen(p)


def lin(p, root):
    """X - root as a TowerPoly."""
    if isinstance(root, int):
        root = TowerElement.constant(p, root)
    return TowerPoly(p, [-root, TowerElement.one(p)])


# -- multiplicity_profile ------------------------------------------------------


def test_profile_separable_layers():
    p = 7
    f = lin(p, 1) ** 3 * lin(p, 2)
    prof = multiplicity_profile(f)
    assert [(rc.sep_part, rc.mult, rc.insep_exp) for rc in prof] == [
        (lin(p, 1), 3, 0),
        (lin(p, 2), 1, 0),
    ]


def test_profile_frobenius_descent():
    # X^5 - s has zero derivative; descent yields X - s one level down, and
    # expanding (X - s^(1/5))^5 over the level-1 field recovers the input.
    p = 5
    s = TowerElement.s(p)
    f = TowerPoly(p, [-s, 0, 0, 0, 0, 1])
    prof = multiplicity_profile(f)
    assert len(prof) == 1
    rc = prof[0]
    assert rc.sep_part == lin(p, s) and rc.mult == 5 and rc.insep_exp == 1
    u = TowerElement.generator(p, 1)
    expanded = lin(p, u) ** 5
    assert expanded == TowerPoly(p, [-s, 0, 0, 0, 0, 1], level=1)


def test_profile_irreducible_separable_square():
    p = 3
    quad = TowerPoly(p, (1, 0, 1))  # X^2 + 1, irreducible over F_3
    prof = multiplicity_profile(quad * quad)
    assert len(prof) == 1
    rc = prof[0]
    assert rc.sep_part == quad and rc.mult == 2 and rc.insep_exp == 0


def test_profile_rejects_zero():
    with pytest.raises(InputError):
        multiplicity_profile(TowerPoly.zero(5))


def _random_product(rng, p):
    """Product mixing separable factors and X^(p^e)-composed factors; returns
    (polynomial, expected degree)."""
    s = TowerElement.s(p)
    f = TowerPoly(p, (rng.randrange(1, p),))
    n_factors = rng.randint(1, 3)
    for _ in range(n_factors):
        e = rng.choice([0, 0, 1] if p == 5 else [0, 0, 1, 2])
        base_deg = rng.randint(1, 2)
        coeffs = [
            TowerElement.constant(p, rng.randrange(p))
            + s.lift(0) * rng.randrange(2)
            for _ in range(base_deg)
        ] + [TowerElement.one(p)]
        base = TowerPoly(p, coeffs)
        mult = rng.randint(1, 3)
        f = f * base.stretch(p**e) ** mult
    return f


def test_reconstruction_randomized():
    rng = random.Random(99)
    for p in (2, 3, 5):
        for _ in range(40):
            f = _random_product(rng, p)
            prof = multiplicity_profile(f)
            rebuilt = reconstruct(prof, p, f.lc)
            assert rebuilt == f
            assert sum(rc.sep_part.degree * rc.mult for rc in prof) == f.degree
            for rc in prof:
                assert rc.mult % (p**rc.insep_exp) == 0
                d = rc.sep_part.derivative()
                assert not d.is_zero
                assert rc.sep_part.gcd(d).degree == 0


# -- analyze -------------------------------------------------------------------


def test_analyze_monomial_example():
    p = 5
    rep = analyze(BinaryForm(p, [0, 0, 1, 0]))  # X^2 Y
    assert rep.status == "unstable"
    assert rep.dominant_mult == 2
    assert rep.dominant_root == ProjectivePoint(0, 1, p=p)
    assert rep.field_exponent == 0
    assert rep.nu == Nu(1, 2)
    assert rep.parabolic == rep.dominant_root


def test_analyze_inseparable_example():
    p = 5
    s = TowerElement.s(p)
    rep = analyze(BinaryForm(p, [-s, 0, 0, 0, 0, 1]))  # X^5 - s Y^5
    assert rep.status == "unstable"
    assert rep.dominant_mult == 5
    assert rep.dominant_root == ProjectivePoint(TowerElement.generator(p, 1), 1)
    assert rep.field_exponent == 1
    g = rep.one_ps.matrix
    assert g[1][0] == TowerElement.generator(p, 1)
    assert hm_weight(BinaryForm(p, [-s, 0, 0, 0, 0, 1]), g) == 5


def test_analyze_semistable_example():
    rep = analyze(BinaryForm(5, [1, 0, 0, 0, 1]))  # X^4 + Y^4
    assert rep.status == "semistable"
    assert rep.dominant_root is None
    assert rep.one_ps is None
    assert rep.field_exponent is None


def test_analyze_root_at_infinity():
    p = 3
    rep = analyze(BinaryForm(p, [1, 0, 0, 0]))  # Y^3
    assert rep.status == "unstable"
    assert rep.dominant_mult == 3
    assert rep.dominant_root.is_infinity
    assert rep.field_exponent == 0


def test_analyze_exact_half_is_semistable():
    # T = N/2 exactly: no dominant root is reported
    p = 5
    f = BinaryForm(p, [0, 0, 1, 0, 0])  # X^2 Y^2
    rep = analyze(f)
    assert rep.status == "semistable"
    assert rep.dominant_mult == 2
    assert rep.dominant_root is None


def test_analyze_rejects_zero_form():
    with pytest.raises(InputError):
        BinaryForm(5, [0, 0, 0])


# -- hm_weight and the action --------------------------------------------------


def test_hm_weight_examples():
    p = 7
    ident = ((1, 0), (0, 1))
    swap = ((0, 1), (-1, 0))
    x3 = BinaryForm(p, [0, 0, 0, 1])
    y3 = BinaryForm(p, [1, 0, 0, 0])
    x2y = BinaryForm(p, [0, 0, 1, 0])
    assert hm_weight(x3, ident) == 3
    assert hm_weight(y3, swap) == 3
    assert hm_weight(x2y, ident) == 1


def test_hm_weight_scales_with_a():
    p = 5
    f = BinaryForm(p, [0, 0, 1, 0])
    assert hm_weight(f, ((1, 0), (0, 1)), a=3) == 3


def test_hm_weight_rejects_bad_matrices():
    p = 5
    f = BinaryForm(p, [0, 1])
    with pytest.raises(InputError):
        hm_weight(f, ((1, 1), (1, 1)))  # singular
    with pytest.raises(InputError):
        hm_weight(f, ((2, 0), (0, 1)))  # det 2


def test_action_is_a_left_action():
    rng = random.Random(5)
    p = 5
    mats = sl2_matrices(p)
    for _ in range(30):
        g = rng.choice(mats)
        h = rng.choice(mats)
        coeffs = [rng.randrange(p) for _ in range(5)]
        if not any(coeffs):
            coeffs[0] = 1
        f = BinaryForm(p, coeffs)
        gh = tuple(
            tuple(sum(g[i][k] * h[k][j] for k in range(2)) % p for j in range(2))
            for i in range(2)
        )
        assert act_on_form(act_on_form(f, h), g) == act_on_form(f, gh)


# -- oracle ---------------------------------------------------------------------


def test_oracle_trivial_candidates():
    p = 3
    x3 = BinaryForm(p, [0, 0, 0, 1])
    assert oracle_nu_max(x3, [((1, 0), (0, 1))]) == Nu(3, 2)
    x2y = BinaryForm(p, [0, 0, 1, 0])
    got = oracle_nu_max(x2y, [((1, 0), (0, 1)), ((0, 1), (-1, 0))])
    assert got == Nu(1, 2)


def test_oracle_semistable_quartic_over_f3():
    f = BinaryForm(3, [1, 0, 0, 0, 1])  # X^4 + Y^4
    got = oracle_nu_max(f, sl2_matrices(3))
    assert got.m <= 0


def test_oracle_never_beats_analyze():
    rng = random.Random(17)
    p = 3
    mats = sl2_matrices(p)
    for _ in range(25):
        coeffs = [rng.randrange(p) for _ in range(5)]
        if not any(coeffs):
            coeffs[2] = 1
        f = BinaryForm(p, coeffs)
        some = [((1, 0), (0, 1))] + rng.sample(mats, 5)
        assert analyze(f).nu >= oracle_nu_max(f, some)


# -- conjugation invariance ------------------------------------------------------


def _unstable_samples(p):
    s = TowerElement.s(p)
    one = TowerElement.one(p)
    samples = [
        BinaryForm(p, [0, 0, 1, 0]),  # X^2 Y
        BinaryForm(p, [1, 0, 0, 0]),  # Y^3
        BinaryForm(p, [-s, 0, 0, 0, 0, 1] if p == 5 else [0, 0, 0, 1]),
        BinaryForm(p, [0, 0, s, one + s, 0]),
    ]
    return samples


def test_nu_and_root_transform_covariantly():
    rng = random.Random(23)
    for p in (3, 5):
        mats = sl2_matrices(p)
        for f in _unstable_samples(p):
            base = analyze(f)
            for _ in range(6):
                g = rng.choice(mats)
                moved = analyze(act_on_form(f, g))
                assert moved.nu == base.nu
                assert moved.status == base.status
                if base.unstable:
                    assert moved.dominant_root == act_on_root(g, base.dominant_root)
                    # the reported parabolic is that point, so facts (e),(g) ride along
                    assert moved.parabolic == act_on_root(g, base.parabolic)


def test_field_exponent_bounds():
    rng = random.Random(31)
    for p in (2, 3, 5):
        for _ in range(20):
            f = _random_product(rng, p)
            if f.degree < 1:
                continue
            form = BinaryForm(p, [f.coeff(i) for i in range(f.degree + 1)])
            rep = analyze(form)
            if not rep.unstable:
                continue
            digits = padic_digits(form.N, p)
            assert rep.field_exponent <= len(digits) - 1
            assert rep.field_exponent <= int(math.log(rep.dominant_mult, p) + 1e-9)


def test_double_inseparable_factor():
    # (X^p - s Y^p)^2: T = 2p with e = 1, exercising e <= floor(log_p T)
    p = 3
    s = TowerElement.s(p)
    inner = TowerPoly(p, [-s, 0, 0, 1])
    sq = inner * inner
    form = BinaryForm(p, [sq.coeff(i) for i in range(7)])
    rep = analyze(form)
    assert rep.unstable
    assert rep.dominant_mult == 2 * p
    assert rep.field_exponent == 1
    assert rep.dominant_root == ProjectivePoint(TowerElement.generator(p, 1), 1)
