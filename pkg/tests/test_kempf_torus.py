import itertools
import random
from fractions import Fraction

import pytest

from instability_lab.errors import InputError
from instability_lab.kempf_torus import (
    Nu,
    OnePS,
    State,
    best_over_candidates,
    nearest_point,
    nearest_point_with_certificate,
    parabolic_of,
    primitive_direction,
    state_of_tensor,
    torus_destabilizer,
)


def test_state_dedupes_and_validates():
    st = State.of([(1, -1), (1, -1), (-1, 1)])
    assert st.weights == ((-1, 1), (1, -1))
    with pytest.raises(InputError):
        State.of([])
    with pytest.raises(InputError):
        State.of([(1, 2, 3)], n=2)


def test_state_of_tensor_examples():
    assert state_of_tensor({(1, 1): 1}, 2, 2).weights == ((2, 0),)
    assert state_of_tensor({(1, 2): 1, (2, 1): 1}, 2, 2).weights == ((1, 1),)
    st = state_of_tensor({(1, 1): 1, (1, 2): 1}, 2, 2)
    assert st.weights == ((1, 1), (2, 0))
    with pytest.raises(InputError):
        state_of_tensor({(1, 3): 1}, 2, 2)
    with pytest.raises(InputError):
        state_of_tensor({(1, 1): 0}, 2, 2)


def test_nearest_point_examples():
    zero = nearest_point(State.of([(1, -1), (-1, 1)]))
    assert zero == (Fraction(0), Fraction(0))
    single = nearest_point(State.of([(1, -1)]))
    assert single == (Fraction(1), Fraction(-1))
    q = nearest_point(State.of([(3, -1, -2), (-1, 3, -2)]))
    assert q == (Fraction(1), Fraction(1), Fraction(-2))
    assert sum(x * x for x in q) == 6


def test_nearest_point_certificates():
    q, cert = nearest_point_with_certificate(State.of([(3, -1, -2), (-1, 3, -2)]))
    assert cert.kind == "supporting_hyperplane" and cert.checked
    qz, certz = nearest_point_with_certificate(State.of([(1, -1), (-1, 1)]))
    assert certz.kind == "zero_combination" and certz.checked
    assert sum(c for _, c in certz.support) == 1


def test_nearest_point_mode_guard():
    with pytest.raises(InputError):
        nearest_point(State.of([(1, 0)]), mode="GL")


def test_torus_destabilizer_examples():
    lam, m, normsq = torus_destabilizer(State.of([(2, 0)]))
    assert lam.exponents == (1, -1) and m == 2 and normsq == 2
    assert torus_destabilizer(State.of([(1, 1)])) is None
    lam, m, normsq = torus_destabilizer(State.of([(3, -1, -2), (-1, 3, -2)]))
    assert lam.exponents == (1, 1, -2) and m == 6 and normsq == 6


def test_destabilizer_support_scaling_invariance():
    # the state is support-only, so scalar rescaling of the vector is invisible;
    # a state built from scaled tensor coefficients is literally the same state
    v = {(1, 1): 3, (1, 2): 4}
    w = {(1, 1): 1, (1, 2): 2}
    assert state_of_tensor(v, 2, 2) == state_of_tensor(w, 2, 2)


def test_one_ps_validation():
    with pytest.raises(InputError):
        OnePS((0, 0))
    with pytest.raises(InputError):
        OnePS((2, -2))  # not primitive
    with pytest.raises(InputError):
        OnePS((1, 1))  # SL requires sum zero
    gl = OnePS((0, -1), tag="GL")
    assert gl.exponents == (0, 1)  # sign canonicalization
    assert OnePS((-2, 1, 1)).exponents == (-2, 1, 1)


def test_primitive_direction():
    assert primitive_direction((Fraction(1, 2), Fraction(-1, 2))) == (1, -1)
    assert primitive_direction((Fraction(4), Fraction(-2), Fraction(-2))) == (2, -1, -1)


def test_parabolic_examples():
    assert parabolic_of(OnePS((1, 1, -2))).perm == (0, 1, 2)
    assert parabolic_of(OnePS((1, 1, -2))).blocks == (2, 1)
    assert parabolic_of(OnePS((2, -1, -1))).blocks == (1, 2)
    desc = parabolic_of(OnePS((-2, 1, 1)))
    assert desc.perm == (1, 2, 0) and desc.blocks == (2, 1)


def test_parabolic_scale_invariance():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 4)
        while True:
            exps = [rng.randint(-3, 3) for _ in range(n - 1)]
            exps.append(-sum(exps))
            try:
                lam = OnePS(tuple(exps))
                break
            except InputError:
                continue
        base = parabolic_of(lam)
        for k in (2, 3, 5):
            scaled = [k * x for x in lam.exponents]
            order = sorted(range(n), key=lambda i: (-scaled[i], i))
            blocks = [len(list(g)) for _, g in itertools.groupby(order, key=lambda i: scaled[i])]
            assert tuple(order) == base.perm and tuple(blocks) == base.blocks


def _box_oracle(state, radius=12):
    """Best nu over integral zero-sum lambdas in the cube, brute force."""
    best = None
    n = state.n
    rng = range(-radius, radius + 1)
    for head in itertools.product(rng, repeat=n - 1):
        tail = -sum(head)
        if abs(tail) > radius:
            continue
        lam = head + (tail,)
        if all(x == 0 for x in lam):
            continue
        m = min(sum(a * b for a, b in zip(lam, w)) for w in state.weights)
        if m <= 0:
            continue
        nu = Nu(m, sum(x * x for x in lam))
        if best is None or best < nu:
            best = nu
    return best


def test_grid_dominance_randomized():
    rng = random.Random(424242)
    for _ in range(60):
        n = 3
        k = rng.randint(1, 6)
        weights = {tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(k)}
        state = State.of(sorted(weights), n)
        found = torus_destabilizer(state)
        oracle = _box_oracle(state)
        if found is None:
            assert oracle is None
        else:
            lam, m, normsq = found
            assert oracle is not None
            assert Nu(m, normsq) >= oracle
            # primitive optimum lies inside the box, so they agree exactly
            if all(abs(x) <= 12 for x in lam.exponents):
                assert Nu(m, normsq) == oracle


def test_best_over_candidates_examples():
    ident = ((1, 0), (0, 1))
    got = best_over_candidates({(1, 1): 1}, 2, 2, [ident])
    assert got is not None
    assert got.lam.exponents == (1, -1)
    assert got.nu == Nu(2, 2)
    assert best_over_candidates({(1, 2): 1, (2, 1): 1}, 2, 2, [ident]) is None
    assert best_over_candidates({(1, 1): 1, (1, 2): 1}, 2, 2, [ident]) is None


def test_best_over_candidates_prefers_better_translate():
    # (X1+X2) (x) (X1+X2) is unstable but its standard-torus state covers the
    # origin; the shear sending X1+X2 to X1 exposes nu = (2, 2)
    ident = ((1, 0), (0, 1))
    shear = ((1, 0), (2, 1))  # columns (1,-1) and (0,1) over F_3
    v = {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1}
    assert best_over_candidates(v, 2, 2, [ident], p=3) is None
    got = best_over_candidates(v, 2, 2, [ident, shear], p=3)
    assert got is not None and got.nu == Nu(2, 2)
    assert got.g == shear


def test_best_over_candidates_requires_identity():
    with pytest.raises(InputError):
        best_over_candidates({(1, 1): 1}, 2, 2, [((0, 1), (-1, 0))])
    with pytest.raises(InputError):
        best_over_candidates({(1, 1): 1}, 2, 2, [])
