import random
from fractions import Fraction

import pytest

from instability_lab.bundle_calc import SplittingType
from instability_lab.errors import InputError


def test_slope_examples():
    assert SplittingType.of([2, 2, 2]).slope() == 2
    assert SplittingType.of([3, 1]).slope() == 2
    assert SplittingType.of([0, -1]).slope() == Fraction(-1, 2)


def test_hn_filtration_examples():
    assert SplittingType.of([3, 1, 1, 0]).hn_filtration() == ((3,), (1, 1), (0,))
    assert SplittingType.of([2, 2]).hn_filtration() == ((2, 2),)
    assert SplittingType.of([1, 0, -1]).hn_filtration() == ((1,), (0,), (-1,))


def test_instability_degree_examples():
    assert SplittingType.of([2, 2]).instability_degree() == 0
    assert SplittingType.of([1, -1]).instability_degree() == 2
    assert SplittingType.of([3, 1, 1, 0]).instability_degree() == 3


def test_frobenius_pullback_examples():
    assert SplittingType.of([1, -1]).frobenius_pullback(3, 2).degrees == (9, -9)
    st = SplittingType.of([2, 2])
    for p in (2, 5):
        out = st.frobenius_pullback(p, 3)
        assert out.is_semistable() and out.degrees == (2 * p**3, 2 * p**3)
    assert SplittingType.of([4, 0, -3]).frobenius_pullback(7, 0) == SplittingType.of([4, 0, -3])


def test_frobenius_validation():
    with pytest.raises(InputError):
        SplittingType.of([1]).frobenius_pullback(4, 1)
    with pytest.raises(InputError):
        SplittingType.of([1]).frobenius_pullback(3, -1)


def test_induced_examples():
    assert SplittingType.of([3]).tensor(SplittingType.of([4])).degrees == (7,)
    assert SplittingType.of([3, 1, 0]).wedge(2).degrees == (4, 3, 1)
    assert SplittingType.of([1, -1]).sym(2).degrees == (2, 0, -2)


def test_induced_dispatcher():
    st = SplittingType.of([2, 1])
    assert st.induced("tensor", other=SplittingType.of([1])) == SplittingType.of([3, 2])
    assert st.induced("wedge", r=2) == SplittingType.of([3])
    assert st.induced("sym", N=2) == SplittingType.of([4, 3, 2])
    with pytest.raises(InputError):
        st.induced("dual")
    with pytest.raises(InputError):
        st.wedge(3)


def test_ranks():
    st = SplittingType.of([5, 0, -5])
    assert st.tensor(st).rank == 9
    assert st.wedge(2).rank == 3
    assert st.sym(3).rank == 10  # C(3+3-1, 3)


def test_frobenius_scales_degree_and_instability():
    rng = random.Random(8)
    for _ in range(50):
        degs = [rng.randint(-6, 6) for _ in range(rng.randint(1, 5))]
        st = SplittingType.of(degs)
        for p, t in ((2, 1), (3, 2), (5, 1)):
            out = st.frobenius_pullback(p, t)
            assert out.degree == p**t * st.degree
            assert out.instability_degree() == p**t * st.instability_degree()


def test_semistable_induced_stays_semistable():
    rng = random.Random(9)
    for _ in range(20):
        d = rng.randint(-4, 4)
        r = rng.randint(2, 4)
        st = SplittingType.of([d] * r)
        assert st.tensor(st).is_semistable()
        assert st.wedge(2).is_semistable()
        assert st.sym(3).is_semistable()


def test_hn_blocks_decrease_and_recover():
    rng = random.Random(10)
    for _ in range(40):
        degs = [rng.randint(-5, 5) for _ in range(rng.randint(1, 6))]
        st = SplittingType.of(degs)
        blocks = st.hn_filtration()
        flat = [d for b in blocks for d in b]
        assert tuple(flat) == st.degrees
        slopes = [Fraction(sum(b), len(b)) for b in blocks]
        assert all(a > b for a, b in zip(slopes, slopes[1:]))


def test_tensor_slope_additivity():
    rng = random.Random(11)
    for _ in range(30):
        a = SplittingType.of([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
        b = SplittingType.of([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
        assert a.tensor(b).slope() == a.slope() + b.slope()


def test_empty_rejected():
    with pytest.raises(InputError):
        SplittingType.of([])
