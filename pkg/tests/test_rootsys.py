import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg_kernel.errors import RootSystemError
from steinberg_kernel.rootsys import (
    Root,
    RootRelation,
    classify_pair,
    decompose_R0,
    irreducible_components,
    make_root_system,
    make_three_grading,
    pairing,
    reflect,
    verify_root_suite,
)


def e(*items):
    return Root.from_map(dict(items))


@pytest.mark.parametrize(
    "family, n, count",
    [("A", 3, 6), ("B", 3, 18), ("C", 2, 8), ("D", 4, 24), ("BC", 2, 12)],
)
def test_root_counts_and_axioms(family, n, count):
    spec = make_root_system(family, n)
    assert len(spec.nonzero_roots()) == count
    assert verify_root_suite(spec, "axioms").passed


def test_root_arithmetic():
    a = e((1, 1), (2, -1))
    assert (a + (-a)).is_zero()
    assert (2 * a).get(1) == 2
    assert a.inner(a) == 2
    assert str(a) == "e1-e2"
    assert a.to_dict() == {"e1": 1, "e2": -1}


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_reflections_are_involutive_isometries(data):
    spec = make_root_system(data.draw(st.sampled_from(["A", "B", "C", "D", "BC"])), 3)
    roots = spec.nonzero_roots()
    alpha = data.draw(st.sampled_from(roots))
    x = data.draw(st.sampled_from(roots))
    y = data.draw(st.sampled_from(roots))
    assert reflect(alpha, reflect(alpha, x)) == x
    assert reflect(alpha, x) in spec
    assert reflect(alpha, x).inner(reflect(alpha, y)) == x.inner(y)
    assert reflect(alpha, alpha) == -alpha


def test_pairing_errors():
    with pytest.raises(RootSystemError):
        pairing(e((1, 1)), Root())
    with pytest.raises(RootSystemError):
        pairing(e((1, 1), (2, 1)), e((1, 2)) + e((2, 2)) + e((3, 2)))


def test_bad_root_systems():
    with pytest.raises(RootSystemError):
        make_root_system("E", 3)
    with pytest.raises(RootSystemError):
        make_root_system("A", 1)
    with pytest.raises(RootSystemError):
        make_root_system("D", 2)


def test_irreducible_components():
    assert len(irreducible_components(make_root_system("C", 3))) == 1
    assert len(irreducible_components(make_root_system("A", 2))) == 1


@pytest.mark.parametrize(
    "family, n, kind, params, size",
    [
        ("A", 3, "A", {"subset": (1,)}, 2),
        ("A", 4, "A", {"subset": (1, 2)}, 4),
        ("B", 3, "B^qf", {"distinguished": 1}, 5),
        ("C", 2, "C^her", None, 3),
        ("D", 4, "D^alt", None, 6),
        ("D", 3, "D^qf", None, 4),
    ],
)
def test_three_gradings(family, n, kind, params, size):
    grading = make_three_grading(make_root_system(family, n), kind, params)
    assert len(grading.r1) == size
    for suite in ("grading", "3gra1", "3gra2"):
        assert verify_root_suite(grading, suite).passed, suite


def test_incompatible_grading_kind():
    with pytest.raises(RootSystemError):
        make_three_grading(make_root_system("A", 3), "C^her")
    with pytest.raises(RootSystemError):
        make_three_grading(make_root_system("A", 3), "A", {"subset": (1, 2, 3)})


def test_classify_pair_relations():
    her = make_three_grading(make_root_system("C", 2), "C^her")
    long1, short = e((1, 2)), e((1, 1), (2, 1))
    assert classify_pair(her, short, long1) == RootRelation.ARROW_IN
    assert classify_pair(her, long1, short) == RootRelation.ARROW_OUT
    assert classify_pair(her, long1, e((2, 2))) == RootRelation.ORTHOGONAL
    assert classify_pair(her, short, short) == RootRelation.EQUAL

    rect = make_three_grading(make_root_system("A", 3), "A", {"subset": (1,)})
    assert classify_pair(rect, e((1, 1), (2, -1)), e((1, 1), (3, -1))) == RootRelation.EDGE
    with pytest.raises(RootSystemError):
        classify_pair(rect, e((2, 1), (3, -1)), e((1, 1), (3, -1)))


def test_decompose_r0():
    rect = make_three_grading(make_root_system("A", 3), "A", {"subset": (1,)})
    mu = e((2, 1), (3, -1))
    alpha, beta = decompose_R0(rect, mu)
    assert alpha - beta == mu
    assert classify_pair(rect, alpha, beta) == RootRelation.EDGE
    with pytest.raises(RootSystemError):
        decompose_R0(rect, Root())
    with pytest.raises(RootSystemError):
        decompose_R0(rect, e((1, 1), (2, -1)))


def test_corrupted_grading_fails_suite():
    grading = make_three_grading(make_root_system("A", 3), "A", {"subset": (1,)})
    broken = type(grading)(grading.root_system, "A", grading.r1 | {e((2, 1), (3, -1))}, grading.params)
    assert not verify_root_suite(broken, "grading").passed
