import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg_kernel import zoo
from steinberg_kernel.errors import BudgetExceeded, JordanError
from steinberg_kernel.jordan import (
    MINUS,
    PLUS,
    IdempotentPair,
    bergmann,
    is_division_pair,
    is_ideal,
    is_idempotent,
    jordan_inverse,
    make_pair,
    peirce,
    q_op,
    quotient_map,
    quotient_pair,
    subpair,
    triple,
    verify_jp_suite,
)
from steinberg_kernel.linalg import Submodule


@pytest.mark.parametrize(
    "kind, ring, i, j, n, dims",
    [
        ("full", "F3", 1, 1, 2, (1, 1)),
        ("full", "Z4", 1, 1, 2, (1, 1)),
        ("full", "Mat2F2", 1, 1, 2, (4, 4)),
        ("rect", "F2", 1, 2, 2, (2, 2)),
        ("hermitian", "F2", 1, 1, 2, (3, 3)),
        ("hermitian", "F4~", 1, 1, 2, (4, 4)),
        ("alternating", "F2", 1, 1, 4, (6, 6)),
        ("quadform", "F3", 1, 1, 2, (3, 3)),
    ],
)
def test_zoo_pair_dimensions(kind, ring, i, j, n, dims):
    pair = zoo.pair(kind, zoo.ring(ring), i, j, n)
    assert pair.dims == dims


@pytest.mark.parametrize(
    "kind, ring, i, j",
    [("full", "F2", 1, 1), ("full", "F3", 1, 1), ("full", "Z4", 1, 1), ("rect", "F2", 1, 2)],
)
def test_jp_identities_exhaustive(kind, ring, i, j, config):
    report = verify_jp_suite(zoo.pair(kind, zoo.ring(ring), i, j), config)
    assert report.passed
    assert not any(c.sampled for c in report.checks)
    names = {c.name for c in report.checks}
    assert {"JP1+", "JP2-", "JP3+", "JP1-lin-", "quadratic+"} <= names


@pytest.mark.parametrize(
    "kind, ring, i, j, n",
    [
        ("rect", "F2", 2, 2, 2),
        ("hermitian", "F2", 1, 1, 2),
        ("alternating", "F2", 1, 1, 4),
        ("quadform", "F3", 1, 1, 2),
    ],
)
def test_jp_identities_sampled(kind, ring, i, j, n, config):
    assert verify_jp_suite(zoo.pair(kind, zoo.ring(ring), i, j, n), config).passed


def test_corrupted_quadratic_map_fails_jp3(config):
    pair = zoo.pair("full", zoo.ring("F3"))
    flipped = dataclasses.replace(
        pair, qq=((-pair.qq[0]) % 3, pair.qq[1]), closure=None, model=None
    )
    report = verify_jp_suite(flipped, config)
    assert not report.check("JP3+").passed
    assert report.check("JP3+").witnesses


def test_quadratic_and_triple_on_elements(f3):
    pair = zoo.pair("full", f3)
    x = pair.element(PLUS, (2,))
    y = pair.element(MINUS, (2,))
    assert q_op(pair, x, y).coords == (2,)
    assert triple(pair, x, y, x).coords == (1,)
    with pytest.raises(JordanError):
        q_op(pair, x, x)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_triple_product_is_trilinear(data):
    pair = zoo.pair("rect", zoo.ring("F3"), 1, 2)
    vec = st.lists(st.integers(0, 2), min_size=2, max_size=2).map(np.array)
    x, x2, z = data.draw(vec), data.draw(vec), data.draw(vec)
    y, y2 = data.draw(vec), data.draw(vec)
    c = data.draw(st.integers(0, 2))
    lhs = pair.t(PLUS, (x + c * x2), y, z)
    rhs = (pair.t(PLUS, x, y, z) + c * pair.t(PLUS, x2, y, z)) % 3
    assert (lhs == rhs).all()
    lhs = pair.t(PLUS, x, (y + y2), z)
    assert (lhs == (pair.t(PLUS, x, y, z) + pair.t(PLUS, x, y2, z)) % 3).all()
    assert (pair.t(PLUS, x, y, z) == pair.t(PLUS, z, y, x)).all()
    assert (pair.t(PLUS, x, y, x) == (2 * pair.q(PLUS, x, y)) % 3).all()


def test_bad_pairs():
    with pytest.raises(JordanError):
        make_pair("hermitian", ring=zoo.ring("Z4"), n=2)
    with pytest.raises(JordanError):
        make_pair("alternating", ring=zoo.ring("Mat2F2"), n=3)
    with pytest.raises(JordanError):
        make_pair("rect", ring=zoo.ring("F2"), p=0, q=1)
    with pytest.raises(JordanError):
        make_pair("octonion", ring=zoo.ring("F2"))
    with pytest.raises(JordanError):
        make_pair("quadform", modulus=3, gram=[[1, 0], [1, 1]], q_diag=[2, 2])


def test_validate_flag_runs_identities():
    pair = make_pair("full", validate=True, ring=zoo.ring("F2"))
    assert pair.name == "full(F2)"


def test_peirce_ranks_for_matrix_units(config):
    pair = zoo.pair("full", zoo.ring("Mat2F2"))
    e11 = (1, 0, 0, 0)
    e = IdempotentPair(e11, e11)
    assert is_idempotent(pair, e)
    decomposition = peirce(pair, e, config)
    assert decomposition.ranks(PLUS) == (1, 2, 1)
    assert decomposition.ranks(MINUS) == (1, 2, 1)
    assert decomposition.report.passed


def test_peirce_rejects_non_idempotent(f3):
    pair = zoo.pair("full", f3)
    with pytest.raises(JordanError):
        peirce(pair, IdempotentPair((1,), (2,)))


def test_bergmann(f3):
    pair = zoo.pair("full", f3)
    one_p, one_m = pair.element(PLUS, (1,)), pair.element(MINUS, (1,))
    assert bergmann(pair, one_p, pair.zero(MINUS)).is_identity()
    b = bergmann(pair, one_p, one_m)
    assert not b.invertible
    b = bergmann(pair, one_p, pair.element(MINUS, (2,)))
    assert b.invertible
    assert int(b.plus[0, 0]) == 1


def test_division_pairs_and_inverse():
    f5 = zoo.pair("full", zoo.ring("F5"))
    assert is_division_pair(f5)
    assert not is_division_pair(zoo.pair("rect", zoo.ring("F2"), 1, 2))
    assert jordan_inverse(f5, f5.element(PLUS, (2,))).coords == (3,)
    with pytest.raises(JordanError):
        jordan_inverse(f5, f5.zero(PLUS))


def test_nil_subpair_ideal_and_quotient(config):
    pair = zoo.pair("full", zoo.ring("D2"))
    ideal = zoo.nil_ideal(pair)
    ok, witness = is_ideal(pair, ideal)
    assert ok and witness is None
    sub = subpair(pair, ideal)
    assert sub.size(PLUS) == 2
    assert verify_jp_suite(sub, config).passed
    quotient = quotient_pair(pair, ideal)
    assert quotient.dims == (1, 1)
    assert verify_jp_suite(quotient, config).passed
    can = quotient_map(pair, ideal)
    assert list(can(PLUS, np.array([1, 1]))) == [1]


def test_non_ideal_rejected(config):
    pair = zoo.pair("rect", zoo.ring("F2"), 1, 2)
    half = (Submodule.span([[1, 0]], 2, 2), Submodule.zero(2, 2))
    ok, witness = is_ideal(pair, half)
    assert not ok and witness is not None
    with pytest.raises(JordanError):
        quotient_pair(pair, half)


def test_subpair_rejects_unclosed_carriers():
    pair = zoo.pair("full", zoo.ring("Mat2F2"))
    unit = Submodule.span([[1, 0, 0, 1]], 2, 4)
    e12 = Submodule.span([[0, 1, 0, 0]], 2, 4)
    with pytest.raises(JordanError):
        subpair(pair, (unit, e12))


def test_subpair_rejects_malformed_carriers():
    pair = zoo.pair("full", zoo.ring("D2"))
    eps, _ = zoo.nil_ideal(pair)
    with pytest.raises(JordanError, match="pair"):
        subpair(pair, eps)
    with pytest.raises(JordanError, match="Carrier"):
        subpair(pair, (eps, Submodule.zero(2, 3)))


def test_quotient_over_z4_by_twice_v(config):
    pair = zoo.pair("full", zoo.ring("Z4"))
    twice = (Submodule.span([[2]], 4, 1), Submodule.span([[2]], 4, 1))
    quotient = quotient_pair(pair, twice)
    assert quotient.modulus == 2
    assert verify_jp_suite(quotient, config).passed


def test_quotient_by_whole_pair_is_zero(f3):
    pair = zoo.pair("full", f3)
    whole = (pair.whole(PLUS), pair.whole(MINUS))
    assert quotient_pair(pair, whole).dims == (0, 0)


def test_element_budget():
    pair = zoo.pair("alternating", zoo.ring("F2"), n=4)
    with pytest.raises(BudgetExceeded):
        list(pair.elements(PLUS, 10))
