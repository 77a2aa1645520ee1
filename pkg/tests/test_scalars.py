import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg_kernel import zoo
from steinberg_kernel.errors import BudgetExceeded, RingError
from steinberg_kernel.config import KernelConfig
from steinberg_kernel.scalars import (
    enumerate_units,
    is_irreducible,
    load_ring_json,
    make_ring,
    verify_ring_axioms,
)

RING_NAMES = ["F2", "F3", "F4", "F4~", "F5", "F9", "Z4", "Mat2F2", "D2"]


def coords_of(ring):
    return st.tuples(*[st.integers(0, ring.modulus - 1) for _ in range(ring.dim)])


@pytest.mark.parametrize("name", RING_NAMES)
def test_zoo_rings_pass_axioms(name):
    assert verify_ring_axioms(zoo.ring(name)).passed


@pytest.mark.parametrize(
    "name, size, units",
    [("F2", 2, 1), ("F3", 3, 2), ("F4", 4, 3), ("F9", 9, 8), ("Z4", 4, 2), ("D2", 4, 2), ("Mat2F2", 16, 6)],
)
def test_sizes_and_unit_counts(name, size, units):
    ring = zoo.ring(name)
    assert ring.size == size
    assert len(enumerate_units(ring)) == units


def test_field_flags():
    assert zoo.ring("F9").is_field
    assert not zoo.ring("Z4").is_field
    assert not zoo.ring("Mat2F2").is_commutative
    assert zoo.ring("D2").is_commutative


@pytest.mark.parametrize("name", ["F4", "Z4", "Mat2F2", "D2"])
def test_ring_laws_hold_for_random_elements(name):
    ring = zoo.ring(name)
    elements = coords_of(ring)

    @settings(max_examples=60, deadline=None)
    @given(elements, elements, elements)
    def laws(a, b, c):
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
        assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
        assert ring.mul(ring.unit, a) == a == ring.mul(a, ring.unit)
        assert ring.add(a, ring.neg(a)) == ring.zero()
        assert ring.conj(ring.mul(a, b)) == ring.mul(ring.conj(b), ring.conj(a))

    laws()


def test_inverse_of_units():
    f9 = zoo.ring("F9")
    for a in f9.elements():
        if f9.is_zero(a):
            assert not f9.is_unit(a)
            continue
        assert f9.mul(a, f9.inverse(a)) == f9.unit


def test_inverse_of_non_unit_raises():
    with pytest.raises(RingError):
        zoo.ring("Z4").inverse((2,))


def test_frobenius_involution_is_nontrivial():
    f4 = zoo.ring("F4~")
    x = f4.basis(1)
    assert f4.conj(x) != x
    assert f4.conj(f4.conj(x)) == x


def test_matrix_ring_transpose_involution():
    mat = zoo.ring("Mat2F2")
    e12 = mat.basis(1)
    assert mat.conj(e12) == mat.basis(2)


def test_element_wrapper_arithmetic():
    f3 = zoo.ring("F3")
    two = f3.element([2])
    assert (two * two).coords == (1,)
    assert (two + two).coords == (1,)
    assert (-two).coords == (1,)
    assert two.inverse().coords == (2,)
    assert str(two) == "2"


def test_mixing_rings_rejected():
    with pytest.raises(RingError):
        zoo.ring("F2").element([1]) + zoo.ring("F2").element([1])


def test_irreducibility():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)
    assert is_irreducible([1, 0, 1], 3)


@pytest.mark.parametrize(
    "kind, params",
    [("F", {"p": 4}), ("F", {"p": 2, "k": 2, "poly": [1, 0, 1]}), ("Z", {"n": 1}), ("Q", {})],
)
def test_bad_constructor_input(kind, params):
    with pytest.raises(RingError):
        make_ring(kind, **params)


def test_non_associative_structure_rejected():
    with pytest.raises(RingError):
        make_ring(
            "structure",
            p=2,
            labels=("1", "a"),
            table=[(0, 0, (1, 0)), (0, 1, (0, 1)), (1, 0, (0, 1)), (1, 1, (1, 1))],
            unit=(0, 1),
        )


def test_load_ring_json(tmp_path):
    path = tmp_path / "ring.json"
    path.write_text(
        json.dumps(
            {
                "p": 2,
                "labels": ["1", "t"],
                "table": [[0, 0, [1, 0]], [0, 1, [0, 1]], [1, 0, [0, 1]], [1, 1, [0, 0]]],
                "unit": [1, 0],
                "name": "dual",
            }
        ),
        encoding="utf-8",
    )
    ring = load_ring_json(str(path))
    assert ring.name == "dual"
    assert ring.size == 4


def test_unit_enumeration_budget():
    config = KernelConfig()
    config.budget.max_ring_elements = 8
    with pytest.raises(BudgetExceeded):
        enumerate_units(zoo.ring("Mat2F2"), config)
