import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg_kernel.errors import BudgetExceeded, KernelError
from steinberg_kernel.linalg import (
    OrderedBasis,
    Submodule,
    det_mod,
    inverse,
    is_direct_sum,
    is_invertible,
    kernel,
    nullspace,
    rank,
    rref,
    solve,
)


def test_rref_and_rank_mod_3():
    m = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    reduced, pivots = rref(m, 3)
    assert pivots == [0, 2]
    assert rank(m, 3) == 2
    assert reduced.shape == (2, 3)


def test_nullspace_is_annihilated():
    m = np.array([[1, 1, 0, 1], [0, 1, 1, 1]])
    basis = nullspace(m, 2)
    assert basis.shape == (2, 4)
    assert not ((m @ basis.T) % 2).any()


def test_solve_and_inconsistent_system():
    m = np.array([[1, 1], [0, 1]])
    x = solve(m, np.array([2, 1]), 5)
    assert x is not None
    assert ((m @ x - np.array([2, 1])) % 5 == 0).all()
    assert solve(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 2) is None


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_inverse_mod_5(entries):
    m = np.array(entries).reshape(3, 3)
    inv = inverse(m, 5)
    if rank(m, 5) < 3:
        assert inv is None
    else:
        assert ((m @ inv) % 5 == np.eye(3, dtype=np.int64)).all()


def test_det_mod_and_invertibility_over_z4():
    m = np.array([[1, 2], [0, 3]])
    assert det_mod(m, 4) == 3
    assert is_invertible(m, 4)
    assert not is_invertible(np.array([[2, 0], [0, 1]]), 4)


def test_submodule_over_field():
    sub = Submodule.span([[1, 1, 0], [2, 2, 0]], 3, 3)
    assert sub.rank == 1
    assert sub.size == 3
    assert sub.contains([2, 2, 0])
    assert not sub.contains([1, 0, 0])
    assert sorted(sub.elements()) == [(0, 0, 0), (1, 1, 0), (2, 2, 0)]


def test_submodule_over_z4_enumerates_members():
    sub = Submodule.span([[2, 0]], 4, 2)
    assert not sub.is_field
    assert sub.size == 2
    assert sub.contains([2, 0])
    assert not sub.contains([1, 0])


def test_sum_and_intersection():
    a = Submodule.span([[1, 0, 0], [0, 1, 0]], 2, 3)
    b = Submodule.span([[0, 1, 0], [0, 0, 1]], 2, 3)
    assert (a + b).equals(Submodule.whole(2, 3))
    assert a.intersect(b).equals(Submodule.span([[0, 1, 0]], 2, 3))


def test_direct_sum():
    whole = Submodule.whole(3, 2)
    x = Submodule.span([[1, 0]], 3, 2)
    y = Submodule.span([[1, 1]], 3, 2)
    assert is_direct_sum([x, y], whole)
    assert not is_direct_sum([x, x], whole)


def test_kernel_over_field_and_ring():
    m = np.array([[1, 1]])
    assert kernel(m, 2).equals(Submodule.span([[1, 1]], 2, 2))
    ker4 = kernel(np.array([[2, 0]]), 4)
    assert ker4.size == 8


def test_elements_respect_cap():
    with pytest.raises(BudgetExceeded):
        list(Submodule.whole(3, 4).elements(cap=10))


def test_coordinates():
    sub = Submodule.span([[1, 0, 1], [0, 1, 1]], 2, 3)
    c = sub.coordinates([1, 1, 0])
    assert c is not None and list(c) == [1, 1]
    assert sub.coordinates([1, 0, 0]) is None


def test_ordered_basis_keeps_first_appearance_order():
    basis = OrderedBasis(3, 3)
    assert basis.add([0, 1, 0])
    assert basis.add([1, 0, 0])
    assert not basis.add([2, 2, 0])
    assert len(basis) == 2
    c = basis.coordinates([1, 2, 0])
    assert c is not None and list(c) == [2, 1]
    assert basis.coordinates([0, 0, 1]) is None
    assert basis.submodule().rank == 2


def test_ordered_basis_needs_prime_modulus():
    with pytest.raises(KernelError):
        OrderedBasis(4, 2)
