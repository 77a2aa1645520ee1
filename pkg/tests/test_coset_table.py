import itertools

import pytest
from hypothesis import given, settings, strategies as st

from steinberg_kernel.coset_table import UNDEFINED, todd_coxeter
from steinberg_kernel.errors import BudgetExceeded, PresentationError

A4 = (2, [(1, 1), (2, 2, 2), (1, 2, 1, 2, 1, 2)])
S4 = (2, [(1, 1), (2, 2, 2), (1, 2) * 4])
A5 = (2, [(1, 1), (2, 2, 2), (1, 2) * 5])


def test_cyclic_of_order_three():
    table = todd_coxeter((1, [(1, 1, 1)]))
    assert table.complete
    assert table.cosets == 3
    assert table.is_consistent()
    assert table.group().order == 3


@pytest.mark.parametrize("presentation, order", [(A4, 12), (S4, 24), (A5, 60)])
def test_triangle_groups(presentation, order):
    table = todd_coxeter(presentation)
    assert table.cosets == order
    assert table.is_consistent()
    assert table.group(name="T").order == order


@given(st.integers(min_value=1, max_value=40))
@settings(max_examples=20, deadline=None)
def test_cyclic_groups(n):
    assert todd_coxeter((1, [(1,) * n])).cosets == n


@given(st.integers(min_value=2, max_value=20))
@settings(max_examples=15, deadline=None)
def test_dihedral_groups(n):
    table = todd_coxeter((2, [(1,) * n, (2, 2), (1, 2, 1, 2)]))
    assert table.cosets == 2 * n


def test_relator_order_does_not_change_result():
    ngens, relators = A4
    counts = {todd_coxeter((ngens, list(order))).cosets for order in itertools.permutations(relators)}
    assert counts == {12}


def test_inverse_letters_in_relators():
    # a b a^-1 b^-1 with a^2, b^3 gives Z6
    table = todd_coxeter((2, [(1, 1), (2, 2, 2), (1, 2, -1, -2)]))
    assert table.cosets == 6
    assert table.act(0, (1, -1)) == 0
    assert table.act(0, (2, 2, 2)) == 0


def test_subgroup_index():
    ngens, relators = A4
    assert todd_coxeter((ngens, relators), subgroup=[(2,)]).cosets == 4
    assert todd_coxeter((ngens, relators), subgroup=[(1,)]).cosets == 6
    assert todd_coxeter((ngens, relators), subgroup=[(1,), (2,)]).cosets == 1


def test_infinite_group_exhausts_budget():
    table = todd_coxeter((2, [(1, 1)]), max_cosets=200)
    assert table.status == "exhausted"
    assert not table.complete
    assert not table.is_consistent()
    assert table.to_dict()["cosets"] is None
    with pytest.raises(BudgetExceeded) as info:
        table.require_complete()
    assert info.value.partial is table


def test_budget_taken_from_config(config):
    config.budget.max_cosets = 50
    table = todd_coxeter((1, []), config=config)
    assert table.status == "exhausted"
    assert table.max_cosets == 50


def test_no_generators():
    table = todd_coxeter((0, []))
    assert table.complete
    assert table.cosets == 1


def test_letter_zero_rejected():
    with pytest.raises(PresentationError):
        todd_coxeter((1, [(1, 0, 1)]))


def test_complete_table_has_no_gaps():
    table = todd_coxeter(S4)
    assert all(UNDEFINED not in row for row in table.table)
    perms = table.permutations()
    assert len(perms) == 2
    assert table.to_dict()["status"] == "complete"
