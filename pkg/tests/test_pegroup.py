import pytest

from steinberg_kernel import zoo
from steinberg_kernel.errors import BudgetExceeded, JordanError
from steinberg_kernel.jordan import MINUS, PLUS, make_pair
from steinberg_kernel.matrices import FinMatrix
from steinberg_kernel.pegroup import (
    UadProjector,
    abelian_invariants,
    alternating_group,
    as_permutation_group,
    centre,
    derived_subgroup,
    group_analyze,
    is_perfect,
    matches_fingerprint,
    pe_generators,
    pe_group,
    pe_relative_kernel,
    symmetric_group,
    uad_project,
    verify_pe_quotient,
    verify_weyl,
    weyl_element,
)
from steinberg_kernel.tkk import tkk_build


def full(name):
    return make_pair("full", ring=zoo.ring(name))


def test_reference_groups():
    assert symmetric_group(4).order == 24
    assert alternating_group(5).order == 60
    s3 = group_analyze(symmetric_group(3))
    assert (s3.order, s3.centre_order, s3.derived_order) == (6, 1, 3)
    assert s3.abelian_invariants == [2]
    assert not s3.perfect
    assert is_perfect(alternating_group(5))
    assert not is_perfect(symmetric_group(4))
    a5 = group_analyze(alternating_group(5))
    assert a5.perfect
    assert a5.abelian_invariants == []
    assert a5.order_histogram == {1: 1, 2: 15, 3: 20, 5: 24}


def test_abelian_invariants_of_a4():
    report = group_analyze(alternating_group(4))
    assert report.derived_order == 4
    assert report.abelian_invariants == [3]
    assert report.to_dict()["orderHistogram"] == {"1": 1, "2": 3, "3": 8}


def test_automorphism_groups_go_through_regular_representation(config):
    group = pe_group(full("F3"), config)
    perms = as_permutation_group(group)
    assert perms.degree == 12
    assert perms.order() == 12
    assert abelian_invariants(group) == [3]
    assert abelian_invariants(pe_group(full("F2"), config)) == [2]


def test_permutation_groups_keep_their_degree():
    perms = as_permutation_group(symmetric_group(5))
    assert perms.degree == 5
    assert perms.order() == 120
    assert abelian_invariants(alternating_group(5)) == []


@pytest.mark.parametrize(
    "ring, order, reference",
    [("F2", 6, symmetric_group(3)), ("F3", 12, alternating_group(4))],
)
def test_pe_of_full_pairs(ring, order, reference, config):
    group = pe_group(full(ring), config)
    assert group.order == order
    assert matches_fingerprint(group, reference, config)


def test_pe_of_rect_f2(config):
    group = pe_group(zoo.pair("rect", zoo.ring("F2"), 1, 2), config)
    assert group.order == 168
    assert group_analyze(group, config).perfect


@pytest.mark.slow
def test_pe_of_hermitian_f2_is_s6(config):
    config.budget.max_group_elements = 10_000
    group = pe_group(zoo.pair("hermitian", zoo.ring("F2"), n=2), config)
    assert group.order == 720
    assert matches_fingerprint(group, symmetric_group(6), config)


def test_pe_budget(config):
    config.budget.max_group_elements = 20
    with pytest.raises(BudgetExceeded):
        pe_group(zoo.pair("rect", zoo.ring("F2"), 1, 2), config)


def test_generators_one_per_coordinate():
    algebra = tkk_build(zoo.pair("rect", zoo.ring("F3"), 1, 2))
    gens = pe_generators(algebra)
    assert len(gens) == 4
    assert all(not g.is_identity() for g in gens)


def test_derived_subgroup_and_centre_of_pe(config):
    group = pe_group(full("F3"), config)
    assert derived_subgroup(group, config).order == 4
    assert len(centre(group)) == 1


@pytest.mark.parametrize(
    "ring, p, q, el, z, pe",
    [("F2", 1, 1, 6, 1, 6), ("F3", 1, 1, 24, 2, 12), ("F2", 1, 2, 168, 1, 168)],
)
def test_pe_is_el_mod_centre(ring, p, q, el, z, pe, config):
    report = verify_pe_quotient(zoo.ring(ring), p, q, config)
    assert report.passed, str(report)
    assert (report.data["elOrder"], report.data["centreOrder"], report.data["peOrder"]) == (el, z, pe)


def test_uad_sends_minus_identity_to_identity(f3, config):
    projector = UadProjector.build(f3, 1, 1, config)
    _, _, index = projector.index
    minus_one = FinMatrix.identity(index, f3)
    minus_one = minus_one + minus_one
    assert uad_project(projector, minus_one).is_identity()


def test_relative_kernel_of_nil_ideal(config):
    pair = full("D2")
    result = pe_relative_kernel(pair, zoo.nil_ideal(pair), config)
    assert result.well_defined
    assert result.normal
    assert result.whole_order == 24
    assert result.quotient_order == 6
    assert result.group.order * result.quotient_order == result.whole_order


@pytest.mark.parametrize("ring", ["F2", "F3", "F5"])
def test_weyl_elements(ring, config):
    algebra = tkk_build(full(ring), config)
    report = verify_weyl(algebra, config)
    assert report.passed, str(report)
    assert report.check("weyl-conjugation").instances == (algebra.modulus - 1) * algebra.modulus
    assert set(report.data["weylOrders"].values()) == {2}


def test_weyl_rejects_zero_and_minus(config):
    algebra = tkk_build(full("F3"), config)
    with pytest.raises(JordanError):
        weyl_element(algebra, algebra.pair.element(PLUS, [0]), config)
    with pytest.raises(JordanError):
        weyl_element(algebra, algebra.pair.element(MINUS, [1]), config)


def test_weyl_needs_division_pair(config):
    algebra = tkk_build(full("D2"), config)
    with pytest.raises(JordanError, match="division"):
        weyl_element(algebra, algebra.pair.element(PLUS, [1, 0]), config)
