"""
작은 유한 인스턴스 위의 전수 검증 시나리오

전부 slow 로 표시. `pytest -m slow` 로 실행.
"""

import pytest

from steinberg_kernel import zoo
from steinberg_kernel.coset_table import todd_coxeter
from steinberg_kernel.grading import verify_grading_suite
from steinberg_kernel.jordan import MINUS, PLUS, IdempotentPair, make_pair, peirce, verify_jp_suite
from steinberg_kernel.matrices import IndexSet, split_index, verify_elementary_relations
from steinberg_kernel.pegroup import (
    alternating_group,
    derived_subgroup,
    matches_fingerprint,
    pe_group,
    symmetric_group,
    verify_pe_quotient,
    verify_weyl,
)
from steinberg_kernel.steinberg import (
    evaluate_el,
    evaluate_pe,
    kernel_centrality_report,
    make_presentation,
    verify_b_words,
)
from steinberg_kernel.tkk import tkk_build, verify_psi, verify_tkk_suite

pytestmark = pytest.mark.slow

ZOO_GRADED = [
    ("rect", "F2", 1, 2, 2),
    ("rect", "F3", 1, 2, 2),
    ("hermitian", "F2", 1, 1, 2),
    ("alternating", "F2", 1, 1, 4),
    ("quadform", "F2", 1, 1, 2),
]


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("ring", ["F2", "F3"])
def test_elementary_relations(ring, n, config):
    report = verify_elementary_relations(zoo.ring(ring), IndexSet.range(n), "E", config=config)
    assert report.passed


def test_block_identity_exhaustive(config):
    left, right, index = split_index(1, 2)
    report = verify_elementary_relations(zoo.ring("F3"), index, "exc2", (left, right), config)
    assert report.passed
    assert report.check("exc2").instances == 9 * 9


@pytest.mark.parametrize(
    "kind, ring, i, j, n, exhaustive",
    [
        ("full", "F2", 1, 1, 2, True),
        ("full", "F3", 1, 1, 2, True),
        ("full", "Z4", 1, 1, 2, True),
        ("rect", "F2", 1, 2, 2, True),
        ("rect", "F2", 2, 2, 2, False),
        ("hermitian", "F2", 1, 1, 2, False),
        ("alternating", "F2", 1, 1, 4, False),
        ("quadform", "F3", 1, 1, 2, False),
    ],
)
def test_jordan_identities(kind, ring, i, j, n, exhaustive, config):
    config.sampling.samples = 10_000
    config.sampling.exhaustive_cap = 20_000
    report = verify_jp_suite(zoo.pair(kind, zoo.ring(ring), i, j, n), config)
    assert report.passed
    if exhaustive:
        assert not any(c.sampled for c in report.checks)


def test_peirce_of_matrix_unit(config):
    e11 = (1, 0, 0, 0)
    decomposition = peirce(zoo.pair("full", zoo.ring("Mat2F2")), IdempotentPair(e11, e11), config)
    assert decomposition.ranks(PLUS) == (1, 2, 1)
    assert decomposition.ranks(MINUS) == (1, 2, 1)
    assert decomposition.report.passed


@pytest.mark.parametrize("kind, ring, i, j, n", ZOO_GRADED)
def test_grading_suites(kind, ring, i, j, n, config):
    grading = zoo.grading(zoo.pair(kind, zoo.ring(ring), i, j, n), config)
    assert verify_grading_suite(grading, config).passed


@pytest.mark.parametrize("kind, ring, i, j, n", ZOO_GRADED)
def test_tkk_suites(kind, ring, i, j, n, config):
    algebra = tkk_build(zoo.pair(kind, zoo.ring(ring), i, j, n), config)
    report = verify_tkk_suite(algebra, config)
    assert report.passed
    assert report.check("trivial-centre").passed


@pytest.mark.parametrize("ring, p, q", [("F2", 1, 1), ("F2", 1, 2), ("F3", 1, 1)])
def test_psi_isomorphism(ring, p, q, config):
    assert verify_psi(zoo.ring(ring), p, q, config).passed


def test_tkk_over_f5_is_sl2(config):
    algebra = tkk_build(zoo.pair("full", zoo.ring("F5")), config)
    assert algebra.dim == 3
    assert verify_psi(zoo.ring("F5"), 1, 1, config).passed


def test_finite_pe_groups(config):
    config.budget.max_group_elements = 10_000
    s3 = pe_group(zoo.pair("full", zoo.ring("F2")), config)
    assert s3.order == 6 and matches_fingerprint(s3, symmetric_group(3), config)
    a4 = pe_group(zoo.pair("full", zoo.ring("F3")), config)
    assert a4.order == 12 and matches_fingerprint(a4, alternating_group(4), config)
    assert derived_subgroup(a4, config).order == 4
    assert all(a4.element_order(g) != 6 for g in a4.elements)
    s6 = pe_group(zoo.pair("hermitian", zoo.ring("F2"), n=2), config)
    assert s6.order == 720 and matches_fingerprint(s6, symmetric_group(6), config)


@pytest.mark.parametrize(
    "ring, p, q, el, pe", [("F2", 1, 1, 6, 6), ("F3", 1, 1, 24, 12), ("F2", 1, 2, 168, 168)]
)
def test_pe_quotients(ring, p, q, el, pe, config):
    report = verify_pe_quotient(zoo.ring(ring), p, q, config)
    assert report.passed
    assert (report.data["elOrder"], report.data["peOrder"]) == (el, pe)


def test_linear_and_rect_homomorphisms(config):
    linear = make_presentation("linear", ring=zoo.ring("F2"), n=3, config=config)
    assert evaluate_el(linear, config).verified
    rect = make_presentation("rect-EJ", ring=zoo.ring("F2"), p=1, q=2, config=config)
    assert evaluate_el(rect, config).verified


@pytest.mark.parametrize("kind, ring, i, j, n", [g for g in ZOO_GRADED if g[0] != "alternating"])
def test_steinberg_relators_hold_in_pe(kind, ring, i, j, n, config):
    config.budget.max_group_elements = 100_000
    grading = zoo.grading(zoo.pair(kind, zoo.ring(ring), i, j, n), config)
    presentation = make_presentation("jordan-St", grading=grading, config=config)
    algebra = tkk_build(grading.pair, config)
    hom = evaluate_pe(presentation, algebra, config)
    assert hom.verified
    report = verify_b_words(presentation, hom, algebra, config)
    assert report.passed
    if grading.pair.kind in ("full", "rect"):
        el = evaluate_el(presentation, config)
        assert el.verified
        assert verify_b_words(presentation, el, config=config).passed


def test_linear_coset_enumeration_has_central_kernel(config):
    presentation = make_presentation("linear", ring=zoo.ring("F2"), n=3, config=config)
    table = todd_coxeter(presentation, config=config)
    assert table.complete
    hom = evaluate_el(presentation, config)
    report = kernel_centrality_report(presentation, hom, table, config)
    assert report.check("surjective").passed
    assert report.data["verdict"] == "central"


def test_rank_one_rect_presentation_is_infinite(config):
    presentation = make_presentation("rect-EJ", ring=zoo.ring("F2"), p=1, q=1, config=config)
    assert todd_coxeter(presentation, max_cosets=5_000, config=config).status == "exhausted"


@pytest.mark.parametrize("ring", ["F2", "F3", "F5"])
def test_weyl_relation(ring, config):
    algebra = tkk_build(make_pair("full", ring=zoo.ring(ring)), config)
    report = verify_weyl(algebra, config)
    assert report.passed
    assert report.check("weyl-conjugation").instances == algebra.modulus * (algebra.modulus - 1)
