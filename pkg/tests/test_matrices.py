import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg_kernel import zoo
from steinberg_kernel.errors import MatrixError
from steinberg_kernel.matrices import (
    FinMatrix,
    IndexSet,
    all_matrices,
    block_exc2,
    commutator,
    e_block,
    el_group,
    elementary,
    matrix_unit,
    split_index,
    verify_elementary_relations,
)


def test_split_index():
    left, right, index = split_index(1, 2)
    assert left.labels == (1,)
    assert right.labels == (2, 3)
    assert index.labels == (1, 2, 3)
    with pytest.raises(MatrixError):
        split_index(0, 2)


def test_index_set_rejects_duplicates():
    with pytest.raises(MatrixError):
        IndexSet((1, 1))
    with pytest.raises(MatrixError):
        IndexSet.range(2).union(IndexSet.range(2))


def test_elementary_inverse_and_product(f3):
    index = IndexSet.range(3)
    g = elementary(f3, index, 1, 2, (2,))
    assert (g * g.inverse()).is_identity()
    assert g * g == elementary(f3, index, 1, 2, (1,))
    with pytest.raises(MatrixError):
        elementary(f3, index, 1, 1, (1,))


def test_offset_representation_is_unique(f3):
    index = IndexSet.range(2)
    a = FinMatrix.identity(index, f3) + matrix_unit(f3, index, index, 1, 1, (2,))
    b = FinMatrix.build(index, index, f3, {(1, 1): (2,)}, offset=1)
    assert a == b
    assert a.entry(1, 1) == (0,)
    assert a.entry(2, 2) == (1,)
    dense = a.to_dense()
    assert FinMatrix.from_dense(index, index, f3, dense, offset=1) == a


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
    st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
)
def test_offset_arithmetic_matches_dense(s, t, a, b, c, d):
    f3 = zoo.ring("F3")
    index = IndexSet.range(2)
    x = FinMatrix.build(index, index, f3, {(1, 2): (a,), (2, 1): (b,)}, offset=s)
    y = FinMatrix.build(index, index, f3, {(1, 1): (c,), (2, 2): (d,)}, offset=t)
    product = (x * y).to_dense()[:, :, 0]
    expected = (x.to_dense()[:, :, 0] @ y.to_dense()[:, :, 0]) % 3
    assert (product == expected).all()
    total = (x + y).to_dense()[:, :, 0]
    assert (total == (x.to_dense()[:, :, 0] + y.to_dense()[:, :, 0]) % 3).all()


def test_non_invertible_matrix(f2):
    index = IndexSet.range(2)
    m = FinMatrix.build(index, index, f2, {(1, 1): (1,)})
    with pytest.raises(MatrixError):
        m.inverse()


def test_e_block_signs(f3):
    left, right, index = split_index(1, 1)
    u = matrix_unit(f3, left, right, 1, 2, (1,))
    v = matrix_unit(f3, right, left, 2, 1, (1,))
    assert e_block(f3, left, right, "+", u).entry(1, 2) == (1,)
    assert e_block(f3, left, right, "-", v).entry(2, 1) == (2,)
    with pytest.raises(MatrixError):
        e_block(f3, left, right, "+", v)


def test_exc2_single_instance(f3):
    left, right, _ = split_index(1, 2)
    u = matrix_unit(f3, left, right, 1, 2, (1,)) + matrix_unit(f3, left, right, 1, 3, (2,))
    v = matrix_unit(f3, right, left, 2, 1, (2,))
    lhs = commutator(e_block(f3, left, right, "+", u), e_block(f3, left, right, "-", v))
    assert lhs == block_exc2(f3, left, right, u, v)


def test_all_matrices_count(f2):
    left, right, _ = split_index(1, 2)
    assert len(all_matrices(f2, left, right)) == 4


@pytest.mark.parametrize("ring, n, order", [("F2", 2, 6), ("F3", 2, 24), ("F2", 3, 168)])
def test_el_group_orders(ring, n, order):
    assert el_group(zoo.ring(ring), IndexSet.range(n)).order == order


@pytest.mark.parametrize("ring, n", [("F2", 3), ("F3", 3), ("F2", 4)])
def test_elementary_relations(ring, n, config):
    report = verify_elementary_relations(zoo.ring(ring), IndexSet.range(n), "E", config=config)
    assert report.passed
    assert {c.name for c in report.checks} == {"E1", "E2", "E3", "E4"}


@pytest.mark.slow
@pytest.mark.parametrize("ring, n", [("F3", 4), ("F2", 5), ("F3", 5)])
def test_elementary_relations_large(ring, n):
    assert verify_elementary_relations(zoo.ring(ring), IndexSet.range(n), "E").passed


@pytest.mark.parametrize("suite", ["EJ", "exc2", "generation"])
def test_block_suites(suite, f2, config):
    left, right, index = split_index(1, 2)
    report = verify_elementary_relations(f2, index, suite, (left, right), config)
    assert report.passed


def test_exc2_exhaustive_over_f3(f3, config):
    left, right, index = split_index(1, 2)
    report = verify_elementary_relations(f3, index, "exc2", (left, right), config)
    assert report.passed
    assert report.check("exc2").instances == 9 * 9
    assert not report.check("exc2").sampled


def test_block_suite_needs_partition(f2):
    with pytest.raises(MatrixError):
        verify_elementary_relations(f2, IndexSet.range(3), "EJ")
