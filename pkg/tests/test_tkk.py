import numpy as np
import pytest

import steinberg_kernel.tkk as tkk_module
from steinberg_kernel import zoo
from steinberg_kernel.errors import TKKError
from steinberg_kernel.jordan import MINUS, PLUS, make_pair, subpair, zero_pair
from steinberg_kernel.linalg import Submodule
from steinberg_kernel.tkk import (
    Automorphism,
    bracket,
    exp_aut,
    fre_build,
    l0_membership,
    preserves_bracket,
    tkk_build,
    tkk_of_pair_aut,
    verify_psi,
    verify_tkk_suite,
)


def algebra_of(kind, ring, i=1, j=1, n=2, config=None):
    return tkk_build(zoo.pair(kind, zoo.ring(ring), i, j, n), config)


@pytest.mark.parametrize(
    "kind, ring, i, j, dims",
    [
        ("full", "F2", 1, 1, (1, 1, 1)),
        ("full", "F3", 1, 1, (1, 1, 1)),
        ("rect", "F2", 1, 2, (2, 4, 2)),
        ("rect", "F3", 1, 2, (2, 4, 2)),
    ],
)
def test_dimensions(kind, ring, i, j, dims):
    algebra = algebra_of(kind, ring, i, j)
    assert algebra.dims == dims
    assert algebra.dim == sum(dims)
    assert algebra.degrees == (1,) * dims[0] + (0,) * dims[1] + (-1,) * dims[2]


@pytest.mark.parametrize(
    "kind, ring, i, j, n",
    [
        ("full", "F2", 1, 1, 2),
        ("full", "F3", 1, 1, 2),
        ("rect", "F2", 1, 2, 2),
        ("hermitian", "F2", 1, 1, 2),
    ],
)
def test_suite_passes(kind, ring, i, j, n, config):
    report = verify_tkk_suite(algebra_of(kind, ring, i, j, n, config), config)
    assert report.passed, str(report)
    for name in ("alternating", "jacobi", "grading", "trivial-centre", "JP15", "exp-additive+"):
        assert report.check(name).instances > 0


def test_corrupted_bracket_breaks_jacobi(config):
    algebra = algebra_of("rect", "F2", 1, 2)
    zeta, x0 = algebra.dims[0], 0
    table = algebra.table.copy()
    table[zeta, x0] = 0
    table[x0, zeta] = 0
    algebra.table = table
    report = verify_tkk_suite(algebra, config)
    assert report.check("alternating").passed
    assert not report.check("jacobi").passed
    assert not report.passed
    assert report.data["expSkipped"] == "bracket"
    assert not any(c.name.startswith("exp-") for c in report.checks)


def test_exp_failure_is_recorded_not_raised(config, monkeypatch):
    algebra = algebra_of("full", "F3")

    def broken(_algebra, sign, w):
        raise TKKError(f"exp_{sign:+d}({list(w.coords)}) does not preserve the bracket")

    monkeypatch.setattr(tkk_module, "exp_aut", broken)
    report = verify_tkk_suite(algebra, config)
    assert report.check("jacobi").passed
    assert not report.check("exp-bracket+").passed
    assert not report.check("exp-bracket-").passed
    assert "does not preserve" in report.check("exp-bracket+").witnesses[0]["error"]
    assert not report.passed


def test_bracket_of_plus_and_minus_is_minus_delta():
    algebra = algebra_of("full", "F3")
    got = bracket(algebra, algebra.plus([1]), algebra.minus([1]))
    want = algebra.delta(np.array([1]), np.array([1]))
    assert not ((got.flat_l0() + want.flat_l0()) % 3).any()
    assert not got.x.any() and not got.y.any()


def test_zeta_grades_by_degree():
    algebra = algebra_of("rect", "F3", 1, 2)
    z = algebra.zeta()
    assert np.array_equal(bracket(algebra, z, algebra.plus([1, 2])).x, [1, 2])
    assert np.array_equal(bracket(algebra, z, algebra.minus([1, 0])).y, [2, 0])


def test_exp_of_zero_is_identity_and_exp_is_additive():
    algebra = algebra_of("full", "F3")
    pair = algebra.pair
    assert exp_aut(algebra, PLUS, pair.element(PLUS, [0])).is_identity()
    one = exp_aut(algebra, PLUS, pair.element(PLUS, [1]))
    two = exp_aut(algebra, PLUS, pair.element(PLUS, [2]))
    assert not one.is_identity()
    assert one * one == two
    assert (one * two).is_identity()
    assert one.inverse() == two
    assert preserves_bracket(algebra, one.matrix) is None


def test_exp_rejects_wrong_sign():
    algebra = algebra_of("full", "F3")
    with pytest.raises(TKKError):
        exp_aut(algebra, MINUS, algebra.pair.element(PLUS, [1]))


def test_exp_plus_and_minus_do_not_commute():
    algebra = algebra_of("full", "F3")
    pair = algebra.pair
    a = exp_aut(algebra, PLUS, pair.element(PLUS, [1]))
    b = exp_aut(algebra, MINUS, pair.element(MINUS, [1]))
    assert a * b != b * a


def test_pair_automorphism_lifts():
    algebra = algebra_of("full", "F3")
    identity = tkk_of_pair_aut(algebra, np.eye(1), np.eye(1))
    assert identity == Automorphism.identity(algebra.dim, 3)
    scaled = tkk_of_pair_aut(algebra, [[2]], [[2]])
    assert not scaled.is_identity()
    assert (scaled * scaled).is_identity()
    assert preserves_bracket(algebra, scaled.matrix) is None


def test_non_automorphism_rejected():
    algebra = algebra_of("full", "F3")
    with pytest.raises(TKKError, match="Not an automorphism"):
        tkk_of_pair_aut(algebra, [[2]], [[1]])
    with pytest.raises(TKKError, match="invertible"):
        tkk_of_pair_aut(algebra, [[0]], [[1]])


def test_zero_pair_is_degenerate(config):
    algebra = tkk_build(zero_pair(5), config)
    assert algebra.degenerate
    assert algebra.dims == (0, 1, 0)
    report = verify_tkk_suite(algebra, config)
    assert report.passed
    assert report.data["centreSkipped"] == "degenerate"


def test_build_rejects_composite_modulus_and_subpairs(f2):
    with pytest.raises(TKKError, match="field scalars"):
        tkk_build(make_pair("full", ring=zoo.ring("Z4")))
    pair = make_pair("full", ring=zoo.ring("D2"))
    ideal = zoo.nil_ideal(pair)
    with pytest.raises(TKKError, match="subpair"):
        tkk_build(subpair(pair, ideal))


def test_l0_membership_over_z4(config):
    pair = make_pair("full", ring=zoo.ring("Z4"))
    assert l0_membership(pair, [[1]], [[3]], config)
    assert l0_membership(pair, [[2]], [[2]], config)
    assert not l0_membership(pair, [[1]], [[1]], config)


def test_matrix_model_centre_is_scalar(f3):
    model = fre_build(f3, 1, 2)
    assert model.dim == 9
    assert len(model.centre) == 1
    centre = Submodule.span(model.centre, 3, model.dim)
    assert centre.rank == 1


@pytest.mark.parametrize("ring, p, q", [("F2", 1, 1), ("F3", 1, 1), ("F2", 1, 2), ("D2", 1, 1)])
def test_psi_matches_tkk(ring, p, q, config):
    report = verify_psi(zoo.ring(ring), p, q, config)
    assert report.passed, str(report)
    assert report.check("kernel-centre").passed
    assert report.data["rank"] == report.data["tkk"]["dim"]


def test_psi_needs_prime_scalars():
    with pytest.raises(TKKError):
        fre_build(zoo.ring("Z4"), 1, 1)
