import pytest

from steinberg_kernel.config import KernelConfig
from steinberg_kernel.errors import BudgetExceeded
from steinberg_kernel.groups import Perm, closure, commutator, evaluate_word, paired_closure


def s3():
    return closure([Perm((1, 0, 2)), Perm((1, 2, 0))], Perm.identity(3), name="S3")


def test_perm_product_is_left_to_right():
    p, q = Perm((1, 0, 2)), Perm((0, 2, 1))
    # 0 -p-> 1 -q-> 2
    assert (p * q).images[0] == 2
    assert (p * p.inverse()).is_identity()


def test_closure_of_s3():
    group = s3()
    assert group.order == 6
    assert Perm((2, 1, 0)) in group
    assert group.element_order(Perm((1, 2, 0))) == 3
    assert group.index(group.identity) == 0


def test_closure_budget():
    config = KernelConfig()
    config.budget.max_group_elements = 4
    with pytest.raises(BudgetExceeded) as info:
        closure([Perm((1, 0, 2)), Perm((1, 2, 0))], Perm.identity(3), config=config)
    assert info.value.what == "group elements"


def test_same_elements():
    a = s3()
    b = closure([Perm((0, 2, 1)), Perm((2, 0, 1))], Perm.identity(3))
    assert a.same_elements(b)
    c = closure([Perm((1, 2, 0))], Perm.identity(3))
    assert not a.same_elements(c)


def test_commutator_and_word_evaluation():
    a, b = Perm((1, 0, 2)), Perm((1, 2, 0))
    identity = Perm.identity(3)
    assert commutator(a, a).is_identity()
    assert evaluate_word((1, 2, -1, -2), [a, b], identity) == commutator(a, b)
    assert evaluate_word((), [a, b], identity) == identity
    assert evaluate_word((-2,), [a, b], identity, inverses=[a.inverse(), b.inverse()]) == b.inverse()


def test_paired_closure_detects_ill_defined_map():
    a, b = Perm((1, 0, 2)), Perm((1, 2, 0))
    sign = {a: Perm((1, 0)), b: Perm((0, 1))}
    image, conflicts = paired_closure(
        [(a, sign[a]), (b, sign[b])], (Perm.identity(3), Perm.identity(2))
    )
    assert len(image) == 6
    assert not conflicts
    # b 를 홀치환으로 보내면 b³ = 1 과 모순
    _, conflicts = paired_closure(
        [(a, Perm((1, 0))), (b, Perm((1, 0)))], (Perm.identity(3), Perm.identity(2))
    )
    assert conflicts
