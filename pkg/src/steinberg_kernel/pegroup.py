"""
사영 기본군 PE(V) ⊂ Aut(tkk(V))

exp₊, exp₋ 의 BFS 닫힘, 유한군 분석 (중심, 교환자 부분군, 아벨화, 원소 위수 분포),
EL_N(A) → PE 사영 uAd, 상대 부분군 PE(V, I), Weyl 원소.
"""

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import structlog
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from . import linalg
from .config import KernelConfig, resolve
from .errors import JordanError, TKKError
from .groups import FiniteGroup, Perm, closure, commutator, paired_closure
from .jordan import (
    MINUS,
    PLUS,
    JordanPairSpec,
    PairElement,
    is_division_pair,
    jordan_inverse,
    quotient_map,
    quotient_pair,
)
from .linalg import Submodule
from .matrices import FinMatrix, e_block, el_group, split_index
from .models import SuiteReport
from .scalars import RingSpec
from .tkk import (
    Automorphism,
    RectangularModel,
    TKKAlgebra,
    exp_aut,
    fre_build,
    psi_dense,
    rect_pair_for,
    tkk_build,
)

logger = structlog.get_logger()


# ----- PE(V) -----


def _algebra(source: Union[JordanPairSpec, TKKAlgebra], config: KernelConfig) -> TKKAlgebra:
    return source if isinstance(source, TKKAlgebra) else tkk_build(source, config)


def pe_generators(algebra: TKKAlgebra) -> List[Automorphism]:
    """exp₊(b_i), exp₋(b'_k) (좌표 기저)"""
    pair = algebra.pair
    gens = []
    for s in (PLUS, MINUS):
        for row in np.eye(pair.dim(s), dtype=np.int64):
            gens.append(exp_aut(algebra, s, pair.element(s, row)))
    return gens


def pe_group(
    source: Union[JordanPairSpec, TKKAlgebra], config: Optional[KernelConfig] = None
) -> FiniteGroup:
    """
    PE(V) 열거

    Raises:
        BudgetExceeded: 원소 수가 max_group_elements 를 넘을 때
    """
    config = resolve(config)
    algebra = _algebra(source, config)
    name = f"PE({algebra.pair.name})"
    logger.info("Enumerating projective elementary group", group=name, tkkDim=algebra.dim)
    return closure(
        pe_generators(algebra), Automorphism.identity(algebra.dim, algebra.modulus), name, config
    )


# ----- 유한군 분석 -----


@dataclass
class GroupReport:
    """유한군의 불변량 요약"""
    name: str
    order: int
    centre_order: int
    derived_order: int
    abelian_invariants: List[int]
    order_histogram: Dict[int, int]
    perfect: bool

    def fingerprint(self) -> Tuple[int, Tuple[Tuple[int, int], ...], int, int]:
        return (
            self.order,
            tuple(sorted(self.order_histogram.items())),
            self.centre_order,
            self.derived_order,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "centreOrder": self.centre_order,
            "derivedOrder": self.derived_order,
            "abelianInvariants": list(self.abelian_invariants),
            "orderHistogram": {str(k): v for k, v in sorted(self.order_histogram.items())},
            "perfect": self.perfect,
        }

    def __str__(self) -> str:
        return (
            f"GroupReport[name={self.name}, order={self.order}, centre={self.centre_order}, "
            f"derived={self.derived_order}, perfect={self.perfect}]"
        )


def centre(group: FiniteGroup) -> List[Any]:
    """모든 생성원과 가환인 원소"""
    return [
        g for g in group.elements if all(g * s == s * g for s in group.generators)
    ]


def normal_closure(group: FiniteGroup, seeds: List[Any], name: str, config: KernelConfig) -> FiniteGroup:
    """seeds 의 정규 닫힘 (생성원 켤레로 닫힐 때까지 반복)"""
    gens = [g for g in dict.fromkeys(seeds) if g != group.identity]
    while True:
        sub = closure(gens, group.identity, name, config, limit=group.order)
        extra = []
        for s in group.generators:
            s_inv = s.inverse()
            for h in sub.generators:
                c = s * h * s_inv
                if c not in sub and c not in extra:
                    extra.append(c)
        if not extra:
            return sub
        gens.extend(extra)


def derived_subgroup(group: FiniteGroup, config: Optional[KernelConfig] = None) -> FiniteGroup:
    """G' = 생성원 교환자들의 정규 닫힘"""
    config = resolve(config)
    seeds = [commutator(a, b) for a, b in itertools.combinations(group.generators, 2)]
    return normal_closure(group, seeds, f"[{group.name},{group.name}]", config)


def is_perfect(group: FiniteGroup, config: Optional[KernelConfig] = None) -> bool:
    """G = [G, G]"""
    return derived_subgroup(group, config).order == group.order


def as_permutation_group(group: FiniteGroup) -> PermutationGroup:
    """
    sympy PermutationGroup 으로 옮긴다

    Perm 원소면 생성원을 그대로, 그 외(행렬, 자기동형)는 오른쪽 정칙 표현 i ↦ index(g_i * s).
    """
    if isinstance(group.identity, Perm):
        degree = len(group.identity.images)
        gens = [Permutation(list(g.images)) for g in group.generators]
    else:
        degree = group.order
        gens = [
            Permutation([group.index(g * s) for g in group.elements]) for s in group.generators
        ]
    return PermutationGroup(gens or [Permutation(list(range(degree)))])


def abelian_invariants(group: FiniteGroup) -> List[int]:
    """G/G' 의 소수 거듭제곱 불변량"""
    return sorted(int(k) for k in as_permutation_group(group).abelian_invariants())


def group_analyze(group: FiniteGroup, config: Optional[KernelConfig] = None) -> GroupReport:
    config = resolve(config)
    derived = derived_subgroup(group, config)
    histogram = Counter(group.element_order(g) for g in group.elements)
    report = GroupReport(
        name=group.name,
        order=group.order,
        centre_order=len(centre(group)),
        derived_order=derived.order,
        abelian_invariants=abelian_invariants(group),
        order_histogram=dict(histogram),
        perfect=derived.order == group.order,
    )
    logger.info("Group analyzed", group=group.name, order=report.order, perfect=report.perfect)
    return report


def _from_sympy(group: PermutationGroup, name: str) -> FiniteGroup:
    gens = [Perm(tuple(int(c) for c in g.array_form)) for g in group.generators]
    return closure(gens, Perm.identity(group.degree), name)


def symmetric_group(n: int) -> FiniteGroup:
    return _from_sympy(SymmetricGroup(n), f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    return _from_sympy(AlternatingGroup(n), f"A{n}")


def matches_fingerprint(
    group: FiniteGroup, reference: FiniteGroup, config: Optional[KernelConfig] = None
) -> bool:
    """(위수, 위수 분포, 중심, 교환자 위수) 와 교환자 부분군의 같은 지문이 일치하는지"""
    config = resolve(config)
    if group.order != reference.order:
        return False
    if group_analyze(group, config).fingerprint() != group_analyze(reference, config).fingerprint():
        return False
    dg, dr = derived_subgroup(group, config), derived_subgroup(reference, config)
    return group_analyze(dg, config).fingerprint() == group_analyze(dr, config).fingerprint()


# ----- EL_N(A) → PE -----


@dataclass(eq=False)
class UadProjector:
    """
    Ad g 가 유도하는 𝔢/𝔷 ≅ tkk 의 자기동형

    section[:, a] 는 Ψ(m) = a 번째 tkk 기저인 𝔢 좌표 m.
    """
    model: RectangularModel
    algebra: TKKAlgebra
    psi: np.ndarray = field(repr=False)
    section: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, ring: RingSpec, p: int, q: int, config: Optional[KernelConfig] = None) -> "UadProjector":
        model = fre_build(ring, p, q)
        algebra = tkk_build(rect_pair_for(ring, p, q), config)
        mod = ring.modulus
        size = model.dim
        eye = np.eye(size, dtype=np.int64)
        psi = np.array(
            [algebra.coords(psi_dense(algebra, model, model.dense(eye[a]))) for a in range(size)],
            dtype=np.int64,
        ).T % mod
        columns = []
        for a in range(algebra.dim):
            target = np.zeros(algebra.dim, dtype=np.int64)
            target[a] = 1
            pre = linalg.solve(psi, target, mod)
            if pre is None:
                raise TKKError(f"Psi is not surjective onto tkk over {ring.name}")
            columns.append(pre)
        return cls(model, algebra, psi, np.array(columns, dtype=np.int64).T)

    @property
    def index(self):
        return split_index(self.model.p, self.model.q)


def uad_project(projector: UadProjector, g: FinMatrix) -> Automorphism:
    """
    uAd(g)

    Raises:
        TKKError: Ad g 가 𝔢 를 보존하지 않을 때
    """
    model, algebra = projector.model, projector.algebra
    ring, mod = model.ring, model.ring.modulus
    dense = g.to_dense()
    dense_inv = g.inverse().to_dense()
    columns = []
    for a in range(algebra.dim):
        m = model.dense(projector.section[:, a])
        image = ring.matmul(ring.matmul(dense, m), dense_inv)
        c = model.coords(image)
        if c is None:
            raise TKKError("Ad g does not stabilize the matrix model")
        columns.append(projector.psi @ c % mod)
    return Automorphism(np.array(columns, dtype=np.int64).T, mod)


def _block(ring: RingSpec, projector: UadProjector, sign: int, coords: np.ndarray) -> FinMatrix:
    left, right, _ = projector.index
    mm = projector.algebra.pair.model
    dense = mm.to_dense(sign, coords)
    if sign == PLUS:
        return e_block(ring, left, right, "+", FinMatrix.from_dense(left, right, ring, dense))
    return e_block(ring, left, right, "-", FinMatrix.from_dense(right, left, ring, dense))


def verify_pe_quotient(
    ring: RingSpec, p: int, q: int, config: Optional[KernelConfig] = None
) -> SuiteReport:
    """
    Ker(uAd|EL) = Z(EL), |EL| / |Z| = |PE|, uAd(e_σ(w)) = exp_σ(w), uAd 준동형
    """
    config = resolve(config)
    projector = UadProjector.build(ring, p, q, config)
    algebra = projector.algebra
    report = SuiteReport(
        suite="pe-quotient", subject=f"{ring.name},{p},{q}", witness_limit=config.sampling.witness_limit
    )
    _, _, index = projector.index
    el = el_group(ring, index, config)
    pe = pe_group(algebra, config)

    images = {g: uad_project(projector, g) for g in el.elements}
    kernel = {g for g, a in images.items() if a.is_identity()}
    z = set(centre(el))
    report.record("kernel-centre", kernel == z, {"kernel": len(kernel), "centre": len(z)})
    report.record(
        "orders", el.order // max(len(z), 1) == pe.order and el.order % max(len(z), 1) == 0,
        {"el": el.order, "centre": len(z), "pe": pe.order},
    )
    image_set = set(images.values())
    report.record("image-is-pe", image_set == set(pe.elements), {"image": len(image_set)})

    for s in (PLUS, MINUS):
        for row in np.eye(algebra.pair.dim(s), dtype=np.int64):
            g = _block(ring, projector, s, row)
            ok = uad_project(projector, g) == exp_aut(algebra, s, algebra.pair.element(s, row))
            report.record("uad-exp", ok, {"sign": s, "w": row.tolist()})

    for g, h in itertools.product(el.generators, repeat=2):
        report.record("homomorphism", images[g * h] == images[g] * images[h])

    report.data.update({"elOrder": el.order, "centreOrder": len(z), "peOrder": pe.order})
    logger.info("PE quotient check finished", subject=report.subject, passed=report.passed)
    return report


# ----- 상대 부분군 -----


@dataclass
class RelativeKernel:
    """PE(V, I) = Ker PE(can), 그래프 닫힘 결과"""
    group: FiniteGroup
    whole_order: int
    quotient_order: int
    conflicts: int
    normal: bool

    @property
    def well_defined(self) -> bool:
        return self.conflicts == 0

    def to_dict(self) -> dict:
        return {
            "kernelOrder": self.group.order,
            "wholeOrder": self.whole_order,
            "quotientOrder": self.quotient_order,
            "conflicts": self.conflicts,
            "normal": self.normal,
        }


def pe_relative_kernel(
    pair: JordanPairSpec,
    ideal: Tuple[Submodule, Submodule],
    config: Optional[KernelConfig] = None,
) -> RelativeKernel:
    """
    (g, PE(can)(g)) 그래프를 닫아 PE(V, I) 를 원소 단위로 계산

    Raises:
        JordanError: ideal 이 이데알이 아닐 때
        BudgetExceeded: 그래프가 예산을 넘을 때
    """
    config = resolve(config)
    quotient = quotient_pair(pair, ideal)
    can = quotient_map(pair, ideal)
    algebra = tkk_build(pair, config)
    bar = tkk_build(quotient, config)

    pairs = []
    for s in (PLUS, MINUS):
        for row in np.eye(pair.dim(s), dtype=np.int64):
            image = quotient.element(s, tuple(int(c) for c in can(s, row)))
            pairs.append((exp_aut(algebra, s, pair.element(s, row)), exp_aut(bar, s, image)))
    identity = (
        Automorphism.identity(algebra.dim, algebra.modulus),
        Automorphism.identity(bar.dim, bar.modulus),
    )
    graph, conflicts = paired_closure(pairs, identity, config, name=f"PE(can) on {pair.name}")
    if conflicts:
        logger.warning("PE(can) is not well defined", pair=pair.name, conflicts=len(conflicts))

    members = [g for g, gbar in graph.items() if gbar == identity[1]]
    kernel = FiniteGroup(
        name=f"PE({pair.name},I)", elements=members, generators=members, identity=identity[0]
    )
    normal = all(
        s * k * s.inverse() in kernel for s, _ in pairs for k in kernel.elements
    )
    quotient_order = len(set(graph.values()))
    result = RelativeKernel(kernel, len(graph), quotient_order, len(conflicts), normal)
    logger.info("Relative kernel computed", pair=pair.name, **result.to_dict())
    return result


# ----- Weyl 원소 -----


def weyl_element(
    algebra: TKKAlgebra, b: PairElement, config: Optional[KernelConfig] = None
) -> Automorphism:
    """
    w_b = exp₋(b⁻¹) exp₊(b) exp₋(b⁻¹)

    Raises:
        JordanError: b = 0 이거나 나눗셈 pair 가 아닐 때
    """
    pair = algebra.pair
    if b.sign != PLUS:
        raise JordanError("Weyl elements are built from b in V+")
    if b.is_zero():
        raise JordanError("Weyl element needs b != 0")
    if not is_division_pair(pair, config):
        raise JordanError(f"{pair.name} is not a division pair")
    inv = jordan_inverse(pair, b)
    left = exp_aut(algebra, MINUS, inv)
    return left * exp_aut(algebra, PLUS, b) * left


def verify_weyl(algebra: TKKAlgebra, config: Optional[KernelConfig] = None) -> SuiteReport:
    """w_b exp₋(a) w_b⁻¹ = exp₊(Q_b a), 모든 b ≠ 0, 모든 a"""
    config = resolve(config)
    pair = algebra.pair
    report = SuiteReport(
        suite="weyl", subject=pair.name, witness_limit=config.sampling.witness_limit
    )
    cap = config.budget.max_module_elements
    minus = [pair.element(MINUS, a) for a in pair.elements(MINUS, cap)]
    orders: Dict[str, int] = {}
    for coords in pair.elements(PLUS, cap):
        if not any(coords):
            continue
        b = pair.element(PLUS, coords)
        w = weyl_element(algebra, b, config)
        w_inv = w.inverse()
        for a in minus:
            lhs = w * exp_aut(algebra, MINUS, a) * w_inv
            qa = pair.element(PLUS, tuple(int(c) for c in pair.q(PLUS, b.vector, a.vector)))
            report.record("weyl-conjugation", lhs == exp_aut(algebra, PLUS, qa), {"b": coords, "a": a.coords})
        k, power = 1, w
        while not power.is_identity():
            power = power * w
            k += 1
        orders[str(list(coords))] = k
        report.record("order-divides-4", 4 % k == 0, {"b": coords, "order": k})
    report.data["weylOrders"] = orders
    return report
