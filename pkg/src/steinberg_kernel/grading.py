"""
Jordan pair 의 근 grading

V^σ = ⊕_{α ∈ R₁} V_α^σ 를 (RG1)/(RG2) 로 검증한다.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from . import linalg
from .config import KernelConfig, resolve
from .errors import BudgetExceeded, GradingError, KernelError
from .jordan import (
    MINUS,
    PLUS,
    IdempotentPair,
    JordanPairSpec,
    is_idempotent,
    peirce,
)
from .linalg import Submodule
from .matrices import IndexSet
from .models import SuiteReport
from .rootsys import (
    Root,
    RootRelation,
    ThreeGradingSpec,
    classify_pair,
    make_root_system,
    make_three_grading,
    pairing,
)
from .scalars import is_prime

logger = structlog.get_logger()

KIND_FOR_PAIR = {"full": "A", "rect": "A", "hermitian": "C^her", "alternating": "D^alt"}


@dataclass
class RootGradingSpec:
    """pair + 3-grading + 근 공간 + (선택) 멱등원 족"""
    pair: JordanPairSpec
    three_grading: ThreeGradingSpec
    spaces: Dict[Root, Tuple[Submodule, Submodule]]
    idempotents: Dict[Root, IdempotentPair] = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def roots(self) -> List[Root]:
        return self.three_grading.ordered_r1

    def space(self, root: Root, sign: int) -> Submodule:
        if root not in self.spaces:
            return Submodule.zero(self.pair.modulus, self.pair.dim(sign))
        return self.spaces[root][0 if sign == PLUS else 1]

    def relation(self, alpha: Root, beta: Root) -> RootRelation:
        return classify_pair(self.three_grading, alpha, beta)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair.name,
            "grading": str(self.three_grading),
            "spaces": {
                str(r): {"plus": self.spaces[r][0].rank, "minus": self.spaces[r][1].rank}
                for r in self.roots
            },
            "idempotents": {str(r): e.to_dict() for r, e in self.idempotents.items()},
        }

    def __str__(self) -> str:
        return f"{self.three_grading} on {self.pair.name}"


# ----- 생성 -----


def _span_positions(pair: JordanPairSpec, sign: int, positions: List[int]) -> Submodule:
    d = pair.dim(sign)
    rows = np.zeros((len(positions), d), dtype=np.int64)
    for r, k in enumerate(positions):
        rows[r, k] = 1
    sub = Submodule.span(rows, pair.modulus, d)
    if pair.carriers is not None:
        sub = sub.intersect(pair.whole(sign))
    return sub


def _cells(pair: JordanPairSpec, sign: int) -> List[Tuple[int, int]]:
    """각 좌표 기저 벡터가 놓인 (행, 열)"""
    model = pair.model
    if model is None:
        raise GradingError(f"{pair.name} has no matrix model")
    k = 0 if sign == PLUS else 1
    _, _, cols, d = model.basis[k].shape
    return [(int(f) // (cols * d), (int(f) // d) % cols) for f in model.readers[k]]


def _matrix_idempotent(pair: JordanPairSpec, cells: Dict[int, List[Tuple[int, int, int]]]) -> IdempotentPair:
    """cells[σ] = (행, 열, 부호) 목록으로 단위원 배치 행렬을 만들어 좌표로 변환"""
    model = pair.model
    assert model is not None
    ring = model.ring
    parts = []
    for sign in (PLUS, MINUS):
        shape = model.basis[0 if sign == PLUS else 1].shape[1:]
        x = np.zeros(shape, dtype=np.int64)
        for r, c, s in cells[sign]:
            x[r, c] = np.array(ring.scalar(s), dtype=np.int64)
        parts.append(tuple(int(v) for v in model.from_dense(sign, x)))
    return IdempotentPair(parts[0], parts[1])


def _grading_a(pair: JordanPairSpec):
    p, q = pair.params["p"], pair.params["q"]
    index = IndexSet.range(p + q)
    tg = make_three_grading(make_root_system("A", index), "A", {"subset": range(1, p + 1)})
    groups: Dict[Root, Tuple[List[int], List[int]]] = {r: ([], []) for r in tg.r1}
    for k, (i, j) in enumerate(_cells(pair, PLUS)):
        groups[Root.from_map({i + 1: 1, p + j + 1: -1})][0].append(k)
    for k, (j, i) in enumerate(_cells(pair, MINUS)):
        groups[Root.from_map({i + 1: 1, p + j + 1: -1})][1].append(k)
    idem = {}
    for i, j in itertools.product(range(p), range(q)):
        root = Root.from_map({i + 1: 1, p + j + 1: -1})
        idem[root] = _matrix_idempotent(pair, {PLUS: [(i, j, 1)], MINUS: [(j, i, 1)]})
    return tg, groups, idem


def _grading_symmetric(pair: JordanPairSpec, kind: str):
    n = pair.params["n"]
    tg = make_three_grading(make_root_system("C" if kind == "C^her" else "D", n), kind)
    groups: Dict[Root, Tuple[List[int], List[int]]] = {r: ([], []) for r in tg.r1}
    for sign in (PLUS, MINUS):
        for k, (i, j) in enumerate(_cells(pair, sign)):
            groups[Root.eps(i + 1) + Root.eps(j + 1)][0 if sign == PLUS else 1].append(k)
    idem = {}
    for i in range(n):
        for j in range(i, n):
            root = Root.eps(i + 1) + Root.eps(j + 1)
            if root not in tg.r1:
                continue
            if kind == "C^her":
                cells = [(i, i, 1)] if i == j else [(i, j, 1), (j, i, 1)]
                idem[root] = _matrix_idempotent(pair, {PLUS: cells, MINUS: cells})
            else:
                idem[root] = _matrix_idempotent(
                    pair, {PLUS: [(i, j, 1), (j, i, -1)], MINUS: [(i, j, -1), (j, i, 1)]}
                )
    return tg, groups, idem


def _grading_quadform(pair: JordanPairSpec, config: KernelConfig):
    """쌍곡 쌍 (h₊ᵢ, h₋ᵢ) 과 그 직교 여공간 M'' 로 B^qf / D^qf grading"""
    hyperbolic = pair.params.get("hyperbolic") or []
    if not hyperbolic:
        raise GradingError(f"{pair.name} has no marked hyperbolic pair")
    n, m = pair.modulus, pair.dim(PLUS)
    gram = pair.params["gram"]
    hvecs = [np.array(v, dtype=np.int64) for h in hyperbolic for v in h]
    if not is_prime(n):
        raise GradingError("Quadratic-form gradings need a prime field")
    complement = Submodule.span(
        linalg.nullspace(np.array([h @ gram for h in hvecs]) % n, n), n, m
    )
    r = len(hyperbolic)
    kind = "B^qf" if not complement.is_zero() else "D^qf"
    index = IndexSet.range(r + 1, start=0)
    tg = make_three_grading(make_root_system(kind[0], index), kind, {"distinguished": 0})
    spaces: Dict[Root, Tuple[Submodule, Submodule]] = {}
    idem: Dict[Root, IdempotentPair] = {}
    for i, (hp, hm) in enumerate(hyperbolic, start=1):
        plus_root = Root.from_map({0: 1, i: 1})
        minus_root = Root.from_map({0: 1, i: -1})
        spaces[plus_root] = (Submodule.span([hp], n, m), Submodule.span([hm], n, m))
        spaces[minus_root] = (Submodule.span([hm], n, m), Submodule.span([hp], n, m))
        idem[plus_root] = IdempotentPair(tuple(hp), tuple(hm))
        idem[minus_root] = IdempotentPair(tuple(hm), tuple(hp))
    if kind == "B^qf":
        root = Root.eps(0)
        spaces[root] = (complement, complement)
        quad = pair.params["quad"]
        for w in complement.elements(config.budget.idempotent_search_cap):
            value = quad(np.array(w, dtype=np.int64))
            if value % n and np.gcd(value, n) == 1:
                scaled = tuple(int(c) for c in (pow(value, -1, n) * np.array(w)) % n)
                idem[root] = IdempotentPair(tuple(w), scaled)
                break
    return tg, spaces, idem


def make_grading(
    pair: JordanPairSpec, kind: Optional[str] = None, config: Optional[KernelConfig] = None
) -> RootGradingSpec:
    """
    예시 grading 생성 (rect↔A^I, hermitian↔C^her, alternating↔D^alt, quadform↔B^qf/D^qf)

    subpair 면 모체 근 공간과 carrier 의 교집합을 쓰고 멱등원은 기록하지 않는다.

    Raises:
        GradingError: 종류 불일치 또는 검증 실패
    """
    config = resolve(config)
    base = pair.params.get("base_kind", pair.kind)
    expected = KIND_FOR_PAIR.get(base, "B^qf/D^qf" if base == "quadform" else None)
    if expected is None:
        raise GradingError(f"No example grading for pair kind {base}")
    if kind is not None and kind not in expected.split("/"):
        raise GradingError(f"Grading kind {kind} does not match pair kind {base}")

    spaces: Dict[Root, Tuple[Submodule, Submodule]]
    if base == "quadform":
        tg, spaces, idem = _grading_quadform(pair, config)
    else:
        if base in ("full", "rect"):
            tg, groups, idem = _grading_a(pair)
        else:
            tg, groups, idem = _grading_symmetric(pair, expected)
        spaces = {
            root: (_span_positions(pair, PLUS, gp), _span_positions(pair, MINUS, gm))
            for root, (gp, gm) in groups.items()
        }
    if pair.carriers is not None:
        idem = {}

    grading = RootGradingSpec(pair, tg, spaces, idem)
    report = verify_grading_suite(grading, config)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise GradingError(f"{grading} fails grading checks: {', '.join(failed)}")
    grading.data["report"] = report
    logger.info("Grading built", grading=str(grading), roots=len(tg.r1))
    return grading


def grading_from_cog(
    pair: JordanPairSpec,
    three_grading: ThreeGradingSpec,
    idempotents: Dict[Root, IdempotentPair],
    reference: Optional[RootGradingSpec] = None,
    config: Optional[KernelConfig] = None,
) -> RootGradingSpec:
    """
    V_β = ∩_{α ∈ Δ} V_{⟨β, α∨⟩}(e_α) 로 grading 복원

    Raises:
        GradingError: pairing 이 {0,1,2} 밖, 0 인 근 공간, 검증 실패, reference 와 불일치
    """
    config = resolve(config)
    if not idempotents:
        raise GradingError("The idempotent family is empty")
    decomps = {}
    for alpha, e in idempotents.items():
        if e.is_zero() or not is_idempotent(pair, e):
            raise GradingError(f"e_{alpha} is not a nonzero idempotent")
        if reference is not None:
            if not (reference.space(alpha, PLUS).contains(e.plus) and reference.space(alpha, MINUS).contains(e.minus)):
                raise GradingError(f"e_{alpha} does not lie in V_{alpha} of the reference grading")
        decomps[alpha] = peirce(pair, e, config)

    spaces: Dict[Root, Tuple[Submodule, Submodule]] = {}
    for beta in three_grading.ordered_r1:
        parts = []
        for sign in (PLUS, MINUS):
            current = pair.whole(sign)
            for alpha, dec in decomps.items():
                value = pairing(beta, alpha)
                if value not in (0, 1, 2):
                    raise GradingError(f"<{beta}, {alpha}^v> = {value} is not a Peirce index")
                current = current.intersect(dec.space(value, sign))
            parts.append(current)
        if parts[0].is_zero() and parts[1].is_zero():
            raise GradingError(f"The intersection for {beta} is zero")
        spaces[beta] = (parts[0], parts[1])

    grading = RootGradingSpec(pair, three_grading, spaces, dict(idempotents))
    report = verify_grading_suite(grading, config)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise GradingError(f"Cog grading of {pair.name} fails: {', '.join(failed)}")
    if reference is not None:
        for beta in three_grading.ordered_r1:
            for sign in (PLUS, MINUS):
                if not grading.space(beta, sign).equals(reference.space(beta, sign)):
                    raise GradingError(f"V_{beta} differs from the reference grading")
    grading.data["report"] = report
    return grading


# ----- 검증 -----


def _gens(sub: Submodule) -> List[np.ndarray]:
    return [np.array(g, dtype=np.int64) for g in sub.generators()]


def _qq_root_allowed(grading: RootGradingSpec, alpha: Root, beta: Root, gamma: Root) -> bool:
    if alpha == beta:
        return True
    ab = grading.relation(alpha, beta)
    if ab == RootRelation.ARROW_IN:
        return beta == gamma
    if beta == gamma or grading.relation(beta, gamma) != RootRelation.ARROW_IN:
        return False
    if grading.relation(gamma, alpha) != RootRelation.ORTHOGONAL:
        return False
    if ab == RootRelation.EDGE:
        return True
    return ab == RootRelation.ARROW_OUT and alpha == 2 * beta - gamma


def verify_grading_suite(grading: RootGradingSpec, config: Optional[KernelConfig] = None) -> SuiteReport:
    """
    직합, (RG1), (RG2), Q 의 근 규칙, Q Q 의 근 규칙을 생성원 트리플에서 전수 검사
    """
    config = resolve(config)
    pair = grading.pair
    n = pair.modulus
    report = SuiteReport(suite="grading", subject=str(grading), witness_limit=config.sampling.witness_limit)
    roots = grading.roots
    r1 = set(roots)
    gens = {(r, s): _gens(grading.space(r, s)) for r in roots for s in (PLUS, MINUS)}

    def inside(root: Root, sign: int, v: np.ndarray) -> bool:
        if root in r1:
            return grading.space(root, sign).contains(v)
        return not (v % n).any()

    for sign in (PLUS, MINUS):
        tag = "+" if sign == PLUS else "-"
        parts = [grading.space(r, sign) for r in roots]
        report.record(f"direct-sum{tag}", linalg.is_direct_sum(parts, pair.whole(sign)))

        for alpha, beta in itertools.product(roots, repeat=2):
            rel = grading.relation(alpha, beta)
            target = 2 * alpha - beta
            for x in gens[(alpha, sign)]:
                for y in gens[(beta, -sign)]:
                    v = pair.q(sign, x, y)
                    witness = {"alpha": alpha, "beta": beta, "x": x, "y": y}
                    report.record(f"RG1-Q{tag}", inside(target, sign, v), witness)
                    allowed = rel in (RootRelation.EQUAL, RootRelation.ARROW_IN)
                    report.record(f"Q-roots{tag}", allowed or not v.any(), witness)
                    if rel == RootRelation.ORTHOGONAL:
                        report.record(f"RG2{tag}", not v.any(), witness)
                        for z in pair.basis(sign):
                            report.record(f"RG2{tag}", not pair.t(sign, x, y, z).any(), witness)

        for alpha, beta, gamma in itertools.product(roots, repeat=3):
            target = alpha - beta + gamma
            for x in gens[(alpha, sign)]:
                for y in gens[(beta, -sign)]:
                    qx = pair.q_matrix(sign, x)
                    for z in gens[(gamma, sign)]:
                        witness = {"alpha": alpha, "beta": beta, "gamma": gamma, "x": x, "y": y, "z": z}
                        report.record(f"RG1-triple{tag}", inside(target, sign, pair.t(sign, x, y, z)), witness)
                        qq = qx @ pair.q(-sign, y, z) % n
                        ok = not qq.any() or _qq_root_allowed(grading, alpha, beta, gamma)
                        report.record(f"QQ-roots{tag}", ok, witness)
    logger.debug("Grading suite finished", grading=str(grading), passed=report.passed)
    return report


def is_fully_idempotent(
    grading: RootGradingSpec, config: Optional[KernelConfig] = None
) -> Tuple[bool, dict]:
    """
    Δ = R₁ 인 멱등원 족의 존재 여부

    기록된 족이 없으면 근 공간마다 (좌표 순서로) 첫 멱등원을 찾고, cog 공식이
    근 공간을 재현하는지 확인한다.

    Returns:
        (여부, certificate)
    """
    config = resolve(config)
    pair = grading.pair
    cap = config.budget.idempotent_search_cap
    family: Dict[Root, IdempotentPair] = {}
    for root in grading.roots:
        recorded = grading.idempotents.get(root)
        if recorded is not None and not recorded.is_zero() and is_idempotent(pair, recorded):
            family[root] = recorded
            continue
        vp, vm = grading.space(root, PLUS), grading.space(root, MINUS)
        if vp.size > cap or vm.size > cap:
            raise BudgetExceeded(f"idempotent search in V_{root}", cap, max(vp.size, vm.size))
        minus_elems = list(vm.elements(cap))
        found = None
        for x in vp.elements(cap):
            if not any(x):
                continue
            for y in minus_elems:
                e = IdempotentPair(tuple(x), tuple(y))
                if is_idempotent(pair, e):
                    found = e
                    break
            if found is not None:
                break
        if found is None:
            logger.info("No idempotent in root space", grading=str(grading), root=str(root))
            return False, {"missing": root.to_dict()}
        family[root] = found

    try:
        grading_from_cog(pair, grading.three_grading, family, reference=grading, config=config)
    except KernelError as e:
        return False, {"idempotents": {str(r): v.to_dict() for r, v in family.items()}, "error": str(e)}
    return True, {"idempotents": {str(r): v.to_dict() for r, v in family.items()}}
