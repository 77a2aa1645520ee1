"""
Steinberg 표시

St_n(A) (linear), St(𝕄_IJ(A), ℛ) (rect-EJ), St(V, ℛ) (jordan-St), St(J) (stJ) 의 유한 표시와
b(u,v) 단어, EL_N(A) / PE(V) 로의 평가 준동형, 잉여류 표로 복원한 군에서의 핵 중심성 보고.

단어는 int 튜플: letter k>0 은 생성원 k-1, k<0 은 그 역원. 생성원은 V^σ 의 0 이 아닌
모든 원소 (linear 은 (i, j, a)) 이므로 작은 유한 pair 에서만 쓸 수 있다.
"""

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from . import linalg, zoo
from .config import KernelConfig, resolve
from .coset_table import CosetTable, todd_coxeter
from .errors import BudgetExceeded, GradingError, PresentationError, TKKError
from .grading import RootGradingSpec, make_grading, verify_grading_suite
from .groups import FiniteGroup, Perm, closure, evaluate_word, paired_closure
from .jordan import (
    MINUS,
    PLUS,
    JordanPairSpec,
    bergmann,
    is_division_pair,
    jordan_inverse,
)
from .matrices import FinMatrix, IndexSet, e_block, el_group, elementary, split_index
from .models import SuiteReport
from .pegroup import pe_group
from .rootsys import Root, RootRelation
from .scalars import RingSpec
from .tkk import Automorphism, TKKAlgebra, exp_aut, rect_pair_for, tkk_build, tkk_of_pair_aut

logger = structlog.get_logger()

KINDS = ("linear", "rect-EJ", "jordan-St", "stJ")

Word = Tuple[int, ...]


# ----- 단어 -----


def reduce_word(letters: Iterable[int]) -> Word:
    """자유 약분"""
    out: List[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def concat(*words: Sequence[int]) -> Word:
    return reduce_word(itertools.chain.from_iterable(words))


def commutator_word(g: Sequence[int], h: Sequence[int]) -> Word:
    """((g, h)) = g h g⁻¹ h⁻¹"""
    return concat(g, h, inverse_word(g), inverse_word(h))


# ----- 표시 -----


@dataclass(frozen=True)
class GeneratorSymbol:
    """
    생성원 기호

    Jordan 종류는 x_σ(u) (sign = ±1, coords = u 의 좌표),
    linear 은 x_ij(a) (sign = 0, i, j, coords = a 의 좌표).
    """
    sign: int
    coords: Tuple[int, ...]
    i: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self) -> None:
        if not any(self.coords):
            raise PresentationError("Generator symbols need a nonzero element")

    @property
    def key(self) -> tuple:
        if self.i is None:
            return (self.sign, self.coords)
        return (self.i, self.j, self.coords)

    def to_dict(self) -> dict:
        if self.i is None:
            return {"sign": "+" if self.sign == PLUS else "-", "coords": list(self.coords)}
        return {"i": self.i, "j": self.j, "coords": list(self.coords)}

    def __str__(self) -> str:
        if self.i is None:
            return f"x{'+' if self.sign == PLUS else '-'}({list(self.coords)})"
        return f"x{self.i}{self.j}({list(self.coords)})"


@dataclass
class Presentation:
    """
    유한 표시

    Attributes:
        relators: 자유 약분된, 서로 다른 관계자 단어 (빈 단어 제외)
        provenance: 관계자마다 그것을 처음 만든 관계 도식 이름
        counts: 도식별로 인스턴스화한 관계 수 (빈 단어와 중복 포함)
    """
    kind: str
    name: str
    generators: List[GeneratorSymbol]
    relators: List[Word] = field(default_factory=list)
    provenance: List[str] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)
    pair: Optional[JordanPairSpec] = None
    ring: Optional[RingSpec] = None
    grading: Optional[RootGradingSpec] = None
    n: Optional[int] = None
    _letters: Dict[tuple, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._letters:
            self._letters = {g.key: k + 1 for k, g in enumerate(self.generators)}

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def x(self, sign: int, coords: Sequence[int]) -> Word:
        """x_σ(u) 의 단어 (u = 0 이면 빈 단어)"""
        if self.pair is None:
            raise PresentationError(f"{self.name} has no Jordan generators")
        m = self.pair.modulus
        key = (sign, tuple(int(c) % m for c in np.asarray(coords).reshape(-1)))
        if not any(key[1]):
            return ()
        try:
            return (self._letters[key],)
        except KeyError:
            raise PresentationError(f"x{sign:+d}({list(key[1])}) is not a generator of {self.name}")

    def e(self, i: int, j: int, a: Sequence[int]) -> Word:
        """x_ij(a) 의 단어 (linear 전용)"""
        if self.ring is None or self.kind != "linear":
            raise PresentationError(f"{self.name} has no linear generators")
        coords = tuple(int(c) % self.ring.modulus for c in a)
        if not any(coords):
            return ()
        try:
            return (self._letters[(i, j, coords)],)
        except KeyError:
            raise PresentationError(f"x{i}{j}({list(coords)}) is not a generator of {self.name}")

    def schemas(self) -> Dict[str, int]:
        """도식별 (중복 제거 후) 관계자 수"""
        result: Dict[str, int] = {}
        for schema in self.provenance:
            result[schema] = result.get(schema, 0) + 1
        return result

    def names(self) -> List[str]:
        names, seen = [], {}
        for g in self.generators:
            if g.i is None:
                prefix = "xp" if g.sign == PLUS else "xm"
            else:
                prefix = f"x{g.i}_{g.j}"
            seen[prefix] = seen.get(prefix, 0) + 1
            names.append(f"{prefix}_{seen[prefix]}")
        return names

    def to_text(self) -> str:
        """
        텍스트 내보내기

        첫 줄은 생성원 이름, 그 뒤로 관계자 한 줄에 하나 ("*" 로 잇고 역원은 "^-1").
        """
        names = self.names()

        def letter(x: int) -> str:
            return names[x - 1] if x > 0 else f"{names[-x - 1]}^-1"

        lines = [f"# {self.name}", "generators: " + ", ".join(names)]
        lines.extend("*".join(letter(x) for x in r) for r in self.relators)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "generators": self.ngens,
            "relators": len(self.relators),
            "instances": dict(self.counts),
            "schemas": self.schemas(),
        }

    def __str__(self) -> str:
        return f"Presentation[{self.name}, generators={self.ngens}, relators={len(self.relators)}]"


class _RelatorBuilder:
    """관계 인스턴스를 세고, 약분하고, 중복을 걸러 표시에 넣는다"""

    def __init__(self, presentation: Presentation, config: KernelConfig):
        self.presentation = presentation
        self.limit = config.budget.max_relation_instances
        self.total = 0
        self.seen = set(presentation.relators)

    def add(self, schema: str, lhs: Sequence[int], rhs: Sequence[int] = ()) -> None:
        self.total += 1
        if self.total > self.limit:
            logger.warning(
                "Relation instance budget exhausted", presentation=self.presentation.name, limit=self.limit
            )
            raise BudgetExceeded("relation instances", self.limit, self.total)
        counts = self.presentation.counts
        counts[schema] = counts.get(schema, 0) + 1
        word = concat(lhs, inverse_word(rhs))
        if word and word not in self.seen:
            self.seen.add(word)
            self.presentation.relators.append(word)
            self.presentation.provenance.append(schema)


def _vectors(items: Iterable[Sequence[int]]) -> List[np.ndarray]:
    return [np.array(v, dtype=np.int64) for v in items]


def _space(grading: RootGradingSpec, root: Root, sign: int, cap: int) -> List[np.ndarray]:
    return _vectors(grading.space(root, sign).elements(cap))


def _jordan_skeleton(
    kind: str,
    pair: JordanPairSpec,
    config: KernelConfig,
    grading: Optional[RootGradingSpec] = None,
) -> Presentation:
    cap = config.budget.max_module_elements
    gens = [
        GeneratorSymbol(s, tuple(int(c) for c in u))
        for s in (PLUS, MINUS)
        for u in pair.elements(s, cap)
        if any(u)
    ]
    names = {"rect-EJ": "St-EJ", "jordan-St": "St", "stJ": "St-J"}
    return Presentation(kind, f"{names[kind]}({pair.name})", gens, pair=pair, ring=pair.ring, grading=grading)


def _additive(builder: _RelatorBuilder, presentation: Presentation, schema: str, cap: int) -> None:
    """x_σ(u) x_σ(u') = x_σ(u + u')"""
    pair = presentation.pair
    assert pair is not None
    m = pair.modulus
    for s in (PLUS, MINUS):
        elements = _vectors(pair.elements(s, cap))
        for u in elements:
            for w in elements:
                builder.add(schema, concat(presentation.x(s, u), presentation.x(s, w)), presentation.x(s, (u + w) % m))


def _orthogonal(builder: _RelatorBuilder, presentation: Presentation, schema: str, cap: int) -> None:
    """((x₊(u), x₋(v))) = 1, u ∈ V_α⁺, v ∈ V_β⁻, α ⊥ β"""
    grading = presentation.grading
    assert grading is not None
    for alpha, beta in itertools.permutations(grading.roots, 2):
        if grading.relation(alpha, beta) != RootRelation.ORTHOGONAL:
            continue
        for u in _space(grading, alpha, PLUS, cap):
            for v in _space(grading, beta, MINUS, cap):
                builder.add(schema, commutator_word(presentation.x(PLUS, u), presentation.x(MINUS, v)))


def b_word(presentation: Presentation, alpha: Root, u: Sequence[int], beta: Root, v: Sequence[int]) -> Word:
    """
    b(u, v) 의 정의 단어 (u ∈ V_α⁺, v ∈ V_β⁻, α ≠ β)

    α ⊥ β: 1, α ⊢ β: ((x₋(−v), x₊(u))), α → β: x₋(−Q_v u)·((x₋(−v), x₊(u))),
    α ← β: ((x₋(−v), x₊(u)))·x₊(−Q_u v)

    Raises:
        PresentationError: α = β, grading 이 없음, u/v 가 근 공간 밖
    """
    grading = presentation.grading
    if grading is None or presentation.pair is None:
        raise PresentationError(f"{presentation.name} carries no root grading")
    if alpha == beta:
        raise PresentationError("b(u, v) is only defined for distinct roots")
    pair = grading.pair
    m = pair.modulus
    u = np.asarray(u, dtype=np.int64) % m
    v = np.asarray(v, dtype=np.int64) % m
    if not grading.space(alpha, PLUS).contains(u):
        raise PresentationError(f"{list(u)} is not in V+ of {alpha}")
    if not grading.space(beta, MINUS).contains(v):
        raise PresentationError(f"{list(v)} is not in V- of {beta}")

    relation = grading.relation(alpha, beta)
    if relation == RootRelation.ORTHOGONAL:
        return ()
    core = commutator_word(presentation.x(MINUS, -v % m), presentation.x(PLUS, u))
    if relation == RootRelation.EDGE:
        return core
    if relation == RootRelation.ARROW_OUT:
        return concat(presentation.x(MINUS, -pair.q(MINUS, v, u) % m), core)
    return concat(core, presentation.x(PLUS, -pair.q(PLUS, u, v) % m))


def _bergmann_minus_id(pair: JordanPairSpec, u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(−D(u,v) + Q_u Q_v, −D(v,u) + Q_v Q_u)"""
    m = pair.modulus
    plus = (-pair.d_matrix(PLUS, u, v) + pair.q_matrix(PLUS, u) @ pair.q_matrix(MINUS, v)) % m
    minus = (-pair.d_matrix(MINUS, v, u) + pair.q_matrix(MINUS, v) @ pair.q_matrix(PLUS, u)) % m
    return plus, minus


def _steinberg_relators(
    builder: _RelatorBuilder, presentation: Presentation, include_orthogonal: bool, cap: int
) -> None:
    """
    ((b(u,v), x₊(z))) = x₊(−{u v z} + Q_u Q_v z), ((b(u,v)⁻¹, x₋(y))) = x₋(−{v u y} + Q_v Q_u y)
    """
    grading = presentation.grading
    pair = presentation.pair
    assert grading is not None and pair is not None
    m = pair.modulus
    plus_all = _vectors(pair.elements(PLUS, cap))
    minus_all = _vectors(pair.elements(MINUS, cap))
    for alpha, beta in itertools.permutations(grading.roots, 2):
        if not include_orthogonal and grading.relation(alpha, beta) == RootRelation.ORTHOGONAL:
            continue
        for u in _space(grading, alpha, PLUS, cap):
            for v in _space(grading, beta, MINUS, cap):
                b = b_word(presentation, alpha, u, beta, v)
                b_inv = inverse_word(b)
                mp, mm = _bergmann_minus_id(pair, u, v)
                for z in plus_all:
                    builder.add(
                        "St3+", commutator_word(b, presentation.x(PLUS, z)), presentation.x(PLUS, mp @ z % m)
                    )
                for y in minus_all:
                    builder.add(
                        "St3-", commutator_word(b_inv, presentation.x(MINUS, y)), presentation.x(MINUS, mm @ y % m)
                    )


def _edge_relators(builder: _RelatorBuilder, presentation: Presentation, cap: int) -> None:
    """((((x_σ(u), x_{−σ}(v))), x_σ(z))) = x_σ(−{u v z}), α ⊢ β"""
    grading = presentation.grading
    pair = presentation.pair
    assert grading is not None and pair is not None
    m = pair.modulus
    for sign in (PLUS, MINUS):
        everything = _vectors(pair.elements(sign, cap))
        for alpha, beta in itertools.permutations(grading.roots, 2):
            if grading.relation(alpha, beta) != RootRelation.EDGE:
                continue
            for u in _space(grading, alpha, sign, cap):
                for v in _space(grading, beta, -sign, cap):
                    inner = commutator_word(presentation.x(sign, u), presentation.x(-sign, v))
                    d = pair.d_matrix(sign, u, v)
                    for z in everything:
                        builder.add(
                            "EJ3",
                            commutator_word(inner, presentation.x(sign, z)),
                            presentation.x(sign, -(d @ z) % m),
                        )


def _weyl_relators(builder: _RelatorBuilder, presentation: Presentation, cap: int) -> None:
    """w_b x₋(a) w_b⁻¹ = x₊(U_b a), w_b = x₋(b⁻¹) x₊(b) x₋(b⁻¹)"""
    pair = presentation.pair
    assert pair is not None
    minus_all = _vectors(pair.elements(MINUS, cap))
    for b in _vectors(pair.elements(PLUS, cap)):
        if not b.any():
            continue
        b_inv = jordan_inverse(pair, pair.element(PLUS, b)).vector
        w = concat(presentation.x(MINUS, b_inv), presentation.x(PLUS, b), presentation.x(MINUS, b_inv))
        for a in minus_all:
            builder.add(
                "Weyl", concat(w, presentation.x(MINUS, a), inverse_word(w)), presentation.x(PLUS, pair.q(PLUS, b, a))
            )


def _linear(ring: RingSpec, n: int, config: KernelConfig) -> Presentation:
    if n < 3:
        raise PresentationError("St_n(A) is only constructed for n >= 3")
    if ring.size > config.budget.max_ring_elements:
        raise BudgetExceeded("ring elements", config.budget.max_ring_elements, ring.size)
    elements = list(ring.elements())
    nonzero = [a for a in elements if any(a)]
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens = [GeneratorSymbol(0, tuple(a), i, j) for i, j in cells for a in nonzero]
    presentation = Presentation("linear", f"St{n}({ring.name})", gens, ring=ring, n=n)
    builder = _RelatorBuilder(presentation, config)
    e = presentation.e

    for i, j in cells:
        for a, b in itertools.product(elements, repeat=2):
            builder.add("E1", concat(e(i, j, a), e(i, j, b)), e(i, j, ring.add(a, b)))
    for (i, j), (k, l) in itertools.product(cells, repeat=2):
        if j == k or i == l:
            continue
        for a, b in itertools.product(elements, repeat=2):
            builder.add("E2", commutator_word(e(i, j, a), e(k, l, b)))
    for i, j, l in itertools.permutations(range(1, n + 1), 3):
        for a, b in itertools.product(elements, repeat=2):
            builder.add("E3", commutator_word(e(i, j, a), e(j, l, b)), e(i, l, ring.mul(a, b)))
    return presentation


def _require_verified(grading: RootGradingSpec, config: KernelConfig) -> None:
    report = grading.data.get("report")
    if report is None:
        report = verify_grading_suite(grading, config)
        grading.data["report"] = report
    if not report.passed:
        raise PresentationError(f"{grading} is not a verified root grading")


def make_presentation(
    kind: str,
    ring: Optional[RingSpec] = None,
    n: Optional[int] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
    grading: Optional[RootGradingSpec] = None,
    pair: Optional[JordanPairSpec] = None,
    include_orthogonal_st3: bool = True,
    config: Optional[KernelConfig] = None,
) -> Presentation:
    """
    표시 생성

    Args:
        kind: "linear" (ring, n), "rect-EJ" (ring, p, q), "jordan-St" (grading), "stJ" (pair)
        include_orthogonal_st3: False 면 α ⊥ β 인 (St3) 인스턴스를 생략

    Returns:
        Presentation (도식별 인스턴스 수는 counts)

    Raises:
        PresentationError: 매개변수 누락, n < 3, 검증되지 않은 grading, 나눗셈 pair 가 아님
        BudgetExceeded: 원소/관계 인스턴스 예산 초과
    """
    config = resolve(config)
    cap = config.budget.max_module_elements
    if kind == "linear":
        if ring is None or n is None:
            raise PresentationError("Kind linear needs ring and n")
        presentation = _linear(ring, int(n), config)
    elif kind == "rect-EJ":
        if ring is None or p is None or q is None:
            raise PresentationError("Kind rect-EJ needs ring, p and q")
        rect = rect_pair_for(ring, int(p), int(q))
        try:
            rect_grading = make_grading(rect, config=config)
        except GradingError as e:
            raise PresentationError(str(e)) from e
        presentation = _jordan_skeleton(kind, rect, config, rect_grading)
        builder = _RelatorBuilder(presentation, config)
        _additive(builder, presentation, "EJ1", cap)
        _orthogonal(builder, presentation, "EJ2", cap)
        _edge_relators(builder, presentation, cap)
    elif kind == "jordan-St":
        if grading is None:
            raise PresentationError("Kind jordan-St needs a root grading")
        _require_verified(grading, config)
        presentation = _jordan_skeleton(kind, grading.pair, config, grading)
        builder = _RelatorBuilder(presentation, config)
        _additive(builder, presentation, "St1", cap)
        _orthogonal(builder, presentation, "St2", cap)
        _steinberg_relators(builder, presentation, include_orthogonal_st3, cap)
    elif kind == "stJ":
        if pair is None:
            raise PresentationError("Kind stJ needs a pair")
        if not is_division_pair(pair, config):
            raise PresentationError(f"{pair.name} is not a division pair")
        presentation = _jordan_skeleton(kind, pair, config)
        builder = _RelatorBuilder(presentation, config)
        _additive(builder, presentation, "St1", cap)
        _weyl_relators(builder, presentation, cap)
    else:
        raise PresentationError(f"Unknown presentation kind {kind!r}; known: {', '.join(KINDS)}")

    logger.info(
        "Presentation built",
        presentation=presentation.name,
        generators=presentation.ngens,
        relators=len(presentation.relators),
        instances=presentation.counts,
    )
    return presentation


# ----- 준동형 -----


@dataclass
class Homomorphism:
    """생성원 → 대상군 원소 대응 + 관계자 검증 리포트"""
    presentation: Presentation
    target: FiniteGroup
    images: List[Any]
    report: SuiteReport
    inverses: List[Any] = field(default_factory=list, repr=False)

    @property
    def verified(self) -> bool:
        return self.report.passed

    def image(self, word: Sequence[int]) -> Any:
        return evaluate_word(word, self.images, self.target.identity, self.inverses or None)

    def to_dict(self) -> dict:
        return {"target": self.target.to_dict(), "report": self.report.to_dict()}


Assignment = Union[Sequence[Any], Callable[[GeneratorSymbol], Any]]


def evaluate_hom(
    presentation: Presentation,
    target: FiniteGroup,
    assignment: Assignment,
    config: Optional[KernelConfig] = None,
    surjectivity: bool = True,
) -> Homomorphism:
    """
    관계자 검증 harness

    모든 관계자가 항등원으로 가는지 도식별로 기록하고 (실패 시 단어 witness),
    상(image)의 닫힘으로 전사성을 확인한다.
    """
    config = resolve(config)
    images = [assignment(g) for g in presentation.generators] if callable(assignment) else list(assignment)
    if len(images) != presentation.ngens:
        raise PresentationError(
            f"Assignment covers {len(images)} of {presentation.ngens} generators of {presentation.name}"
        )
    report = SuiteReport(
        suite="homomorphism",
        subject=f"{presentation.name} -> {target.name}",
        witness_limit=config.sampling.witness_limit,
    )
    names = presentation.names()
    for k, g in enumerate(images):
        report.record("in-target", g in target, {"generator": names[k]})
    inverses = [g.inverse() for g in images]
    identity = target.identity
    for k, (word, schema) in enumerate(zip(presentation.relators, presentation.provenance)):
        value = evaluate_word(word, images, identity, inverses)
        report.record(schema, value == identity, {"relator": k, "word": list(word)})
    report.data.update(
        generators=presentation.ngens, relators=len(presentation.relators), targetOrder=target.order
    )
    if surjectivity:
        try:
            image = closure(images, identity, name=f"image in {target.name}", config=config, limit=target.order)
            order = image.order
        except BudgetExceeded as e:
            order = e.reached
        report.record("surjective", order == target.order, {"imageOrder": order, "targetOrder": target.order})
        report.data["imageOrder"] = order
    logger.info("Homomorphism evaluated", subject=report.subject, failures=report.failures)
    return Homomorphism(presentation, target, images, report, inverses)


def el_block(pair: JordanPairSpec, sign: int, coords: Sequence[int]) -> FinMatrix:
    """x₊(u) ↦ e₊(u), x₋(v) ↦ e₋(v) (rect/full pair 의 블록 행렬 모델)"""
    if pair.model is None or pair.kind not in ("full", "rect") or pair.ring is None:
        raise PresentationError(f"{pair.name} has no elementary block model")
    ring = pair.ring
    left, right, _ = split_index(pair.params["p"], pair.params["q"])
    dense = pair.model.to_dense(sign, coords)
    if sign == PLUS:
        return e_block(ring, left, right, "+", FinMatrix.from_dense(left, right, ring, dense))
    return e_block(ring, left, right, "-", FinMatrix.from_dense(right, left, ring, dense))


def el_assignment(presentation: Presentation) -> Tuple[List[FinMatrix], IndexSet]:
    """
    EL_N(A) 로의 대응

    linear: x_ij(a) ↦ e_ij(a). Jordan 종류: x₊(aE_ij) ↦ e_ij(a), x₋(aE_ji) ↦ e_ji(−a).
    """
    if presentation.kind == "linear":
        assert presentation.ring is not None and presentation.n is not None
        index = IndexSet.range(presentation.n)
        images = [elementary(presentation.ring, index, g.i, g.j, g.coords) for g in presentation.generators]
        return images, index
    pair = presentation.pair
    if pair is None or pair.kind not in ("full", "rect"):
        raise PresentationError(f"{presentation.name} has no map to an elementary group")
    _, _, index = split_index(pair.params["p"], pair.params["q"])
    return [el_block(pair, g.sign, g.coords) for g in presentation.generators], index


def pe_assignment(presentation: Presentation, algebra: TKKAlgebra) -> List[Automorphism]:
    """x_σ(u) ↦ exp_σ(u)"""
    pair = presentation.pair
    if pair is None or algebra.pair is not pair:
        raise PresentationError(f"{presentation.name} does not live on the pair of this TKK algebra")
    return [exp_aut(algebra, g.sign, pair.element(g.sign, g.coords)) for g in presentation.generators]


def evaluate_el(presentation: Presentation, config: Optional[KernelConfig] = None) -> Homomorphism:
    """℘ / Φ: 표시 → EL_N(A)"""
    config = resolve(config)
    images, index = el_assignment(presentation)
    ring = presentation.ring if presentation.kind == "linear" else presentation.pair.ring  # type: ignore[union-attr]
    assert ring is not None
    target = el_group(ring, index, config)
    return evaluate_hom(presentation, target, images, config)


def evaluate_pe(
    presentation: Presentation,
    algebra: Optional[TKKAlgebra] = None,
    config: Optional[KernelConfig] = None,
) -> Homomorphism:
    """π: 표시 → PE(V)"""
    config = resolve(config)
    if presentation.pair is None:
        raise PresentationError(f"{presentation.name} has no Jordan pair")
    algebra = algebra or tkk_build(presentation.pair, config)
    target = pe_group(algebra, config)
    return evaluate_hom(presentation, target, pe_assignment(presentation, algebra), config)


# ----- 보고 -----


def _cell_coords(pair: JordanPairSpec, sign: int, row: int, col: int, a: Sequence[int]) -> np.ndarray:
    """N 레이블 (row, col) 칸에 a 를 둔 V^σ 원소의 좌표"""
    assert pair.model is not None
    p = pair.params["p"]
    shape = pair.model.basis[0 if sign == PLUS else 1].shape[1:]
    x = np.zeros(shape, dtype=np.int64)
    if sign == PLUS:
        x[row - 1, col - p - 1] = a
    else:
        x[row - p - 1, col - 1] = a
    return pair.model.from_dense(sign, x)


def verify_phi_triangle(
    ring: RingSpec, p: int, q: int, config: Optional[KernelConfig] = None
) -> SuiteReport:
    """
    rect-EJ 생성원 대응과 생성원 소거 규칙이 ℘_N 과 맞는지

    generators: x₊(u) ↦ Π e_ij(u_ij), x₋(v) ↦ Π e_ji(−v_ji)
    eliminate-I: k, l ∈ I, j ∈ J 에서 x_kl(a) = ((x_kj(a), x_jl(1)))
    eliminate-J: k, l ∈ J, i ∈ I 에서 x_kl(a) = ((x_il(−a), x_ki(1)))
    """
    config = resolve(config)
    pair = rect_pair_for(ring, p, q)
    presentation = _jordan_skeleton("rect-EJ", pair, config)
    report = SuiteReport(
        suite="phi-triangle", subject=f"{ring.name},{p},{q}", witness_limit=config.sampling.witness_limit
    )
    images, index = el_assignment(presentation)
    identity = FinMatrix.identity(index, ring)

    def ev(word: Word) -> FinMatrix:
        return evaluate_word(word, images, identity)

    left, right, _ = split_index(p, q)
    one = ring.one()
    for g in presentation.generators:
        dense = pair.model.to_dense(g.sign, g.coords)  # type: ignore[union-attr]
        expected = identity
        rows, cols = (left, right) if g.sign == PLUS else (right, left)
        for r, c in itertools.product(range(len(rows)), range(len(cols))):
            a = tuple(int(t) for t in dense[r, c])
            if g.sign == MINUS:
                a = ring.neg(a)
            expected = expected * elementary(ring, index, rows.labels[r], cols.labels[c], a)
        report.record("generators", ev(presentation.x(g.sign, g.coords)) == expected, g.to_dict())

    minus_one = ring.neg(one)
    for a in ring.elements():
        neg_a = ring.neg(a)
        for k, l in itertools.permutations(left.labels, 2):
            for j in right.labels:
                word = commutator_word(
                    presentation.x(PLUS, _cell_coords(pair, PLUS, k, j, a)),
                    presentation.x(MINUS, _cell_coords(pair, MINUS, j, l, minus_one)),
                )
                report.record(
                    "eliminate-I", ev(word) == elementary(ring, index, k, l, a), {"k": k, "l": l, "j": j, "a": list(a)}
                )
        for k, l in itertools.permutations(right.labels, 2):
            for i in left.labels:
                word = commutator_word(
                    presentation.x(PLUS, _cell_coords(pair, PLUS, i, l, neg_a)),
                    presentation.x(MINUS, _cell_coords(pair, MINUS, k, i, minus_one)),
                )
                report.record(
                    "eliminate-J", ev(word) == elementary(ring, index, k, l, a), {"k": k, "l": l, "i": i, "a": list(a)}
                )
    report.data["rootsR0"] = p * (p - 1) + q * (q - 1)
    logger.info("Phi triangle verified", subject=report.subject, failures=report.failures)
    return report


def verify_b_words(
    presentation: Presentation,
    hom: Homomorphism,
    algebra: Optional[TKKAlgebra] = None,
    config: Optional[KernelConfig] = None,
) -> SuiteReport:
    """
    b(u,v) 계약

    factorization: x₊(u)x₋(v) = x₋(v + Q_v u)·b(u,v)·x₊(u + Q_u v) (대상군에서)
    bergmann: algebra 가 있고 B(u,v), B(v,u) 가역이면 b(u,v) ↦ tkk(B(u,v), B(v,u)⁻¹)
    """
    config = resolve(config)
    grading, pair = presentation.grading, presentation.pair
    if grading is None or pair is None:
        raise PresentationError(f"{presentation.name} carries no root grading")
    cap = config.budget.max_module_elements
    m = pair.modulus
    report = SuiteReport(
        suite="b-words", subject=f"{presentation.name} -> {hom.target.name}", witness_limit=config.sampling.witness_limit
    )
    for alpha, beta in itertools.permutations(grading.roots, 2):
        for u in _space(grading, alpha, PLUS, cap):
            for v in _space(grading, beta, MINUS, cap):
                word = b_word(presentation, alpha, u, beta, v)
                witness = {"alpha": str(alpha), "beta": str(beta), "u": u.tolist(), "v": v.tolist()}
                lhs = hom.image(concat(presentation.x(PLUS, u), presentation.x(MINUS, v)))
                rhs = hom.image(
                    concat(
                        presentation.x(MINUS, (v + pair.q(MINUS, v, u)) % m),
                        word,
                        presentation.x(PLUS, (u + pair.q(PLUS, u, v)) % m),
                    )
                )
                report.record("factorization", lhs == rhs, witness)
                if algebra is None:
                    continue
                ops = bergmann(pair, pair.element(PLUS, u), pair.element(MINUS, v))
                if not ops.invertible:
                    continue
                try:
                    expected = tkk_of_pair_aut(algebra, ops.plus, linalg.inverse(ops.minus, m))
                except TKKError as e:
                    report.record("bergmann", False, {**witness, "error": str(e)})
                    continue
                report.record("bergmann", hom.image(word) == expected, witness)
    logger.info("b-word contract checked", subject=report.subject, failures=report.failures)
    return report


def kernel_centrality_report(
    presentation: Presentation,
    hom: Homomorphism,
    table: CosetTable,
    config: Optional[KernelConfig] = None,
) -> SuiteReport:
    """
    잉여류 표로 복원한 유한군에서 Ker(hom) 계산 후 중심성 확인

    Raises:
        PresentationError: 닫히지 않은 표이거나 생성원 수가 다를 때
    """
    config = resolve(config)
    if not table.complete:
        raise PresentationError(f"Coset table of {presentation.name} is not closed")
    if table.ngens != presentation.ngens:
        raise PresentationError("Coset table and presentation disagree on the generators")
    perms = table.permutations()
    identity = Perm.identity(table.cosets)
    target_identity = hom.target.identity
    graph, conflicts = paired_closure(
        list(zip(perms, hom.images)), (identity, target_identity), config, name=presentation.name
    )
    report = SuiteReport(
        suite="kernel", subject=f"{presentation.name} -> {hom.target.name}", witness_limit=config.sampling.witness_limit
    )
    report.record("well-defined", not conflicts, {"conflicts": len(conflicts)})
    kernel = [g for g, fg in graph.items() if fg == target_identity]
    for k in kernel:
        offenders = [t for t, s in enumerate(perms) if k * s != s * k]
        report.record("central", not offenders, {"kernelElement": list(k.images[:8]), "generators": offenders[:8]})
    image_order = len(set(graph.values()))
    report.record("surjective", image_order == hom.target.order, {"imageOrder": image_order})
    central = report.check("central").passed
    report.data.update(
        groupOrder=len(graph),
        cosets=table.cosets,
        kernelOrder=len(kernel),
        targetOrder=hom.target.order,
        imageOrder=image_order,
        verdict="central" if central else "not central",
    )
    logger.info(
        "Kernel centrality computed",
        subject=report.subject,
        groupOrder=len(graph),
        kernelOrder=len(kernel),
        central=central,
    )
    return report


def compare_st2_redundancy(
    grading: RootGradingSpec, config: Optional[KernelConfig] = None, enumerate_cosets: bool = True
) -> SuiteReport:
    """
    α ⊥ β 인 (St3) 인스턴스는 (St2) 로부터 나온다

    orthogonal-st3-trivial: α ⊥ β 이면 b(u,v) = 1 이고 우변 계수 −D(u,v) + Q_u Q_v 가 0
    same-relators: 전체 표시와 축소 표시의 관계자 집합이 같음
    same-order: 두 잉여류 열거가 같은 군 위수를 냄 (둘 다 닫힐 때)
    """
    config = resolve(config)
    pair = grading.pair
    cap = config.budget.max_module_elements
    report = SuiteReport(suite="st2-redundancy", subject=str(grading), witness_limit=config.sampling.witness_limit)
    for alpha, beta in itertools.permutations(grading.roots, 2):
        if grading.relation(alpha, beta) != RootRelation.ORTHOGONAL:
            continue
        for u in _space(grading, alpha, PLUS, cap):
            for v in _space(grading, beta, MINUS, cap):
                mp, mm = _bergmann_minus_id(pair, u, v)
                report.record(
                    "orthogonal-st3-trivial",
                    not mp.any() and not mm.any(),
                    {"alpha": str(alpha), "beta": str(beta), "u": u.tolist(), "v": v.tolist()},
                )
    full = make_presentation("jordan-St", grading=grading, config=config)
    reduced = make_presentation("jordan-St", grading=grading, include_orthogonal_st3=False, config=config)
    report.record(
        "same-relators",
        set(full.relators) == set(reduced.relators),
        {"full": len(full.relators), "reduced": len(reduced.relators)},
    )
    report.data.update(fullInstances=full.counts, reducedInstances=reduced.counts)
    if enumerate_cosets:
        tables = [todd_coxeter(full, config=config), todd_coxeter(reduced, config=config)]
        report.data["tables"] = [t.to_dict() for t in tables]
        if all(t.complete for t in tables):
            report.record("same-order", tables[0].cosets == tables[1].cosets, report.data["tables"])
    return report


# ----- 탐색용 사례 -----


@dataclass
class ExploratoryCase:
    """중심적으로 닫혀 있지 않은 작은 예외 사례 하나"""
    name: str
    label: str
    build: Callable[[KernelConfig], Presentation] = field(repr=False)

    def to_dict(self) -> dict:
        return {"name": self.name, "label": self.label}


def _rect_case(ring_name: str, p: int, q: int) -> Callable[[KernelConfig], Presentation]:
    return lambda config: make_presentation("rect-EJ", ring=zoo.ring(ring_name), p=p, q=q, config=config)


def _graded_case(kind: str, ring_name: str, n: int) -> Callable[[KernelConfig], Presentation]:
    def build(config: KernelConfig) -> Presentation:
        pair = zoo.pair(kind, zoo.ring(ring_name), n=n)
        return make_presentation("jordan-St", grading=zoo.grading(pair, config), config=config)

    return build


def _division_case(ring_name: str) -> Callable[[KernelConfig], Presentation]:
    return lambda config: make_presentation("stJ", pair=zoo.pair("full", zoo.ring(ring_name)), config=config)


def exploratory_cases() -> List[ExploratoryCase]:
    """표의 예외 사례들 (핵 위수는 보고만 하고 단정하지 않는다)"""
    return [
        ExploratoryCase("A2^1 over F2", "rect-EJ(F2,1,1)", _rect_case("F2", 1, 1)),
        ExploratoryCase("A2^1 over F4", "rect-EJ(F4,1,1)", _rect_case("F4", 1, 1)),
        ExploratoryCase("A3^1 over F2", "rect-EJ(F2,1,2)", _rect_case("F2", 1, 2)),
        ExploratoryCase("A3^2 over F2", "rect-EJ(F2,2,1)", _rect_case("F2", 2, 1)),
        ExploratoryCase("C2^her over F2", "jordan-St(hermitian(F2,2))", _graded_case("hermitian", "F2", 2)),
        ExploratoryCase("B3^qf over F3", "jordan-St(quadform(F3,2))", _graded_case("quadform", "F3", 3)),
        ExploratoryCase("C3^her over F2", "jordan-St(hermitian(F2,3))", _graded_case("hermitian", "F2", 3)),
        ExploratoryCase("D4^alt over F2", "jordan-St(alternating(F2,4))", _graded_case("alternating", "F2", 4)),
        ExploratoryCase("St(J) over F4", "stJ(full(F4))", _division_case("F4")),
        ExploratoryCase("St(J) over F9", "stJ(full(F9))", _division_case("F9")),
    ]


def run_exploratory(case: ExploratoryCase, config: Optional[KernelConfig] = None) -> dict:
    """
    사례 하나를 잉여류 열거 → PE 로의 준동형 → 핵 보고 순으로 실행

    예산을 넘으면 status="exhausted" 로 돌려준다.
    """
    config = resolve(config)
    result: Dict[str, Any] = case.to_dict()
    logger.info("Exploratory case started", case=case.name)
    try:
        presentation = case.build(config)
        result["presentation"] = presentation.to_dict()
        table = todd_coxeter(presentation, config=config)
        result["cosetTable"] = table.to_dict()
        if not table.complete:
            result["status"] = "exhausted"
            return result
        hom = evaluate_pe(presentation, config=config)
        kernel = kernel_centrality_report(presentation, hom, table, config)
        result.update(
            status="complete",
            order=table.cosets,
            peOrder=hom.target.order,
            relatorsHold=hom.verified,
            kernelOrder=kernel.data["kernelOrder"],
            verdict=kernel.data["verdict"],
        )
    except BudgetExceeded as e:
        logger.warning("Exploratory case exhausted its budget", case=case.name, budget=e.what, limit=e.limit)
        result.update(status="exhausted", budget=e.what, limit=e.limit, reached=e.reached)
    return result
