"""
고전형 국소 유한 근계와 3-grading

근은 ε-기저 위의 유한 지지 정수 벡터, 내적은 (ε_i | ε_j) = δ_ij.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from .errors import RootSystemError
from .matrices import IndexSet
from .models import SuiteReport

logger = structlog.get_logger()

FAMILIES = ("A", "B", "C", "D", "BC")
GRADING_KINDS = {"A": "A", "B^qf": "B", "C^her": "C", "D^qf": "D", "D^alt": "D"}


def _label_key(label: Hashable) -> tuple:
    return (0, label, "") if isinstance(label, int) else (1, 0, str(label))


@dataclass(frozen=True)
class Root:
    """ε-기저 위의 유한 지지 정수 벡터 (0 계수는 저장하지 않음)"""
    coords: Tuple[Tuple[Hashable, int], ...] = ()

    @classmethod
    def from_map(cls, data: Dict[Hashable, int]) -> "Root":
        items = [(k, int(v)) for k, v in data.items() if v]
        items.sort(key=lambda kv: _label_key(kv[0]))
        return cls(tuple(items))

    @classmethod
    def eps(cls, label: Hashable, coefficient: int = 1) -> "Root":
        return cls.from_map({label: coefficient})

    @cached_property
    def _map(self) -> Dict[Hashable, int]:
        return dict(self.coords)

    def get(self, label: Hashable) -> int:
        return self._map.get(label, 0)

    @property
    def support(self) -> Tuple[Hashable, ...]:
        return tuple(k for k, _ in self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "Root") -> "Root":
        data = dict(self._map)
        for k, v in other.coords:
            data[k] = data.get(k, 0) + v
        return Root.from_map(data)

    def __neg__(self) -> "Root":
        return Root(tuple((k, -v) for k, v in self.coords))

    def __sub__(self, other: "Root") -> "Root":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "Root":
        return Root.from_map({k: scalar * v for k, v in self.coords})

    def inner(self, other: "Root") -> int:
        return sum(v * other.get(k) for k, v in self.coords)

    def to_dict(self) -> Dict[str, int]:
        return {f"e{k}": v for k, v in self.coords}

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        parts = []
        for k, v in self.coords:
            sign = "-" if v < 0 else "+"
            mag = "" if abs(v) == 1 else str(abs(v))
            parts.append(f"{sign}{mag}e{k}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


def pairing(alpha: Root, beta: Root) -> int:
    """⟨α, β∨⟩ = 2(α|β)/(β|β)"""
    norm = beta.inner(beta)
    if norm == 0:
        raise RootSystemError("Pairing with the zero root")
    num = 2 * alpha.inner(beta)
    if num % norm:
        raise RootSystemError(f"Non-integral pairing <{alpha}, {beta}^v> = {num}/{norm}")
    return num // norm


def reflect(alpha: Root, x: Root) -> Root:
    """s_α(x) = x − ⟨x, α∨⟩α"""
    if alpha.is_zero():
        raise RootSystemError("Reflection in the zero root")
    return x - pairing(x, alpha) * alpha


@dataclass(frozen=True)
class RootSystemSpec:
    """family + index set, 근 목록은 필요할 때 생성"""
    family: str
    index: IndexSet

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise RootSystemError(f"Unknown root system family: {self.family}")
        if len(self.index) < 2:
            raise RootSystemError("Root systems need |I| >= 2")
        if self.family == "D" and len(self.index) < 3:
            raise RootSystemError("Family D needs |I| >= 3")

    @cached_property
    def roots(self) -> FrozenSet[Root]:
        labels = self.index.labels
        result = {Root()}
        for i, j in itertools.permutations(labels, 2):
            result.add(Root.from_map({i: 1, j: -1}))
        if self.family in ("B", "C", "D", "BC"):
            for i, j in itertools.combinations(labels, 2):
                result.add(Root.from_map({i: 1, j: 1}))
                result.add(Root.from_map({i: -1, j: -1}))
        if self.family in ("B", "BC"):
            for i in labels:
                result.update({Root.eps(i), Root.eps(i, -1)})
        if self.family in ("C", "BC"):
            for i in labels:
                result.update({Root.eps(i, 2), Root.eps(i, -2)})
        return frozenset(result)

    def key(self, root: Root) -> tuple:
        """결정적 정렬 키 (레이블 위치 순)"""
        return tuple((self.index.position(k), v) for k, v in root.coords)

    def nonzero_roots(self) -> List[Root]:
        return sorted((r for r in self.roots if not r.is_zero()), key=self.key)

    def __contains__(self, root: Root) -> bool:
        return root in self.roots

    @property
    def expected_rank(self) -> int:
        return len(self.index) - 1 if self.family == "A" else len(self.index)

    def __str__(self) -> str:
        return f"{self.family}_{len(self.index)}"


def make_root_system(family: str, index: Union[IndexSet, int]) -> RootSystemSpec:
    if isinstance(index, int):
        index = IndexSet.range(index)
    return RootSystemSpec(family, index)


class RootRelation(Enum):
    EQUAL = "="
    ORTHOGONAL = "perp"
    EDGE = "edge"
    ARROW_OUT = "->"
    ARROW_IN = "<-"


@dataclass(frozen=True)
class ThreeGradingSpec:
    """R = R₁ ∪ R₀ ∪ R₋₁ 분할"""
    root_system: RootSystemSpec
    kind: str
    r1: FrozenSet[Root]
    params: Tuple = ()

    def part(self, root: Root) -> int:
        if root in self.r1:
            return 1
        if -root in self.r1:
            return -1
        if root in self.root_system:
            return 0
        raise RootSystemError(f"{root} is not a root of {self.root_system}")

    @cached_property
    def ordered_r1(self) -> List[Root]:
        return sorted(self.r1, key=self.root_system.key)

    @cached_property
    def r0(self) -> FrozenSet[Root]:
        return frozenset(r for r in self.root_system.roots if self.part(r) == 0)

    def __str__(self) -> str:
        return f"{self.kind}({self.root_system})"


def make_three_grading(spec: RootSystemSpec, kind: str, params: Optional[dict] = None) -> ThreeGradingSpec:
    """
    3-grading 생성

    Args:
        kind: "A" (params["subset"]), "B^qf"/"D^qf" (params["distinguished"]), "C^her", "D^alt"
    """
    params = params or {}
    family = GRADING_KINDS.get(kind)
    if family is None or family != spec.family:
        raise RootSystemError(f"Grading kind {kind} is incompatible with family {spec.family}")
    labels = spec.index.labels

    if kind == "A":
        subset = tuple(params.get("subset", ()))
        if not subset or len(set(subset)) == len(labels) or any(i not in spec.index for i in subset):
            raise RootSystemError("A-grading needs a nonempty proper subset of the labels")
        rest = [j for j in labels if j not in subset]
        r1 = {Root.from_map({i: 1, j: -1}) for i in subset for j in rest}
        extra: Tuple = (tuple(subset),)
    elif kind in ("B^qf", "D^qf"):
        zero = params.get("distinguished", labels[0])
        if zero not in spec.index:
            raise RootSystemError(f"Distinguished label {zero!r} not in index set")
        others = [i for i in labels if i != zero]
        r1 = {Root.from_map({zero: 1, i: s}) for i in others for s in (1, -1)}
        if kind == "B^qf":
            r1.add(Root.eps(zero))
        extra = (zero,)
    elif kind == "C^her":
        r1 = {Root.from_map({i: 1}) + Root.from_map({j: 1}) for i in labels for j in labels}
        extra = ()
    else:  # D^alt
        r1 = {Root.from_map({i: 1, j: 1}) for i, j in itertools.combinations(labels, 2)}
        extra = ()

    grading = ThreeGradingSpec(spec, kind, frozenset(r1), extra)
    report = verify_root_suite(grading, "grading")
    if not report.passed:
        raise RootSystemError(f"{grading} violates the 3-grading axioms")
    return grading


def classify_pair(grading: ThreeGradingSpec, alpha: Root, beta: Root) -> RootRelation:
    """(3gra1) 의 유일한 관계"""
    for r in (alpha, beta):
        if r not in grading.r1:
            raise RootSystemError(f"{r} is not in R1 of {grading}")
    if alpha == beta:
        return RootRelation.EQUAL
    ab, ba = pairing(alpha, beta), pairing(beta, alpha)
    if ab == 0:
        return RootRelation.ORTHOGONAL
    if (ab, ba) == (1, 1):
        return RootRelation.EDGE
    if (ab, ba) == (2, 1):
        return RootRelation.ARROW_OUT
    if (ab, ba) == (1, 2):
        return RootRelation.ARROW_IN
    raise RootSystemError(f"No relation between {alpha} and {beta} (pairings {ab}, {ba})")


def decompose_R0(grading: ThreeGradingSpec, mu: Root) -> Tuple[Root, Root]:
    """μ = α − β, α ⊢ β (레이블이 작은 쪽 우선)"""
    if mu.is_zero():
        raise RootSystemError("The zero root has no edge decomposition")
    if grading.part(mu) != 0:
        raise RootSystemError(f"{mu} is not in R0")
    spec = grading.root_system
    candidates = []
    for alpha in grading.ordered_r1:
        beta = alpha - mu
        if beta in grading.r1 and classify_pair(grading, alpha, beta) == RootRelation.EDGE:
            labels = sorted({spec.index.position(k) for k in alpha.support + beta.support})
            candidates.append(((labels, spec.key(alpha)), alpha, beta))
    if not candidates:
        raise RootSystemError(f"{mu} has no edge decomposition in {grading}")
    _, alpha, beta = min(candidates, key=lambda c: c[0])
    return alpha, beta


def irreducible_components(spec: RootSystemSpec) -> List[FrozenSet[Root]]:
    """0 이 아닌 근 위에서 (α|β) ≠ 0 을 간선으로 한 연결 성분"""
    remaining = set(spec.nonzero_roots())
    components = []
    while remaining:
        start = min(remaining, key=spec.key)
        component = {start}
        frontier = [start]
        while frontier:
            current = frontier.pop()
            for other in list(remaining - component):
                if current.inner(other) != 0:
                    component.add(other)
                    frontier.append(other)
        remaining -= component
        components.append(frozenset(component))
    return components


def _rank(roots: Sequence[Root], index: IndexSet) -> int:
    if not roots:
        return 0
    data = np.zeros((len(roots), len(index)))
    for r, root in enumerate(roots):
        for k, v in root.coords:
            data[r, index.position(k)] = v
    return int(np.linalg.matrix_rank(data))


def verify_root_suite(target: Union[RootSystemSpec, ThreeGradingSpec], suite: str) -> SuiteReport:
    """
    근계 검증

    Args:
        suite: "axioms" (RootSystemSpec), "grading" / "3gra1" / "3gra2" (ThreeGradingSpec)
    """
    report = SuiteReport(suite=f"roots-{suite}", subject=str(target))
    if suite == "axioms":
        if not isinstance(target, RootSystemSpec):
            raise RootSystemError("Suite axioms needs a root system")
        _suite_axioms(target, report)
    else:
        if not isinstance(target, ThreeGradingSpec):
            raise RootSystemError(f"Suite {suite} needs a 3-grading")
        if suite == "grading":
            _suite_grading(target, report)
        elif suite == "3gra1":
            _suite_3gra1(target, report)
        elif suite == "3gra2":
            _suite_3gra2(target, report)
        else:
            raise RootSystemError(f"Unknown root suite: {suite}")
    return report


def _suite_axioms(spec: RootSystemSpec, report: SuiteReport) -> None:
    roots = spec.roots
    nonzero = spec.nonzero_roots()
    report.record("zero-root", Root() in roots, None)
    report.record(
        "spans", _rank(nonzero, spec.index) == spec.expected_rank, {"expected": spec.expected_rank}
    )
    for alpha in nonzero:
        report.record("self-pairing", pairing(alpha, alpha) == 2, {"alpha": alpha})
        images = set()
        for x in roots:
            try:
                images.add(reflect(alpha, x))
                report.record("integral", True)
            except RootSystemError:
                report.record("integral", False, {"alpha": alpha, "x": x})
        report.record("reflection", images == set(roots), {"alpha": alpha})
    if len(spec.index) <= 4:
        for alpha in nonzero:
            for x, y in itertools.product(nonzero, repeat=2):
                ok = reflect(alpha, x).inner(reflect(alpha, y)) == x.inner(y)
                report.record("invariance", ok, {"alpha": alpha, "x": x, "y": y})
    report.data["nonzeroRoots"] = len(nonzero)
    report.data["components"] = len(irreducible_components(spec))


def _suite_grading(grading: ThreeGradingSpec, report: SuiteReport) -> None:
    roots = grading.root_system.roots
    r1 = grading.r1
    minus = frozenset(-r for r in r1)
    report.record("R-1=-R1", not (r1 & minus) and all(r in roots for r in r1), None)
    for alpha, beta in itertools.product(roots, repeat=2):
        s = alpha + beta
        if s in roots:
            i, j = grading.part(alpha), grading.part(beta)
            ok = abs(i + j) <= 1 and grading.part(s) == i + j
            report.record("additivity", ok, {"alpha": alpha, "beta": beta})
    differences = {a - b for a in r1 for b in r1}
    for mu in grading.r0:
        report.record("R0=R1-R1", mu in differences, {"mu": mu})
    for alpha, beta in itertools.product(r1, repeat=2):
        report.record("sum-free", alpha + beta not in roots, {"alpha": alpha, "beta": beta})


def _suite_3gra1(grading: ThreeGradingSpec, report: SuiteReport) -> None:
    symmetric = {RootRelation.EQUAL, RootRelation.ORTHOGONAL, RootRelation.EDGE}
    flip = {RootRelation.ARROW_OUT: RootRelation.ARROW_IN, RootRelation.ARROW_IN: RootRelation.ARROW_OUT}
    for alpha, beta in itertools.product(grading.ordered_r1, repeat=2):
        try:
            rel = classify_pair(grading, alpha, beta)
            back = classify_pair(grading, beta, alpha)
            ok = back == rel if rel in symmetric else back == flip[rel]
        except RootSystemError:
            ok = False
        report.record("3gra1", ok, {"alpha": alpha, "beta": beta})


def _suite_3gra2(grading: ThreeGradingSpec, report: SuiteReport) -> None:
    roots = grading.root_system.roots
    for alpha, beta in itertools.product(grading.ordered_r1, repeat=2):
        target = 2 * alpha - beta
        in_r = target in roots
        in_r1 = target in grading.r1
        rel = classify_pair(grading, alpha, beta)
        arrow = rel in (RootRelation.ARROW_IN, RootRelation.EQUAL)
        report.record(
            "3gra2", in_r == in_r1 == arrow, {"alpha": alpha, "beta": beta, "2a-b": target}
        )
