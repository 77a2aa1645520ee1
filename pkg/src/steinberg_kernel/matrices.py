"""
유한 지지 행렬과 기본군

Mat_N(A)_ex 의 원소를 (대각 offset s, 유한 지지 희소 부분 x) 로 표현한다.
offset 은 지지 밖의 대각 값이므로 표현은 유일하고 ι_n 은 희소 데이터 위의 항등사상이 된다.
"""

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from .config import KernelConfig, resolve
from .errors import MatrixError
from .groups import FiniteGroup, closure
from .models import SuiteReport
from .sampling import instances
from .scalars import Coords, RingElement, RingSpec

logger = structlog.get_logger()

Scalar = Union[RingElement, Coords]


def _coords(a: Scalar) -> Coords:
    return a.coords if isinstance(a, RingElement) else tuple(a)


@dataclass(frozen=True)
class IndexSet:
    """순서 있는 유한 레이블 집합 (natural: ℕ 의 앞부분을 뜻함)"""
    labels: Tuple[Hashable, ...]
    natural: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise MatrixError(f"Index labels are not distinct: {self.labels}")

    @classmethod
    def range(cls, n: int, start: int = 1) -> "IndexSet":
        return cls(tuple(range(start, start + n)), natural=start == 1)

    @cached_property
    def _positions(self) -> Dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def position(self, label: Hashable) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise MatrixError(f"Label {label!r} not in index set") from None

    def union(self, other: "IndexSet") -> "IndexSet":
        if set(self.labels) & set(other.labels):
            raise MatrixError("Index sets are not disjoint")
        return IndexSet(self.labels + other.labels)

    def __contains__(self, label: Hashable) -> bool:
        return label in self._positions

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


def split_index(p: int, q: int) -> Tuple[IndexSet, IndexSet, IndexSet]:
    """I = {1..p}, J = {p+1..p+q}, N = I ⊔ J"""
    if p < 1 or q < 1:
        raise MatrixError("Both blocks of the partition must be nonempty")
    left = IndexSet.range(p)
    right = IndexSet.range(q, start=p + 1)
    return left, right, IndexSet(left.labels + right.labels, natural=True)


@dataclass(frozen=True)
class FinMatrix:
    """
    rows × cols 유한 지지 행렬 (+ 정사각일 때 대각 offset)

    entries 는 (행 위치, 열 위치) 순으로 정렬된 ((r, c), 좌표) 튜플. 0 은 저장하지 않는다.
    """
    rows: IndexSet
    cols: IndexSet
    ring: RingSpec = field(compare=False, repr=False)
    entries: Tuple[Tuple[Tuple[Hashable, Hashable], Coords], ...] = ()
    offset: int = 0

    @classmethod
    def build(
        cls,
        rows: IndexSet,
        cols: IndexSet,
        ring: RingSpec,
        data: Dict[Tuple[Hashable, Hashable], Scalar],
        offset: int = 0,
    ) -> "FinMatrix":
        offset %= ring.modulus
        if offset and rows != cols:
            raise MatrixError("Scalar-diagonal offset needs equal row and column index sets")
        cleaned = []
        for (r, c), a in data.items():
            a = _coords(a)
            if r not in rows or c not in cols:
                raise MatrixError(f"Entry ({r!r}, {c!r}) outside the index sets")
            if any(a):
                cleaned.append(((r, c), tuple(int(v) % ring.modulus for v in a)))
        cleaned.sort(key=lambda item: (rows.position(item[0][0]), cols.position(item[0][1])))
        return cls(rows, cols, ring, tuple(cleaned), offset)

    @classmethod
    def identity(cls, index: IndexSet, ring: RingSpec) -> "FinMatrix":
        return cls(index, index, ring, (), 1 % ring.modulus)

    @classmethod
    def zero(cls, rows: IndexSet, cols: IndexSet, ring: RingSpec) -> "FinMatrix":
        return cls(rows, cols, ring, (), 0)

    @classmethod
    def from_dense(cls, rows: IndexSet, cols: IndexSet, ring: RingSpec, array: np.ndarray, offset: int = 0) -> "FinMatrix":
        """(|rows|, |cols|, d) 배열에서 생성. offset 이 있으면 배열에서 offset·1 을 뺀 나머지가 희소 부분"""
        arr = np.array(array, dtype=np.int64) % ring.modulus
        if offset:
            for i in range(len(rows)):
                arr[i, i] = (arr[i, i] - np.array(ring.scalar(offset))) % ring.modulus
        data = {
            (rows.labels[i], cols.labels[j]): tuple(int(v) for v in arr[i, j])
            for i in range(len(rows))
            for j in range(len(cols))
            if arr[i, j].any()
        }
        return cls.build(rows, cols, ring, data, offset)

    # ----- 조회 -----

    @cached_property
    def _map(self) -> Dict[Tuple[Hashable, Hashable], Coords]:
        return dict(self.entries)

    def entry(self, r: Hashable, c: Hashable) -> Coords:
        """(r, c) 성분 (offset 포함)"""
        value = self._map.get((r, c), self.ring.zero())
        if r == c and self.offset:
            value = self.ring.add(value, self.ring.scalar(self.offset))
        return value

    def to_dense(self) -> np.ndarray:
        arr = np.zeros((len(self.rows), len(self.cols), self.ring.dim), dtype=np.int64)
        for (r, c), a in self.entries:
            arr[self.rows.position(r), self.cols.position(c)] = a
        if self.offset:
            for i in range(len(self.rows)):
                arr[i, i] = (arr[i, i] + np.array(self.ring.scalar(self.offset))) % self.ring.modulus
        return arr

    def is_identity(self) -> bool:
        return self.offset == 1 % self.ring.modulus and not self.entries

    def is_zero(self) -> bool:
        return self.offset == 0 and not self.entries

    # ----- 연산 -----

    def _combine(self, other: "FinMatrix", sign: int) -> "FinMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("Shape mismatch in matrix sum")
        data: Dict[Tuple[Hashable, Hashable], Coords] = dict(self.entries)
        ring = self.ring
        for key, a in other.entries:
            b = a if sign > 0 else ring.neg(a)
            data[key] = ring.add(data[key], b) if key in data else b
        return FinMatrix.build(self.rows, self.cols, ring, data, self.offset + sign * other.offset)

    def __add__(self, other: "FinMatrix") -> "FinMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "FinMatrix") -> "FinMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "FinMatrix":
        ring = self.ring
        return FinMatrix.build(
            self.rows, self.cols, ring, {k: ring.neg(a) for k, a in self.entries}, -self.offset
        )

    def __mul__(self, other: "FinMatrix") -> "FinMatrix":
        """(s𝟏 + x)(t𝟏 + y) = st𝟏 + (sy + tx + xy)"""
        if self.cols != other.rows:
            raise MatrixError("Shape mismatch in matrix product")
        ring = self.ring
        s, t = self.offset, other.offset
        data: Dict[Tuple[Hashable, Hashable], Coords] = {}

        def accumulate(key, value):
            data[key] = ring.add(data[key], value) if key in data else value

        by_row: Dict[Hashable, List[Tuple[Hashable, Coords]]] = {}
        for (k, c), b in other.entries:
            by_row.setdefault(k, []).append((c, b))
        for (r, k), a in self.entries:
            for c, b in by_row.get(k, ()):
                accumulate((r, c), ring.mul(a, b))
        if s:
            for key, b in other.entries:
                accumulate(key, ring.smul(s, b))
        if t:
            for key, a in self.entries:
                accumulate(key, ring.smul(t, a))
        return FinMatrix.build(self.rows, other.cols, ring, data, s * t)

    def inverse(self) -> "FinMatrix":
        """
        역행렬

        기본행렬은 바로 계산하고, 그 외에는 유한환 위 가역행렬의 거듭제곱이
        순환한다는 사실로 g^{m-1} 을 구한다.
        """
        if self.rows != self.cols:
            raise MatrixError("Only square matrices are invertible")
        one = 1 % self.ring.modulus
        if self.offset == one and len(self.entries) == 1:
            (r, c), a = self.entries[0]
            if r != c:
                return FinMatrix(self.rows, self.cols, self.ring, (((r, c), self.ring.neg(a)),), one)
        if self.is_identity():
            return self
        seen = set()
        power = self
        previous = FinMatrix.identity(self.rows, self.ring)
        while not power.is_identity():
            if power in seen or power.is_zero():
                raise MatrixError("Matrix is not invertible")
            seen.add(power)
            previous = power
            power = power * self
        return previous

    def to_dict(self) -> dict:
        return {
            "offset": self.offset,
            "entries": [[r, c, list(a)] for (r, c), a in self.entries],
        }

    def __str__(self) -> str:
        body = ", ".join(f"({r},{c}):{list(a)}" for (r, c), a in self.entries)
        return f"FinMatrix[{self.offset}·1 + {{{body}}}]"


def elementary(ring: RingSpec, index: IndexSet, i: Hashable, j: Hashable, a: Scalar) -> FinMatrix:
    """e_ij(a) = 𝟏 + aE_ij"""
    if i == j:
        raise MatrixError("Elementary matrix needs i != j")
    return FinMatrix.build(index, index, ring, {(i, j): _coords(a)}, offset=1)


def matrix_unit(ring: RingSpec, rows: IndexSet, cols: IndexSet, i: Hashable, j: Hashable, a: Scalar) -> FinMatrix:
    """aE_ij (offset 0)"""
    return FinMatrix.build(rows, cols, ring, {(i, j): _coords(a)})


def embed(m: FinMatrix, index: IndexSet) -> FinMatrix:
    """블록 행렬을 N×N 희소 행렬로 (offset 0 블록만)"""
    if m.offset:
        raise MatrixError("Only offset-free blocks can be embedded")
    return FinMatrix.build(index, index, m.ring, dict(m.entries))


def e_block(ring: RingSpec, left: IndexSet, right: IndexSet, sign: str, m: FinMatrix) -> FinMatrix:
    """
    e₊(u) = [[1, u], [0, 1]] (u ∈ Mat_IJ), e₋(v) = [[1, 0], [−v, 1]] (v ∈ Mat_JI)
    """
    if sign == "+":
        expected = (left, right)
    elif sign == "-":
        expected = (right, left)
    else:
        raise MatrixError(f"Unknown sign {sign!r}")
    if (m.rows, m.cols) != expected or m.offset:
        raise MatrixError("Block shape does not match the partition")
    index = left.union(right)
    data = dict(m.entries) if sign == "+" else {k: ring.neg(a) for k, a in m.entries}
    return FinMatrix.build(index, index, ring, data, offset=1)


def commutator(g: FinMatrix, h: FinMatrix) -> FinMatrix:
    """((g, h)) = g h g⁻¹ h⁻¹"""
    if g.rows != h.rows or g.rows != g.cols:
        raise MatrixError("Commutator needs square matrices over the same index set")
    return g * h * g.inverse() * h.inverse()


def all_matrices(ring: RingSpec, rows: IndexSet, cols: IndexSet) -> List[FinMatrix]:
    """Mat_{rows×cols}(A) 전체 (작은 경우 전용)"""
    cells = [(r, c) for r in rows for c in cols]
    ring_elements = list(ring.elements())
    result = []
    for values in itertools.product(ring_elements, repeat=len(cells)):
        result.append(FinMatrix.build(rows, cols, ring, dict(zip(cells, values))))
    return result


def el_group(ring: RingSpec, index: IndexSet, config: Optional[KernelConfig] = None) -> FiniteGroup:
    """EL_N(A): {e_ij(a)} 의 BFS 닫힘"""
    nonzero = [a for a in ring.elements() if any(a)]
    gens = [
        elementary(ring, index, i, j, a)
        for i in index
        for j in index
        if i != j
        for a in nonzero
    ]
    name = f"EL{len(index)}({ring.name})"
    logger.info("Enumerating elementary group", group=name, generators=len(gens))
    return closure(gens, FinMatrix.identity(index, ring), name=name, config=config)


def block_exc2(ring: RingSpec, left: IndexSet, right: IndexSet, u: FinMatrix, v: FinMatrix) -> FinMatrix:
    """[[1 − uv + uvuv, uvu], [vuv, 1 + vu]]"""
    index = left.union(right)
    uv, vu = u * v, v * u
    blocks = [-uv + uv * uv, u * v * u, v * u * v, vu]
    result = FinMatrix.identity(index, ring)
    for block in blocks:
        result = result + embed(block, index)
    return result


def verify_elementary_relations(
    ring: RingSpec,
    index: IndexSet,
    suite: str,
    partition: Optional[Tuple[IndexSet, IndexSet]] = None,
    config: Optional[KernelConfig] = None,
) -> SuiteReport:
    """
    기본행렬 관계 검증

    Args:
        suite: "E" (E1–E4), "EJ" (EJ1–EJ3), "exc2", "generation"
        partition: EJ/exc2/generation 에 필요한 (I, J)
    """
    config = resolve(config)
    report = SuiteReport(
        suite=f"elementary-{suite}",
        subject=f"{ring.name}, |N|={len(index)}",
        witness_limit=config.sampling.witness_limit,
    )
    logger.info("Running elementary suite", suite=suite, ring=ring.name, size=len(index))

    if suite == "E":
        _suite_e(ring, index, report, config)
    elif suite in ("EJ", "exc2", "generation"):
        if partition is None:
            raise MatrixError(f"Suite {suite} needs a partition N = I ∪ J")
        left, right = partition
        if left.union(right).labels != index.labels:
            raise MatrixError("Partition does not cover the index set")
        if suite == "EJ":
            _suite_ej(ring, left, right, report, config)
        elif suite == "exc2":
            _suite_exc2(ring, left, right, report, config)
        else:
            _suite_generation(ring, left, right, report, config)
    else:
        raise MatrixError(f"Unknown elementary suite: {suite}")

    logger.info("Elementary suite finished", suite=suite, failures=report.failures)
    return report


def _suite_e(ring: RingSpec, index: IndexSet, report: SuiteReport, config: KernelConfig) -> None:
    elements = list(ring.elements())
    pairs = [(i, j) for i in index for j in index if i != j]

    def e(i, j, a):
        return elementary(ring, index, i, j, a)

    stream, sampled = instances([pairs, elements, elements], config.sampling)
    for (i, j), a, b in stream:
        ok = e(i, j, a) * e(i, j, b) == e(i, j, ring.add(a, b))
        report.record("E1", ok, {"ij": [i, j], "a": a, "b": b})
    report.check("E1").sampled = sampled

    quads = [(p, q) for p in pairs for q in pairs if p[1] != q[0] and p[0] != q[1]]
    stream, sampled = instances([quads, elements, elements], config.sampling)
    for ((i, j), (k, l)), a, b in stream:
        ok = commutator(e(i, j, a), e(k, l, b)).is_identity()
        report.record("E2", ok, {"ij": [i, j], "kl": [k, l], "a": a, "b": b})
    report.check("E2").sampled = sampled

    triples = [t for t in itertools.permutations(index.labels, 3)]
    stream, sampled = instances([triples, elements, elements], config.sampling)
    for (i, j, l), a, b in stream:
        ok = commutator(e(i, j, a), e(j, l, b)) == e(i, l, ring.mul(a, b))
        report.record("E3", ok, {"ijl": [i, j, l], "a": a, "b": b})
    report.check("E3").sampled = sampled

    stream, sampled = instances([triples, elements, elements], config.sampling)
    for (i, j, k), a, b in stream:
        ok = commutator(e(i, j, a), e(k, i, b)) == e(k, j, ring.neg(ring.mul(b, a)))
        report.record("E4", ok, {"ijk": [i, j, k], "a": a, "b": b})
    report.check("E4").sampled = sampled


def _suite_ej(ring: RingSpec, left: IndexSet, right: IndexSet, report: SuiteReport, config: KernelConfig) -> None:
    plus_all = all_matrices(ring, left, right)
    minus_all = all_matrices(ring, right, left)
    elements = list(ring.elements())
    roots = [(i, j) for i in left for j in right]

    def ep(u):
        return e_block(ring, left, right, "+", u)

    def em(v):
        return e_block(ring, left, right, "-", v)

    for sign, pool, block in (("+", plus_all, ep), ("-", minus_all, em)):
        stream, sampled = instances([pool, pool], config.sampling)
        for u, w in stream:
            ok = block(u) * block(w) == block(u + w)
            report.record("EJ1", ok, {"sign": sign, "u": u, "u'": w})
        report.check("EJ1").sampled = sampled

    for (i, j), (k, l) in itertools.product(roots, repeat=2):
        overlap = int(i == k) + int(j == l)
        for a, b in itertools.product(elements, repeat=2):
            u = matrix_unit(ring, left, right, i, j, a)
            v = matrix_unit(ring, right, left, l, k, b)
            if overlap == 0:
                ok = commutator(ep(u), em(v)).is_identity()
                report.record("EJ2", ok, {"alpha": [i, j], "beta": [k, l], "a": a, "b": b})
            elif overlap == 1:
                for z in plus_all:
                    lhs = commutator(commutator(ep(u), em(v)), ep(z))
                    ok = lhs == ep(-(u * v * z + z * v * u))
                    report.record("EJ3", ok, {"sign": "+", "alpha": [i, j], "beta": [k, l], "z": z})
                # σ = −: u ∈ V_α⁻, v ∈ V_β⁺
                um = matrix_unit(ring, right, left, j, i, a)
                vp = matrix_unit(ring, left, right, k, l, b)
                for z in minus_all:
                    lhs = commutator(commutator(em(um), ep(vp)), em(z))
                    ok = lhs == em(-(um * vp * z + z * vp * um))
                    report.record("EJ3", ok, {"sign": "-", "alpha": [i, j], "beta": [k, l], "z": z})


def _suite_exc2(ring: RingSpec, left: IndexSet, right: IndexSet, report: SuiteReport, config: KernelConfig) -> None:
    plus_all = all_matrices(ring, left, right)
    minus_all = all_matrices(ring, right, left)
    stream, sampled = instances([plus_all, minus_all], config.sampling)
    for u, v in stream:
        lhs = commutator(e_block(ring, left, right, "+", u), e_block(ring, left, right, "-", v))
        ok = lhs == block_exc2(ring, left, right, u, v)
        report.record("exc2", ok, {"u": u, "v": v})
    report.check("exc2").sampled = sampled


def _suite_generation(ring: RingSpec, left: IndexSet, right: IndexSet, report: SuiteReport, config: KernelConfig) -> None:
    index = left.union(right)
    gens = [e_block(ring, left, right, "+", u) for u in all_matrices(ring, left, right) if not u.is_zero()]
    gens += [e_block(ring, left, right, "-", v) for v in all_matrices(ring, right, left) if not v.is_zero()]
    generated = closure(gens, FinMatrix.identity(index, ring), name="<e+, e->", config=config)
    full = el_group(ring, index, config)
    report.record(
        "generation", generated.same_elements(full), {"generated": generated.order, "EL": full.order}
    )
    report.data["order"] = full.order
    report.data["generatedOrder"] = generated.order
