"""
소환 Z/n 위의 선형대수

n 이 소수이면 numpy int64 가우스 소거 (mod p), 아니면 예산 이하에서 원소 전수 열거.
"""

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, KernelError
from .scalars import is_prime

Vector = Tuple[int, ...]

DEFAULT_MODULE_CAP = 1 << 16


def as_matrix(rows: Iterable[Sequence[int]], ncols: int) -> np.ndarray:
    data = [list(r) for r in rows]
    if not data:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(data, dtype=np.int64).reshape(len(data), ncols)


def rref(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    기약 행사다리꼴 (mod p)

    Returns:
        (0 이 아닌 행들, pivot 열 목록)
    """
    m = np.array(matrix, dtype=np.int64) % p
    if m.ndim != 2:
        raise KernelError("rref expects a 2-D matrix")
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        column = m[:, c].copy()
        column[r] = 0
        m = (m - np.outer(column, m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(matrix: np.ndarray, p: int) -> int:
    return len(rref(matrix, p)[1])


def nullspace(matrix: np.ndarray, p: int) -> np.ndarray:
    """{x : M x = 0} 의 기저 (행 벡터)"""
    m = np.asarray(matrix, dtype=np.int64)
    cols = m.shape[1]
    reduced, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, c in enumerate(pivots):
            basis[t, c] = (-reduced[i, f]) % p
    return basis


def solve(matrix: np.ndarray, rhs: np.ndarray, p: int) -> Optional[np.ndarray]:
    """M x = b 의 해 하나 (없으면 None)"""
    m = np.asarray(matrix, dtype=np.int64)
    b = np.asarray(rhs, dtype=np.int64).reshape(-1, 1)
    cols = m.shape[1]
    reduced, pivots = rref(np.hstack([m, b]), p)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = reduced[i, cols]
    return x


def inverse(matrix: np.ndarray, p: int) -> Optional[np.ndarray]:
    m = np.asarray(matrix, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        return None
    reduced, pivots = rref(np.hstack([m, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        return None
    return reduced[:n, n:] % p


def det_mod(matrix: np.ndarray, n: int) -> int:
    """Bareiss 분수 없는 소거로 정수 행렬식을 구한 뒤 mod n"""
    a = [[int(v) for v in row] for row in np.asarray(matrix)]
    size = len(a)
    if size == 0:
        return 1 % n
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return (sign * a[-1][-1]) % n


def is_invertible(matrix: np.ndarray, n: int) -> bool:
    m = np.asarray(matrix)
    if m.shape[0] != m.shape[1]:
        return False
    if is_prime(n):
        return rank(m, n) == m.shape[0]
    d = det_mod(m, n)
    return np.gcd(d, n) == 1


@dataclass(frozen=True, eq=False)
class Submodule:
    """
    (Z/n)^dim 의 부분가군

    소수 modulus 에서는 basis 가 RREF 행, 그 외에는 생성원 + 원소 집합.
    """
    modulus: int
    dim: int
    basis: np.ndarray
    pivots: Tuple[int, ...] = ()
    members: Optional[frozenset] = field(default=None, repr=False)

    @property
    def is_field(self) -> bool:
        return self.members is None

    # ----- 생성 -----

    @classmethod
    def span(
        cls,
        vectors: Iterable[Sequence[int]],
        modulus: int,
        dim: int,
        cap: int = DEFAULT_MODULE_CAP,
    ) -> "Submodule":
        gens = as_matrix(vectors, dim) % modulus
        if is_prime(modulus):
            reduced, pivots = rref(gens, modulus)
            return cls(modulus, dim, reduced, tuple(pivots))
        members = _closure([tuple(int(v) for v in row) for row in gens], modulus, dim, cap)
        return cls._from_members(members, gens, modulus, dim, cap)

    @classmethod
    def whole(cls, modulus: int, dim: int, cap: int = DEFAULT_MODULE_CAP) -> "Submodule":
        return cls.span(np.eye(dim, dtype=np.int64), modulus, dim, cap)

    @classmethod
    def zero(cls, modulus: int, dim: int) -> "Submodule":
        return cls.span([], modulus, dim)

    @classmethod
    def _from_members(
        cls, members: frozenset, gens: np.ndarray, modulus: int, dim: int, cap: int
    ) -> "Submodule":
        kept: List[Vector] = []
        reached = frozenset([(0,) * dim])
        for row in list(map(tuple, gens.tolist())) + sorted(members):
            if row in reached:
                continue
            kept.append(tuple(int(v) for v in row))
            reached = _closure(kept, modulus, dim, cap)
            if len(reached) == len(members):
                break
        return cls(modulus, dim, as_matrix(kept, dim), (), members)

    @classmethod
    def from_members(
        cls, members: Iterable[Sequence[int]], modulus: int, dim: int, cap: int = DEFAULT_MODULE_CAP
    ) -> "Submodule":
        """부분가군임이 알려진 원소 집합에서 생성"""
        elems = [tuple(int(v) % modulus for v in m) for m in members]
        if is_prime(modulus):
            return cls.span(elems, modulus, dim, cap)
        return cls._from_members(frozenset(elems) | {(0,) * dim}, as_matrix([], dim), modulus, dim, cap)

    # ----- 질의 -----

    @property
    def rank(self) -> int:
        """체 위에서는 차원, 환 위에서는 최소 생성원 수"""
        return int(self.basis.shape[0])

    @property
    def size(self) -> int:
        if self.members is not None:
            return len(self.members)
        return self.modulus ** self.rank

    def is_zero(self) -> bool:
        return self.size == 1

    def generators(self) -> List[Vector]:
        return [tuple(int(v) for v in row) for row in self.basis]

    def contains(self, vector: Sequence[int]) -> bool:
        v = tuple(int(x) % self.modulus for x in vector)
        if self.members is not None:
            return v in self.members
        arr = np.array(v, dtype=np.int64)
        for row, c in zip(self.basis, self.pivots):
            if arr[c]:
                arr = (arr - arr[c] * row) % self.modulus
        return not arr.any()

    def elements(self, cap: int = DEFAULT_MODULE_CAP) -> Iterator[Vector]:
        """원소 열거 (0 이 먼저)"""
        if self.members is not None:
            yield from sorted(self.members)
            return
        if self.size > cap:
            raise BudgetExceeded("module elements", cap, self.size)
        for coeffs in itertools.product(range(self.modulus), repeat=self.rank):
            if self.rank == 0:
                yield (0,) * self.dim
                continue
            vec = np.array(coeffs, dtype=np.int64) @ self.basis % self.modulus
            yield tuple(int(x) for x in vec)

    def coordinates(self, vector: Sequence[int]) -> Optional[np.ndarray]:
        """체 위에서 basis 에 대한 좌표 (원소가 아니면 None)"""
        if self.members is not None:
            raise KernelError("Coordinates need field scalars")
        if not self.contains(vector):
            return None
        arr = np.array(vector, dtype=np.int64) % self.modulus
        return np.array([arr[c] for c in self.pivots], dtype=np.int64)

    # ----- 연산 -----

    def __add__(self, other: "Submodule") -> "Submodule":
        self._same_ambient(other)
        return Submodule.span(self.generators() + other.generators(), self.modulus, self.dim)

    def intersect(self, other: "Submodule") -> "Submodule":
        self._same_ambient(other)
        if self.members is None:
            # V ∩ W = (V^⊥ + W^⊥)^⊥
            perp = np.vstack([nullspace(self._rows(), self.modulus), nullspace(other._rows(), self.modulus)])
            return Submodule.span(nullspace(perp, self.modulus), self.modulus, self.dim)
        common = self.members & frozenset(other.elements())
        return Submodule.from_members(common, self.modulus, self.dim)

    def restrict(self, predicate) -> "Submodule":
        """predicate 를 만족하는 원소들 (부분가군이 되는 선형 조건 전용)"""
        return Submodule.from_members(
            [v for v in self.elements() if predicate(v)], self.modulus, self.dim
        )

    def equals(self, other: "Submodule") -> bool:
        return self.size == other.size and all(other.contains(v) for v in self.generators())

    def _rows(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros((1, self.dim), dtype=np.int64)
        return self.basis

    def _same_ambient(self, other: "Submodule") -> None:
        if (self.modulus, self.dim) != (other.modulus, other.dim):
            raise KernelError("Submodules live in different ambient modules")

    def to_dict(self) -> dict:
        return {"size": self.size, "generators": [list(g) for g in self.generators()]}


def _closure(gens: List[Vector], modulus: int, dim: int, cap: int) -> frozenset:
    """생성원들의 덧셈 닫힘 (Z/n-span)"""
    zero = (0,) * dim
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % modulus for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > cap:
                        raise BudgetExceeded("module elements", cap, len(seen))
        frontier = nxt
    return frozenset(seen)


def kernel(
    matrix: np.ndarray,
    modulus: int,
    within: Optional[Submodule] = None,
    cap: int = DEFAULT_MODULE_CAP,
) -> Submodule:
    """
    선형사상 M 의 핵 (열벡터 규약, 정의역 좌표 = M 의 열)

    Args:
        within: 정의역을 이 부분가군으로 제한
    """
    m = np.asarray(matrix, dtype=np.int64) % modulus
    dim = m.shape[1]
    if is_prime(modulus):
        ker = Submodule.span(nullspace(m, modulus), modulus, dim)
        return ker if within is None else ker.intersect(within)
    domain = within if within is not None else Submodule.whole(modulus, dim, cap)
    return domain.restrict(lambda v: not ((m @ np.array(v, dtype=np.int64)) % modulus).any())


def is_direct_sum(parts: Sequence[Submodule], whole: Submodule) -> bool:
    """parts 의 합이 whole 이고 크기의 곱이 |whole| 이면 직합"""
    if not parts:
        return whole.is_zero()
    total = parts[0]
    product = parts[0].size
    for part in parts[1:]:
        total = total + part
        product *= part.size
    return product == whole.size and total.equals(whole)


class OrderedBasis:
    """
    첫 등장 순서를 지키는 기저 (소체 F_p 위)

    add 는 기존 행들과 독립일 때만 벡터를 받아들인다. coordinates 는
    pivot 열 부분행렬의 역행렬로 계산한다.
    """

    def __init__(self, modulus: int, length: int):
        if not is_prime(modulus):
            raise KernelError(f"Ordered bases need a prime modulus, got {modulus}")
        self.modulus = modulus
        self.length = length
        self.rows: List[np.ndarray] = []
        self._echelon = np.zeros((0, length), dtype=np.int64)
        self._solver: Optional[Tuple[List[int], np.ndarray]] = None

    def __len__(self) -> int:
        return len(self.rows)

    def add(self, vector: Sequence[int]) -> bool:
        v = np.asarray(vector, dtype=np.int64).reshape(-1) % self.modulus
        stacked = np.vstack([self._echelon, v[None, :]])
        reduced, pivots = rref(stacked, self.modulus)
        if len(pivots) == len(self.rows):
            return False
        self._echelon = reduced
        self.rows.append(v)
        self._solver = None
        return True

    def extend(self, vectors: Iterable[Sequence[int]]) -> None:
        for v in vectors:
            self.add(v)

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.length), dtype=np.int64)
        return np.array(self.rows, dtype=np.int64)

    def coordinates(self, vector: Sequence[int]) -> Optional[np.ndarray]:
        """c @ rows = vector 인 c (span 밖이면 None)"""
        v = np.asarray(vector, dtype=np.int64).reshape(-1) % self.modulus
        if not self.rows:
            return np.zeros(0, dtype=np.int64) if not v.any() else None
        if self._solver is None:
            b = self.matrix()
            pivots = rref(b, self.modulus)[1]
            self._solver = (pivots, inverse(b[:, pivots], self.modulus))
        pivots, inv = self._solver
        c = (v[pivots] @ inv) % self.modulus
        if ((c @ self.matrix() - v) % self.modulus).any():
            return None
        return c

    def submodule(self) -> Submodule:
        return Submodule.span(self.rows, self.modulus, self.length)
