"""
계수환 모듈

소체 F_p, 작은 유한체 F_{p^k}, Z/n, 구조상수 대수, Mat_m(A) 를
소환(prime ring) Z/n 위의 좌표 벡터로 표현한다. 모든 연산은 정확한 정수 연산.
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .config import KernelConfig, resolve
from .errors import BudgetExceeded, RingError
from .models import SuiteReport

logger = structlog.get_logger()

Coords = Tuple[int, ...]

# 내장 기약다항식 (계수: 낮은 차수부터, monic)
BUILTIN_POLYNOMIALS: Dict[Tuple[int, int], List[int]] = {
    (2, 2): [1, 1, 1],  # x^2 + x + 1
    (3, 2): [1, 0, 1],  # x^2 + 1
    (2, 3): [1, 1, 0, 1],  # x^3 + x + 1
    (5, 2): [2, 0, 1],  # x^2 + 2
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, eq=False)
class RingSpec:
    """
    유한 단위 결합 대수 A (소환 Z/n 위의 자유 가군)

    table[i, j, k] 는 e_i e_j 의 e_k 계수, involution 은 좌표에 왼쪽에서 곱하는 행렬.
    """
    name: str
    kind: str
    modulus: int
    labels: Tuple[str, ...]
    table: np.ndarray
    unit: Coords
    involution: Optional[np.ndarray] = None
    is_field: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        d = len(self.labels)
        if self.table.shape != (d, d, d) or len(self.unit) != d:
            raise RingError(f"Structure data of {self.name} does not match basis size {d}")
        terms = [
            (i, j, k, int(c))
            for (i, j, k), c in np.ndenumerate(self.table % self.modulus)
            if c
        ]
        self._cache["terms"] = terms

    # ----- 기본 정보 -----

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        return self.modulus ** self.dim

    @property
    def is_commutative(self) -> bool:
        if "commutative" not in self._cache:
            self._cache["commutative"] = all(
                self.mul(self.basis(i), self.basis(j)) == self.mul(self.basis(j), self.basis(i))
                for i in range(self.dim)
                for j in range(self.dim)
            )
        return self._cache["commutative"]

    def zero(self) -> Coords:
        return (0,) * self.dim

    def one(self) -> Coords:
        return self.unit

    def basis(self, i: int) -> Coords:
        return tuple(1 if t == i else 0 for t in range(self.dim))

    def scalar(self, s: int) -> Coords:
        """소환 원소 s·1_A"""
        return tuple((s * c) % self.modulus for c in self.unit)

    def elements(self) -> Iterator[Coords]:
        """모든 원소 (좌표 사전식 순서, 0 이 먼저)"""
        return itertools.product(range(self.modulus), repeat=self.dim)

    def element(self, coords: Sequence[int]) -> "RingElement":
        return RingElement(tuple(int(c) % self.modulus for c in coords), self)

    # ----- 좌표 연산 -----

    def add(self, a: Coords, b: Coords) -> Coords:
        n = self.modulus
        return tuple((x + y) % n for x, y in zip(a, b))

    def sub(self, a: Coords, b: Coords) -> Coords:
        n = self.modulus
        return tuple((x - y) % n for x, y in zip(a, b))

    def neg(self, a: Coords) -> Coords:
        n = self.modulus
        return tuple((-x) % n for x in a)

    def smul(self, s: int, a: Coords) -> Coords:
        n = self.modulus
        return tuple((s * x) % n for x in a)

    def mul(self, a: Coords, b: Coords) -> Coords:
        n = self.modulus
        if self.dim == 1:
            return ((a[0] * b[0] * int(self.table[0, 0, 0])) % n,)
        out = [0] * self.dim
        for i, j, k, c in self._cache["terms"]:
            if a[i] and b[j]:
                out[k] += a[i] * b[j] * c
        return tuple(v % n for v in out)

    def conj(self, a: Coords) -> Coords:
        """involution a ↦ a^J"""
        if self.involution is None:
            raise RingError(f"{self.name} has no involution")
        vec = (self.involution @ np.array(a, dtype=np.int64)) % self.modulus
        return tuple(int(v) for v in vec)

    def is_zero(self, a: Coords) -> bool:
        return not any(a)

    def matmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        A 위 행렬 곱

        Args:
            x: (r, s, d) 배열
            y: (s, t, d) 배열

        Returns:
            (r, t, d) 배열 mod n
        """
        return np.einsum("isa,sjb,abc->ijc", x, y, self.table) % self.modulus

    # ----- 가역원 -----

    def inverse(self, a: Coords) -> Coords:
        """양쪽 역원 (없으면 RingError)"""
        inverses = self._cache.get("inverse")
        if inverses is None:
            enumerate_units(self)
            inverses = self._cache["inverse"]
        if a not in inverses:
            raise RingError(f"{list(a)} is not a unit of {self.name}")
        return inverses[a]

    def is_unit(self, a: Coords) -> bool:
        try:
            self.inverse(a)
            return True
        except RingError:
            return False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "modulus": self.modulus,
            "labels": list(self.labels),
            "size": self.size,
            "field": self.is_field,
            "commutative": self.is_commutative,
            "involution": self.involution is not None,
        }

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class RingElement:
    """RingSpec 위의 원소 (좌표 + 환 참조)"""
    coords: Coords
    ring: RingSpec = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.coords) != self.ring.dim:
            raise RingError(
                f"Coordinate length {len(self.coords)} does not match basis size {self.ring.dim}"
            )

    def _check(self, other: "RingElement") -> None:
        if other.ring is not self.ring:
            raise RingError("Elements of different rings")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring.add(self.coords, other.coords), self.ring)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring.sub(self.coords, other.coords), self.ring)

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring.neg(self.coords), self.ring)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring.mul(self.coords, other.coords), self.ring)

    def conj(self) -> "RingElement":
        return RingElement(self.ring.conj(self.coords), self.ring)

    def inverse(self) -> "RingElement":
        return RingElement(self.ring.inverse(self.coords), self.ring)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.coords)

    def to_dict(self) -> list:
        return list(self.coords)

    def __str__(self) -> str:
        if self.ring.dim == 1:
            return str(self.coords[0])
        return "(" + ",".join(str(c) for c in self.coords) + ")"


# ----- 다항식 (유한체 구성용) -----


def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divides(d: List[int], f: List[int], p: int) -> bool:
    """monic d 가 f 를 나누는지 (F_p 위)"""
    r = [c % p for c in f]
    _poly_trim(r)
    while len(r) >= len(d):
        shift = len(r) - len(d)
        lead = r[-1]
        for i, c in enumerate(d):
            r[shift + i] = (r[shift + i] - lead * c) % p
        _poly_trim(r)
    return not r


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """차수 ≤ deg/2 인 monic 약수가 없으면 기약"""
    f = [c % p for c in poly]
    deg = len(f) - 1
    if deg < 1 or f[-1] != 1:
        return False
    for k in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if _poly_divides(list(low) + [1], f, p):
                return False
    return True


def _field_table(p: int, poly: Sequence[int]) -> np.ndarray:
    k = len(poly) - 1
    # x^m 을 기저 1, x, ..., x^{k-1} 로 환원
    powers = []
    current = [1] + [0] * (k - 1)
    for _ in range(2 * k - 1):
        powers.append(current[:])
        carry = current[-1]
        current = [0] + current[:-1]
        for i in range(k):
            current[i] = (current[i] - carry * poly[i]) % p
    table = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            table[i, j, :] = powers[i + j]
    return table


def _power_coords(ring: RingSpec, a: Coords, e: int) -> Coords:
    result = ring.one()
    for _ in range(e):
        result = ring.mul(result, a)
    return result


# ----- 생성자 -----


def make_ring(kind: str, validate: bool = True, **params) -> RingSpec:
    """
    계수환 생성

    Args:
        kind: "F" (p, k, poly, frobenius), "Z" (n), "structure" (p, labels, table, unit,
            involution), "Mat" (base, m)
        validate: 결합법칙/단위원/involution 검증 후 실패 시 RingError

    Returns:
        RingSpec
    """
    if kind == "F":
        spec = _make_field(**params)
    elif kind == "Z":
        n = int(params["n"])
        if n < 2:
            raise RingError(f"Z/n needs n >= 2, got {n}")
        spec = RingSpec(
            name=f"Z{n}",
            kind="modular",
            modulus=n,
            labels=("1",),
            table=np.ones((1, 1, 1), dtype=np.int64),
            unit=(1,),
            involution=np.eye(1, dtype=np.int64),
            is_field=is_prime(n),
        )
    elif kind == "structure":
        spec = _make_structure(**params)
    elif kind == "Mat":
        spec = _make_matrix_ring(params["base"], int(params["m"]))
    else:
        raise RingError(f"Unsupported ring kind: {kind}")

    if validate:
        report = verify_ring_axioms(spec)
        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            raise RingError(f"{spec.name} fails ring axioms: {', '.join(failed)}")
    return spec


def _make_field(p: int, k: int = 1, poly: Optional[Sequence[int]] = None, frobenius: bool = False) -> RingSpec:
    p, k = int(p), int(k)
    if not is_prime(p):
        raise RingError(f"Characteristic {p} is not prime")
    if k == 1:
        return RingSpec(
            name=f"F{p}",
            kind="prime-field",
            modulus=p,
            labels=("1",),
            table=np.ones((1, 1, 1), dtype=np.int64),
            unit=(1,),
            involution=np.eye(1, dtype=np.int64),
            is_field=True,
        )
    if poly is None:
        if (p, k) not in BUILTIN_POLYNOMIALS:
            raise RingError(f"No built-in irreducible polynomial for F_{p}^{k}; supply poly")
        poly = BUILTIN_POLYNOMIALS[(p, k)]
    if len(poly) != k + 1 or not is_irreducible(poly, p):
        raise RingError(f"Polynomial {list(poly)} is not irreducible of degree {k} over F_{p}")

    table = _field_table(p, poly)
    labels = tuple("1" if i == 0 else f"x^{i}" for i in range(k))
    spec = RingSpec(
        name=f"F{p ** k}",
        kind="finite-field",
        modulus=p,
        labels=labels,
        table=table,
        unit=(1,) + (0,) * (k - 1),
        involution=np.eye(k, dtype=np.int64),
        is_field=True,
    )
    if frobenius:
        if k != 2:
            raise RingError("Frobenius involution needs degree 2")
        columns = [_power_coords(spec, spec.basis(i), p) for i in range(k)]
        conj = np.array(columns, dtype=np.int64).T
        spec = RingSpec(
            name=f"F{p ** k}~",
            kind="finite-field",
            modulus=p,
            labels=labels,
            table=table,
            unit=spec.unit,
            involution=conj,
            is_field=True,
        )
    return spec


def _make_structure(
    p: int,
    labels: Sequence[str],
    table: Sequence[Sequence],
    unit: Sequence[int],
    involution: Optional[Sequence[Sequence[int]]] = None,
    name: Optional[str] = None,
) -> RingSpec:
    """구조상수 입력: table 은 (i, j, e_i e_j 의 좌표) 트리플 목록"""
    d = len(labels)
    n = int(p)
    data = np.zeros((d, d, d), dtype=np.int64)
    for i, j, coords in table:
        if len(coords) != d:
            raise RingError(f"Product e_{i}e_{j} has {len(coords)} coordinates, expected {d}")
        data[int(i), int(j), :] = [int(c) % n for c in coords]
    conj = None
    if involution is not None:
        conj = np.array(involution, dtype=np.int64) % n
        if conj.shape != (d, d):
            raise RingError("Involution matrix has wrong shape")
    return RingSpec(
        name=name or f"A{d}/Z{n}",
        kind="structure-constant",
        modulus=n,
        labels=tuple(labels),
        table=data,
        unit=tuple(int(c) % n for c in unit),
        involution=conj,
        is_field=False,
    )


def _make_matrix_ring(base: RingSpec, m: int) -> RingSpec:
    """Mat_m(A): 기저 E_ij ⊗ b_t, involution 은 x ↦ (x_ji^J) (base 에 involution 이 있을 때)"""
    if m < 1:
        raise RingError("Matrix size must be positive")
    db = base.dim
    d = m * m * db

    def index(i: int, j: int, t: int) -> int:
        return (i * m + j) * db + t

    table = np.zeros((d, d, d), dtype=np.int64)
    for i, j, s in itertools.product(range(m), range(m), range(db)):
        for l, t in itertools.product(range(m), range(db)):
            # (E_ij b_s)(E_jl b_t) = E_il (b_s b_t)
            prod = base.table[s, t, :]
            for u in range(db):
                table[index(i, j, s), index(j, l, t), index(i, l, u)] = prod[u]

    unit = [0] * d
    for i in range(m):
        for t in range(db):
            unit[index(i, i, t)] = base.unit[t]

    conj = None
    if base.involution is not None:
        conj = np.zeros((d, d), dtype=np.int64)
        for i, j, t in itertools.product(range(m), range(m), range(db)):
            # E_ij b_t ↦ E_ji b_t^J
            conj[[index(j, i, u) for u in range(db)], index(i, j, t)] = base.involution[:, t]

    labels = tuple(
        f"E{i + 1}{j + 1}" + ("" if db == 1 else f"*{base.labels[t]}")
        for i, j, t in itertools.product(range(m), range(m), range(db))
    )
    return RingSpec(
        name=f"Mat{m}({base.name})",
        kind="matrix-over",
        modulus=base.modulus,
        labels=labels,
        table=table % base.modulus,
        unit=tuple(unit),
        involution=conj,
        is_field=False,
    )


def load_ring_json(path: str) -> RingSpec:
    """
    구조상수 JSON 문서에서 환 로드

    {"p": 2, "labels": ["1", "t"], "table": [[0, 0, [1, 0]], ...], "unit": [1, 0],
     "involution": [[1, 0], [0, 1]]}
    """
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    try:
        return make_ring(
            "structure",
            p=data["p"],
            labels=data["labels"],
            table=data["table"],
            unit=data["unit"],
            involution=data.get("involution"),
            name=data.get("name"),
        )
    except KeyError as e:
        raise RingError(f"Ring document misses key {e}") from e


# ----- 검증 -----


def verify_ring_axioms(spec: RingSpec, config: Optional[KernelConfig] = None) -> SuiteReport:
    """
    결합법칙, 단위원, 분배법칙, involution 반준동형을 기저 위에서 전수 검사

    Returns:
        실패 시 witness (기저 인덱스 트리플) 가 담긴 SuiteReport
    """
    config = resolve(config)
    report = SuiteReport(
        suite="ring", subject=spec.name, witness_limit=config.sampling.witness_limit
    )
    d = spec.dim
    basis = [spec.basis(i) for i in range(d)]

    for i, j, k in itertools.product(range(d), repeat=3):
        left = spec.mul(spec.mul(basis[i], basis[j]), basis[k])
        right = spec.mul(basis[i], spec.mul(basis[j], basis[k]))
        report.record("associativity", left == right, {"triple": [i, j, k]})

    for i in range(d):
        ok = spec.mul(spec.unit, basis[i]) == basis[i] == spec.mul(basis[i], spec.unit)
        report.record("unitality", ok, {"basis": i})

    for i, j, k in itertools.product(range(d), repeat=3):
        s = spec.add(basis[i], basis[j])
        right_ok = spec.mul(s, basis[k]) == spec.add(
            spec.mul(basis[i], basis[k]), spec.mul(basis[j], basis[k])
        )
        left_ok = spec.mul(basis[k], s) == spec.add(
            spec.mul(basis[k], basis[i]), spec.mul(basis[k], basis[j])
        )
        report.record("distributivity", right_ok and left_ok, {"triple": [i, j, k]})

    if spec.involution is not None:
        for i, j in itertools.product(range(d), repeat=2):
            lhs = spec.conj(spec.mul(basis[i], basis[j]))
            rhs = spec.mul(spec.conj(basis[j]), spec.conj(basis[i]))
            report.record("involution", lhs == rhs, {"pair": [i, j]})
        for i in range(d):
            report.record("involution", spec.conj(spec.conj(basis[i])) == basis[i], {"basis": i})
        report.record("involution", spec.conj(spec.unit) == spec.unit, {"unit": list(spec.unit)})

    report.data["commutative"] = report.passed and spec.is_commutative
    report.data["size"] = spec.size
    return report


def enumerate_units(spec: RingSpec, config: Optional[KernelConfig] = None) -> List[RingElement]:
    """
    가역원 전수 열거

    Returns:
        A× (좌표 순서). 역원은 링 캐시에 저장된다.
    """
    config = resolve(config)
    if spec.size > config.budget.max_ring_elements:
        raise BudgetExceeded("ring elements", config.budget.max_ring_elements, spec.size)

    elements = list(spec.elements())
    one = spec.unit
    inverses: Dict[Coords, Coords] = {}
    for a in elements:
        if a in inverses:
            continue
        for b in elements:
            if spec.mul(a, b) == one and spec.mul(b, a) == one:
                inverses[a] = b
                inverses[b] = a
                break
    spec._cache["inverse"] = inverses
    logger.debug("Units enumerated", ring=spec.name, units=len(inverses))
    return [RingElement(a, spec) for a in elements if a in inverses]
