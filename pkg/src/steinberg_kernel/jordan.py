"""
Jordan pair 모듈

V^σ 는 소환 Z/n 위의 좌표 가군. 이차사상 Q_σ 는 기저 위 계수 텐서로 저장하고
모델 (행렬 곱 / 이차형식) closure 는 계약 검사용으로만 보관한다.

    Q(x)y   = Σ_i x_i² Q(b_i)y + Σ_{i<j} x_i x_j {b_i y b_j}
    {x y z} = Σ x_i y_k z_j {b_i b'_k b_j}
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from . import linalg
from .config import KernelConfig, resolve
from .errors import BudgetExceeded, JordanError
from .linalg import Submodule
from .models import SuiteReport
from .sampling import instances
from .scalars import RingSpec, is_prime

logger = structlog.get_logger()

PLUS = 1
MINUS = -1
PAIR_KINDS = ("full", "rect", "hermitian", "alternating", "quadform")

Closure = Callable[[int, np.ndarray, np.ndarray], np.ndarray]


def _i(sign: int) -> int:
    if sign not in (PLUS, MINUS):
        raise JordanError(f"Sign must be +1 or -1, got {sign}")
    return 0 if sign == PLUS else 1


def _vec(coords: Sequence[int]) -> np.ndarray:
    return np.asarray(coords, dtype=np.int64)


@dataclass(frozen=True)
class PairElement:
    """V^σ 의 원소"""
    sign: int
    coords: Tuple[int, ...]

    @property
    def vector(self) -> np.ndarray:
        return _vec(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_dict(self) -> dict:
        return {"sign": "+" if self.sign == PLUS else "-", "coords": list(self.coords)}

    def __str__(self) -> str:
        return ("+" if self.sign == PLUS else "-") + str(list(self.coords))


@dataclass(frozen=True, eq=False)
class MatrixModel:
    """
    행렬 모델: V^σ ⊂ Mat_{r×c}(A)

    basis[σ] 는 (dim, r, c, d) 배열, readers[σ] 는 좌표를 읽어낼 flat 위치.
    """
    ring: RingSpec
    basis: Tuple[np.ndarray, np.ndarray]
    readers: Tuple[np.ndarray, np.ndarray]

    def to_dense(self, sign: int, coords: Sequence[int]) -> np.ndarray:
        b = self.basis[_i(sign)]
        return np.einsum("k,krcd->rcd", _vec(coords), b) % self.ring.modulus

    def from_dense(self, sign: int, array: np.ndarray) -> np.ndarray:
        flat = np.asarray(array, dtype=np.int64).reshape(-1)
        return flat[self.readers[_i(sign)]] % self.ring.modulus

    def product(self, *arrays: np.ndarray) -> np.ndarray:
        result = arrays[0]
        for a in arrays[1:]:
            result = self.ring.matmul(result, a)
        return result

    def quadratic(self, sign: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Q_x y = x y x"""
        xd = self.to_dense(sign, x)
        return self.from_dense(sign, self.product(xd, self.to_dense(-sign, y), xd))

    def special_triple(self, sign: int, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        """{x y z} = xyz + zyx"""
        xd, yd, zd = self.to_dense(sign, x), self.to_dense(-sign, y), self.to_dense(sign, z)
        return self.from_dense(sign, self.product(xd, yd, zd) + self.product(zd, yd, xd))


@dataclass(frozen=True, eq=False)
class JordanPairSpec:
    """
    Jordan pair (V⁺, V⁻)

    qq[σ][i, k, j, :] 는 i<j 이면 {b_i b'_k b_j}, i=j 이면 Q(b_i)b'_k, 그 외 0.
    tfull[σ][i, k, j, :] = {b_i b'_k b_j}.
    carriers 가 있으면 pair 는 좌표 가군 안의 부분 pair (subpair).
    """
    name: str
    kind: str
    modulus: int
    dims: Tuple[int, int]
    labels: Tuple[Tuple[str, ...], Tuple[str, ...]]
    qq: Tuple[np.ndarray, np.ndarray]
    tfull: Tuple[np.ndarray, np.ndarray]
    closure: Optional[Closure] = field(default=None, repr=False)
    ring: Optional[RingSpec] = None
    model: Optional[MatrixModel] = field(default=None, repr=False)
    params: dict = field(default_factory=dict)
    carriers: Optional[Tuple[Submodule, Submodule]] = field(default=None, repr=False)

    # ----- 원소 -----

    def dim(self, sign: int) -> int:
        return self.dims[_i(sign)]

    def zero(self, sign: int) -> PairElement:
        return PairElement(sign, (0,) * self.dim(sign))

    def element(self, sign: int, coords: Sequence[int]) -> PairElement:
        if len(coords) != self.dim(sign):
            raise JordanError(
                f"Coordinate length {len(coords)} does not match dim V^{sign:+d} = {self.dim(sign)}"
            )
        return PairElement(sign, tuple(int(c) % self.modulus for c in coords))

    def whole(self, sign: int) -> Submodule:
        if self.carriers is not None:
            return self.carriers[_i(sign)]
        return Submodule.whole(self.modulus, self.dim(sign))

    def basis(self, sign: int) -> List[np.ndarray]:
        """생성원 (부분 pair 면 carrier 생성원)"""
        if self.carriers is not None:
            return [_vec(g) for g in self.carriers[_i(sign)].generators()]
        return list(np.eye(self.dim(sign), dtype=np.int64))

    def size(self, sign: int) -> int:
        if self.carriers is not None:
            return self.carriers[_i(sign)].size
        return self.modulus ** self.dim(sign)

    def elements(self, sign: int, cap: int) -> Iterator[Tuple[int, ...]]:
        if self.size(sign) > cap:
            raise BudgetExceeded(f"elements of V^{sign:+d}", cap, self.size(sign))
        if self.carriers is not None:
            return self.carriers[_i(sign)].elements(cap)
        return itertools.product(range(self.modulus), repeat=self.dim(sign))

    def random_element(self, sign: int, rng: random.Random) -> Tuple[int, ...]:
        gens = self.basis(sign)
        v = np.zeros(self.dim(sign), dtype=np.int64)
        for g in gens:
            v = v + rng.randrange(self.modulus) * g
        return tuple(int(c) for c in v % self.modulus)

    # ----- 연산 (좌표 벡터) -----

    def q(self, sign: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Q_σ(x)y"""
        x = _vec(x)
        return np.einsum("i,j,ikjm,k->m", x, x, self.qq[_i(sign)], _vec(y)) % self.modulus

    def t(self, sign: int, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        """{x y z}, x, z ∈ V^σ"""
        return (
            np.einsum("i,k,j,ikjm->m", _vec(x), _vec(y), _vec(z), self.tfull[_i(sign)])
            % self.modulus
        )

    def q_matrix(self, sign: int, x: np.ndarray) -> np.ndarray:
        """Q_x : V^{-σ} → V^σ 의 행렬"""
        x = _vec(x)
        return np.einsum("i,j,ikjm->mk", x, x, self.qq[_i(sign)]) % self.modulus

    def d_matrix(self, sign: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """D(x, y) : z ↦ {x y z} 의 행렬 (V^σ 위)"""
        return np.einsum("i,k,ikjm->mj", _vec(x), _vec(y), self.tfull[_i(sign)]) % self.modulus

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "modulus": self.modulus,
            "dimPlus": self.dims[0],
            "dimMinus": self.dims[1],
            "subpair": self.carriers is not None,
        }

    def __str__(self) -> str:
        return self.name


def _check_sign(x: PairElement, expected: int) -> None:
    if x.sign != expected:
        raise JordanError(f"Sign mismatch: expected V^{expected:+d}, got V^{x.sign:+d}")


def q_op(pair: JordanPairSpec, x: PairElement, y: PairElement) -> PairElement:
    """Q_x y ∈ V^σ"""
    _check_sign(y, -x.sign)
    return pair.element(x.sign, tuple(int(c) for c in pair.q(x.sign, x.vector, y.vector)))


def triple(pair: JordanPairSpec, x: PairElement, y: PairElement, z: PairElement) -> PairElement:
    """{x y z} = Q_{x,z} y"""
    _check_sign(y, -x.sign)
    _check_sign(z, x.sign)
    return pair.element(x.sign, tuple(int(c) for c in pair.t(x.sign, x.vector, y.vector, z.vector)))


# ----- 생성 -----


def _tensors(
    modulus: int, dims: Tuple[int, int], closure: Closure
) -> Tuple[Tuple[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]:
    """closure 를 기저에서 평가해 (qq, tfull) 텐서를 만든다"""
    qq, tf = [], []
    for sign in (PLUS, MINUS):
        d, e = dims[_i(sign)], dims[_i(-sign)]
        eye_d = np.eye(d, dtype=np.int64)
        eye_e = np.eye(e, dtype=np.int64)
        diag = np.zeros((d, e, d), dtype=np.int64)
        for i, k in itertools.product(range(d), range(e)):
            diag[i, k] = closure(sign, eye_d[i], eye_e[k])
        t = np.zeros((d, e, d, d), dtype=np.int64)
        q = np.zeros((d, e, d, d), dtype=np.int64)
        for i, k in itertools.product(range(d), range(e)):
            t[i, k, i] = 2 * diag[i, k]
            q[i, k, i] = diag[i, k]
            for j in range(i + 1, d):
                cross = closure(sign, eye_d[i] + eye_d[j], eye_e[k]) - diag[i, k] - diag[j, k]
                t[i, k, j] = t[j, k, i] = cross
                q[i, k, j] = cross
        qq.append(q % modulus)
        tf.append(t % modulus)
    return (qq[0], qq[1]), (tf[0], tf[1])


def _from_closure(
    name: str,
    kind: str,
    modulus: int,
    dims: Tuple[int, int],
    labels: Tuple[Tuple[str, ...], Tuple[str, ...]],
    closure: Closure,
    ring: Optional[RingSpec] = None,
    model: Optional[MatrixModel] = None,
    params: Optional[dict] = None,
) -> JordanPairSpec:
    qq, tfull = _tensors(modulus, dims, closure)
    return JordanPairSpec(
        name=name,
        kind=kind,
        modulus=modulus,
        dims=dims,
        labels=labels,
        qq=qq,
        tfull=tfull,
        closure=closure,
        ring=ring,
        model=model,
        params=params or {},
    )


def _matrix_pair(
    name: str, kind: str, ring: RingSpec, model: MatrixModel, labels, params: dict
) -> JordanPairSpec:
    dims = (model.basis[0].shape[0], model.basis[1].shape[0])
    return _from_closure(
        name, kind, ring.modulus, dims, labels, model.quadratic, ring, model, params
    )


def _rect(ring: RingSpec, p: int, q: int, kind: str) -> JordanPairSpec:
    if p < 1 or q < 1:
        raise JordanError("Rectangular pairs need |I|, |J| >= 1")
    d = ring.dim
    plus = np.eye(p * q * d, dtype=np.int64).reshape(p * q * d, p, q, d)
    minus = np.eye(q * p * d, dtype=np.int64).reshape(q * p * d, q, p, d)
    model = MatrixModel(
        ring, (plus, minus), (np.arange(p * q * d), np.arange(q * p * d))
    )
    suffix = [""] if d == 1 else [f".{lab}" for lab in ring.labels]
    lp = tuple(f"E{i + 1}{j + 1}{s}" for i in range(p) for j in range(q) for s in suffix)
    lm = tuple(f"E{j + 1}{i + 1}{s}" for j in range(q) for i in range(p) for s in suffix)
    name = f"full({ring.name})" if kind == "full" else f"rect({ring.name},{p},{q})"
    return _matrix_pair(name, kind, ring, model, (lp, lm), {"p": p, "q": q})


def _hermitian(ring: RingSpec, n: int) -> JordanPairSpec:
    if ring.involution is None:
        raise JordanError(f"Hermitian pairs need an involution on {ring.name}")
    if n < 2:
        raise JordanError("Hermitian pairs need |I| >= 2")
    if not is_prime(ring.modulus):
        raise JordanError("Hermitian pairs need a coordinate algebra over a prime field")
    d, p = ring.dim, ring.modulus
    fixed = linalg.nullspace((ring.involution - np.eye(d, dtype=np.int64)) % p, p)
    h_rows, h_pivots = linalg.rref(fixed, p) if len(fixed) else (fixed, [])

    mats, readers, labels = [], [], []
    for i in range(n):
        for j in range(i, n):
            if i < j:
                for t in range(d):
                    x = np.zeros((n, n, d), dtype=np.int64)
                    x[i, j, t] = 1
                    x[j, i] = ring.involution[:, t]
                    mats.append(x)
                    readers.append((i * n + j) * d + t)
                    labels.append(f"h{i + 1}{j + 1}.{ring.labels[t]}")
            else:
                for r, c in enumerate(h_pivots):
                    x = np.zeros((n, n, d), dtype=np.int64)
                    x[i, i] = h_rows[r]
                    mats.append(x)
                    readers.append((i * n + i) * d + c)
                    labels.append(f"h{i + 1}{i + 1}.{r}")
    basis = np.array(mats, dtype=np.int64).reshape(len(mats), n, n, d)
    reader = np.array(readers, dtype=np.int64)
    model = MatrixModel(ring, (basis, basis), (reader, reader))
    lab = tuple(labels)
    return _matrix_pair(f"hermitian({ring.name},{n})", "hermitian", ring, model, (lab, lab), {"n": n})


def _alternating(ring: RingSpec, n: int) -> JordanPairSpec:
    if not ring.is_commutative:
        raise JordanError(f"Alternating pairs need a commutative ring, {ring.name} is not")
    if n < 2:
        raise JordanError("Alternating pairs need |I| >= 2")
    d = ring.dim
    mats, readers, labels = [], [], []
    for i, j in itertools.combinations(range(n), 2):
        for t in range(d):
            x = np.zeros((n, n, d), dtype=np.int64)
            x[i, j, t] = 1
            x[j, i, t] = -1
            mats.append(x % ring.modulus)
            readers.append((i * n + j) * d + t)
            labels.append(f"a{i + 1}{j + 1}.{ring.labels[t]}")
    basis = np.array(mats, dtype=np.int64).reshape(len(mats), n, n, d)
    reader = np.array(readers, dtype=np.int64)
    model = MatrixModel(ring, (basis, basis), (reader, reader))
    lab = tuple(labels)
    return _matrix_pair(
        f"alternating({ring.name},{n})", "alternating", ring, model, (lab, lab), {"n": n}
    )


def _quadform(
    modulus: int,
    gram: Sequence[Sequence[int]],
    q_diag: Sequence[int],
    hyperbolic: Sequence[Tuple[Sequence[int], Sequence[int]]] = (),
    name: Optional[str] = None,
) -> JordanPairSpec:
    n = int(modulus)
    g = np.array(gram, dtype=np.int64) % n
    qd = np.array(q_diag, dtype=np.int64) % n
    m = len(qd)
    if g.shape != (m, m) or ((g - g.T) % n).any():
        raise JordanError("Polar form must be a symmetric m x m matrix")
    if ((np.diag(g) - 2 * qd) % n).any():
        raise JordanError("Polar form must satisfy b(x, x) = 2 q(x) on the basis")

    def quad(x: np.ndarray) -> int:
        upper = np.triu(g, 1)
        return int(qd @ (x * x) + x @ upper @ x) % n

    def closure(sign: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (int(x @ g @ y) * x - quad(x) * y) % n

    hyp = []
    for hp, hm in hyperbolic:
        a, b = _vec(hp) % n, _vec(hm) % n
        if quad(a) or quad(b) or int(a @ g @ b) % n != 1:
            raise JordanError(f"({list(a)}, {list(b)}) is not a hyperbolic pair")
        hyp.append((tuple(int(c) for c in a), tuple(int(c) for c in b)))

    labels = tuple(f"m{i + 1}" for i in range(m))
    return _from_closure(
        name or f"quadform(Z{n},{m})",
        "quadform",
        n,
        (m, m),
        (labels, labels),
        closure,
        params={"gram": g, "q": qd, "hyperbolic": hyp, "quad": quad},
    )


def make_pair(
    kind: str, validate: bool = False, config: Optional[KernelConfig] = None, **params
) -> JordanPairSpec:
    """
    Jordan pair 생성

    Args:
        kind: "full" (ring), "rect" (ring, p, q), "hermitian" (ring, n),
            "alternating" (ring, n), "quadform" (modulus, gram, q_diag, hyperbolic)
        validate: True 면 verify_jp_suite 를 돌리고 실패 시 JordanError

    Returns:
        JordanPairSpec
    """
    if kind == "full":
        pair = _rect(params["ring"], 1, 1, "full")
    elif kind == "rect":
        pair = _rect(params["ring"], int(params["p"]), int(params["q"]), "rect")
    elif kind == "hermitian":
        pair = _hermitian(params["ring"], int(params["n"]))
    elif kind == "alternating":
        pair = _alternating(params["ring"], int(params["n"]))
    elif kind == "quadform":
        pair = _quadform(**params)
    else:
        raise JordanError(f"Unsupported pair kind: {kind}")

    if validate:
        report = verify_jp_suite(pair, config)
        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            raise JordanError(f"{pair.name} fails Jordan pair identities: {', '.join(failed)}")
    return pair


def zero_pair(modulus: int, name: str = "zero") -> JordanPairSpec:
    empty = np.zeros((0, 0, 0, 0), dtype=np.int64)
    return JordanPairSpec(name, "quotient", modulus, (0, 0), ((), ()), (empty, empty), (empty, empty))


# ----- 검증 -----


def _domain(pair: JordanPairSpec, sign: int, config: KernelConfig) -> List[Tuple[int, ...]]:
    """전수 가능하면 모든 원소, 아니면 seed 고정 표본"""
    cap = config.budget.max_module_elements
    if pair.size(sign) <= cap:
        return list(pair.elements(sign, cap))
    rng = random.Random(config.sampling.seed + sign)
    return [pair.random_element(sign, rng) for _ in range(config.sampling.samples)]


def _eq(a: np.ndarray, b: np.ndarray, n: int) -> bool:
    return not ((np.asarray(a) - np.asarray(b)) % n).any()


def verify_jp_suite(pair: JordanPairSpec, config: Optional[KernelConfig] = None) -> SuiteReport:
    """
    JP1, JP2, JP3, JP1 의 x-선형화, 이차사상 계약 검사

    도메인 곱이 exhaustive_cap 이하면 전수, 아니면 균등 표본.
    """
    config = resolve(config)
    report = SuiteReport(
        suite="jp", subject=pair.name, witness_limit=config.sampling.witness_limit
    )
    n = pair.modulus
    logger.info("JP suite started", pair=pair.name, dims=list(pair.dims))
    sampled = False

    for s in (PLUS, MINUS):
        tag = "+" if s == PLUS else "-"
        vs, vm = _domain(pair, s, config), _domain(pair, -s, config)

        it, flag = instances([vs, vm, vm], config.sampling)
        sampled |= flag
        for x, y, z in it:
            x, y, z = _vec(x), _vec(y), _vec(z)
            qx_z = pair.q(s, x, z)
            ok1 = _eq(pair.t(s, x, y, qx_z), pair.q(s, x, pair.t(-s, y, x, z)), n)
            report.record(f"JP1{tag}", ok1, {"x": x, "y": y, "z": z})
            qx_y = pair.q(s, x, y)
            ok3 = _eq(pair.q(s, qx_y, z), pair.q(s, x, pair.q(-s, y, qx_z)), n)
            report.record(f"JP3{tag}", ok3, {"x": x, "y": y, "z": z})

        it, flag = instances([vs, vm, vs], config.sampling)
        sampled |= flag
        for x, y, z in it:
            x, y, z = _vec(x), _vec(y), _vec(z)
            lhs = pair.t(s, pair.q(s, x, y), y, z)
            rhs = pair.t(s, x, pair.q(-s, y, x), z)
            report.record(f"JP2{tag}", _eq(lhs, rhs, n), {"x": x, "y": y, "z": z})
            if pair.model is not None:
                ok = _eq(pair.t(s, x, y, z), pair.model.special_triple(s, x, y, z), n)
                report.record(f"special{tag}", ok, {"x": x, "y": y, "z": z})

        it, flag = instances([vs, vm, vs, vm], config.sampling)
        sampled |= flag
        for x, y, z, w in it:
            x, y, z, w = _vec(x), _vec(y), _vec(z), _vec(w)
            lhs = pair.t(s, x, y, pair.t(s, x, w, z)) + pair.t(s, z, y, pair.q(s, x, w))
            rhs = pair.t(s, x, pair.t(-s, y, x, w), z) + pair.q(s, x, pair.t(-s, y, z, w))
            report.record(f"JP1-lin{tag}", _eq(lhs, rhs, n), {"x": x, "y": y, "z": z, "w": w})

        if pair.closure is not None:
            it, flag = instances([vs, vm, range(n)], config.sampling)
            sampled |= flag
            for x, y, c in it:
                x, y = _vec(x), _vec(y)
                ok = _eq(pair.closure(s, x, y), pair.q(s, x, y), n) and _eq(
                    pair.q(s, c * x, y), c * c * pair.q(s, x, y), n
                )
                report.record(f"quadratic{tag}", ok, {"x": x, "y": y, "scalar": c})

    for item in report.checks:
        item.sampled = sampled
    logger.info("JP suite finished", pair=pair.name, passed=report.passed, failures=report.failures)
    return report


# ----- 멱등원과 Peirce 분해 -----


@dataclass(frozen=True)
class IdempotentPair:
    """e = (e₊, e₋), Q(e₊)e₋ = e₊ 이고 Q(e₋)e₊ = e₋"""
    plus: Tuple[int, ...]
    minus: Tuple[int, ...]

    def part(self, sign: int) -> np.ndarray:
        return _vec(self.plus if sign == PLUS else self.minus)

    def is_zero(self) -> bool:
        return not any(self.plus) and not any(self.minus)

    def to_dict(self) -> dict:
        return {"plus": list(self.plus), "minus": list(self.minus)}


def is_idempotent(pair: JordanPairSpec, e: IdempotentPair) -> bool:
    n = pair.modulus
    ep, em = e.part(PLUS), e.part(MINUS)
    return _eq(pair.q(PLUS, ep, em), ep, n) and _eq(pair.q(MINUS, em, ep), em, n)


@dataclass
class PeirceDecomp:
    """V_i^σ(e), i ∈ {2, 1, 0} 와 투영 연산자"""
    idempotent: IdempotentPair
    spaces: Dict[Tuple[int, int], Submodule]
    projections: Dict[Tuple[int, int], np.ndarray]
    report: SuiteReport

    def space(self, i: int, sign: int) -> Submodule:
        return self.spaces[(i, sign)]

    def ranks(self, sign: int) -> Tuple[int, int, int]:
        return tuple(self.spaces[(i, sign)].rank for i in (2, 1, 0))  # type: ignore[return-value]

    def to_dict(self) -> dict:
        return {
            "idempotent": self.idempotent.to_dict(),
            "ranksPlus": list(self.ranks(PLUS)),
            "ranksMinus": list(self.ranks(MINUS)),
            "report": self.report.to_dict(),
        }


def peirce(
    pair: JordanPairSpec, e: IdempotentPair, config: Optional[KernelConfig] = None
) -> PeirceDecomp:
    """
    연산자 방정식으로 정의한 Peirce 분해

    V₂ = {Q(e^σ)Q(e^{-σ})x = x}, V₁ = {{e^σ e^{-σ} x} = x},
    V₀ = {Q(e^{-σ})x = 0 = {e^σ e^{-σ} x}}

    Raises:
        JordanError: e 가 멱등원이 아니거나 직합이 아닐 때
    """
    config = resolve(config)
    if not is_idempotent(pair, e):
        raise JordanError(f"{e.to_dict()} is not an idempotent of {pair.name}")
    n = pair.modulus
    cap = config.budget.max_module_elements
    report = SuiteReport(
        suite="peirce", subject=pair.name, witness_limit=config.sampling.witness_limit
    )
    spaces: Dict[Tuple[int, int], Submodule] = {}
    projections: Dict[Tuple[int, int], np.ndarray] = {}

    for s in (PLUS, MINUS):
        d = pair.dim(s)
        eye = np.eye(d, dtype=np.int64)
        es, et = e.part(s), e.part(-s)
        qq = (pair.q_matrix(s, es) @ pair.q_matrix(-s, et)) % n
        dd = pair.d_matrix(s, es, et)
        within = pair.carriers[_i(s)] if pair.carriers is not None else None
        spaces[(2, s)] = linalg.kernel(qq - eye, n, within, cap)
        spaces[(1, s)] = linalg.kernel(dd - eye, n, within, cap)
        spaces[(0, s)] = linalg.kernel(np.vstack([pair.q_matrix(-s, et), dd]), n, within, cap)
        # E₂ = Q Q, E₁ = D − 2 Q Q, E₀ = B(e, e')
        projections[(2, s)] = qq
        projections[(1, s)] = (dd - 2 * qq) % n
        projections[(0, s)] = (eye - dd + qq) % n

        parts = [spaces[(i, s)] for i in (2, 1, 0)]
        report.record(f"direct-sum{'+' if s > 0 else '-'}", linalg.is_direct_sum(parts, pair.whole(s)))
        total = sum(projections[(i, s)] for i in (2, 1, 0)) % n
        report.record("projections-sum", _eq(total, eye, n), {"sign": s})
        for i, j in itertools.product((2, 1, 0), repeat=2):
            prod = (projections[(i, s)] @ projections[(j, s)]) % n
            expected = projections[(i, s)] if i == j else np.zeros_like(prod)
            report.record("projections-orthogonal", _eq(prod, expected, n), {"i": i, "j": j, "sign": s})

    _peirce_rules(pair, spaces, report)
    if not report.check("direct-sum+").passed or not report.check("direct-sum-").passed:
        raise JordanError(f"Peirce spaces of {pair.name} do not form a direct sum")
    logger.debug("Peirce decomposition", pair=pair.name, ranks=[spaces[(i, PLUS)].rank for i in (2, 1, 0)])
    return PeirceDecomp(e, spaces, projections, report)


def _peirce_rules(pair: JordanPairSpec, spaces: Dict[Tuple[int, int], Submodule], report: SuiteReport) -> None:
    """Q(V_i)V_j ⊆ V_{2i-j}, {V_i V_j V_l} ⊆ V_{i-j+l}, {V₂ V₀ V} = 0 = {V₀ V₂ V}"""
    n = pair.modulus

    def inside(index: int, sign: int, v: np.ndarray) -> bool:
        if index in (0, 1, 2):
            return spaces[(index, sign)].contains(v)
        return not (v % n).any()

    gens = {key: [_vec(g) for g in sub.generators()] for key, sub in spaces.items()}
    for s in (PLUS, MINUS):
        for i, j in itertools.product((2, 1, 0), repeat=2):
            for x in gens[(i, s)]:
                for y in gens[(j, -s)]:
                    report.record("Q-rule", inside(2 * i - j, s, pair.q(s, x, y)), {"i": i, "j": j})
        for i, j, l in itertools.product((2, 1, 0), repeat=3):
            for x in gens[(i, s)]:
                for y in gens[(j, -s)]:
                    for z in gens[(l, s)]:
                        v = pair.t(s, x, y, z)
                        report.record("triple-rule", inside(i - j + l, s, v), {"i": i, "j": j, "l": l})
                        if (i, j) in ((2, 0), (0, 2)):
                            report.record("orthogonality", not v.any(), {"i": i, "j": j})


# ----- Bergmann 연산자 -----


@dataclass
class BergmannPair:
    """(B(u,v), B(v,u)) 와 가역성"""
    plus: np.ndarray
    minus: np.ndarray
    invertible: bool

    def is_identity(self) -> bool:
        return bool(
            (self.plus == np.eye(len(self.plus), dtype=np.int64)).all()
            and (self.minus == np.eye(len(self.minus), dtype=np.int64)).all()
        )


def bergmann(pair: JordanPairSpec, u: PairElement, v: PairElement) -> BergmannPair:
    """B(u,v) = Id − D(u,v) + Q_u Q_v (V⁺), B(v,u) (V⁻)"""
    _check_sign(u, PLUS)
    _check_sign(v, MINUS)
    n = pair.modulus
    a, b = u.vector, v.vector
    plus = (
        np.eye(pair.dim(PLUS), dtype=np.int64)
        - pair.d_matrix(PLUS, a, b)
        + pair.q_matrix(PLUS, a) @ pair.q_matrix(MINUS, b)
    ) % n
    minus = (
        np.eye(pair.dim(MINUS), dtype=np.int64)
        - pair.d_matrix(MINUS, b, a)
        + pair.q_matrix(MINUS, b) @ pair.q_matrix(PLUS, a)
    ) % n
    invertible = linalg.is_invertible(plus, n) and linalg.is_invertible(minus, n)
    return BergmannPair(plus, minus, invertible)


# ----- 부분 pair, 이데알, 몫 -----


def _closed_under(
    pair: JordanPairSpec,
    target: Tuple[Submodule, Submodule],
    first: Tuple[List[np.ndarray], List[np.ndarray]],
    middle: Tuple[List[np.ndarray], List[np.ndarray]],
    last: Tuple[List[np.ndarray], List[np.ndarray]],
    quad: Tuple[List[np.ndarray], List[np.ndarray]],
    quad_arg: Tuple[List[np.ndarray], List[np.ndarray]],
) -> Optional[dict]:
    """{first middle last} 와 Q(quad)quad_arg 가 target 안에 있는지 (첫 위반 witness 반환)"""
    for s in (PLUS, MINUS):
        k = _i(s)
        for x in quad[k]:
            for y in quad_arg[1 - k]:
                if not target[k].contains(pair.q(s, x, y)):
                    return {"product": "Q", "sign": s, "x": x.tolist(), "y": y.tolist()}
        for x in first[k]:
            for y in middle[1 - k]:
                for z in last[k]:
                    if not target[k].contains(pair.t(s, x, y, z)):
                        return {
                            "product": "triple",
                            "sign": s,
                            "x": x.tolist(),
                            "y": y.tolist(),
                            "z": z.tolist(),
                        }
    return None


def _gens(pair: JordanPairSpec, subs: Optional[Tuple[Submodule, Submodule]] = None):
    if subs is None:
        return (pair.basis(PLUS), pair.basis(MINUS))
    return ([_vec(g) for g in subs[0].generators()], [_vec(g) for g in subs[1].generators()])


def subpair(pair: JordanPairSpec, carriers: Tuple[Submodule, Submodule], name: Optional[str] = None) -> JordanPairSpec:
    """
    Q 와 삼중곱에 닫힌 부분가군 쌍으로 제한한 subpair

    Raises:
        JordanError: carrier 모양이 틀렸거나 닫혀 있지 않을 때 (witness 포함)
    """
    if (
        not isinstance(carriers, (tuple, list))
        or len(carriers) != 2
        or not all(isinstance(sub, Submodule) for sub in carriers)
    ):
        raise JordanError("Carriers must be a pair (V+ submodule, V- submodule)")
    for sub, s in zip(carriers, (PLUS, MINUS)):
        if sub.modulus != pair.modulus or sub.dim != pair.dim(s):
            raise JordanError(
                f"Carrier for V^{s:+d} lives in (Z/{sub.modulus})^{sub.dim}, expected "
                f"(Z/{pair.modulus})^{pair.dim(s)}"
            )
    c = _gens(pair, carriers)
    witness = _closed_under(pair, carriers, c, c, c, c, c)
    if witness is not None:
        raise JordanError(f"Carriers are not a subpair of {pair.name}: {witness}")
    return JordanPairSpec(
        name=name or f"sub({pair.name})",
        kind="subpair",
        modulus=pair.modulus,
        dims=pair.dims,
        labels=pair.labels,
        qq=pair.qq,
        tfull=pair.tfull,
        closure=pair.closure,
        ring=pair.ring,
        model=pair.model,
        params=dict(pair.params, base_kind=pair.params.get("base_kind", pair.kind)),
        carriers=(carriers[0], carriers[1]),
    )


def is_ideal(pair: JordanPairSpec, ideal: Tuple[Submodule, Submodule]) -> Tuple[bool, Optional[dict]]:
    """
    Q(I)V ⊆ I, Q(V)I ⊆ I, {I V V} ⊆ I, {V I V} ⊆ I

    Returns:
        (이데알 여부, 첫 위반 witness)
    """
    v = _gens(pair)
    i = _gens(pair, ideal)
    for args in (
        (i, v, v, i, v),  # {I V V}, Q(I)V
        (v, i, v, v, i),  # {V I V}, Q(V)I
    ):
        witness = _closed_under(pair, ideal, *args)
        if witness is not None:
            return False, witness
    return True, None


def _free_reducer(sub: Submodule, dim: int) -> Tuple[List[int], Callable[[np.ndarray], np.ndarray]]:
    """체 위 몫 V/I 의 좌표: RREF pivot 이 아닌 열"""
    pivots = list(sub.pivots)
    free = [c for c in range(dim) if c not in pivots]

    def reduce(v: np.ndarray) -> np.ndarray:
        w = np.array(v, dtype=np.int64) % sub.modulus
        for row, c in zip(sub.basis, pivots):
            if w[c]:
                w = (w - w[c] * row) % sub.modulus
        return w[free]

    return free, reduce


def quotient_pair(pair: JordanPairSpec, ideal: Tuple[Submodule, Submodule]) -> JordanPairSpec:
    """
    몫 pair V/I

    소체 위의 임의 이데알, 또는 Z/n 위의 m·V (m | n, 몫은 Z/m 위의 pair) 를 지원한다.

    Raises:
        JordanError: 이데알이 아니거나 지원하지 않는 모양일 때
    """
    if pair.carriers is not None:
        raise JordanError("Quotients of subpairs are not supported")
    ok, witness = is_ideal(pair, ideal)
    if not ok:
        raise JordanError(f"Not an ideal of {pair.name}: {witness}")
    n = pair.modulus
    if all(sub.size == pair.size(s) for sub, s in zip(ideal, (PLUS, MINUS))):
        return zero_pair(n, f"{pair.name}/V")

    if is_prime(n):
        reducers = [_free_reducer(ideal[k], pair.dims[k]) for k in (0, 1)]
        dims = (len(reducers[0][0]), len(reducers[1][0]))
        qq, tf = [], []
        for s in (PLUS, MINUS):
            k = _i(s)
            free_s, reduce_s = reducers[k]
            free_t = reducers[1 - k][0]
            d, e = dims[k], dims[1 - k]
            q = np.zeros((d, e, d, d), dtype=np.int64)
            t = np.zeros((d, e, d, d), dtype=np.int64)
            for a, b, c in itertools.product(range(d), range(e), range(d)):
                q[a, b, c] = reduce_s(pair.qq[k][free_s[a], free_t[b], free_s[c]])
                t[a, b, c] = reduce_s(pair.tfull[k][free_s[a], free_t[b], free_s[c]])
            qq.append(q)
            tf.append(t)
        labels = tuple(
            tuple(pair.labels[k][c] for c in reducers[k][0]) for k in (0, 1)
        )
        return JordanPairSpec(
            f"{pair.name}/I", "quotient", n, dims, labels, (qq[0], qq[1]), (tf[0], tf[1])  # type: ignore[arg-type]
        )

    for m in sorted(d for d in range(1, n + 1) if n % d == 0):
        scaled = [Submodule.span(m * np.eye(pair.dims[k], dtype=np.int64), n, pair.dims[k]) for k in (0, 1)]
        if scaled[0].equals(ideal[0]) and scaled[1].equals(ideal[1]):
            if m == n:
                return JordanPairSpec(
                    f"{pair.name}/0", pair.kind, n, pair.dims, pair.labels, pair.qq, pair.tfull,
                    pair.closure, pair.ring, pair.model, dict(pair.params),
                )
            return JordanPairSpec(
                f"{pair.name}/{m}V",
                "quotient",
                m,
                pair.dims,
                pair.labels,
                (pair.qq[0] % m, pair.qq[1] % m),
                (pair.tfull[0] % m, pair.tfull[1] % m),
            )
    raise JordanError(f"Quotient by this ideal of {pair.name} over Z/{n} is not supported")


def quotient_map(
    pair: JordanPairSpec, ideal: Tuple[Submodule, Submodule]
) -> Callable[[int, np.ndarray], np.ndarray]:
    """
    표준 사영 can: V → V/I 의 좌표 사상

    quotient_pair 와 같은 좌표를 쓴다.
    """
    n = pair.modulus
    if all(sub.size == pair.size(s) for sub, s in zip(ideal, (PLUS, MINUS))):
        return lambda sign, v: np.zeros(0, dtype=np.int64)
    if is_prime(n):
        reducers = [_free_reducer(ideal[k], pair.dims[k]) for k in (0, 1)]
        return lambda sign, v: reducers[_i(sign)][1](v)
    for m in sorted(d for d in range(1, n + 1) if n % d == 0):
        scaled = [Submodule.span(m * np.eye(pair.dims[k], dtype=np.int64), n, pair.dims[k]) for k in (0, 1)]
        if scaled[0].equals(ideal[0]) and scaled[1].equals(ideal[1]):
            return lambda sign, v, m=m: _vec(v) % m
    raise JordanError(f"Quotient by this ideal of {pair.name} over Z/{n} is not supported")


# ----- 나눗셈 pair -----


def is_division_pair(pair: JordanPairSpec, config: Optional[KernelConfig] = None) -> bool:
    """0 이 아닌 모든 x ∈ V^σ 에 대해 Q_x 가역"""
    config = resolve(config)
    if pair.dims[0] != pair.dims[1] or pair.dims[0] == 0:
        return False
    for s in (PLUS, MINUS):
        for x in pair.elements(s, config.budget.max_module_elements):
            if any(x) and not linalg.is_invertible(pair.q_matrix(s, _vec(x)), pair.modulus):
                return False
    return True


def jordan_inverse(pair: JordanPairSpec, b: PairElement) -> PairElement:
    """b⁻¹ = Q(b)⁻¹ b ∈ V^{-σ}"""
    n = pair.modulus
    m = pair.q_matrix(b.sign, b.vector)
    if not linalg.is_invertible(m, n):
        raise JordanError(f"{b} is not invertible in {pair.name}")
    if is_prime(n):
        z = linalg.solve(m, b.vector, n)
    else:
        z = next(
            (_vec(c) for c in itertools.product(range(n), repeat=pair.dim(-b.sign))
             if _eq(m @ _vec(c), b.vector, n)),
            None,
        )
    if z is None:
        raise JordanError(f"{b} is not invertible in {pair.name}")
    return pair.element(-b.sign, tuple(int(c) for c in z))
