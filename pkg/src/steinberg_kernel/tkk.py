"""
TKK Lie 대수

tkk(V) = V⁺ ⊕ L₀ ⊕ V⁻, L₀ = kζ + span δ(x, y) ⊂ End(V⁺) × End(V⁻).

    ζ = (Id, −Id),  δ(x, y) = (D(x, y), −D(y, x))
    [D, z] = D_σ z,  [x, y] = −δ(x, y),  [V^σ, V^σ] = 0

기저 순서는 (V⁺ 좌표 기저, L₀ 기저 (ζ 먼저), V⁻ 좌표 기저) 로 고정한다.
스칼라는 좌표 소체 F_p.
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from . import linalg
from .config import KernelConfig, resolve
from .errors import TKKError
from .jordan import MINUS, PLUS, JordanPairSpec, PairElement, make_pair
from .linalg import OrderedBasis, Submodule
from .models import SuiteReport
from .scalars import RingSpec, is_prime

logger = structlog.get_logger()

EXP_SAMPLE = 16


@dataclass
class TKKElement:
    """x ⊕ (D₊, D₋) ⊕ y"""
    x: np.ndarray
    d_plus: np.ndarray
    d_minus: np.ndarray
    y: np.ndarray

    def flat_l0(self) -> np.ndarray:
        return np.concatenate([self.d_plus.reshape(-1), self.d_minus.reshape(-1)])

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "dPlus": self.d_plus.tolist(),
            "dMinus": self.d_minus.tolist(),
            "y": self.y.tolist(),
        }


@dataclass(frozen=True, eq=False)
class Automorphism:
    """TKK 기저에서의 가역 정사각 행렬 (열벡터 규약, a * b 는 b 다음 a)"""
    matrix: np.ndarray
    modulus: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "matrix", np.ascontiguousarray(np.asarray(self.matrix, dtype=np.int64) % self.modulus)
        )

    @classmethod
    def identity(cls, size: int, modulus: int) -> "Automorphism":
        return cls(np.eye(size, dtype=np.int64), modulus)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.matrix @ other.matrix, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Automorphism) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def inverse(self) -> "Automorphism":
        inv = linalg.inverse(self.matrix, self.modulus)
        if inv is None:
            raise TKKError("Matrix is not invertible")
        return Automorphism(inv, self.modulus)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(len(self.matrix), dtype=np.int64)))

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return (self.matrix @ np.asarray(vector, dtype=np.int64)) % self.modulus

    def to_dict(self) -> dict:
        return {"size": len(self.matrix), "matrix": self.matrix.tolist()}


@dataclass(eq=False)
class TKKAlgebra:
    """
    구조상수 table[a, b, c] = [e_a, e_b] 의 e_c 계수

    degenerate 는 영 pair 에 형식적 ζ 만 남은 경우 (중심이 0 이 아님).
    """
    pair: JordanPairSpec
    modulus: int
    l0: OrderedBasis
    table: np.ndarray = field(repr=False)
    degrees: Tuple[int, ...]
    degenerate: bool = False

    @property
    def dims(self) -> Tuple[int, int, int]:
        r = 1 if self.degenerate else len(self.l0)
        return self.pair.dims[0], r, self.pair.dims[1]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    # ----- 원소 -----

    def zero(self) -> TKKElement:
        dp, dm = self.pair.dims
        return TKKElement(
            np.zeros(dp, dtype=np.int64),
            np.zeros((dp, dp), dtype=np.int64),
            np.zeros((dm, dm), dtype=np.int64),
            np.zeros(dm, dtype=np.int64),
        )

    def _split(self, flat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        dp, dm = self.pair.dims
        return flat[: dp * dp].reshape(dp, dp), flat[dp * dp:].reshape(dm, dm)

    def zeta(self) -> TKKElement:
        dp, dm = self.pair.dims
        return TKKElement(
            np.zeros(dp, dtype=np.int64),
            np.eye(dp, dtype=np.int64),
            (-np.eye(dm, dtype=np.int64)) % self.modulus,
            np.zeros(dm, dtype=np.int64),
        )

    def delta(self, x: np.ndarray, y: np.ndarray) -> TKKElement:
        """δ(x, y) = (D(x, y), −D(y, x))"""
        e = self.zero()
        e.d_plus = self.pair.d_matrix(PLUS, x, y)
        e.d_minus = (-self.pair.d_matrix(MINUS, y, x)) % self.modulus
        return e

    def plus(self, x: Sequence[int]) -> TKKElement:
        e = self.zero()
        e.x = np.asarray(x, dtype=np.int64) % self.modulus
        return e

    def minus(self, y: Sequence[int]) -> TKKElement:
        e = self.zero()
        e.y = np.asarray(y, dtype=np.int64) % self.modulus
        return e

    def element(self, coords: Sequence[int]) -> TKKElement:
        """기저 좌표 → 원소 (degenerate 대수의 형식적 ζ 는 0 연산자로 표시)"""
        c = np.asarray(coords, dtype=np.int64) % self.modulus
        dp, r, dm = self.dims
        if len(c) != self.dim:
            raise TKKError(f"Coordinate length {len(c)} does not match dim tkk = {self.dim}")
        if self.degenerate:
            return self.zero()
        flat = (c[dp:dp + r] @ self.l0.matrix()) % self.modulus
        d_plus, d_minus = self._split(flat)
        return TKKElement(c[:dp], d_plus, d_minus, c[dp + r:])

    def l0_coords(self, d_plus: np.ndarray, d_minus: np.ndarray) -> np.ndarray:
        """
        (D₊, D₋) 의 L₀ 기저 좌표

        Raises:
            TKKError: L₀ 밖일 때
        """
        if self.degenerate:
            return np.zeros(1, dtype=np.int64)
        flat = np.concatenate([np.asarray(d_plus).reshape(-1), np.asarray(d_minus).reshape(-1)])
        c = self.l0.coordinates(flat)
        if c is None:
            raise TKKError(f"Endomorphism pair is not in L0 of tkk({self.pair.name})")
        return c

    def coords(self, e: TKKElement) -> np.ndarray:
        return np.concatenate(
            [e.x % self.modulus, self.l0_coords(e.d_plus, e.d_minus), e.y % self.modulus]
        ).astype(np.int64)

    def basis_element(self, a: int) -> TKKElement:
        c = np.zeros(self.dim, dtype=np.int64)
        c[a] = 1
        return self.element(c)

    def bracket_coords(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abc->c", np.asarray(a), np.asarray(b), self.table) % self.modulus

    def labels(self) -> List[str]:
        lp, lm = self.pair.labels
        dp, r, dm = self.dims
        return [f"+{s}" for s in lp] + [f"L0.{k}" for k in range(r)] + [f"-{s}" for s in lm]

    def to_dict(self) -> dict:
        dp, r, dm = self.dims
        return {
            "pair": self.pair.name,
            "modulus": self.modulus,
            "dim": self.dim,
            "dimPlus": dp,
            "dimL0": r,
            "dimMinus": dm,
            "degenerate": self.degenerate,
        }

    def __str__(self) -> str:
        return f"tkk({self.pair.name})"


def bracket(algebra: TKKAlgebra, a: TKKElement, b: TKKElement) -> TKKElement:
    """
    [a, b]

    V⁺: D1₊x2 − D2₊x1, V⁻: D1₋y2 − D2₋y1,
    L₀: [D1, D2] − δ(x1, y2) + δ(x2, y1)
    """
    p = algebra.modulus
    d1 = algebra.delta(a.x, b.y)
    d2 = algebra.delta(b.x, a.y)
    return TKKElement(
        (a.d_plus @ b.x - b.d_plus @ a.x) % p,
        (a.d_plus @ b.d_plus - b.d_plus @ a.d_plus - d1.d_plus + d2.d_plus) % p,
        (a.d_minus @ b.d_minus - b.d_minus @ a.d_minus - d1.d_minus + d2.d_minus) % p,
        (a.d_minus @ b.y - b.d_minus @ a.y) % p,
    )


def tkk_build(pair: JordanPairSpec, config: Optional[KernelConfig] = None) -> TKKAlgebra:
    """
    tkk(V) 생성

    L₀ 는 ζ 다음 δ(b_i, b'_k) 를 순서대로 넣어 독립인 것만 남긴다.

    Raises:
        TKKError: 소체가 아니거나 부분 pair 일 때 (Z/n 은 l0_membership 사용)
    """
    config = resolve(config)
    p = pair.modulus
    if not is_prime(p):
        raise TKKError(
            f"tkk({pair.name}) needs field scalars; use l0_membership for Z/{p}"
        )
    if pair.carriers is not None:
        raise TKKError("tkk of a subpair is not supported; build it from a standalone pair")
    dp, dm = pair.dims
    l0 = OrderedBasis(p, dp * dp + dm * dm)
    degenerate = dp == 0 and dm == 0

    if degenerate:
        logger.warning("Zero pair gives a degenerate tkk", pair=pair.name)
        return TKKAlgebra(pair, p, l0, np.zeros((1, 1, 1), dtype=np.int64), (0,), True)

    algebra = TKKAlgebra(pair, p, l0, np.zeros((0, 0, 0), dtype=np.int64), ())
    l0.add(algebra.zeta().flat_l0())
    eye_p, eye_m = np.eye(dp, dtype=np.int64), np.eye(dm, dtype=np.int64)
    for i, k in itertools.product(range(dp), range(dm)):
        l0.add(algebra.delta(eye_p[i], eye_m[k]).flat_l0())

    size = algebra.dim
    algebra.degrees = (1,) * dp + (0,) * len(l0) + (-1,) * dm
    basis = [algebra.basis_element(a) for a in range(size)]
    table = np.zeros((size, size, size), dtype=np.int64)
    for a, b in itertools.product(range(size), repeat=2):
        if b < a:
            table[a, b] = (-table[b, a]) % p
            continue
        table[a, b] = algebra.coords(bracket(algebra, basis[a], basis[b]))
    algebra.table = table
    logger.info("TKK algebra built", pair=pair.name, dims=list(algebra.dims))
    return algebra


def l0_membership(
    pair: JordanPairSpec,
    d_plus: np.ndarray,
    d_minus: np.ndarray,
    config: Optional[KernelConfig] = None,
) -> bool:
    """Z/n 위에서 (D₊, D₋) ∈ Z/n·ζ + span δ 인지 (원소 전수 span)"""
    config = resolve(config)
    n = pair.modulus
    dp, dm = pair.dims
    eye_p, eye_m = np.eye(dp, dtype=np.int64), np.eye(dm, dtype=np.int64)
    gens = [np.concatenate([eye_p.reshape(-1), (-eye_m % n).reshape(-1)])]
    for i, k in itertools.product(range(dp), range(dm)):
        dxy = pair.d_matrix(PLUS, eye_p[i], eye_m[k])
        dyx = pair.d_matrix(MINUS, eye_m[k], eye_p[i])
        gens.append(np.concatenate([dxy.reshape(-1), (-dyx % n).reshape(-1)]))
    span = Submodule.span(gens, n, dp * dp + dm * dm, config.budget.max_module_elements)
    return span.contains(np.concatenate([np.asarray(d_plus).reshape(-1), np.asarray(d_minus).reshape(-1)]))


# ----- 자기동형 -----


def preserves_bracket(algebra: TKKAlgebra, matrix: np.ndarray) -> Optional[dict]:
    """M[e_a, e_b] = [Me_a, Me_b] 검사 (첫 위반 (a, b) 반환)"""
    p = algebra.modulus
    lhs = np.einsum("abc,kc->abk", algebra.table, matrix) % p
    rhs = np.einsum("ia,jb,ijk->abk", matrix, matrix, algebra.table, optimize=True) % p
    bad = np.argwhere((lhs - rhs) % p)
    if len(bad):
        a, b, _ = bad[0]
        return {"a": int(a), "b": int(b)}
    return None


def _exp_image(algebra: TKKAlgebra, sign: int, w: np.ndarray, e: TKKElement) -> TKKElement:
    p = algebra.modulus
    pair = algebra.pair
    if sign == PLUS:
        dl = algebra.delta(w, e.y)
        return TKKElement(
            (e.x - e.d_plus @ w + pair.q(PLUS, w, e.y)) % p,
            (e.d_plus - dl.d_plus) % p,
            (e.d_minus - dl.d_minus) % p,
            e.y,
        )
    dl = algebra.delta(e.x, w)
    return TKKElement(
        e.x,
        (e.d_plus + dl.d_plus) % p,
        (e.d_minus + dl.d_minus) % p,
        (e.y - e.d_minus @ w + pair.q(MINUS, w, e.x)) % p,
    )


def exp_aut(algebra: TKKAlgebra, sign: int, w: PairElement) -> Automorphism:
    """
    exp_σ(w) = 블록 단위 삼각 행렬 (Id, ad w, Q_w)

    Raises:
        TKKError: 부호가 맞지 않거나 괄호를 보존하지 않을 때
    """
    if w.sign != sign:
        raise TKKError(f"exp_{sign:+d} needs an element of V^{sign:+d}")
    p = algebra.modulus
    if algebra.degenerate:
        return Automorphism.identity(algebra.dim, p)
    vec = w.vector % p
    columns = [
        algebra.coords(_exp_image(algebra, sign, vec, algebra.basis_element(a)))
        for a in range(algebra.dim)
    ]
    matrix = np.array(columns, dtype=np.int64).T
    witness = preserves_bracket(algebra, matrix)
    if witness is not None:
        raise TKKError(f"exp_{sign:+d}({list(w.coords)}) does not preserve the bracket: {witness}")
    return Automorphism(matrix, p)


def _pair_aut_witness(pair: JordanPairSpec, fp: np.ndarray, fm: np.ndarray) -> Optional[dict]:
    """f(Q_x y) = Q_{fx} f y 와 f{x y z} = {fx fy fz} 를 기저에서 검사"""
    p = pair.modulus
    f = {PLUS: fp, MINUS: fm}
    for s in (PLUS, MINUS):
        eye_s = np.eye(pair.dim(s), dtype=np.int64)
        eye_t = np.eye(pair.dim(-s), dtype=np.int64)
        for i, k in itertools.product(range(pair.dim(s)), range(pair.dim(-s))):
            x, y = eye_s[i], eye_t[k]
            if ((f[s] @ pair.q(s, x, y) - pair.q(s, f[s] @ x, f[-s] @ y)) % p).any():
                return {"sign": s, "x": i, "y": k, "product": "Q"}
            for j in range(pair.dim(s)):
                z = eye_s[j]
                lhs = f[s] @ pair.t(s, x, y, z)
                rhs = pair.t(s, f[s] @ x, f[-s] @ y, f[s] @ z)
                if ((lhs - rhs) % p).any():
                    return {"sign": s, "x": i, "y": k, "z": j, "product": "triple"}
    return None


def tkk_of_pair_aut(algebra: TKKAlgebra, fp: np.ndarray, fm: np.ndarray) -> Automorphism:
    """
    x ⊕ D ⊕ y ↦ f₊x ⊕ (f₊D₊f₊⁻¹, f₋D₋f₋⁻¹) ⊕ f₋y

    Raises:
        TKKError: (f₊, f₋) 가 pair 자기동형이 아닐 때
    """
    p = algebra.modulus
    fp = np.asarray(fp, dtype=np.int64) % p
    fm = np.asarray(fm, dtype=np.int64) % p
    inv_p, inv_m = linalg.inverse(fp, p), linalg.inverse(fm, p)
    if inv_p is None or inv_m is None:
        raise TKKError("Pair automorphism components must be invertible")
    witness = _pair_aut_witness(algebra.pair, fp, fm)
    if witness is not None:
        raise TKKError(f"Not an automorphism of {algebra.pair.name}: {witness}")
    if algebra.degenerate:
        return Automorphism.identity(algebra.dim, p)
    columns = []
    for a in range(algebra.dim):
        e = algebra.basis_element(a)
        image = TKKElement(
            (fp @ e.x) % p, (fp @ e.d_plus @ inv_p) % p, (fm @ e.d_minus @ inv_m) % p, (fm @ e.y) % p
        )
        columns.append(algebra.coords(image))
    return Automorphism(np.array(columns, dtype=np.int64).T, p)


# ----- 검증 -----


def _centre(table: np.ndarray, p: int) -> np.ndarray:
    """{c : [c, e_b] = 0 ∀b} 의 기저 행"""
    size = table.shape[0]
    if size == 0:
        return np.zeros((0, 0), dtype=np.int64)
    system = table.transpose(1, 2, 0).reshape(size * size, size)
    return linalg.nullspace(system, p)


def _exp_domain(pair: JordanPairSpec, sign: int, config: KernelConfig) -> List[Tuple[int, ...]]:
    if pair.size(sign) <= EXP_SAMPLE:
        return list(pair.elements(sign, EXP_SAMPLE))
    rng = random.Random(config.sampling.seed + 7 * sign)
    return [pair.random_element(sign, rng) for _ in range(EXP_SAMPLE)]


def verify_tkk_suite(algebra: TKKAlgebra, config: Optional[KernelConfig] = None) -> SuiteReport:
    """
    교대성, Jacobi (기저 세 쌍 전수), 차수 가법성, 중심, JP15, δ 작용, exp 성질
    """
    config = resolve(config)
    report = SuiteReport(
        suite="tkk", subject=str(algebra), witness_limit=config.sampling.witness_limit
    )
    p = algebra.modulus
    t = algebra.table
    size = algebra.dim
    pair = algebra.pair
    logger.info("TKK suite started", algebra=str(algebra), dim=size)

    for a, b in itertools.product(range(size), repeat=2):
        ok = not ((t[a, b] + t[b, a]) % p).any()
        report.record("alternating", ok, {"a": a, "b": b})

    # ad_{[a,b]} = [ad_a, ad_b]
    ad = t.transpose(0, 2, 1)
    for a in range(size):
        lhs = np.einsum("bm,mkc->bkc", t[a], ad) % p
        rhs = (np.einsum("kl,blc->bkc", ad[a], ad) - np.einsum("bkl,lc->bkc", ad, ad[a])) % p
        for b in range(size):
            bad = np.argwhere((lhs[b] - rhs[b]) % p)
            witness = None if not len(bad) else {"a": a, "b": b, "c": int(bad[0][1])}
            report.record("jacobi", not len(bad), witness)

    deg = algebra.degrees
    for a, b, c in zip(*np.nonzero(t % p)):
        report.record("grading", deg[c] == deg[a] + deg[b], {"a": int(a), "b": int(b), "c": int(c)})
    report.check("grading")

    centre = _centre(t, p)
    report.data["centreDim"] = len(centre)
    report.data.update(algebra.to_dict())
    if algebra.degenerate:
        report.data["centreSkipped"] = "degenerate"
    else:
        report.record("trivial-centre", len(centre) == 0, {"centre": centre.tolist()})

    dp, dm = pair.dims
    eye_p, eye_m = np.eye(dp, dtype=np.int64), np.eye(dm, dtype=np.int64)
    if not algebra.degenerate:
        for i, k, j in itertools.product(range(dp), range(dm), range(dp)):
            x, y, z = eye_p[i], eye_m[k], eye_p[j]
            ok = not ((bracket(algebra, algebra.delta(x, y), algebra.plus(z)).x - pair.t(PLUS, x, y, z)) % p).any()
            report.record("delta-action+", ok, {"x": i, "y": k, "z": j})
        for i, k, j in itertools.product(range(dp), range(dm), range(dm)):
            x, y, w = eye_p[i], eye_m[k], eye_m[j]
            got = bracket(algebra, algebra.delta(x, y), algebra.minus(w)).y
            ok = not ((got + pair.t(MINUS, y, x, w)) % p).any()
            report.record("delta-action-", ok, {"x": i, "y": k, "w": j})
        for i, k in itertools.product(range(dp), range(dm)):
            got = bracket(algebra, algebra.plus(eye_p[i]), algebra.minus(eye_m[k])).flat_l0()
            ok = not ((got + algebra.delta(eye_p[i], eye_m[k]).flat_l0()) % p).any()
            report.record("plus-minus", ok, {"x": i, "y": k})

        for i, k, u, v in itertools.product(range(dp), range(dm), range(dp), range(dm)):
            x, y, xu, yv = eye_p[i], eye_m[k], eye_p[u], eye_m[v]
            got = bracket(algebra, algebra.delta(x, y), algebra.delta(xu, yv)).flat_l0()
            want = (
                algebra.delta(pair.t(PLUS, x, y, xu), yv).flat_l0()
                - algebra.delta(xu, pair.t(MINUS, y, x, yv)).flat_l0()
            )
            report.record("JP15", not ((got - want) % p).any(), {"x": i, "y": k, "u": u, "v": v})

        if report.check("alternating").passed and report.check("jacobi").passed:
            _record_exp_checks(report, algebra, config)
        else:
            report.data["expSkipped"] = "bracket"

    logger.info("TKK suite finished", algebra=str(algebra), passed=report.passed, failures=report.failures)
    return report


def _record_exp_checks(report: SuiteReport, algebra: TKKAlgebra, config: KernelConfig) -> None:
    """exp_σ 의 단사성과 가법성. 괄호를 보존하지 않는 exp 는 exp-bracket 실패로 기록"""
    pair, p = algebra.pair, algebra.modulus
    for s in (PLUS, MINUS):
        tag = "+" if s == PLUS else "-"
        cache = {}
        for w in _exp_domain(pair, s, config):
            try:
                cache[w] = exp_aut(algebra, s, pair.element(s, w))
            except TKKError as exc:
                report.record(f"exp-bracket{tag}", False, {"w": list(w), "error": str(exc)})
        for w, aut in cache.items():
            report.record(f"exp-injective{tag}", aut.is_identity() == (not any(w)), {"w": list(w)})
        for w1, w2 in itertools.product(cache, repeat=2):
            total = tuple(int(c) for c in (np.array(w1) + np.array(w2)) % p)
            combined = cache.get(total)
            if combined is None:
                try:
                    combined = exp_aut(algebra, s, pair.element(s, total))
                except TKKError as exc:
                    report.record(f"exp-bracket{tag}", False, {"w": list(total), "error": str(exc)})
                    continue
            report.record(
                f"exp-additive{tag}", cache[w1] * cache[w2] == combined, {"w1": list(w1), "w2": list(w2)}
            )


# ----- 행렬 모델 𝔢 와 Ψ -----


@dataclass(eq=False)
class RectangularModel:
    """
    𝔢 = k e₁ + k e₂ + Mat_IJ(A) + Mat_JI(A) + [Mat_IJ, Mat_JI] ⊂ Mat_N(A)

    원소는 (N, N, d) 배열을 편 벡터. 스칼라는 F_p.
    """
    ring: RingSpec
    p: int
    q: int
    span: OrderedBasis
    table: np.ndarray = field(repr=False)
    degrees: Tuple[int, ...]
    centre: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return len(self.span)

    def dense(self, coords: Sequence[int]) -> np.ndarray:
        n, d = self.size, self.ring.dim
        flat = (np.asarray(coords, dtype=np.int64) @ self.span.matrix()) % self.ring.modulus
        return flat.reshape(n, n, d)

    def coords(self, array: np.ndarray) -> Optional[np.ndarray]:
        return self.span.coordinates(np.asarray(array, dtype=np.int64).reshape(-1))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (self.ring.matmul(x, y) - self.ring.matmul(y, x)) % self.ring.modulus

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.name,
            "I": self.p,
            "J": self.q,
            "dim": self.dim,
            "centreDim": len(self.centre),
        }


def _unit_block(ring: RingSpec, n: int, rows: Sequence[int], cols: Sequence[int], a: Sequence[int]) -> np.ndarray:
    x = np.zeros((n, n, ring.dim), dtype=np.int64)
    for r, c in zip(rows, cols):
        x[r, c] = a
    return x


def fre_build(ring: RingSpec, p: int, q: int) -> RectangularModel:
    """
    𝔢 의 기저, 괄호 구조상수, 중심

    Raises:
        TKKError: 좌표 소환이 체가 아닐 때
    """
    n, d, mod = p + q, ring.dim, ring.modulus
    if not is_prime(mod):
        raise TKKError("The matrix model needs field scalars")
    one = ring.one()
    left, right = range(p), range(p, n)
    spanning: List[Tuple[np.ndarray, int]] = [
        (_unit_block(ring, n, left, left, one), 0),
        (_unit_block(ring, n, right, right, one), 0),
    ]
    units = [ring.basis(t) for t in range(d)]
    ups = [_unit_block(ring, n, [i], [j], a) for i in left for j in right for a in units]
    downs = [_unit_block(ring, n, [j], [i], a) for j in right for i in left for a in units]
    spanning += [(x, 1) for x in ups] + [(y, -1) for y in downs]
    for x, y in itertools.product(ups, downs):
        spanning.append(((ring.matmul(x, y) - ring.matmul(y, x)) % mod, 0))

    span = OrderedBasis(mod, n * n * d)
    degrees = []
    for vec, deg in spanning:
        if span.add(vec.reshape(-1)):
            degrees.append(deg)

    model = RectangularModel(ring, p, q, span, np.zeros((0, 0, 0), dtype=np.int64), tuple(degrees), np.zeros((0, 0)))
    size = model.dim
    basis = [model.dense(np.eye(size, dtype=np.int64)[a]) for a in range(size)]
    table = np.zeros((size, size, size), dtype=np.int64)
    for a, b in itertools.product(range(size), repeat=2):
        c = model.coords(model.bracket(basis[a], basis[b]))
        if c is None:
            raise TKKError(f"Matrix model over {ring.name} is not closed under the commutator")
        table[a, b] = c
    model.table = table
    model.centre = _centre(table, mod)
    logger.info("Matrix model built", ring=ring.name, I=p, J=q, dim=size, centre=len(model.centre))
    return model


def psi_dense(algebra: TKKAlgebra, model: RectangularModel, m: np.ndarray) -> TKKElement:
    """Ψ: (a b / c d) ↦ b ⊕ Δ(a, d) ⊕ (−c), Δ₊u = au − ud, Δ₋v = dv − va"""
    ring, p, q = model.ring, model.p, model.q
    mod = ring.modulus
    a, b = m[:p, :p], m[:p, p:]
    c, d = m[p:, :p], m[p:, p:]
    pair = algebra.pair
    mm = pair.model
    dp, dm = pair.dims
    plus = np.zeros((dp, dp), dtype=np.int64)
    for k in range(dp):
        u = mm.to_dense(PLUS, np.eye(dp, dtype=np.int64)[k])
        plus[:, k] = mm.from_dense(PLUS, ring.matmul(a, u) - ring.matmul(u, d))
    minus = np.zeros((dm, dm), dtype=np.int64)
    for k in range(dm):
        v = mm.to_dense(MINUS, np.eye(dm, dtype=np.int64)[k])
        minus[:, k] = mm.from_dense(MINUS, ring.matmul(d, v) - ring.matmul(v, a))
    return TKKElement(
        b.reshape(-1) % mod, plus % mod, minus % mod, (-c).reshape(-1) % mod
    )


def rect_pair_for(ring: RingSpec, p: int, q: int) -> JordanPairSpec:
    if p == 1 and q == 1:
        return make_pair("full", ring=ring)
    return make_pair("rect", ring=ring, p=p, q=q)


def verify_psi(
    ring: RingSpec, p: int, q: int, config: Optional[KernelConfig] = None
) -> SuiteReport:
    """
    Ψ: 𝔢 → tkk(Mat_IJ(A), Mat_JI(A)) 의 선형성, 괄호 보존, 전사성, Ker Ψ = 𝔷(𝔢)

    Ψ(e₁) = ζ = −Ψ(e₂) 와 차원 관계 dim 𝔢 − dim 𝔷 = dim tkk 도 확인한다.
    """
    config = resolve(config)
    model = fre_build(ring, p, q)
    algebra = tkk_build(rect_pair_for(ring, p, q), config)
    mod = ring.modulus
    report = SuiteReport(
        suite="psi", subject=f"{ring.name},{p},{q}", witness_limit=config.sampling.witness_limit
    )
    size = model.dim
    basis = [model.dense(np.eye(size, dtype=np.int64)[a]) for a in range(size)]

    columns = []
    for a, m in enumerate(basis):
        try:
            columns.append(algebra.coords(psi_dense(algebra, model, m)))
            report.record("image-in-tkk", True)
        except TKKError as exc:
            report.record("image-in-tkk", False, {"basis": a, "error": str(exc)})
            columns.append(np.zeros(algebra.dim, dtype=np.int64))
    psi = np.array(columns, dtype=np.int64).T % mod

    for a, b in itertools.product(range(size), repeat=2):
        total = algebra.coords(psi_dense(algebra, model, (basis[a] + basis[b]) % mod))
        report.record("linear", not ((total - psi[:, a] - psi[:, b]) % mod).any(), {"a": a, "b": b})
        lhs = psi @ model.table[a, b] % mod
        rhs = algebra.bracket_coords(psi[:, a], psi[:, b])
        report.record("bracket", not ((lhs - rhs) % mod).any(), {"a": a, "b": b})

    rank = linalg.rank(psi, mod) if size else 0
    report.record("surjective", rank == algebra.dim, {"rank": rank, "dimTkk": algebra.dim})

    kernel = Submodule.span(linalg.nullspace(psi, mod), mod, size)
    centre = Submodule.span(model.centre, mod, size)
    report.record("kernel-centre", kernel.equals(centre), {"kernel": kernel.rank, "centre": centre.rank})
    report.record(
        "dimensions",
        size - centre.rank == algebra.dim,
        {"dimE": size, "dimCentre": centre.rank, "dimTkk": algebra.dim},
    )

    # 𝔷(𝔢) = 𝔢 ∩ Z(A)·1_N
    n, d = model.size, ring.dim
    t = ring.table % mod
    commuting = np.vstack([(t[:, j, :] - t[j, :, :]).T for j in range(d)]) % mod
    scalars = linalg.nullspace(commuting, mod)
    ambient = n * n * d
    central = Submodule.span(
        [_unit_block(ring, n, range(n), range(n), z).reshape(-1) for z in scalars], mod, ambient
    )
    described = central.intersect(model.span.submodule())
    computed = Submodule.span([model.dense(c).reshape(-1) for c in model.centre], mod, ambient)
    report.record("centre-description", described.equals(computed), {"described": described.rank})

    zeta = algebra.coords(algebra.zeta())
    e1 = model.coords(_unit_block(ring, n, range(p), range(p), ring.one()))
    e2 = model.coords(_unit_block(ring, n, range(p, n), range(p, n), ring.one()))
    report.record("zeta-e1", not ((psi @ e1 - zeta) % mod).any())
    report.record("zeta-e2", not ((psi @ e2 + zeta) % mod).any())

    report.data.update({"model": model.to_dict(), "tkk": algebra.to_dict(), "rank": rank})
    logger.info("Psi check finished", subject=report.subject, passed=report.passed)
    return report
