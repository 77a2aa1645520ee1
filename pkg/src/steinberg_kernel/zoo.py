"""
예시 zoo

CLI selector 가 가리키는 이름 붙은 계수환, Jordan pair, grading.
"""

from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .config import KernelConfig, resolve
from .errors import KernelError, SelectorError
from .grading import RootGradingSpec, make_grading
from .jordan import PLUS, JordanPairSpec, make_pair
from .linalg import Submodule
from .scalars import RingSpec, load_ring_json, make_ring


def _dual_numbers() -> RingSpec:
    """D2 = F_2[ε]/(ε²)"""
    return make_ring(
        "structure",
        p=2,
        labels=("1", "e"),
        table=[(0, 0, (1, 0)), (0, 1, (0, 1)), (1, 0, (0, 1)), (1, 1, (0, 0))],
        unit=(1, 0),
        involution=((1, 0), (0, 1)),
        name="D2",
    )


RINGS: Dict[str, Callable[[], RingSpec]] = {
    "F2": lambda: make_ring("F", p=2),
    "F3": lambda: make_ring("F", p=3),
    "F4": lambda: make_ring("F", p=2, k=2),
    "F4~": lambda: make_ring("F", p=2, k=2, frobenius=True),
    "F5": lambda: make_ring("F", p=5),
    "F9": lambda: make_ring("F", p=3, k=2),
    "Z4": lambda: make_ring("Z", n=4),
    "Mat2F2": lambda: make_ring("Mat", base=make_ring("F", p=2), m=2),
    "D2": _dual_numbers,
}

PAIRS = ("full", "rect", "hermitian", "alternating", "quadform")


def ring(name: Optional[str] = None, ring_file: Optional[str] = None) -> RingSpec:
    """
    이름 또는 구조상수 JSON 파일로 계수환 조회

    Raises:
        SelectorError: 알 수 없는 이름이거나 파일을 읽을 수 없을 때
    """
    if ring_file:
        try:
            return load_ring_json(ring_file)
        except (OSError, ValueError, KernelError) as e:
            raise SelectorError(f"Cannot load ring from {ring_file}: {e}") from e
    if name not in RINGS:
        raise SelectorError(f"Unknown ring {name!r}; known: {', '.join(RINGS)}")
    return RINGS[name]()


def quadform_pair(modulus: int, hyperbolic: int = 1) -> JordanPairSpec:
    """
    쌍곡 쌍 r 개와 비등방 벡터 w 하나로 이루어진 이차형식 pair

    polar form 은 쌍곡 블록 [[0,1],[1,0]] 들과 b(w,w) = 2, q(w) = 1.
    """
    if hyperbolic < 1:
        raise SelectorError("Quadratic-form pairs need at least one hyperbolic pair")
    m = 2 * hyperbolic + 1
    gram = np.zeros((m, m), dtype=np.int64)
    marked = []
    for i in range(hyperbolic):
        gram[2 * i, 2 * i + 1] = gram[2 * i + 1, 2 * i] = 1
        hp, hm = [0] * m, [0] * m
        hp[2 * i], hm[2 * i + 1] = 1, 1
        marked.append((hp, hm))
    gram[m - 1, m - 1] = 2
    q_diag = [0] * (m - 1) + [1]
    return make_pair(
        "quadform",
        modulus=modulus,
        gram=gram.tolist(),
        q_diag=q_diag,
        hyperbolic=marked,
        name=f"quadform(F{modulus},{hyperbolic})",
    )


def pair(
    kind: str,
    ring_spec: RingSpec,
    size_i: int = 1,
    size_j: int = 1,
    n: int = 2,
) -> JordanPairSpec:
    """
    zoo pair 생성

    Args:
        kind: full | rect | hermitian | alternating | quadform
        size_i, size_j: rect 의 |I|, |J|
        n: hermitian/alternating 의 크기, quadform 의 계수 (쌍곡 쌍은 n - 1 개)

    Raises:
        SelectorError: 알 수 없는 종류나 맞지 않는 매개변수
    """
    try:
        if kind == "full":
            return make_pair("full", ring=ring_spec)
        if kind == "rect":
            return make_pair("rect", ring=ring_spec, p=size_i, q=size_j)
        if kind in ("hermitian", "alternating"):
            return make_pair(kind, ring=ring_spec, n=n)
        if kind == "quadform":
            if ring_spec.dim != 1:
                raise SelectorError("Quadratic-form pairs are built over prime fields")
            return quadform_pair(ring_spec.modulus, n - 1)
    except SelectorError:
        raise
    except KernelError as e:
        raise SelectorError(f"Cannot build {kind} pair over {ring_spec.name}: {e}") from e
    raise SelectorError(f"Unknown pair kind {kind!r}; known: {', '.join(PAIRS)}")


def grading(pair_spec: JordanPairSpec, config: Optional[KernelConfig] = None) -> RootGradingSpec:
    """pair 종류에 맞는 예시 grading (rect↔A, hermitian↔C^her, alternating↔D^alt, quadform↔B^qf)"""
    return make_grading(pair_spec, config=resolve(config))


def nil_ideal(pair_spec: JordanPairSpec) -> Tuple[Submodule, Submodule]:
    """full(D2) 의 이데알 εV = (span ε, span ε)"""
    ring_spec = pair_spec.ring
    if ring_spec is None or ring_spec.name != "D2" or pair_spec.kind != "full":
        raise SelectorError("The nil ideal is defined for full(D2)")
    eps = [0, 1]
    d = pair_spec.dim(PLUS)
    return (Submodule.span([eps], 2, d), Submodule.span([eps], 2, d))
