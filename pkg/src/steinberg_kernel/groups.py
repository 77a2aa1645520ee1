"""
유한군 열거

생성원 집합의 BFS 닫힘으로 원소 저장소를 만든다. 원소는 해시 가능하고
`*` 와 `inverse()` 를 지원하면 된다 (FinMatrix, Automorphism, Perm).
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import structlog

from .config import KernelConfig, resolve
from .errors import BudgetExceeded

logger = structlog.get_logger()

PROGRESS_EVERY = 10_000


@dataclass(frozen=True)
class Perm:
    """
    {0..n-1} 위의 치환 (오른쪽 작용)

    p * q 는 "p 다음 q": (p * q)[c] = q[p[c]].
    """
    images: Tuple[int, ...]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(other.images[c] for c in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for c, d in enumerate(self.images):
            inv[d] = c
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(c == d for c, d in enumerate(self.images))

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    def to_dict(self) -> list:
        return list(self.images)


@dataclass
class FiniteGroup:
    """열거된 유한군: 원소 저장소 + 생성원 + 항등원"""
    name: str
    elements: List[Any]
    generators: List[Any]
    identity: Any
    _index: Dict[Any, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Any) -> bool:
        return g in self._index

    def __iter__(self) -> Iterator[Any]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, g: Any) -> int:
        return self._index[g]

    def element_order(self, g: Any) -> int:
        k, h = 1, g
        while h != self.identity:
            h = h * g
            k += 1
            if k > self.order:
                raise ValueError("Element does not have finite order inside the group")
        return k

    def same_elements(self, other: "FiniteGroup") -> bool:
        return self.order == other.order and all(g in other for g in self.elements)

    def to_dict(self) -> dict:
        return {"name": self.name, "order": self.order, "generators": len(self.generators)}

    def __str__(self) -> str:
        return f"FiniteGroup[name={self.name}, order={self.order}]"


def closure(
    generators: Sequence[Any],
    identity: Any,
    name: str = "G",
    config: Optional[KernelConfig] = None,
    limit: Optional[int] = None,
) -> FiniteGroup:
    """
    생성원의 BFS 닫힘 (유한군에서는 곱 닫힘이 곧 부분군)

    Raises:
        BudgetExceeded: 원소 수가 한계를 넘으면 (reached 에 부분 크기)
    """
    config = resolve(config)
    limit = limit or config.budget.max_group_elements
    gens = [g for g in generators]
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h in index:
                continue
            index[h] = len(elements)
            elements.append(h)
            queue.append(h)
            if len(elements) > limit:
                logger.warning("Group closure budget exhausted", group=name, limit=limit)
                raise BudgetExceeded("group elements", limit, len(elements))
            if len(elements) % PROGRESS_EVERY == 0:
                logger.info("Group closure progress", group=name, elements=len(elements))
    logger.debug("Group closure finished", group=name, order=len(elements))
    return FiniteGroup(name=name, elements=elements, generators=gens, identity=identity, _index=index)


def paired_closure(
    generators: Sequence[Tuple[Any, Any]],
    identity: Tuple[Any, Any],
    config: Optional[KernelConfig] = None,
    name: str = "graph",
) -> Tuple[Dict[Any, Any], List[Any]]:
    """
    (g, φ(g)) 쌍 생성원의 닫힘

    Returns:
        (첫 성분 → 둘째 성분 사전, 같은 첫 성분에 다른 둘째 성분이 붙은 충돌 목록)
    """
    config = resolve(config)
    limit = config.budget.max_group_elements
    image: Dict[Any, Any] = {identity[0]: identity[1]}
    conflicts: List[Any] = []
    queue = deque([identity])
    seen = {identity}
    while queue:
        g, fg = queue.popleft()
        for s, fs in generators:
            h, fh = g * s, fg * fs
            if (h, fh) in seen:
                continue
            seen.add((h, fh))
            if h in image:
                if image[h] != fh:
                    conflicts.append(h)
                continue
            image[h] = fh
            queue.append((h, fh))
            if len(image) > limit:
                raise BudgetExceeded("group elements", limit, len(image))
    logger.debug("Paired closure finished", graph=name, order=len(image), conflicts=len(conflicts))
    return image, conflicts


def commutator(g: Any, h: Any) -> Any:
    """((g, h)) = g h g⁻¹ h⁻¹"""
    return g * h * g.inverse() * h.inverse()


def evaluate_word(word: Sequence[int], images: Sequence[Any], identity: Any, inverses: Optional[Sequence[Any]] = None) -> Any:
    """
    단어 평가 (왼쪽부터 곱)

    letter k>0 은 생성원 k-1, k<0 은 그 역원.
    """
    result = identity
    for letter in word:
        if letter > 0:
            result = result * images[letter - 1]
        else:
            inv = inverses[-letter - 1] if inverses is not None else images[-letter - 1].inverse()
            result = result * inv
    return result
