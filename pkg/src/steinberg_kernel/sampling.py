"""
인스턴스 공급기

변수 도메인들의 곱이 작으면 전수, 크면 seed 고정 균등 샘플링.
"""

import itertools
import math
import random
from typing import Any, Iterator, List, Sequence, Tuple

from .config import SamplingConfig


def instances(domains: Sequence[Sequence[Any]], sampling: SamplingConfig) -> Tuple[Iterator[tuple], bool]:
    """
    Returns:
        (인스턴스 iterator, 샘플링 여부)
    """
    pools: List[Sequence[Any]] = [list(d) for d in domains]
    total = math.prod(len(p) for p in pools)
    if total <= sampling.exhaustive_cap:
        return itertools.product(*pools), False
    rng = random.Random(sampling.seed)
    return (tuple(rng.choice(p) for p in pools) for _ in range(sampling.samples)), True
