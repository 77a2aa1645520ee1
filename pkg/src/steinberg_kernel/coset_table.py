"""
Todd–Coxeter 잉여류 열거

HLT 방식(관계자 스캔 후 빈 칸 채우기)에 lookahead 를 더했다. 일치(coincidence)는
union-find 로 병합한다. 잉여류 번호는 정의 순서를 따르므로 같은 입력이면
항상 같은 표가 나온다.

열 배치: 생성원 g 는 열 2g, 그 역원은 열 2g+1.
"""

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import structlog

from .config import KernelConfig, resolve
from .errors import BudgetExceeded, PresentationError
from .groups import FiniteGroup, Perm, closure

logger = structlog.get_logger()

UNDEFINED = -1

Word = Tuple[int, ...]


class _Full(Exception):
    """잉여류 예산 소진 (내부 신호)"""


def _column(letter: int) -> int:
    if letter > 0:
        return 2 * (letter - 1)
    if letter < 0:
        return 2 * (-letter - 1) + 1
    raise PresentationError("Word letter 0 is not a generator")


@dataclass
class CosetTable:
    """
    잉여류 표

    Attributes:
        ngens: 생성원 수
        table: 행 = 잉여류, 열 = 생성원/역원 (압축 후 0..cosets-1)
        status: "complete" 또는 "exhausted"
        max_cosets: 사용한 예산
    """
    ngens: int
    table: List[List[int]]
    status: str
    max_cosets: int
    defined: int = 0
    lookaheads: int = 0
    relators: List[Word] = field(default_factory=list, repr=False)

    @property
    def cosets(self) -> int:
        return len(self.table)

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def require_complete(self) -> "CosetTable":
        if not self.complete:
            raise BudgetExceeded("cosets", self.max_cosets, self.defined, partial=self)
        return self

    def act(self, coset: int, word: Sequence[int]) -> int:
        for letter in word:
            coset = self.table[coset][_column(letter)]
            if coset == UNDEFINED:
                return UNDEFINED
        return coset

    def permutations(self) -> List[Perm]:
        """생성원마다 잉여류 위의 치환 (오른쪽 작용)"""
        self.require_complete()
        return [Perm(tuple(row[2 * g] for row in self.table)) for g in range(self.ngens)]

    def group(self, name: str = "G", config: Optional[KernelConfig] = None) -> FiniteGroup:
        """치환 표현이 생성하는 군 (부분군이 자명하면 정칙 표현)"""
        perms = self.permutations()
        return closure(perms, Perm.identity(self.cosets), name=name, config=config)

    def is_consistent(self) -> bool:
        """모든 잉여류에서 모든 관계자가 닫히는지"""
        if not self.complete:
            return False
        return all(self.act(c, r) == c for c in range(self.cosets) for r in self.relators)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cosets": self.cosets if self.complete else None,
            "defined": self.defined,
            "lookaheads": self.lookaheads,
            "maxCosets": self.max_cosets,
        }

    def __str__(self) -> str:
        return f"CosetTable[status={self.status}, cosets={self.cosets}]"


class _Enumerator:
    """HLT + lookahead 상태 기계"""

    def __init__(self, ngens: int, relators: Sequence[Word], max_cosets: int):
        self.ngens = ngens
        self.width = 2 * ngens
        self.relators = [tuple(_column(x) for x in r) for r in relators if r]
        self.max_cosets = max_cosets
        self.hard_limit = 8 * max_cosets
        self.table: List[List[int]] = [[UNDEFINED] * self.width]
        self.parent: List[int] = [0]
        self.live = 1
        self.lookaheads = 0

    # ----- union-find -----

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def _merge(self, k: int, l: int, queue: List[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        k, l = min(k, l), max(k, l)
        self.parent[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        queue: List[int] = []
        self._merge(a, b, queue)
        head = 0
        while head < len(queue):
            e = queue[head]
            head += 1
            row = self.table[e]
            for x in range(self.width):
                f = row[x]
                if f == UNDEFINED:
                    continue
                xi = x ^ 1
                if self.table[f][xi] == e:
                    self.table[f][xi] = UNDEFINED
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] != UNDEFINED:
                    self._merge(f1, self.table[e1][x], queue)
                elif self.table[f1][xi] != UNDEFINED:
                    self._merge(e1, self.table[f1][xi], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][xi] = e1

    # ----- 정의 / 스캔 -----

    def define(self, c: int, x: int) -> int:
        if self.live >= self.max_cosets or len(self.table) >= self.hard_limit:
            raise _Full()
        d = len(self.table)
        self.table.append([UNDEFINED] * self.width)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def scan(self, c: int, w: Tuple[int, ...], fill: bool) -> None:
        """
        잉여류 c 에서 관계자 w 를 양쪽으로 스캔

        fill=True 면 막힌 곳에 새 잉여류를 정의하고, False 면 그대로 돌아간다 (lookahead).
        """
        f, b = c, c
        i, j = 0, len(w) - 1
        table = self.table
        while True:
            while i <= j and table[f][w[i]] != UNDEFINED:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] != UNDEFINED:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self) -> int:
        """정의 없이 모든 살아있는 잉여류를 스캔; 해소된 잉여류 수를 돌려준다"""
        before = self.live
        self.lookaheads += 1
        for c in range(len(self.table)):
            for w in self.relators:
                if not self.alive(c):
                    break
                self.scan(c, w, fill=False)
        freed = before - self.live
        logger.info("Coset lookahead pass", live=self.live, freed=freed, passes=self.lookaheads)
        return freed

    def _process(self, c: int) -> None:
        for w in self.relators:
            if not self.alive(c):
                return
            self.scan(c, w, fill=True)
        if not self.alive(c):
            return
        for x in range(self.width):
            if self.table[c][x] == UNDEFINED:
                self.define(c, x)

    def run(self, subgroup: Sequence[Tuple[int, ...]]) -> bool:
        """완료하면 True, 예산 소진이면 False"""
        try:
            for h in subgroup:
                self.scan(0, h, fill=True)
        except _Full:
            return False
        c = 0
        while c < len(self.table):
            if self.alive(c):
                try:
                    self._process(c)
                except _Full:
                    if self.lookahead() == 0:
                        return False
                    continue
            c += 1
        return True

    def compact(self) -> List[List[int]]:
        live = [c for c in range(len(self.table)) if self.alive(c)]
        number = {c: k for k, c in enumerate(live)}
        rows = []
        for c in live:
            row = []
            for x in range(self.width):
                d = self.table[c][x]
                row.append(number[self.rep(d)] if d != UNDEFINED else UNDEFINED)
            rows.append(row)
        return rows


def todd_coxeter(
    presentation: Any,
    subgroup: Sequence[Word] = (),
    max_cosets: Optional[int] = None,
    config: Optional[KernelConfig] = None,
) -> CosetTable:
    """
    잉여류 열거

    Args:
        presentation: Presentation (ngens, relators 속성) 또는 (ngens, relators) 튜플
        subgroup: 부분군 생성 단어들 (비어 있으면 자명 부분군)
        max_cosets: 동시에 살아있는 잉여류 한계 (None 이면 config 예산)

    Returns:
        CosetTable. 예산 소진 시 status="exhausted" 인 미완성 표
    """
    config = resolve(config)
    if isinstance(presentation, tuple):
        ngens, relators = presentation
    else:
        ngens, relators = presentation.ngens, presentation.relators  # type: ignore[attr-defined]
    limit = max_cosets or config.budget.max_cosets
    ordered = sorted((tuple(r) for r in relators), key=len)
    engine = _Enumerator(ngens, ordered, limit)
    if engine.width == 0:
        return CosetTable(ngens, [[]], "complete", limit, 1, 0, list(ordered))

    logger.info("Coset enumeration started", generators=ngens, relators=len(ordered), maxCosets=limit)
    done = engine.run([tuple(_column(x) for x in h) for h in subgroup if h])
    if not done:
        logger.warning(
            "Coset enumeration budget exhausted", limit=limit, defined=len(engine.table), live=engine.live
        )
        return CosetTable(
            ngens, engine.table, "exhausted", limit, len(engine.table), engine.lookaheads, list(ordered)
        )

    rows = engine.compact()
    logger.info("Coset enumeration finished", cosets=len(rows), defined=len(engine.table))
    return CosetTable(ngens, rows, "complete", limit, len(engine.table), engine.lookaheads, list(ordered))
