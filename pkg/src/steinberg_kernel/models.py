"""
데이터 모델 정의

검증 결과 리포트와 CLI 시나리오 요청 DTO
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


def jsonable(value: Any) -> Any:
    """witness 값을 JSON 직렬화 가능한 형태로 변환"""
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


@dataclass
class CheckResult:
    """
    하나의 항등식/성질에 대한 검사 결과

    instances 는 비교한 인스턴스 수, failures 는 실패 수.
    witnesses 는 처음 몇 개의 실패 인스턴스만 보관한다.
    """
    name: str
    instances: int = 0
    failures: int = 0
    witnesses: List[Any] = field(default_factory=list)
    sampled: bool = False

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        result = {
            "name": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "instances": self.instances,
            "failures": self.failures,
        }
        if self.sampled:
            result["sampled"] = True
        if self.witnesses:
            result["witnesses"] = jsonable(self.witnesses)
        return result


@dataclass
class SuiteReport:
    """
    검증 suite 결과 DTO

    JSON 예시:
    {
        "suite": "jp",
        "subject": "full(F3)",
        "status": "PASS",
        "checks": [{"name": "JP1+", "status": "PASS", "instances": 27, "failures": 0}],
        "data": {"dimPlus": 1}
    }
    """
    suite: str
    subject: str
    checks: List[CheckResult] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    witness_limit: int = 5

    def check(self, name: str) -> CheckResult:
        """이름으로 CheckResult 조회 (없으면 생성)"""
        for item in self.checks:
            if item.name == name:
                return item
        item = CheckResult(name=name)
        self.checks.append(item)
        return item

    def record(self, name: str, ok: bool, witness: Any = None) -> bool:
        """인스턴스 하나를 기록하고 ok 를 그대로 돌려준다"""
        item = self.check(name)
        item.instances += 1
        if not ok:
            item.failures += 1
            if len(item.witnesses) < self.witness_limit:
                item.witnesses.append(witness)
        return ok

    def merge(self, other: "SuiteReport", prefix: str = "") -> None:
        for item in other.checks:
            item.name = prefix + item.name
            self.checks.append(item)
        self.data.update({prefix + k: v for k, v in other.data.items()})

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.checks)

    @property
    def failures(self) -> int:
        return sum(item.failures for item in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "subject": self.subject,
            "status": "PASS" if self.passed else "FAIL",
            "checks": [item.to_dict() for item in self.checks],
            "data": jsonable(self.data),
        }

    def __str__(self) -> str:
        return (
            f"SuiteReport[suite={self.suite}, subject={self.subject}, "
            f"checks={len(self.checks)}, failures={self.failures}]"
        )


@dataclass
class ScenarioConfig:
    """
    CLI 시나리오 요청 DTO

    JSON 예시:
    {
        "command": "verify",
        "suite": "jp",
        "pair": "full",
        "ring": "F3",
        "I": 1,
        "J": 2,
        "out": "report.json"
    }
    """
    command: str
    pair: Optional[str] = None
    ring: str = "F2"
    ring_file: Optional[str] = None
    suite: Optional[str] = None
    group: Optional[str] = None
    presentation: Optional[str] = None
    size_i: int = 1
    size_j: int = 1
    n: int = 2
    max_cosets: Optional[int] = None
    max_group: Optional[int] = None
    out: Optional[str] = None

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        """딕셔너리에서 ScenarioConfig 생성"""
        return cls(
            command=data.get("command", "verify"),
            pair=data.get("pair"),
            ring=data.get("ring", "F2"),
            ring_file=data.get("ringFile"),
            suite=data.get("suite"),
            group=data.get("group"),
            presentation=data.get("presentation"),
            size_i=int(data.get("I", 1)),
            size_j=int(data.get("J", 1)),
            n=int(data.get("n", 2)),
            max_cosets=data.get("maxCosets"),
            max_group=data.get("maxGroup"),
            out=data.get("out"),
        )

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "pair": self.pair,
            "ring": self.ring,
            "ringFile": self.ring_file,
            "suite": self.suite,
            "group": self.group,
            "presentation": self.presentation,
            "I": self.size_i,
            "J": self.size_j,
            "n": self.n,
            "maxCosets": self.max_cosets,
            "maxGroup": self.max_group,
            "out": self.out,
        }

    def __str__(self) -> str:
        return (
            f"ScenarioConfig[command={self.command}, pair={self.pair}, ring={self.ring}, "
            f"suite={self.suite}, group={self.group}, presentation={self.presentation}]"
        )
