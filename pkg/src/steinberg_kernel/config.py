"""
설정 관리 모듈

YAML 파일 또는 환경 변수에서 열거 예산, 샘플링, 로깅 설정을 로드
"""

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError


@dataclass
class BudgetConfig:
    """열거 예산 (초과 시 BudgetExceeded)"""
    max_group_elements: int = 1_000_000
    max_relation_instances: int = 10_000_000
    max_ring_elements: int = 1 << 16
    max_module_elements: int = 1 << 16
    max_cosets: int = 100_000
    idempotent_search_cap: int = 4096


@dataclass
class SamplingConfig:
    exhaustive_cap: int = 200_000
    samples: int = 10_000
    seed: int = 20240601
    witness_limit: int = 5


@dataclass
class LoggingConfig:
    level: str = "INFO"
    renderer: str = "console"  # "console" | "json"


@dataclass
class ReportConfig:
    schema_version: int = 1
    indent: int = 2


@dataclass
class KernelConfig:
    """커널 통합 설정"""
    budget: BudgetConfig = field(default_factory=BudgetConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    report: ReportConfig = field(default_factory=ReportConfig)

    @classmethod
    def from_dict(cls, data: dict) -> "KernelConfig":
        """딕셔너리에서 설정 로드"""
        config = cls()

        try:
            if "budget" in data:
                config.budget = BudgetConfig(**data["budget"])
            if "sampling" in data:
                config.sampling = SamplingConfig(**data["sampling"])
            if "logging" in data:
                config.logging = LoggingConfig(**data["logging"])
            if "report" in data:
                config.report = ReportConfig(**data["report"])
        except TypeError as e:
            raise ConfigError(f"Unknown configuration key: {e}") from e

        config.validate()
        return config

    @classmethod
    def from_yaml(cls, path: str) -> "KernelConfig":
        """YAML 파일에서 설정 로드"""
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
        return cls.from_dict(data or {})

    @classmethod
    def from_env(cls) -> "KernelConfig":
        """환경 변수에서 설정 로드"""
        config = cls()

        # Budget
        config.budget.max_group_elements = int(
            os.getenv("STEINBERG_KERNEL_MAX_GROUP", config.budget.max_group_elements)
        )
        config.budget.max_relation_instances = int(
            os.getenv("STEINBERG_KERNEL_MAX_INSTANCES", config.budget.max_relation_instances)
        )
        config.budget.max_cosets = int(
            os.getenv("STEINBERG_KERNEL_MAX_COSETS", config.budget.max_cosets)
        )

        # Sampling
        config.sampling.samples = int(os.getenv("STEINBERG_KERNEL_SAMPLES", config.sampling.samples))
        config.sampling.seed = int(os.getenv("STEINBERG_KERNEL_SEED", config.sampling.seed))

        # Logging
        config.logging.level = os.getenv("STEINBERG_KERNEL_LOG_LEVEL", config.logging.level)
        config.logging.renderer = os.getenv("STEINBERG_KERNEL_LOG_RENDERER", config.logging.renderer)

        return config

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> "KernelConfig":
        """설정 로드 (YAML 파일 우선, 환경 변수 fallback)"""
        # 1. 명시적 경로
        if config_path and Path(config_path).exists():
            config = cls.from_yaml(config_path)
        # 2. 환경 변수로 지정된 경로
        elif os.getenv("STEINBERG_KERNEL_CONFIG") and Path(
            os.getenv("STEINBERG_KERNEL_CONFIG", "")
        ).exists():
            config = cls.from_yaml(os.getenv("STEINBERG_KERNEL_CONFIG", ""))
        # 3. 기본 경로
        elif Path("config.yaml").exists():
            config = cls.from_yaml("config.yaml")
        # 4. 환경 변수에서 로드
        else:
            config = cls.from_env()

        # 환경 변수로 오버라이드 (우선순위 높음)
        env_config = cls.from_env()

        if os.getenv("STEINBERG_KERNEL_MAX_COSETS"):
            config.budget.max_cosets = env_config.budget.max_cosets
        if os.getenv("STEINBERG_KERNEL_SEED"):
            config.sampling.seed = env_config.sampling.seed
        if os.getenv("STEINBERG_KERNEL_LOG_LEVEL"):
            config.logging.level = env_config.logging.level

        config.validate()
        return config

    def validate(self) -> None:
        """예산과 샘플 수는 양수여야 한다"""
        for section in (self.budget, self.sampling):
            for name, value in asdict(section).items():
                if name == "seed":
                    continue
                if not isinstance(value, int) or value <= 0:
                    raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.logging.renderer not in ("console", "json"):
            raise ConfigError(f"Unsupported log renderer: {self.logging.renderer}")

    def to_dict(self) -> dict:
        """리포트 포함용 딕셔너리 변환"""
        return asdict(self)


def resolve(config: Optional[KernelConfig]) -> KernelConfig:
    """None 이면 기본 설정"""
    return config if config is not None else KernelConfig()
