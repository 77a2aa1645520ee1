"""공용 fixture"""

import pytest
import structlog

from steinberg_kernel import zoo
from steinberg_kernel.config import KernelConfig


@pytest.fixture
def config() -> KernelConfig:
    """작은 표본 수의 기본 설정"""
    cfg = KernelConfig()
    cfg.sampling.samples = 500
    cfg.sampling.exhaustive_cap = 50_000
    return cfg


@pytest.fixture
def f2():
    return zoo.ring("F2")


@pytest.fixture
def f3():
    return zoo.ring("F3")


@pytest.fixture(autouse=True)
def _reset_structlog():
    """CLI 테스트가 pytest 캡처 스트림에 묶은 structlog 설정을 테스트 후 복원"""
    yield
    structlog.reset_defaults()
