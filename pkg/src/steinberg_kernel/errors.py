"""
예외 정의

검증 suite 는 실패를 예외가 아닌 SuiteReport 로 돌려주고,
생성자와 예산 초과만 예외로 알린다.
"""

from typing import Any, Optional


class KernelError(Exception):
    """모든 커널 예외의 기반 클래스"""


class RingError(KernelError):
    """계수환 생성/연산 오류"""


class MatrixError(KernelError):
    """행렬 형태 불일치, 비가역 행렬 등"""


class RootSystemError(KernelError):
    """근계, 3-grading, 근 관계 분류 오류"""


class JordanError(KernelError):
    """Jordan pair 생성, 부호 불일치, ideal 검증 실패"""


class GradingError(KernelError):
    """root grading 생성/검증 실패"""


class TKKError(KernelError):
    """TKK 대수 생성 또는 자기동형 검증 실패"""


class PresentationError(KernelError):
    """presentation, 단어, coset table 오류"""


class ConfigError(KernelError):
    """설정 값 오류"""


class SelectorError(KernelError):
    """CLI selector 를 zoo 항목으로 해석할 수 없음"""


class BudgetExceeded(KernelError):
    """
    열거 예산 초과

    Args:
        what: 초과된 예산 이름
        limit: 설정된 한계
        reached: 중단 시점까지 도달한 크기
    """

    def __init__(self, what: str, limit: int, reached: Optional[int] = None, partial: Any = None):
        self.what = what
        self.limit = limit
        self.reached = reached
        self.partial = partial
        super().__init__(f"{what} budget exceeded (limit={limit}, reached={reached})")
