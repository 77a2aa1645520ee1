"""
steinberg-kernel - 작은 유한환 위의 Jordan pair, TKK 대수, PE 군, Steinberg 표시 계산 커널
"""

__version__ = "0.1.0"
