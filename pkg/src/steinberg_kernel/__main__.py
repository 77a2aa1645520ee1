"""
steinberg-kernel 모듈 직접 실행용
python -m steinberg_kernel
"""

from .main import cli

if __name__ == "__main__":
    cli()
