import numpy as np
import pytest

from minkplane.samples import library, square_norm


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def square():
    return square_norm()


@pytest.fixture(scope="session")
def norms():
    return library()


@pytest.fixture
def verdict(capsys):
    """Print a visible pass/fail line for an acceptance criterion, then assert."""

    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"

    return emit
