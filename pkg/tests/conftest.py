import numpy as np
import pytest

from popuc.cmv import ParameterArray


def random_array(rng: np.random.Generator, n: int, radius: float = 0.95) -> ParameterArray:
    alphas = radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    return ParameterArray(alphas, np.exp(2j * np.pi * rng.random()))


def unit(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict_line():
    """Record one pass/fail line; they are printed together at the end of the run."""
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
