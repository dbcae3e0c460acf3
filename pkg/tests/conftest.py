from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# reference optimal ensembles at degree 2 and the harmonic coefficient matrix
HARMONIC_K2_POINTS = np.array([
    [-0.9578, 0.1971, 0.2092],
    [0.5136, -0.7161, 0.4726],
    [0.2730, -0.7662, -0.5817],
    [-0.6364, -0.2018, -0.7445],
    [0.2471, 0.1207, -0.9614],
])

MONOGENIC_K2_POINTS = np.array([
    [0.4407, -0.1155, 0.8902],
    [-0.3322, -0.7521, 0.5692],
    [0.5407, -0.2516, -0.8027],
])

_D, _P, _Q = 0.4830, 0.0473, 0.0786
HARMONIC_K2_A = np.array([
    [_D, _P, _P, _Q, _Q],
    [_P, _D, _Q, _P, _Q],
    [_P, _Q, _D, _Q, _P],
    [_Q, _P, _Q, _D, _P],
    [_Q, _Q, _P, _P, _D],
])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unit(rng, n):
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record and print one pass/fail line for an acceptance criterion."""

    def _report(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
