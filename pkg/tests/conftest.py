import numpy as np
import pytest

from orbitriple.isometry import Isometry, generate_group, reflection, rotation_quarter, translation


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def trivial(p):
    return generate_group([], p=p)


def z4():
    return generate_group([rotation_quarter()])


def z2_reflection():
    return generate_group([reflection(2, 1)])


def z2_point():
    return generate_group([Isometry([[-1, 0], [0, -1]])])


def free_translation():
    return generate_group([translation(["1/2", "1/2"])])


def t3_reflection():
    return generate_group([reflection(3, 2)])


GROUPS = {
    "t1-trivial": lambda: trivial(1),
    "t2-trivial": lambda: trivial(2),
    "t2-z2-reflection": z2_reflection,
    "t2-z4-rotation": z4,
    "t2-z2-point": z2_point,
    "t2-free-translation": free_translation,
    "t3-z2-reflection": t3_reflection,
}


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {verdict}: {title} ({detail})")
