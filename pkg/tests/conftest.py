import random
from fractions import Fraction

import pytest

from tropiso.core import NEG_INF
from tropiso.kernel import Kernel

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(num, True)
        _ACCEPTANCE[num] = prev and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"ACCEPTANCE {num:2d} {'PASS' if _ACCEPTANCE[num] else 'FAIL'}")


def random_kernel(rng: random.Random, max_rows=6, max_cols=6, lo=-5, hi=5, p_neg_inf=0.2,
                  rows=None, cols=None) -> Kernel:
    """Random kernel on ``{lo..hi} u {-inf}``, resampled until rows and columns are proper."""
    n = rows or rng.randint(1, max_rows)
    m = cols or rng.randint(1, max_cols)
    while True:
        entries = [[NEG_INF if rng.random() < p_neg_inf else Fraction(rng.randint(lo, hi))
                    for _ in range(m)] for _ in range(n)]
        try:
            return Kernel.from_rows(entries)
        except ValueError:
            continue


def random_vector(rng: random.Random, points, lo=-5, hi=5, p_neg=0.1, p_pos=0.1):
    from tropiso.core import POS_INF, TropVector
    vals = []
    for _ in points:
        r = rng.random()
        vals.append(NEG_INF if r < p_neg else POS_INF if r < p_neg + p_pos else Fraction(rng.randint(lo, hi)))
    return TropVector(tuple(points), tuple(vals))


def random_coefficients(rng: random.Random, n, lo=-5, hi=5, p_neg=0.2):
    return tuple(NEG_INF if rng.random() < p_neg else Fraction(rng.randint(lo, hi)) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def paper():
    from tropiso.paper_examples import kernel
    return kernel
