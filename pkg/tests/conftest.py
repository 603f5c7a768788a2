from __future__ import annotations

import math

import numpy as np
import pytest

from alcove_mcf import alcove_of, preset

# one parameter choice per catalog action, as used throughout the suite
CASES = [
    ("sp-isotropy", {"n": 3}),
    ("so2n-on-su2n", {"n": 3}),
    ("supq-isotropy", {"p": 2, "q": 5}),
    ("supp-isotropy", {"p": 2}),
    ("sopq-hermann", {"p": 2, "q": 4}),
    ("so2p-hermann", {"p": 2}),
]

# a few higher-rank choices for structural checks
LARGE_CASES = [
    ("sp-isotropy", {"n": 5}),
    ("so2n-on-su2n", {"n": 4}),
    ("supq-isotropy", {"p": 3, "q": 5}),
    ("supp-isotropy", {"p": 3}),
    ("sopq-hermann", {"p": 3, "q": 5}),
    ("so2p-hermann", {"p": 3}),
]

PI = math.pi


def case_id(case) -> str:
    name, params = case
    return name + "-" + "-".join(f"{k}{v}" for k, v in params.items())


@pytest.fixture(params=CASES, ids=case_id)
def case(request):
    name, params = request.param
    data = preset(name, params)
    return data, alcove_of(data)


@pytest.fixture(params=CASES + LARGE_CASES, ids=case_id)
def any_case(request):
    name, params = request.param
    data = preset(name, params)
    return data, alcove_of(data)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def stratum_on(A, *labels):
    """The 1-D (or lower) stratum whose facet walls carry exactly these descriptions."""
    want = set(labels)
    for dim in range(A.rank):
        for s in A.strata(dim):
            have = {A.walls[i].describe() for i in s.active if A.walls[i].facet}
            if have == want:
                return s
    raise LookupError(labels)


# -- acceptance reporting --------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, checks: list[tuple[str, bool]]) -> None:
    """Print one PASS/FAIL line for a criterion and fail the test if any check failed."""
    failed = [label for label, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {number} [{title}]: {status} ({len(checks) - len(failed)}/{len(checks)} checks)"
    if failed:
        line += "; failing: " + "; ".join(failed)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
