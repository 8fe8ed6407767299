from __future__ import annotations

import pytest

from automset.intervalpq import Graph
from automset.setfamily import ColoredSetFamily

# Cell sizes of the four-set example: "DC" is the cell of elements in D and C only.
VENN4_CELLS = {
    "D": 3, "C": 1, "B": 2, "A": 3,
    "DC": 2, "CA": 2, "DCB": 2, "DCA": 1, "DBA": 2, "CBA": 2,
}

ALPHA_CLIQUES = "abc abd abe bfgh bfhi bfij fkn fln fmn fop fpq fqr fstu fsuv fsvw".split()
ALPHA_LABELS = [chr(ord("a") + i) for i in range(23)]


def venn4_sets() -> dict[str, list[int]]:
    sets: dict[str, list[int]] = {k: [] for k in "ABCD"}
    x = 0
    for sig, count in VENN4_CELLS.items():
        for _ in range(count):
            for name in sig:
                sets[name].append(x)
            x += 1
    return sets


def venn4_family() -> ColoredSetFamily:
    sets = venn4_sets()
    n = sum(VENN4_CELLS.values())
    return ColoredSetFamily.build(n, [(sets[k], 0) for k in "ABCD"])


def alpha_graph() -> Graph:
    return Graph.from_cliques([list(c) for c in ALPHA_CLIQUES], ALPHA_LABELS)


def vid(*names: str) -> list[int]:
    return [ALPHA_LABELS.index(x) for x in names]


@pytest.fixture
def alpha():
    return alpha_graph()


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[1]) if s.split("_")[1].isdigit() else 99):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
