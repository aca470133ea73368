import pytest

from evenfree.construct import ag_packing, bose, singer_pg
from evenfree.core import CyclicDesign, SetSystem, develop
from evenfree.search import SearchSpec, search_difference_family


def affine_plane_3() -> SetSystem:
    """AG(2,3) as an STS(9), which is not cyclic."""
    pts = {(x, y): 3 * x + y for x in range(3) for y in range(3)}
    lines = set()
    for (x0, y0) in pts:
        for dx, dy in ((0, 1), (1, 0), (1, 1), (1, 2)):
            lines.add(tuple(sorted(pts[((x0 + t * dx) % 3, (y0 + t * dy) % 3)] for t in range(3))))
    return SetSystem(9, 3, tuple(sorted(lines)))


STS13 = develop(CyclicDesign(13, 3, ((0, 1, 4), (0, 2, 7))))
POOL = {
    "fano": develop(CyclicDesign(7, 3, ((0, 1, 3),))),
    "pg23": develop(singer_pg(2, 3)),
    "ag23": develop(ag_packing(2, 3)),
    "ag25": develop(ag_packing(2, 5)),
    "sts9": affine_plane_3(),
    "sts13": STS13,
    "sts15": develop(bose(5)),
    "ag33": develop(ag_packing(3, 3)),
}


def _mutate(s: SetSystem, i: int, pos: int, new: int) -> SetSystem | None:
    b = list(s.blocks[i])
    if new in b:
        return None
    b[pos] = new
    blocks = list(s.blocks)
    blocks[i] = tuple(sorted(b))
    if len(set(blocks)) != len(blocks):
        return None
    return SetSystem(s.v, s.k, tuple(blocks), "packing", validate=False)


def oracle_corpus() -> list[tuple[str, SetSystem]]:
    """Fixed corpus of systems with at most 26 blocks, mutated negatives included."""
    out = []
    for name in ("fano", "pg23", "ag23", "ag25", "sts9", "sts13"):
        out.append((name, POOL[name]))
    for name in ("fano", "pg23", "sts9", "sts13"):
        s = POOL[name]
        out.append((name + "-drop1", SetSystem(s.v, s.k, s.blocks[1:], "packing")))
        out.append((name + "-drop-half", SetSystem(s.v, s.k, s.blocks[::2], "packing")))
    for name, i, pos in (("fano", 0, 2), ("pg23", 4, 0), ("sts9", 3, 1), ("sts13", 7, 2), ("ag25", 0, 1), ("ag23", 2, 0)):
        s = POOL[name]
        m = next(m for new in range(s.v) if (m := _mutate(s, i, pos, new)) is not None)
        out.append((f"{name}-mut", m))
    for name in ("sts15", "ag33"):
        s = POOL[name]
        out.append((name + "-first26", SetSystem(s.v, s.k, s.blocks[:26], "packing")))
    return out


@pytest.fixture(scope="session")
def fano() -> CyclicDesign:
    return CyclicDesign(7, 3, ((0, 1, 3),))


@pytest.fixture(scope="session")
def fano_blocks(fano) -> SetSystem:
    return develop(fano)


@pytest.fixture(scope="session")
def sts19() -> CyclicDesign:
    res = search_difference_family(SearchSpec(19, 3, 5, limit=1))
    assert res.status == "found"
    return res.designs[0]


# ---------------------------------------------------------------- acceptance report

_ACCEPTANCE: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _ACCEPTANCE[report.nodeid] = (report.outcome, report.duration)
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _ACCEPTANCE[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (outcome, duration) in _ACCEPTANCE.items():
        name = nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  ({duration:.2f}s)")
