import pytest

from cdiff.gfpoly import is_prime

# every prime power q <= 343, as (p, n)
SMALL_FIELDS = sorted(
    ((p, n) for p in range(2, 344) if is_prime(p) for n in range(1, 9) if p ** n <= 343),
    key=lambda pn: pn[0] ** pn[1],
)


def fields_upto(qmax):
    return [(p, n) for p, n in SMALL_FIELDS if p ** n <= qmax]


ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LOG:
        terminalreporter.write_line(line)


@pytest.fixture
def gf9():
    from cdiff.field import build_field
    return build_field(3, 2)
