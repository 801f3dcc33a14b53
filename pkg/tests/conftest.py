import pytest

from diagram_sos.algebra import parse_algebra
from diagram_sos.syntax import circ_signature


@pytest.fixture(scope="session")
def z2():
    return parse_algebra("zmod:2")


@pytest.fixture(scope="session")
def sig_z2(z2):
    return circ_signature(z2)


@pytest.fixture(scope="session")
def sig_nat6():
    return circ_signature(parse_algebra("nat:6"))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
