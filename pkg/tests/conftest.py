import pytest

from cyclelab.generators import sample_gnp
from cyclelab.rng import RngStream


def gnp(n, p, seed):
    return sample_gnp(n, p, RngStream(seed).generator())


@pytest.fixture
def small_random_graphs():
    """A fixed family of small random graphs over several densities."""
    return [gnp(n, p, 1000 * n + s) for n in (4, 7, 10) for p in (0.2, 0.5, 0.8) for s in range(3)]


def pytest_configure(config):
    config._criterion_lines = {}


class _Verdict:
    def __init__(self, number, lines):
        self.number = number
        self.lines = lines

    def __call__(self, ok, detail=""):
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        self.lines[self.number] = line
        print(line)
        assert ok, line


@pytest.fixture
def verdict(request):
    """Records one PASS/FAIL line for the acceptance test it is used in (number taken from the test name)."""
    number = int(request.node.name.split("_")[2])
    lines = request.config._criterion_lines
    yield _Verdict(number, lines)
    lines.setdefault(number, f"criterion {number}: FAIL  aborted before a verdict")


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_criterion_lines", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
