import csv
from pathlib import Path

import numpy as np
import pytest

from pipvec import Polygon
from pipvec.bench import TimingSample

DATA = Path(__file__).parent / "data"


@pytest.fixture
def unit_square():
    return Polygon.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def square_with_hole():
    return Polygon.from_coords(
        [(0, 0), (1, 0), (1, 1), (0, 1)],
        holes=[[(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)]],
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def load_long_table(name, value_column="seconds"):
    """{(n, algorithm): value} from one of the transcribed published tables."""
    with open(DATA / name, newline="") as fh:
        return {(int(r["n"]), r["algorithm"]): float(r[value_column]) for r in csv.DictReader(fh)}


def load_samples(name):
    return [TimingSample(n, alg, t) for (n, alg), t in load_long_table(name).items()]


def load_published_fits():
    with open(DATA / "published_fits.csv", newline="") as fh:
        return {r["algorithm"]: (float(r["slope"]), float(r["intercept"])) for r in csv.DictReader(fh)}


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request):
    """Record one pass/fail line; all lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(text):
        print(text)
        lines.append(text)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
