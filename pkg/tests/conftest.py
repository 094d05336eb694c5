import numpy as np
import pytest

from semantic_som import experiments
from semantic_som.som import GridShape, init_network, label_map, train, TrainingSchedule
from semantic_som.stimuli import builtin_glyph_set


@pytest.fixture(scope="session")
def glyphs():
    return builtin_glyph_set(GridShape(20, 20))


@pytest.fixture(scope="session")
def default_map(glyphs):
    """The default 20x20 map trained with seed 0, shared across modules."""
    net = train(init_network(GridShape(), GridShape(), 0), glyphs, TrainingSchedule(seed=0))
    return net, label_map(net, glyphs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def default_config():
    return experiments.ExperimentConfig()


# Acceptance verdicts, one line per criterion, printed after the run.
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
