import numpy as np
import pytest
from hypothesis import strategies as st

from nncond import TrainingSet


@pytest.fixture
def line4():
    """The 1-D set A:{0,1}, B:{3,4}."""
    return TrainingSet.from_labels([[0.0], [1.0], [3.0], [4.0]], ["A", "A", "B", "B"])


@pytest.fixture
def pair():
    return TrainingSet.from_labels([[0.0, 0.0], [1.0, 0.0]], ["a", "b"])


@st.composite
def training_sets(draw, max_n=60, max_d=5, classes=(2, 3, 4)):
    """Random valid training sets on a small integer grid, so exact ties are common."""
    d = draw(st.integers(1, max_d))
    c = draw(st.sampled_from(classes))
    n = draw(st.integers(c, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 8, size=(n, d)).astype(float)
    # Labels are drawn per grid cell, so no coincident enemy pair exists.
    _, inverse = np.unique(pts, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    cell_label = rng.integers(0, c, size=inverse.max() + 1)
    if np.unique(cell_label[inverse]).size < 2:
        if cell_label.size > 1:
            cell_label[1:] = (cell_label[0] + 1) % c
        else:
            pts[-1] += 0.5
            inverse[-1] = 1
            cell_label = np.append(cell_label, (cell_label[0] + 1) % c)
    labels = cell_label[inverse]
    return TrainingSet.from_labels(pts, labels.tolist())


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
