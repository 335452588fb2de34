import numpy as np
import pytest

from solar_markov.fixture import fixture_path

# Published count matrix for a summer representative day.
REFERENCE_COUNTS = np.array([[52, 1, 0, 0], [1, 38, 1, 0], [0, 1, 5, 1], [0, 0, 1, 79]])

# Per-segment matrices P1..P5 as printed for the summer data.
REFERENCE_SEGMENTS = [
    np.array([[0.9615, 0.0385, 0, 0], [0, 1.0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    np.array([[1, 0, 0, 0], [0, 0.75, 0.25, 0], [0, 0, 0.80, 0.20], [0, 0, 0, 1]]),
    np.eye(4),
    np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0.5, 0.5, 0], [0, 0, 0.0588, 0.9412]]),
    np.array([[1.0, 0, 0, 0], [0.1111, 0.8889, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
]


@pytest.fixture
def reference_counts():
    return REFERENCE_COUNTS.copy()


@pytest.fixture
def reference_segments():
    return [P.copy() for P in REFERENCE_SEGMENTS]


@pytest.fixture(scope="session")
def fixture_csv():
    return str(fixture_path())


@pytest.fixture
def write_csv(tmp_path):
    """Write ``rows`` (list of (timestamp, value) or raw lines) to a CSV file."""

    def _write(rows, name="data.csv", header=False):
        path = tmp_path / name
        lines = ["timestamp,irradiance_wm2"] if header else []
        for row in rows:
            lines.append(row if isinstance(row, str) else f"{row[0]},{row[1]}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
