import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def porter_vectors():
    vectors = []
    with open(FIXTURES / "porter_vectors.txt") as fh:
        for line in fh:
            word, stem = line.split()
            vectors.append((word, stem))
    return vectors


@pytest.fixture(scope="session")
def metric_fixture():
    with open(FIXTURES / "metric_fixture.json") as fh:
        return json.load(fh)


@pytest.fixture
def write_jsonl(tmp_path):
    def _write(name, rows):
        path = tmp_path / name
        path.write_text("".join(json.dumps(r) + "\n" for r in rows))
        return path

    return _write


def make_records(rows):
    """rows: (id, findings, impression, split) tuples -> corpus record dicts."""
    return [
        {"id": rid, "findings": f, "impression": i, "split": s}
        for rid, f, i, s in rows
    ]
