import os

import pytest

from phasekey import tables

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def reference():
    """Frozen values from ``tests/data/make_reference.py``, grouped by name."""
    meta, rows = tables.read(os.path.join(DATA, "reference_v1.json"))
    assert meta["format_version"] == 1
    grouped = {}
    for row in rows:
        grouped.setdefault(row["name"], []).append(row)
    return grouped
