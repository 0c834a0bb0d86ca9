import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subarea.ingest import Order  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])


def make_orders(rows):
    """``[(id, vol, x, y), ...]`` or ``[(id, vol, weight, x, y), ...]`` to Orders."""
    out = []
    for row in rows:
        if len(row) == 4:
            oid, vol, x, y = row
            w = 0.1
        else:
            oid, vol, w, x, y = row
        out.append(Order(oid, float(vol), float(w), float(x), float(y)))
    return out


@pytest.fixture
def fig2_orders():
    """Seven two-order groups laid out so the splitting runs three levels deep."""
    spots = {"a": (0, 0), "b": (4, 0), "c": (0, 30), "d": (4, 30),
             "e": (200, 15), "f": (300, 0), "g": (300, 30)}
    orders = []
    for key, (x, y) in spots.items():
        orders += make_orders([(key + "1", 1.0, x, y), (key + "2", 1.0, x + 0.1, y + 0.1)])
    return orders
