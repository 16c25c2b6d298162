import pytest

from anytime_miner.closure import expand
from anytime_miner.datamodel import TransactionDatabase, load_database
from anytime_miner.events import CheckpointIssued, ClosedItemsetEmitted, IntervalEmitted

# D1: a b c / a b / a c / a   with a=0, b=1, c=2
D1_TEXT = b"0 1 2\n0 1\n0 2\n0\n"
# D2: two transactions {x, y}, x=0, y=1
D2_TEXT = b"0 1\n0 1\n"


@pytest.fixture
def d1() -> TransactionDatabase:
    return load_database(D1_TEXT)


@pytest.fixture
def d2() -> TransactionDatabase:
    return load_database(D2_TEXT)


class Recorder(list):
    """Event sink that keeps everything it is handed."""

    def __call__(self, event):
        self.append(event)

    @property
    def intervals(self):
        return [e.interval for e in self if isinstance(e, IntervalEmitted)]

    @property
    def closed(self):
        return [e for e in self if isinstance(e, ClosedItemsetEmitted)]

    @property
    def checkpoints(self):
        return [e.checkpoint for e in self if isinstance(e, CheckpointIssued)]


def expanded(intervals):
    """List (with multiplicity) of (itemset, support) for every member of every interval."""
    out = []
    for iv in intervals:
        out.extend((x, iv.support) for x in expand(iv))
    return out


def emitted_until_last_checkpoint(events):
    """Emissions made before the last CheckpointIssued in ``events``."""
    last = max((k for k, e in enumerate(events) if isinstance(e, CheckpointIssued)), default=-1)
    return events[:last + 1]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in sorted(results):
            terminalreporter.write_line(line)
