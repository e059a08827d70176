from __future__ import annotations

import math

import pytest
from hypothesis import strategies as st

from spikeepisodes.episodes import parallel, serial
from spikeepisodes.events import EventSequence

SYMBOLS = "ABCDE"

# grid times make ties and boundary gaps common
_grid_time = st.integers(0, 40).map(lambda k: k * 0.5)
_free_time = st.floats(0, 20, allow_nan=False, allow_infinity=False).map(lambda t: round(t, 3))


@st.composite
def event_sequences(draw, symbols=SYMBOLS, max_events=40):
    times = sorted(draw(st.lists(st.one_of(_grid_time, _free_time), max_size=max_events)))
    types = draw(st.lists(st.sampled_from(symbols), min_size=len(times), max_size=len(times)))
    return EventSequence.from_arrays(types, times)


@st.composite
def parallel_episodes(draw, symbols=SYMBOLS, max_size=4):
    k = draw(st.integers(1, min(max_size, len(symbols))))
    return parallel(draw(st.permutations(symbols))[:k])


@st.composite
def interval_constraints(draw):
    low = draw(st.sampled_from([0.0, 0.0, 0.5, 1.0, 2.0]))
    width = draw(st.sampled_from([0.5, 1.0, 2.0, 5.0, math.inf]))
    return (low, low + width)


@st.composite
def serial_episodes(draw, symbols=SYMBOLS, max_size=4):
    k = draw(st.integers(1, max_size))
    nodes = draw(st.lists(st.sampled_from(symbols), min_size=k, max_size=k))
    gaps = draw(st.lists(interval_constraints(), min_size=k - 1, max_size=k - 1))
    return serial(nodes, gaps)


@pytest.fixture
def tiny_stream():
    """A stream with a clean A -> B -> C pattern every second plus clutter."""
    events = []
    for k in range(10):
        t = float(k)
        events += [("A", t), ("B", t + 0.005), ("C", t + 0.010), ("D", t + 0.5)]
    return EventSequence(sorted(events, key=lambda e: e[1]))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
