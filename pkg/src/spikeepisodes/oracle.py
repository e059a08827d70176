"""Brute-force reference counts for small instances.

Every constraint-satisfying occurrence is enumerated explicitly; the largest
set of non-overlapped occurrences is then picked by interval scheduling on
the occurrences' index spans (earliest end first, which is optimal because
two occurrences are non-overlapped exactly when their spans are disjoint).
Nothing here shares code with the single-pass counters.
"""

from __future__ import annotations

import math
from collections import defaultdict

from .episodes import PARALLEL, Episode
from .events import EventSequence

__all__ = ["enumerate_occurrences", "max_non_overlapped", "oracle_count"]

MAX_EVENTS = 200
MAX_NODES = 5


def _positions(seq: EventSequence) -> dict[str, list[int]]:
    pos = defaultdict(list)
    for i, typ in enumerate(seq.types):
        pos[typ].append(i)
    return pos


def _serial_occurrences(ep: Episode, seq: EventSequence):
    pos = _positions(seq)
    times = seq.times
    gaps = ep.span_intervals()
    k = len(ep.nodes)

    def extend(chain):
        j = len(chain)
        if j == k:
            yield tuple(chain)
            return
        last = chain[-1]
        lo, hi = gaps[j - 1]
        for p in pos[ep.nodes[j]]:
            if p <= last:
                continue
            d = times[p] - times[last]
            if d > hi:
                break
            if lo < d:
                chain.append(p)
                yield from extend(chain)
                chain.pop()

    for p in pos[ep.nodes[0]]:
        yield from extend([p])


def _parallel_occurrences(ep: Episode, seq: EventSequence, expiry: float):
    pos = _positions(seq)
    times = seq.times
    k = len(ep.nodes)

    def extend(chosen, tmin, tmax):
        j = len(chosen)
        if j == k:
            yield tuple(sorted(chosen))
            return
        for p in pos[ep.nodes[j]]:
            lo, hi = min(tmin, times[p]), max(tmax, times[p])
            if hi - lo <= expiry:
                chosen.append(p)
                yield from extend(chosen, lo, hi)
                chosen.pop()

    yield from extend([], math.inf, -math.inf)


def enumerate_occurrences(ep: Episode, seq: EventSequence, expiry: float | None = None):
    """Yield each occurrence as a sorted tuple of stream indices."""
    if ep.kind == PARALLEL:
        if len(set(ep.nodes)) != len(ep.nodes):
            raise ValueError("parallel episodes with repeated types are not supported")
        yield from _parallel_occurrences(ep, seq, math.inf if expiry is None else expiry)
    else:
        yield from _serial_occurrences(ep, seq)


def max_non_overlapped(spans) -> list[tuple[int, int]]:
    """Largest set of pairwise disjoint ``(first, last)`` index spans."""
    chosen = []
    last_end = -1
    for start, end in sorted(set(spans), key=lambda s: (s[1], s[0])):
        if start > last_end:
            chosen.append((start, end))
            last_end = end
    return chosen


def oracle_count(ep: Episode, seq: EventSequence, expiry: float | None = None) -> int:
    """Exact non-overlapped frequency by exhaustive enumeration.

    ``expiry`` applies to parallel episodes; serial episodes use their own gap
    constraints.  Refuses instances larger than 200 events or 5 nodes.
    """
    if len(seq) > MAX_EVENTS or len(ep.nodes) > MAX_NODES:
        raise ValueError(
            f"instance too large for the oracle ({len(seq)} events, {len(ep.nodes)} nodes)")
    spans = ((occ[0], occ[-1]) for occ in enumerate_occurrences(ep, seq, expiry))
    return len(max_non_overlapped(spans))
