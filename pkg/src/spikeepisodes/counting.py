"""Single-pass counting of non-overlapped episode occurrences.

Both counters keep a ``waits`` index from event type to the automaton entries
that currently want an event of that type, and update every waiting entry as
the stream is scanned once.  An occurrence is counted the moment it can be
completed, after which all state of that episode is cleared; taking the
earliest-ending occurrence each time gives the maximum number of
non-overlapped occurrences.

* :class:`ParallelExpiryCounter` counts parallel episodes (distinct event
  types) whose occurrences have span ``<= expiry``.
* :class:`SerialIntervalCounter` counts serial episodes whose consecutive
  events satisfy per-gap ``(low, high]`` constraints.

Pass ``track=True`` to also record the stream indices of every counted
occurrence.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

from .episodes import PARALLEL, SERIAL, Episode
from .events import EventSequence

__all__ = [
    "ParallelExpiryCounter",
    "SerialIntervalCounter",
    "count_parallel_expiry",
    "count_serial_intervals",
    "count_episodes",
]


class _ParallelEntry:
    """One event type of one parallel episode.

    ``waiting`` is True while the current partial occurrence still lacks this
    type; ``init`` is the latest time this type was seen.
    """

    __slots__ = ("auto", "waiting", "init", "index")

    def __init__(self, auto):
        self.auto = auto
        self.waiting = True
        self.init = 0.0
        self.index = -1


class _ParallelAutomaton:
    __slots__ = ("episode", "entries", "seen", "freq", "occurrences")

    def __init__(self, episode: Episode):
        self.episode = episode
        self.entries = [_ParallelEntry(self) for _ in episode.nodes]
        self.seen = 0
        self.freq = 0
        self.occurrences = []


class ParallelExpiryCounter:
    """Counts non-overlapped occurrences of parallel episodes under an expiry time.

    An occurrence needs one event of every type of the episode with all
    pairwise time differences ``<= expiry`` (``None`` means no limit).  When
    the latest event completes the set but some remembered types are older
    than ``t - expiry``, only those types are dropped from the partial
    occurrence; the others may still combine with later events.
    """

    def __init__(self, candidates: Iterable[Episode], expiry: float | None = None,
                 track: bool = False):
        self.expiry = math.inf if expiry is None else float(expiry)
        if not self.expiry > 0:
            raise ValueError(f"expiry must be positive, got {expiry!r}")
        self.track = track
        self.autos: list[_ParallelAutomaton] = []
        self.waits: dict[str, list[_ParallelEntry]] = {}
        for ep in candidates:
            if ep.kind != PARALLEL:
                raise ValueError(f"not a parallel episode: {ep}")
            if len(set(ep.nodes)) != len(ep.nodes):
                raise ValueError(f"repeated event type in parallel episode: {ep}")
            auto = _ParallelAutomaton(ep)
            self.autos.append(auto)
            for typ, entry in zip(ep.nodes, auto.entries):
                self.waits.setdefault(typ, []).append(entry)

    def run(self, seq: EventSequence) -> list[tuple[Episode, int]]:
        expiry = self.expiry
        track = self.track
        waits = self.waits
        for i, (typ, t) in enumerate(zip(seq.types, seq.times)):
            entries = waits.get(typ)
            if not entries:
                continue
            for s in entries:
                auto = s.auto
                if s.waiting:
                    s.waiting = False
                    auto.seen += 1
                s.init = t
                s.index = i
                n = len(auto.entries)
                if auto.seen < n:
                    continue
                for q in auto.entries:
                    if t - q.init > expiry:
                        q.waiting = True
                        auto.seen -= 1
                if auto.seen == n:
                    auto.freq += 1
                    if track:
                        auto.occurrences.append(tuple(sorted(q.index for q in auto.entries)))
                    auto.seen = 0
                    for q in auto.entries:
                        q.waiting = True
        return self.counts()

    def counts(self) -> list[tuple[Episode, int]]:
        return [(a.episode, a.freq) for a in self.autos]

    def occurrences(self) -> dict[Episode, list[tuple[int, ...]]]:
        """Stream indices of each counted occurrence (requires ``track=True``)."""
        return {a.episode: list(a.occurrences) for a in self.autos}


class SerialNode:
    """Node ``index`` of a serial episode's automaton.

    ``tlist`` holds ``(time, stream_index, back)`` for accepted events of this
    node's type, oldest first; ``back`` points at the entry of the previous
    node that made the event acceptable.
    """

    __slots__ = ("auto", "index", "event_type", "visited", "tlist", "prev", "next")

    def __init__(self, auto, index: int, event_type: str):
        self.auto = auto
        self.index = index
        self.event_type = event_type
        self.visited = False
        self.tlist: deque = deque()
        self.prev: SerialNode | None = None
        self.next: SerialNode | None = None


class _SerialAutomaton:
    __slots__ = ("episode", "nodes", "lows", "highs", "freq", "occurrences", "reset_at")

    def __init__(self, episode: Episode):
        self.episode = episode
        gaps = episode.span_intervals()
        self.lows = [g.low for g in gaps]
        self.highs = [g.high for g in gaps]
        self.nodes = [SerialNode(self, j, typ) for j, typ in enumerate(episode.nodes)]
        for a, b in zip(self.nodes, self.nodes[1:]):
            a.next = b
            b.prev = a
        self.freq = 0
        self.occurrences = []
        self.reset_at = -1


class SerialIntervalCounter:
    """Counts non-overlapped occurrences of serial episodes with gap constraints.

    An event of the episode's j-th type is accepted into node j only if node
    j-1 holds some event it can pair with inside the j-1 gap constraint.
    Node j+1 starts waiting once node j has accepted an event.  Entries too
    old to pair with any future event are dropped as the scan goes.  When
    the last node accepts an event the occurrence is counted and the whole
    automaton restarts after that event.
    """

    def __init__(self, candidates: Iterable[Episode], track: bool = False):
        self.track = track
        self.autos: list[_SerialAutomaton] = []
        # dicts used as insertion-ordered sets
        self.waits: dict[str, dict[SerialNode, None]] = {}
        for ep in candidates:
            if ep.kind != SERIAL:
                raise ValueError(f"not a serial episode: {ep}")
            if len(ep.nodes) > 1 and not ep.gaps:
                raise ValueError(f"serial episode without gap constraints: {ep}")
            auto = _SerialAutomaton(ep)
            self.autos.append(auto)
            self._wait(auto.nodes[0])

    def _wait(self, node: SerialNode):
        self.waits.setdefault(node.event_type, {})[node] = None

    def _reset(self, auto: _SerialAutomaton, i: int):
        auto.reset_at = i
        for node in auto.nodes:
            node.visited = False
            node.tlist.clear()
            if node.index:
                self.waits[node.event_type].pop(node, None)

    def run(self, seq: EventSequence) -> list[tuple[Episode, int]]:
        waits = self.waits
        track = self.track
        for i, (typ, t) in enumerate(zip(seq.types, seq.times)):
            bucket = waits.get(typ)
            if not bucket:
                continue
            for node in tuple(bucket):
                auto = node.auto
                if auto.reset_at == i:
                    # this event already closed an occurrence of the episode
                    continue
                j = node.index
                last = len(auto.nodes) - 1
                tlist = node.tlist
                if j < last:
                    high = auto.highs[j]
                    while tlist and t - tlist[0][0] > high:
                        tlist.popleft()
                if j == 0:
                    entry = (t, i, None)
                else:
                    prev = node.prev.tlist
                    high = auto.highs[j - 1]
                    while prev and t - prev[0][0] > high:
                        prev.popleft()
                    # prev is time-ordered, so its head has the widest gap
                    if not prev or t - prev[0][0] <= auto.lows[j - 1]:
                        continue
                    back = prev[0]
                    if track:
                        # innermost partner: the latest one still outside `low`
                        low = auto.lows[j - 1]
                        for cand in reversed(prev):
                            if t - cand[0] > low:
                                back = cand
                                break
                    entry = (t, i, back)
                if j == last:
                    auto.freq += 1
                    if track:
                        occ = []
                        while entry is not None:
                            occ.append(entry[1])
                            entry = entry[2]
                        auto.occurrences.append(tuple(reversed(occ)))
                    self._reset(auto, i)
                    continue
                tlist.append(entry)
                if not node.visited:
                    node.visited = True
                    self._wait(node.next)
        return self.counts()

    def counts(self) -> list[tuple[Episode, int]]:
        return [(a.episode, a.freq) for a in self.autos]

    def occurrences(self) -> dict[Episode, list[tuple[int, ...]]]:
        return {a.episode: list(a.occurrences) for a in self.autos}


def count_parallel_expiry(candidates: Iterable[Episode], seq: EventSequence,
                          expiry: float | None) -> list[tuple[Episode, int]]:
    """Non-overlapped counts of parallel ``candidates`` with span ``<= expiry``."""
    return ParallelExpiryCounter(candidates, expiry).run(seq)


def count_serial_intervals(candidates: Iterable[Episode],
                           seq: EventSequence) -> list[tuple[Episode, int]]:
    """Non-overlapped counts of serial ``candidates`` under their gap constraints."""
    return SerialIntervalCounter(candidates).run(seq)


def count_episodes(candidates: Sequence[Episode], seq: EventSequence,
                   expiry: float | None = None) -> list[tuple[Episode, int]]:
    """Dispatch on the kind of the (homogeneous) candidate list."""
    if not candidates:
        return []
    if candidates[0].kind == PARALLEL:
        return count_parallel_expiry(candidates, seq, expiry)
    return count_serial_intervals(candidates, seq)
