"""Timestamped event streams: the common input of every miner in the package.

A stream is a time-ordered list of ``(event_type, time)`` pairs.  In spike
data the event type is the neuron (or electrode) label and the time is the
spike time in seconds.

The on-disk format is plain CSV, one ``event_type,time`` pair per line, with
``#`` starting a comment line.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

__all__ = [
    "Event",
    "EventSequence",
    "EventFormatError",
    "parse_events",
    "read_events",
    "write_events",
    "save_events",
    "format_time",
]

HEADER = "# event_type,time (seconds)"


class EventFormatError(ValueError):
    """Raised for malformed spike files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, slots=True)
class Event:
    event_type: str
    time: float

    def __post_init__(self):
        if not isinstance(self.event_type, str) or not self.event_type:
            raise ValueError("event_type must be a non-empty string")
        if not (math.isfinite(self.time) and self.time >= 0):
            raise ValueError(f"event time must be finite and >= 0, got {self.time!r}")


class EventSequence:
    """Immutable, validated, time-ordered stream of events.

    Events with equal timestamps keep their input order.  ``types`` and
    ``times`` expose the stream column-wise, which is what the counting
    engines iterate over.
    """

    __slots__ = ("_events", "_types", "_times", "_alphabet")

    def __init__(self, events: Iterable[Event | tuple[str, float]] = ()):
        evs = []
        prev = -math.inf
        for i, ev in enumerate(events):
            if not isinstance(ev, Event):
                ev = Event(ev[0], float(ev[1]))
            if ev.time < prev:
                raise ValueError(
                    f"timestamps decrease at event {i + 1}: {ev.time!r} < {prev!r}")
            prev = ev.time
            evs.append(ev)
        self._events = tuple(evs)
        self._types = tuple(e.event_type for e in evs)
        self._times = tuple(e.time for e in evs)
        self._alphabet = frozenset(self._types)

    @classmethod
    def from_arrays(cls, types: Iterable[str], times: Iterable[float]) -> EventSequence:
        return cls(zip(types, times))

    @property
    def events(self) -> tuple[Event, ...]:
        return self._events

    @property
    def types(self) -> tuple[str, ...]:
        return self._types

    @property
    def times(self) -> tuple[float, ...]:
        return self._times

    @property
    def alphabet(self) -> frozenset[str]:
        return self._alphabet

    def times_array(self) -> np.ndarray:
        return np.asarray(self._times, dtype=float)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events)

    def __getitem__(self, i):
        return self._events[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventSequence):
            return NotImplemented
        return self._events == other._events

    def __hash__(self) -> int:
        return hash(self._events)

    def __repr__(self) -> str:
        head = ", ".join(f"({e.event_type},{format_time(e.time)})" for e in self._events[:5])
        more = ", ..." if len(self) > 5 else ""
        return f"EventSequence(<{head}{more}>, n={len(self)}, |alphabet|={len(self._alphabet)})"

    def counts(self) -> dict[str, int]:
        """Histogram of event types (the 1-node episode frequencies)."""
        out: dict[str, int] = {}
        for t in self._types:
            out[t] = out.get(t, 0) + 1
        return out

    def duration(self) -> float:
        if not self._events:
            return 0.0
        return self._times[-1] - self._times[0]


def format_time(t: float) -> str:
    # shortest positional repr that parses back to the same float
    return np.format_float_positional(t, unique=True, trim="-")


def parse_events(text: str | TextIO) -> EventSequence:
    """Parse ``event_type,time`` lines into an :class:`EventSequence`.

    Blank lines and lines starting with ``#`` are skipped.  Out-of-order
    timestamps are an error; the stream is never re-sorted silently.

    Raises
    ------
    EventFormatError
        With the 1-based line number of the first bad line.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    events = []
    prev = -math.inf
    for lineno, raw in enumerate(text, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, value = line.rpartition(",")
        label = label.strip()
        if not sep or not label:
            raise EventFormatError(f"expected 'event_type,time', got {line!r}", lineno)
        try:
            t = float(value)
        except ValueError:
            raise EventFormatError(f"bad time value {value.strip()!r}", lineno) from None
        if not (math.isfinite(t) and t >= 0):
            raise EventFormatError(f"time must be finite and >= 0, got {value.strip()!r}", lineno)
        if t < prev:
            raise EventFormatError(f"timestamps decrease ({t!r} after {prev!r})", lineno)
        prev = t
        events.append(Event(label, t))
    return EventSequence(events)


def read_events(path) -> EventSequence:
    with open(path, encoding="utf-8") as fh:
        return parse_events(fh)


def write_events(seq: EventSequence) -> str:
    """Serialize to the spike-file format; ``parse_events`` inverts it exactly."""
    lines = [HEADER]
    lines.extend(f"{e.event_type},{format_time(e.time)}" for e in seq)
    return "\n".join(lines) + "\n"


def save_events(seq: EventSequence, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_events(seq))
