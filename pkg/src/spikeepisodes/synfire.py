"""Synfire-chain discovery: collapse synchronous groups, then look for order.

Frequent parallel episodes found under a short expiry time stand for groups
of neurons that fire together.  Each counted occurrence of such an episode
is replaced in the stream by one composite event (labelled ``[B C D]``) at
the mean time of the occurrence.  Serial mining on the rewritten stream then
finds chains whose nodes may be whole groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .counting import ParallelExpiryCounter
from .episodes import PARALLEL, SERIAL, Episode, IntervalConstraint
from .events import EventSequence
from .mining import MiningConfig, MiningReport, mine

__all__ = [
    "composite_label",
    "rewrite_with_composites",
    "SynfireResult",
    "discover_synfire",
]


def composite_label(ep: Episode) -> str:
    return "[" + " ".join(ep.nodes) + "]"


def rewrite_with_composites(seq: EventSequence, episodes: Sequence[Episode],
                            expiry: float | None) -> EventSequence:
    """Replace counted occurrences of parallel ``episodes`` by composite events.

    Occurrences are the ones the expiry-constrained counter picks.  Events
    outside them are kept as they are.

    Raises
    ------
    ValueError
        If an episode is not parallel or two episodes share an event type.
    """
    episodes = list(dict.fromkeys(episodes))
    seen: dict[str, Episode] = {}
    for ep in episodes:
        if ep.kind != PARALLEL:
            raise ValueError(f"composites are built from parallel episodes, got {ep}")
        for typ in ep.nodes:
            if typ in seen:
                raise ValueError(f"episodes {seen[typ]} and {ep} share event type {typ!r}")
            seen[typ] = ep
    if not episodes or not len(seq):
        return seq
    counter = ParallelExpiryCounter(episodes, expiry, track=True)
    counter.run(seq)
    times = seq.times
    drop = np.zeros(len(seq), dtype=bool)
    added = []
    for ep, occs in counter.occurrences().items():
        label = composite_label(ep)
        for occ in occs:
            drop[list(occ)] = True
            t = round(sum(times[i] for i in occ) / len(occ), 9)
            # keep the composite within the occurrence despite rounding
            t = min(max(t, times[occ[0]]), times[occ[-1]])
            added.append((t, occ[0], label))
    kept = [(times[i], i, seq.types[i]) for i in np.flatnonzero(~drop)]
    merged = sorted(kept + added, key=lambda x: (x[0], x[1]))
    return EventSequence.from_arrays((m[2] for m in merged), (m[0] for m in merged))


@dataclass
class SynfireResult:
    parallel: MiningReport
    composites: list[Episode]
    rewritten: EventSequence
    serial: MiningReport
    notes: list[str] = field(default_factory=list)

    def chains(self) -> list[tuple[Episode, int]]:
        """Largest serial episodes found on the rewritten stream."""
        return self.serial.largest()


def discover_synfire(seq: EventSequence, expiry: float,
                     intervals: Sequence[IntervalConstraint],
                     frequency_threshold: float = 0.01, level_decay: float = 0.9,
                     max_size: int = 10, serial_config: MiningConfig | None = None,
                     engine: str = "auto") -> SynfireResult:
    """Parallel mining with ``expiry``, composite rewriting, then serial mining.

    Every maximal frequent parallel episode of two or more nodes becomes a
    composite.  ``serial_config`` overrides the serial stage settings.
    """
    par_cfg = MiningConfig(frequency_threshold=frequency_threshold, level_decay=level_decay,
                           max_size=max_size, expiry=expiry, engine=engine)
    par = mine(seq, PARALLEL, par_cfg)
    composites = [ep for ep, _ in par.maximal() if ep.size >= 2]
    rewritten = rewrite_with_composites(seq, composites, expiry)
    ser_cfg = serial_config or MiningConfig(
        frequency_threshold=frequency_threshold, level_decay=level_decay, max_size=max_size,
        intervals=list(intervals), engine=engine)
    ser = mine(rewritten, SERIAL, ser_cfg)
    return SynfireResult(par, composites, rewritten, ser)
