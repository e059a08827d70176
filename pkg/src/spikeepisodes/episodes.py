"""Serial and parallel episodes, the subepisode relation and candidate generation.

Notation (used for display and for parsing back):

* parallel: ``(A B C)``; node labels are kept sorted
* serial with gap constraints: ``A -(0.004,0.006]-> B -(0.002,0.004]-> C``
* serial without constraints: ``A -> B -> C``

A gap constraint ``(low, high]`` is satisfied by a time difference ``d`` iff
``low < d <= high``.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .events import format_time

__all__ = [
    "SERIAL",
    "PARALLEL",
    "IntervalConstraint",
    "Episode",
    "serial",
    "parallel",
    "parse_episode",
    "parse_interval",
    "parse_interval_set",
    "validate_interval_set",
    "is_subepisode",
    "gen_candidates_parallel",
    "gen_candidates_serial_interval",
    "seed_serial_candidates",
]

SERIAL = "serial"
PARALLEL = "parallel"
KINDS = (SERIAL, PARALLEL)


class IntervalConstraint(NamedTuple):
    low: float
    high: float

    def check(self):
        if not (0 <= self.low < self.high):
            raise ValueError(f"interval needs 0 <= low < high, got ({self.low}, {self.high}]")
        return self

    def contains(self, d: float) -> bool:
        return self.low < d <= self.high

    def __str__(self) -> str:
        hi = "inf" if math.isinf(self.high) else format_time(self.high)
        return f"({format_time(self.low)},{hi}]"


UNCONSTRAINED = IntervalConstraint(0.0, math.inf)


@dataclass(frozen=True, slots=True)
class Episode:
    """An episode over event types.

    ``gaps`` holds one :class:`IntervalConstraint` per consecutive node pair of
    a serial episode, or is empty (parallel episodes, and serial episodes
    whose gaps are unconstrained).
    """

    kind: str
    nodes: tuple[str, ...]
    gaps: tuple[IntervalConstraint, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown episode kind {self.kind!r}")
        if not self.nodes:
            raise ValueError("episode needs at least one node")
        if self.kind == PARALLEL:
            if self.gaps:
                raise ValueError("parallel episodes carry no gap constraints")
            if len(set(self.nodes)) != len(self.nodes):
                raise ValueError(f"parallel episode repeats an event type: {self.nodes}")
            if list(self.nodes) != sorted(self.nodes):
                raise ValueError("parallel episode nodes must be sorted; use parallel()")
        elif self.gaps and len(self.gaps) != len(self.nodes) - 1:
            raise ValueError(
                f"serial episode with {len(self.nodes)} nodes needs "
                f"{len(self.nodes) - 1} gaps, got {len(self.gaps)}")

    @property
    def size(self) -> int:
        return len(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def is_serial(self) -> bool:
        return self.kind == SERIAL

    def gap(self, j: int) -> IntervalConstraint:
        """Constraint between node ``j`` and ``j + 1`` (0-based)."""
        return self.gaps[j] if self.gaps else UNCONSTRAINED

    def prefix(self) -> Episode:
        """Drop the last node (and the last gap)."""
        return Episode(self.kind, self.nodes[:-1], self.gaps[:-1])

    def suffix(self) -> Episode:
        """Drop the first node (and the first gap)."""
        return Episode(self.kind, self.nodes[1:], self.gaps[1:])

    def span_intervals(self) -> tuple[IntervalConstraint, ...]:
        return tuple(self.gap(j) for j in range(len(self.nodes) - 1))

    def __str__(self) -> str:
        if self.kind == PARALLEL:
            return "(" + " ".join(self.nodes) + ")"
        if not self.gaps:
            return " -> ".join(self.nodes)
        parts = [self.nodes[0]]
        for g, node in zip(self.gaps, self.nodes[1:]):
            parts.append(f"-{g}->")
            parts.append(node)
        return " ".join(parts)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "nodes": list(self.nodes)}
        if self.gaps:
            d["gaps"] = [[g.low, g.high] for g in self.gaps]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Episode:
        gaps = tuple(IntervalConstraint(float(lo), float(hi)) for lo, hi in d.get("gaps", ()))
        if d["kind"] == PARALLEL:
            return parallel(d["nodes"])
        return Episode(SERIAL, tuple(d["nodes"]), gaps)


def serial(nodes: Sequence[str], gaps: Iterable = ()) -> Episode:
    """Build a serial episode; ``gaps`` items may be ``(low, high)`` pairs."""
    gaps = tuple(IntervalConstraint(float(lo), float(hi)).check() for lo, hi in gaps)
    return Episode(SERIAL, tuple(nodes), gaps)


def parallel(nodes: Iterable[str]) -> Episode:
    return Episode(PARALLEL, tuple(sorted(nodes)))


_GAP_RE = re.compile(r"\s*-\(\s*([^,\]]+)\s*,\s*([^\]]+)\s*\]->\s*")


def parse_episode(text: str) -> Episode:
    """Inverse of ``str(episode)``."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")") and "->" not in text:
        return parallel(text[1:-1].split())
    if _GAP_RE.search(text):
        parts = _GAP_RE.split(text)
        nodes = parts[0::3]
        gaps = [(float(lo), float(hi)) for lo, hi in zip(parts[1::3], parts[2::3])]
        return serial([n.strip() for n in nodes], gaps)
    return serial([n.strip() for n in text.split("->")])


def parse_interval(text: str) -> IntervalConstraint:
    """Parse ``"0.004-0.006"`` or ``"(0.004,0.006]"`` into a constraint."""
    s = text.strip()
    if s.startswith("("):
        lo, _, hi = s.strip("(]").partition(",")
    else:
        lo, _, hi = s.partition("-")
    try:
        return IntervalConstraint(float(lo), float(hi)).check()
    except ValueError as exc:
        raise ValueError(f"bad interval {text!r}: {exc}") from None


def validate_interval_set(intervals: Iterable[IntervalConstraint]) -> list[IntervalConstraint]:
    """Check the candidate intervals are pairwise non-overlapping; return them sorted."""
    out = sorted(IntervalConstraint(*iv).check() for iv in intervals)
    if not out:
        raise ValueError("empty interval set")
    for a, b in zip(out, out[1:]):
        if b.low < a.high:
            raise ValueError(f"intervals {a} and {b} overlap")
    return out


def parse_interval_set(text: str) -> list[IntervalConstraint]:
    """``"0-0.002,0.002-0.004"`` -> validated, sorted list of constraints."""
    return validate_interval_set(parse_interval(p) for p in text.split(",") if p.strip())


def is_subepisode(beta: Episode, alpha: Episode) -> bool:
    """True if ``beta``'s event types embed in ``alpha``.

    Serial episodes must embed as an order-preserving subsequence; parallel
    ones as a sub-multiset.  Gap constraints are ignored.
    """
    if beta.kind != alpha.kind:
        raise ValueError(f"cannot compare {beta.kind} with {alpha.kind} episodes")
    if beta.kind == PARALLEL:
        return set(beta.nodes) <= set(alpha.nodes)
    it = iter(alpha.nodes)
    return all(any(b == a for a in it) for b in beta.nodes)


def gen_candidates_parallel(frequent: Iterable[Episode]) -> list[Episode]:
    """Apriori join of k-node parallel episodes into (k+1)-node candidates.

    Two episodes sharing their first k-1 (sorted) nodes are joined; the result
    is kept only if every k-node subepisode is in ``frequent``.
    """
    freq = sorted({e.nodes for e in frequent})
    if not freq:
        return []
    k = len(freq[0])
    if any(len(f) != k for f in freq):
        raise ValueError("all frequent episodes must have the same size")
    known = set(freq)
    blocks: dict[tuple[str, ...], list[str]] = defaultdict(list)
    for nodes in freq:
        blocks[nodes[:-1]].append(nodes[-1])
    out = []
    for head, tails in blocks.items():
        for x, y in combinations(tails, 2):
            cand = head + (x, y)
            if k == 1 or all(cand[:i] + cand[i + 1:] in known for i in range(k - 1)):
                out.append(Episode(PARALLEL, cand))
    return out


def gen_candidates_serial_interval(frequent: Iterable[Episode],
                                   distinct: bool = False) -> list[Episode]:
    """Join k-node serial episodes whose (nodes, gaps) overlap by k-1 nodes.

    ``alpha`` and ``beta`` combine when dropping ``alpha``'s first node equals
    dropping ``beta``'s last node (event types and the k-2 shared gaps).  The
    new episode is ``alpha`` extended by ``beta``'s last node and last gap.
    No other subepisodes are checked: under gap constraints only these
    prefix/suffix subepisodes are guaranteed to be at least as frequent.
    With ``distinct`` no candidate repeats an event type.
    """
    freq = list(dict.fromkeys(frequent))
    by_prefix: dict[tuple, list[Episode]] = defaultdict(list)
    for b in freq:
        by_prefix[(b.nodes[:-1], b.gaps[:-1])].append(b)
    out = []
    for a in freq:
        for b in by_prefix.get((a.nodes[1:], a.gaps[1:]), ()):
            if distinct and b.nodes[-1] in a.nodes:
                continue
            gaps = a.gaps + b.gaps[-1:] if a.gaps else ()
            out.append(Episode(SERIAL, a.nodes + b.nodes[-1:], gaps))
    return out


def seed_serial_candidates(singletons: Iterable[str],
                           intervals: Sequence[IntervalConstraint] | None,
                           distinct: bool = False) -> list[Episode]:
    """All 2-node serial candidates: every ordered pair of frequent event types
    (``A -> A`` too unless ``distinct``) crossed with every candidate interval."""
    types = sorted(set(singletons))
    pairs = [(a, b) for a in types for b in types if not (distinct and a == b)]
    if not intervals:
        return [Episode(SERIAL, pair) for pair in pairs]
    return [Episode(SERIAL, pair, (iv,)) for pair in pairs for iv in intervals]
