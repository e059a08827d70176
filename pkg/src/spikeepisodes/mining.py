"""Level-wise discovery of frequent episodes.

Level 1 is the event-type histogram.  Each further level generates
candidates from the previous level's frequent episodes (apriori join for
parallel episodes, prefix/suffix join for serial ones), counts them in one
pass over the stream and keeps the frequent ones.  The absolute threshold at
size N is ``ceil(n * frequency_threshold * level_decay**(N-1))`` for a stream
of ``n`` events, and never below ``min_count`` (default one occurrence).
Serial candidates repeat no event type unless ``distinct_types`` is off.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .batch import EncodedSequence, batch_counts
from .counting import ParallelExpiryCounter, SerialIntervalCounter
from .episodes import (
    PARALLEL,
    SERIAL,
    Episode,
    IntervalConstraint,
    gen_candidates_parallel,
    gen_candidates_serial_interval,
    seed_serial_candidates,
    validate_interval_set,
)
from .events import EventSequence, format_time

__all__ = [
    "MiningConfig",
    "LevelResult",
    "MiningReport",
    "FrequentEpisodeSet",
    "level_threshold",
    "count_candidates",
    "mine",
]

# above this many candidates the compiled per-episode counter is used
BATCH_MIN_CANDIDATES = 2000


@dataclass
class MiningConfig:
    frequency_threshold: float = 0.01
    level_decay: float = 0.9
    max_size: int = 10
    expiry: float | None = None
    intervals: list[IntervalConstraint] | None = None
    engine: str = "auto"
    workers: int = 1
    min_count: int = 1
    distinct_types: bool = True

    def __post_init__(self):
        if not 0 <= self.frequency_threshold <= 1:
            raise ValueError("frequency_threshold must lie in [0, 1]")
        if not 0 < self.level_decay <= 1:
            raise ValueError("level_decay must lie in (0, 1]")
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")
        if self.expiry is not None and not self.expiry > 0:
            raise ValueError("expiry must be positive")
        if self.intervals is not None:
            self.intervals = validate_interval_set(self.intervals)
        if self.engine not in ("auto", "waits", "batch"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["intervals"] = None if self.intervals is None else [[iv.low, iv.high] for iv in self.intervals]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> MiningConfig:
        d = dict(d)
        if d.get("intervals") is not None:
            d["intervals"] = [IntervalConstraint(*iv) for iv in d["intervals"]]
        return cls(**d)


def level_threshold(n_events: int, config: MiningConfig, size: int) -> int:
    raw = n_events * config.frequency_threshold * config.level_decay ** (size - 1)
    # guard against 250.00000000000003 -> 251
    return max(config.min_count, math.ceil(raw - 1e-9))


@dataclass
class LevelResult:
    size: int
    threshold: int
    n_candidates: int
    elapsed: float
    episodes: list[tuple[Episode, int]] = field(default_factory=list)


@dataclass
class MiningReport:
    """Frequent episodes per size plus the configuration that produced them."""

    kind: str
    config: MiningConfig
    n_events: int
    levels: list[LevelResult] = field(default_factory=list)
    elapsed: float = 0.0

    def frequent(self, size: int) -> list[tuple[Episode, int]]:
        for lev in self.levels:
            if lev.size == size:
                return list(lev.episodes)
        return []

    def all_frequent(self) -> list[tuple[Episode, int]]:
        return [pair for lev in self.levels for pair in lev.episodes]

    @property
    def largest_size(self) -> int:
        sizes = [lev.size for lev in self.levels if lev.episodes]
        return max(sizes, default=0)

    def largest(self) -> list[tuple[Episode, int]]:
        return self.frequent(self.largest_size)

    def maximal(self) -> list[tuple[Episode, int]]:
        """Frequent episodes that are not the prefix or subset of a larger frequent one."""
        from .episodes import is_subepisode

        out = []
        levels = [lev for lev in self.levels if lev.episodes]
        for i, lev in enumerate(levels):
            bigger = [ep for later in levels[i + 1:] for ep, _ in later.episodes]
            for ep, n in lev.episodes:
                if not any(is_subepisode(ep, b) for b in bigger):
                    out.append((ep, n))
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config.to_dict(),
            "n_events": self.n_events,
            "elapsed": self.elapsed,
            "levels": [
                {
                    "size": lev.size,
                    "threshold": lev.threshold,
                    "n_candidates": lev.n_candidates,
                    "elapsed": lev.elapsed,
                    "episodes": [dict(ep.to_dict(), count=n, text=str(ep)) for ep, n in lev.episodes],
                }
                for lev in self.levels
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> MiningReport:
        levels = [
            LevelResult(lev["size"], lev["threshold"], lev["n_candidates"], lev["elapsed"],
                        [(Episode.from_dict(e), e["count"]) for e in lev["episodes"]])
            for lev in d["levels"]
        ]
        return cls(d["kind"], MiningConfig.from_dict(d["config"]), d["n_events"], levels,
                   d.get("elapsed", 0.0))

    @classmethod
    def from_json(cls, text: str) -> MiningReport:
        return cls.from_dict(json.loads(text))

    def format_table(self, max_rows: int = 8) -> str:
        """One row in the layout: constraint, threshold, time, size(count), patterns."""
        if self.kind == PARALLEL:
            constraint = "inf" if self.config.expiry is None else format_time(self.config.expiry)
        else:
            constraint = ",".join(f"{format_time(iv.low)}-{format_time(iv.high)}"
                                  for iv in self.config.intervals or ())
        top = sorted(self.largest(), key=lambda p: (-p[1], str(p[0])))
        size = f"{self.largest_size}({len(top)})"
        head = ("expiry" if self.kind == PARALLEL else "interval", "thresh", "time(s)",
                "size(no.)", "patterns")
        rows = [f"{head[0]:>24}  {head[1]:>6}  {head[2]:>7}  {head[3]:>9}  {head[4]}"]
        if self.largest_size < 2:
            patterns = ["no episodes of 2 or more nodes"]
        else:
            show_gaps = len(self.config.intervals or ()) > 1
            patterns = [f"{_plain(ep, show_gaps)} : {n}" for ep, n in top[:max_rows]]
            if len(top) > max_rows:
                patterns.append(f"... {len(top) - max_rows} more")
        for i, pat in enumerate(patterns):
            if i == 0:
                rows.append(f"{constraint:>24}  {self.config.frequency_threshold:>6g}  "
                            f"{self.elapsed:>7.2f}  {size:>9}  {pat}")
            else:
                rows.append(f"{'':>24}  {'':>6}  {'':>7}  {'':>9}  {pat}")
        return "\n".join(rows)


FrequentEpisodeSet = MiningReport


def _plain(ep: Episode, show_gaps: bool) -> str:
    # per-gap intervals only carry information when several were possible
    if ep.kind == SERIAL and ep.gaps and show_gaps:
        return str(ep)
    return " ".join(ep.nodes)


def _count_chunk(args):
    candidates, seq, expiry, engine = args
    return _count_serially(candidates, seq, expiry, engine)


def _count_serially(candidates, seq, expiry, engine):
    if engine == "batch" or (engine == "auto" and len(candidates) >= BATCH_MIN_CANDIDATES):
        return batch_counts(candidates, seq, expiry)
    if candidates[0].kind == PARALLEL:
        return ParallelExpiryCounter(candidates, expiry).run(seq)
    return SerialIntervalCounter(candidates).run(seq)


def count_candidates(candidates: Sequence[Episode], seq: EventSequence,
                     expiry: float | None = None, engine: str = "auto",
                     workers: int = 1) -> list[tuple[Episode, int]]:
    """Count candidates, optionally splitting them across worker processes.

    Each worker scans the whole stream for its share of the candidates; the
    result order always follows ``candidates``.
    """
    candidates = list(candidates)
    if not candidates:
        return []
    if workers <= 1 or len(candidates) < 2 * workers:
        return _count_serially(candidates, seq, expiry, engine)
    step = math.ceil(len(candidates) / workers)
    chunks = [candidates[i:i + step] for i in range(0, len(candidates), step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_count_chunk, [(c, seq, expiry, engine) for c in chunks])
        return [pair for part in parts for pair in part]


def mine(seq: EventSequence, kind: str, config: MiningConfig | None = None) -> MiningReport:
    """Discover all frequent ``kind`` episodes of ``seq`` up to ``config.max_size``.

    Parallel mining uses ``config.expiry`` (``None``: no span limit); serial
    mining needs ``config.intervals``, the candidate gap intervals, all of
    which are tried for every consecutive node pair.

    Raises
    ------
    ValueError
        For an empty stream, an unknown kind, or serial mining without
        intervals.
    """
    config = config or MiningConfig()
    if kind not in (SERIAL, PARALLEL):
        raise ValueError(f"unknown episode kind {kind!r}")
    if not seq.alphabet:
        raise ValueError("cannot mine an empty stream")
    if kind == SERIAL and not config.intervals:
        raise ValueError("serial mining needs a set of candidate intervals")
    n = len(seq)
    expiry = config.expiry if kind == PARALLEL else None
    report = MiningReport(kind, config, n)
    start = time.perf_counter()

    t0 = time.perf_counter()
    thr = level_threshold(n, config, 1)
    hist = seq.counts()
    singles = [(Episode(kind, (typ,)), hist[typ]) for typ in sorted(hist)]
    frequent = [(ep, c) for ep, c in singles if c >= thr]
    report.levels.append(LevelResult(1, thr, len(singles), time.perf_counter() - t0, frequent))

    # one encoding shared by every batch-counted level
    counted_seq = EncodedSequence(seq) if config.engine != "waits" and config.workers == 1 else seq
    size = 1
    while frequent and size < config.max_size:
        size += 1
        t0 = time.perf_counter()
        prev = [ep for ep, _ in frequent]
        if kind == PARALLEL:
            candidates = gen_candidates_parallel(prev)
        elif size == 2:
            candidates = seed_serial_candidates([ep.nodes[0] for ep in prev], config.intervals,
                                                config.distinct_types)
        else:
            candidates = gen_candidates_serial_interval(prev, config.distinct_types)
        if not candidates:
            break
        thr = level_threshold(n, config, size)
        engine = config.engine
        target = counted_seq
        if isinstance(target, EncodedSequence) and not (
                engine == "batch" or len(candidates) >= BATCH_MIN_CANDIDATES):
            target = seq
        counts = count_candidates(candidates, target, expiry, engine, config.workers)
        frequent = [(ep, c) for ep, c in counts if c >= thr]
        report.levels.append(LevelResult(size, thr, len(candidates), time.perf_counter() - t0,
                                         frequent))
    report.elapsed = time.perf_counter() - start
    return report
