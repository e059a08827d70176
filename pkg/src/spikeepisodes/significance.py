"""Empirical significance: episode frequencies in structure-free vs patterned data.

For each null model, replicate datasets are mined with a frequency
threshold of zero and the largest frequency seen at each episode size is
recorded.  For each patterned dataset the smallest frequency among the
episodes that belong to the embedded pattern is recorded instead.  Averages
over replicates give one curve per model.

A threshold of zero is applied as "count at least one": an episode with no
occurrence cannot extend to one that has any, so nothing is lost.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .batch import EncodedSequence, batch_counts
from .episodes import PARALLEL, SERIAL, Episode, IntervalConstraint, parallel, serial
from .mining import MiningConfig, mine
from .presets import SERIAL10_CHAIN, SYNCHRONY10_GROUP, serial10_spec, synchrony10_spec
from .simulation import LINEAR, SIGMOID, NOISE_MODELS, gen_noise, simulate_spec

__all__ = [
    "PatternStudy",
    "SignificanceConfig",
    "SignificanceReport",
    "pattern_episodes",
    "longest_occurrence",
    "max_frequency_by_size",
    "min_pattern_frequency_by_size",
    "significance_run",
    "DEFAULT_PATTERNS",
]


@dataclass(frozen=True)
class PatternStudy:
    label: str
    kind: str
    rho: float
    rate_model: str = SIGMOID


DEFAULT_PATTERNS = (
    PatternStudy("pattern-sync-0.8", PARALLEL, 0.8),
    PatternStudy("pattern-serial-0.8", SERIAL, 0.8),
    PatternStudy("pattern-serial-0.6", SERIAL, 0.6),
    PatternStudy("pattern-serial-0.4", SERIAL, 0.4),
    PatternStudy("pattern-serial-linear-0.8", SERIAL, 0.8, LINEAR),
    PatternStudy("pattern-serial-linear-0.7", SERIAL, 0.7, LINEAR),
)

# refuse runs above this many simulated seconds
MAX_SIMULATED_SECONDS = 200_000


@dataclass
class SignificanceConfig:
    replicates: int = 10
    duration: float = 50.0
    noise_models: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    patterns: tuple[PatternStudy, ...] = DEFAULT_PATTERNS
    expiry: float = 0.001
    interval: tuple[float, float] = (0.004, 0.006)
    max_size: int = 10
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        for m in self.noise_models:
            if m not in NOISE_MODELS:
                raise ValueError(f"unknown noise model {m}")
        self.noise_models = tuple(self.noise_models)
        self.patterns = tuple(p if isinstance(p, PatternStudy) else PatternStudy(**p)
                              for p in self.patterns)
        self.interval = tuple(self.interval)
        n_sets = self.replicates * (len(self.noise_models) + len(self.patterns))
        if n_sets * self.duration > MAX_SIMULATED_SECONDS:
            raise ValueError(f"budget exceeded: {n_sets} datasets x {self.duration} s is more "
                             f"than {MAX_SIMULATED_SECONDS} simulated seconds")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["patterns"] = [asdict(p) for p in self.patterns]
        return d


def pattern_episodes(study: PatternStudy, interval: tuple[float, float]) -> dict[int, list[Episode]]:
    """Episodes that are part of the embedded size-10 pattern, by size.

    Parallel: every subset of the synchronous group.  Serial: every
    contiguous stretch of the chain, each gap carrying ``interval``.
    """
    out: dict[int, list[Episode]] = {}
    if study.kind == PARALLEL:
        for k in range(1, len(SYNCHRONY10_GROUP) + 1):
            out[k] = [parallel(c) for c in combinations(SYNCHRONY10_GROUP, k)]
    else:
        chain = SERIAL10_CHAIN
        for k in range(1, len(chain) + 1):
            out[k] = [serial(chain[i:i + k], [interval] * (k - 1))
                      for i in range(len(chain) - k + 1)]
    return out


def longest_occurrence(seq, kind: str, expiry: float, interval, cap: int) -> int:
    """Size of the largest episode with at least one occurrence, capped at ``cap``.

    Parallel: most distinct event types inside any window of span
    ``<= expiry``.  Serial: longest run of events with distinct types whose
    consecutive gaps lie in ``interval``.
    """
    types, times = seq.types, seq.times
    n = len(types)
    if n == 0:
        return 0
    if kind == PARALLEL:
        best, lo, inside = 0, 0, {}
        for hi in range(n):
            inside[types[hi]] = inside.get(types[hi], 0) + 1
            while times[hi] - times[lo] > expiry:
                inside[types[lo]] -= 1
                if not inside[types[lo]]:
                    del inside[types[lo]]
                lo += 1
            best = max(best, len(inside))
            if best >= cap:
                return cap
        return best
    low, high = interval
    best = 1

    def extend(i, used, depth):
        nonlocal best
        best = max(best, depth)
        if best >= cap:
            return
        j = i + 1
        while j < n and times[j] - times[i] <= high:
            if times[j] - times[i] > low and types[j] not in used:
                used.add(types[j])
                extend(j, used, depth + 1)
                used.discard(types[j])
                if best >= cap:
                    return
            j += 1

    for i in range(n):
        extend(i, {types[i]}, 1)
        if best >= cap:
            break
    return min(best, cap)


def max_frequency_by_size(seq, kind: str, expiry: float, interval, max_size: int) -> list[int]:
    """Largest count at each size 1..max_size under a zero frequency threshold.

    Equivalent to mining with threshold zero but much cheaper: mining with a
    floor of two finds every episode occurring at least twice, since no
    episode outnumbers the subepisodes it was grown from.  Past the last
    size reached that way the maximum is one exactly when some episode of
    that size occurs at all.
    """
    cfg = MiningConfig(frequency_threshold=0.0, max_size=max_size, min_count=2,
                       expiry=expiry if kind == PARALLEL else None,
                       intervals=[IntervalConstraint(*interval)] if kind == SERIAL else None)
    report = mine(seq, kind, cfg)
    out = [0] * max_size
    for lev in report.levels:
        if lev.episodes:
            out[lev.size - 1] = max(n for _, n in lev.episodes)
    longest = longest_occurrence(seq, kind, expiry, interval, max_size)
    for k in range(1, longest + 1):
        out[k - 1] = max(out[k - 1], 1)
    return out


def min_pattern_frequency_by_size(seq, study: PatternStudy, expiry: float, interval,
                                  max_size: int) -> list[int]:
    enc = EncodedSequence(seq)
    out = []
    for k, eps in sorted(pattern_episodes(study, interval).items()):
        if k > max_size:
            break
        counts = batch_counts(eps, enc, expiry if study.kind == PARALLEL else None)
        out.append(min(n for _, n in counts))
    return out + [0] * (max_size - len(out))


def _seed(cfg: SignificanceConfig, group: int, rep: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([cfg.seed, group, rep])


def _noise_task(args):
    cfg, model, rep = args
    seq = gen_noise(model, _seed(cfg, model, rep), cfg.duration)
    return {
        PARALLEL: max_frequency_by_size(seq, PARALLEL, cfg.expiry, cfg.interval, cfg.max_size),
        SERIAL: max_frequency_by_size(seq, SERIAL, cfg.expiry, cfg.interval, cfg.max_size),
        "n_events": len(seq),
    }


def _pattern_task(args):
    cfg, idx, study, rep = args
    make = synchrony10_spec if study.kind == PARALLEL else serial10_spec
    seq, _ = simulate_spec(make(rho=study.rho, rate_model=study.rate_model), cfg.duration,
                           _seed(cfg, 100 + idx, rep))
    return {"min": min_pattern_frequency_by_size(seq, study, cfg.expiry, cfg.interval,
                                                 cfg.max_size),
            "n_events": len(seq)}


@dataclass
class SignificanceReport:
    """Per-size mean curves.

    ``noise[kind][label]`` is the mean over replicates of the maximum
    frequency; ``patterns[label]`` the mean of the minimum frequency of
    pattern episodes.  Index ``i`` holds size ``i + 1``.
    """

    config: SignificanceConfig
    noise: dict[str, dict[str, list[float]]] = field(default_factory=dict)
    patterns: dict[str, list[float]] = field(default_factory=dict)
    pattern_kinds: dict[str, str] = field(default_factory=dict)
    elapsed: float = 0.0

    def noise_max(self, kind: str, size: int) -> float:
        """Mean maximum frequency at ``size`` averaged over all noise models."""
        curves = self.noise[kind].values()
        return float(np.mean([c[size - 1] for c in curves]))

    def separation(self, kind: str, size: int = 3) -> dict[str, float]:
        """Ratio of each pattern's mean minimum to the pooled noise maximum."""
        noise = self.noise_max(kind, size)
        out = {}
        for label, curve in self.patterns.items():
            if self.pattern_kinds[label] == kind:
                out[label] = curve[size - 1] / noise if noise > 0 else float("inf")
        return out

    def curve_rows(self):
        for kind, curves in self.noise.items():
            for label, curve in curves.items():
                for i, v in enumerate(curve):
                    yield kind, label, "max", i + 1, v
        for label, curve in self.patterns.items():
            for i, v in enumerate(curve):
                yield self.pattern_kinds[label], label, "min", i + 1, v

    def to_tsv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(["kind", "model", "statistic", "size", "mean_frequency"])
        for row in self.curve_rows():
            w.writerow(row[:4] + (f"{row[4]:.6g}",))
        return buf.getvalue()

    def to_dict(self) -> dict:
        summary = {}
        for kind in (PARALLEL, SERIAL):
            if kind in self.noise:
                summary[kind] = {"noise_max_size3": self.noise_max(kind, 3),
                                 "separation_size3": self.separation(kind, 3)}
        return {"config": self.config.to_dict(), "noise": self.noise,
                "patterns": self.patterns, "pattern_kinds": self.pattern_kinds,
                "summary": summary, "elapsed": self.elapsed}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def significance_run(cfg: SignificanceConfig | None = None, progress=None) -> SignificanceReport:
    """Generate, mine and summarize every replicate dataset.

    ``progress`` is called with a short message after each dataset.  With
    ``cfg.workers > 1`` datasets are processed in parallel; the report does
    not depend on the worker count.
    """
    cfg = cfg or SignificanceConfig()
    start = time.perf_counter()
    noise_tasks = [(cfg, m, r) for m in cfg.noise_models for r in range(cfg.replicates)]
    pat_tasks = [(cfg, i, p, r) for i, p in enumerate(cfg.patterns)
                 for r in range(cfg.replicates)]

    def run(fn, tasks):
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(fn, tasks))
            if progress:
                progress(f"{len(tasks)} datasets done")
            return results
        results = []
        for t in tasks:
            results.append(fn(t))
            if progress:
                progress(f"{fn.__name__.strip('_')} {t[1:]} done")
        return results

    noise_res = run(_noise_task, noise_tasks)
    pat_res = run(_pattern_task, pat_tasks)

    report = SignificanceReport(cfg)
    for kind in (PARALLEL, SERIAL):
        report.noise[kind] = {}
        for m in cfg.noise_models:
            rows = [res[kind] for (_, mm, _), res in zip(noise_tasks, noise_res) if mm == m]
            report.noise[kind][f"noise-{m}"] = np.mean(rows, axis=0).tolist()
    for i, study in enumerate(cfg.patterns):
        rows = [res["min"] for (_, ii, _, _), res in zip(pat_tasks, pat_res) if ii == i]
        report.patterns[study.label] = np.mean(rows, axis=0).tolist()
        report.pattern_kinds[study.label] = study.kind
    report.elapsed = time.perf_counter() - start
    return report
