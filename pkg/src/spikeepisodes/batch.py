"""Compiled per-episode counters for very large candidate sets.

Same counting rules as :mod:`spikeepisodes.counting`, but each candidate is
counted on its own by merging only the stream positions of its event types.
Cost is proportional to the number of relevant events per candidate rather
than to the number of automata waiting per event, which is what makes
mining with a zero frequency threshold (hundreds of thousands of candidates)
tractable.  Occurrence tracking is not available here.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from numba import njit

from .episodes import PARALLEL, Episode
from .events import EventSequence

__all__ = ["EncodedSequence", "batch_counts"]


class EncodedSequence:
    """Integer-coded view of a stream with per-type position lists (CSR)."""

    def __init__(self, seq: EventSequence):
        self.labels = sorted(seq.alphabet)
        self.code = {lab: i for i, lab in enumerate(self.labels)}
        codes = np.fromiter((self.code[t] for t in seq.types), dtype=np.int64, count=len(seq))
        self.times = np.asarray(seq.times, dtype=np.float64)
        order = np.argsort(codes, kind="stable")
        counts = np.bincount(codes, minlength=len(self.labels))
        self.ptr = np.zeros(len(self.labels) + 1, dtype=np.int64)
        np.cumsum(counts, out=self.ptr[1:])
        self.pos = order.astype(np.int64)
        self.max_count = int(counts.max()) if len(counts) else 0


@njit(cache=True)
def _serial_kernel(nodes, lows, highs, times, ptr, pos, cap):
    n_cand, kmax = nodes.shape
    out = np.zeros(n_cand, dtype=np.int64)
    buf = np.empty((kmax, cap + 1), dtype=np.float64)
    head = np.zeros(kmax, dtype=np.int64)
    tail = np.zeros(kmax, dtype=np.int64)
    cursor = np.zeros(kmax, dtype=np.int64)
    uniq = np.empty(kmax, dtype=np.int64)
    for c in range(n_cand):
        k = 0
        while k < kmax and nodes[c, k] >= 0:
            k += 1
        if k == 0:
            continue
        # distinct types of the episode, one merge cursor each
        nu = 0
        for j in range(k):
            seen = False
            for u in range(nu):
                if uniq[u] == nodes[c, j]:
                    seen = True
            if not seen:
                uniq[nu] = nodes[c, j]
                nu += 1
        for u in range(kmax):
            cursor[u] = 0
        for u in range(nu):
            cursor[u] = ptr[uniq[u]]
        for j in range(k):
            head[j] = 0
            tail[j] = 0
        freq = 0
        while True:
            best = -1
            bu = -1
            for u in range(nu):
                if cursor[u] < ptr[uniq[u] + 1]:
                    p = pos[cursor[u]]
                    if best < 0 or p < best:
                        best = p
                        bu = u
            if best < 0:
                break
            cursor[bu] += 1
            typ = uniq[bu]
            t = times[best]
            done = False
            for j in range(k):
                if nodes[c, j] != typ:
                    continue
                if j == 0:
                    ok = True
                else:
                    hi = highs[c, j - 1]
                    while head[j - 1] < tail[j - 1] and t - buf[j - 1, head[j - 1]] > hi:
                        head[j - 1] += 1
                    ok = (head[j - 1] < tail[j - 1]
                          and t - buf[j - 1, head[j - 1]] > lows[c, j - 1])
                if not ok:
                    continue
                if j == k - 1:
                    done = True
                    break
                buf[j, tail[j]] = t
                tail[j] += 1
            if done:
                freq += 1
                for j in range(k):
                    head[j] = 0
                    tail[j] = 0
        out[c] = freq
    return out


@njit(cache=True)
def _parallel_kernel(nodes, expiry, times, ptr, pos):
    n_cand, kmax = nodes.shape
    out = np.zeros(n_cand, dtype=np.int64)
    cursor = np.zeros(kmax, dtype=np.int64)
    latest = np.zeros(kmax, dtype=np.float64)
    have = np.zeros(kmax, dtype=np.bool_)
    for c in range(n_cand):
        k = 0
        while k < kmax and nodes[c, k] >= 0:
            k += 1
        for j in range(k):
            cursor[j] = ptr[nodes[c, j]]
            have[j] = False
        seen = 0
        freq = 0
        while True:
            best = -1
            bj = -1
            for j in range(k):
                if cursor[j] < ptr[nodes[c, j] + 1]:
                    p = pos[cursor[j]]
                    if best < 0 or p < best:
                        best = p
                        bj = j
            if best < 0:
                break
            cursor[bj] += 1
            t = times[best]
            if not have[bj]:
                have[bj] = True
                seen += 1
            latest[bj] = t
            if seen < k:
                continue
            for q in range(k):
                if have[q] and t - latest[q] > expiry:
                    have[q] = False
                    seen -= 1
            if seen == k:
                freq += 1
                seen = 0
                for q in range(k):
                    have[q] = False
        out[c] = freq
    return out


def _node_matrix(candidates: Sequence[Episode], enc: EncodedSequence):
    kmax = max(len(ep.nodes) for ep in candidates)
    nodes = np.full((len(candidates), kmax), -1, dtype=np.int64)
    missing = np.zeros(len(candidates), dtype=bool)
    for r, ep in enumerate(candidates):
        for j, typ in enumerate(ep.nodes):
            code = enc.code.get(typ)
            if code is None:
                missing[r] = True
                break
            nodes[r, j] = code
    nodes[missing] = -1
    return nodes, kmax


def batch_counts(candidates: Sequence[Episode], seq: EventSequence | EncodedSequence,
                 expiry: float | None = None) -> list[tuple[Episode, int]]:
    """Count a homogeneous list of candidates; returns ``(episode, count)`` pairs."""
    candidates = list(candidates)
    if not candidates:
        return []
    enc = seq if isinstance(seq, EncodedSequence) else EncodedSequence(seq)
    if len(enc.times) == 0:
        return [(ep, 0) for ep in candidates]
    nodes, kmax = _node_matrix(candidates, enc)
    if candidates[0].kind == PARALLEL:
        ex = math.inf if expiry is None else float(expiry)
        counts = _parallel_kernel(nodes, ex, enc.times, enc.ptr, enc.pos)
    else:
        lows = np.zeros((len(candidates), max(kmax - 1, 1)))
        highs = np.full_like(lows, np.inf)
        for r, ep in enumerate(candidates):
            for j, g in enumerate(ep.gaps):
                lows[r, j] = g.low
                highs[r, j] = g.high
        counts = _serial_kernel(nodes, lows, highs, enc.times, enc.ptr, enc.pos, enc.max_count)
    return [(ep, int(n)) for ep, n in zip(candidates, counts)]
