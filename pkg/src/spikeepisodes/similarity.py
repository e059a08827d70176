"""Similarity of two sets of equal-size serial episodes.

Episodes common to both sets are matched and counted (``n_N``).  Every
unmatched episode is then replaced by its two sub-chains obtained by dropping
the first or the last node, and matching repeats one size lower, down to
single nodes.  The score is ``sum_i 2**i * n_i``.

Matching ignores inter-event intervals and is done on multisets: the
reduction can produce the same sub-chain twice, and each copy can match at
most one copy on the other side.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .episodes import Episode

__all__ = ["SimilarityResult", "similarity", "similarity_breakdown", "similarity_matrix"]


@dataclass(frozen=True)
class SimilarityResult:
    """Score plus the matched count at every size (``matched[i]`` is ``n_i``)."""

    score: int
    matched: dict[int, int]


def _node_tuples(episodes: Iterable, name: str) -> list[tuple[str, ...]]:
    out = []
    for ep in episodes:
        nodes = tuple(ep.nodes) if isinstance(ep, Episode) else tuple(ep)
        if not nodes:
            raise ValueError(f"{name} contains an empty episode")
        out.append(nodes)
    if len({len(n) for n in out}) > 1:
        raise ValueError(f"{name} mixes episodes of different sizes")
    return out


def similarity_breakdown(set_a: Sequence, set_b: Sequence) -> SimilarityResult:
    """Score two episode sets and report the per-size match counts.

    Items may be :class:`Episode` objects or plain sequences of event types.

    Raises
    ------
    ValueError
        If either set mixes sizes or the two sets hold different sizes.
    """
    a = Counter(_node_tuples(set_a, "set_a"))
    b = Counter(_node_tuples(set_b, "set_b"))
    if not a or not b:
        return SimilarityResult(0, {})
    size = len(next(iter(a)))
    if len(next(iter(b))) != size:
        raise ValueError("both sets must hold episodes of the same size")
    matched: dict[int, int] = {}
    score = 0
    for i in range(size, 0, -1):
        common = a & b
        n_i = sum(common.values())
        matched[i] = n_i
        score += n_i * 2 ** i
        a, b = a - common, b - common
        if i > 1:
            a, b = _reduce(a), _reduce(b)
    return SimilarityResult(score, matched)


def _reduce(bag: Counter) -> Counter:
    out: Counter = Counter()
    for nodes, k in bag.items():
        out[nodes[1:]] += k
        out[nodes[:-1]] += k
    return out


def similarity(set_a: Sequence, set_b: Sequence) -> int:
    """``Sim(A, B)``; see :func:`similarity_breakdown`."""
    return similarity_breakdown(set_a, set_b).score


def similarity_matrix(sets: Sequence[Sequence]) -> np.ndarray:
    """Pairwise scores between episode sets, e.g. one set per recording day."""
    n = len(sets)
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = similarity(sets[i], sets[j])
    return out
