from __future__ import annotations

import json

import pytest

from spikeepisodes.episodes import PARALLEL, SERIAL, IntervalConstraint
from spikeepisodes.events import EventSequence
from spikeepisodes.mining import MiningConfig, mine
from spikeepisodes.significance import (
    DEFAULT_PATTERNS,
    PatternStudy,
    SignificanceConfig,
    longest_occurrence,
    max_frequency_by_size,
    pattern_episodes,
    significance_run,
)
from spikeepisodes.simulation import gen_noise


def _literal_max(seq, kind, expiry, interval, max_size):
    """Maximum count per size from plain threshold-zero mining."""
    cfg = MiningConfig(frequency_threshold=0.0, max_size=max_size,
                       expiry=expiry if kind == PARALLEL else None,
                       intervals=[IntervalConstraint(*interval)] if kind == SERIAL else None)
    rep = mine(seq, kind, cfg)
    out = [0] * max_size
    for lev in rep.levels:
        if lev.episodes:
            out[lev.size - 1] = max(n for _, n in lev.episodes)
    return out


class TestPatternEpisodes:
    def test_parallel_subsets(self):
        eps = pattern_episodes(PatternStudy("p", PARALLEL, 0.8), (0.004, 0.006))
        assert len(eps[3]) == 120 and len(eps[10]) == 1

    def test_serial_stretches(self):
        eps = pattern_episodes(PatternStudy("s", SERIAL, 0.8), (0.004, 0.006))
        assert len(eps[3]) == 8
        assert [e.nodes for e in eps[9]] == [tuple("ABCDEFGHI"), tuple("BCDEFGHIJ")]
        assert all(g == (0.004, 0.006) for g in eps[4][0].gaps)


class TestLongestOccurrence:
    def test_parallel_window(self):
        seq = EventSequence([("A", 0), ("B", 0.0005), ("C", 0.001), ("D", 0.0030)])
        assert longest_occurrence(seq, PARALLEL, 0.001, None, 10) == 3

    def test_serial_chain(self):
        seq = EventSequence([("A", 0), ("B", 0.005), ("A", 0.010), ("C", 0.015)])
        # A B C via the second A is not allowed: types repeat
        assert longest_occurrence(seq, SERIAL, None, (0.004, 0.006), 10) == 3

    def test_cap(self):
        seq = EventSequence([(c, i * 0.005) for i, c in enumerate("ABCDEF")])
        assert longest_occurrence(seq, SERIAL, None, (0.004, 0.006), 4) == 4

    def test_empty(self):
        assert longest_occurrence(EventSequence(), PARALLEL, 0.001, None, 5) == 0


class TestShortcutMatchesMining:
    @pytest.mark.parametrize("model", [1, 3, 6])
    @pytest.mark.parametrize("kind", [PARALLEL, SERIAL])
    def test_equal(self, model, kind):
        seq = gen_noise(model, seed=model, duration=2.0)
        want = _literal_max(seq, kind, 0.001, (0.004, 0.006), 6)
        assert max_frequency_by_size(seq, kind, 0.001, (0.004, 0.006), 6) == want


@pytest.fixture(scope="module")
def report():
    cfg = SignificanceConfig(replicates=2, duration=3.0, max_size=5,
                             patterns=DEFAULT_PATTERNS[:2])
    return significance_run(cfg)


class TestRun:
    def test_shapes(self, report):
        assert set(report.noise) == {PARALLEL, SERIAL}
        assert len(report.noise[PARALLEL]) == 6
        for curves in report.noise.values():
            for curve in curves.values():
                assert len(curve) == 5 and min(curve) >= 0
        assert set(report.patterns) == {"pattern-sync-0.8", "pattern-serial-0.8"}

    def test_noise_curves_non_increasing(self, report):
        for curves in report.noise.values():
            for curve in curves.values():
                assert all(a >= b for a, b in zip(curve, curve[1:]))

    def test_outputs(self, report):
        tsv = report.to_tsv().splitlines()
        assert tsv[0].split("\t") == ["kind", "model", "statistic", "size", "mean_frequency"]
        assert len(tsv) == 1 + 2 * 6 * 5 + 2 * 5
        doc = json.loads(report.to_json())
        assert doc["config"]["replicates"] == 2
        assert "separation_size3" in doc["summary"][PARALLEL]

    def test_worker_count_irrelevant(self, report):
        cfg = SignificanceConfig(replicates=2, duration=3.0, max_size=5,
                                 patterns=DEFAULT_PATTERNS[:2], workers=2)
        other = significance_run(cfg)
        assert other.noise == report.noise and other.patterns == report.patterns


class TestConfig:
    def test_budget_guard(self):
        with pytest.raises(ValueError, match="budget"):
            SignificanceConfig(replicates=1000, duration=1000.0)

    def test_bad_model(self):
        with pytest.raises(ValueError):
            SignificanceConfig(noise_models=(7,))

    def test_replicates(self):
        with pytest.raises(ValueError):
            SignificanceConfig(replicates=0)
