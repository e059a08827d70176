from __future__ import annotations

import random

import pytest

from spikeepisodes.episodes import IntervalConstraint, parallel, parse_interval_set, serial
from spikeepisodes.events import EventSequence
from spikeepisodes.mining import MiningConfig, MiningReport, count_candidates, level_threshold, mine
from spikeepisodes.oracle import oracle_count


def _planted(seed=0, n_noise=600, reps=80):
    """Random clutter plus a planted A -> B -> C chain and a synchronous (X Y)."""
    rng = random.Random(seed)
    events = [(rng.choice("DEFGH"), rng.uniform(0, 100)) for _ in range(n_noise)]
    for k in range(reps):
        t = k * 1.2 + rng.uniform(0, 0.1)
        events += [("A", t), ("B", t + 0.005), ("C", t + 0.010)]
        events += [("X", t + 0.5), ("Y", t + 0.5004)]
    return EventSequence(sorted(events, key=lambda e: e[1]))


@pytest.fixture(scope="module")
def planted():
    return _planted()


class TestConfig:
    def test_threshold_ceiling(self):
        cfg = MiningConfig(frequency_threshold=0.01)
        assert level_threshold(25000, cfg, 1) == 250
        assert level_threshold(25000, cfg, 2) == 225
        assert level_threshold(25000, cfg, 3) == 203  # 202.5 rounds up

    def test_min_count_floor(self):
        cfg = MiningConfig(frequency_threshold=0.0, min_count=2)
        assert level_threshold(100, cfg, 5) == 2

    @pytest.mark.parametrize("kw", [
        {"frequency_threshold": 1.5}, {"level_decay": 0}, {"max_size": 0}, {"expiry": 0},
        {"engine": "gpu"}, {"workers": 0}, {"min_count": 0},
    ])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            MiningConfig(**kw)

    def test_overlapping_intervals_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            MiningConfig(intervals=[IntervalConstraint(0, 2), IntervalConstraint(1, 3)])

    def test_dict_round_trip(self):
        cfg = MiningConfig(intervals=parse_interval_set("0-0.002,0.004-0.006"), max_size=4)
        assert MiningConfig.from_dict(cfg.to_dict()) == cfg


class TestMine:
    def test_serial_finds_chain(self, planted):
        rep = mine(planted, "serial", MiningConfig(
            frequency_threshold=0.05, intervals=parse_interval_set("0-0.002,0.004-0.006")))
        assert rep.largest_size == 3
        (ep, n), = rep.largest()
        assert ep == serial("ABC", [(0.004, 0.006)] * 2)
        assert n == 80

    def test_parallel_finds_pairs(self, planted):
        rep = mine(planted, "parallel", MiningConfig(frequency_threshold=0.05, expiry=0.001))
        assert {str(e) for e, _ in rep.frequent(2)} == {"(X Y)"}

    def test_counts_match_oracle(self):
        small = _planted(seed=3, n_noise=60, reps=25)
        rep = mine(small, "parallel", MiningConfig(frequency_threshold=0.02, expiry=0.012))
        assert rep.largest_size == 3
        for ep, n in rep.all_frequent():
            assert n == oracle_count(ep, small, 0.012)

    def test_threshold_saturation(self, planted):
        rep = mine(planted, "parallel", MiningConfig(frequency_threshold=1.0, expiry=1))
        assert rep.largest_size <= 1
        assert all(lev.size == 1 for lev in rep.levels)

    def test_wrong_interval_finds_nothing(self, planted):
        rep = mine(planted, "serial", MiningConfig(
            frequency_threshold=0.05, intervals=parse_interval_set("0.002-0.004")))
        assert rep.largest_size <= 1

    def test_maximal(self, planted):
        rep = mine(planted, "parallel", MiningConfig(frequency_threshold=0.05, expiry=0.011))
        maximal = {str(e) for e, _ in rep.maximal() if e.size > 1}
        assert maximal == {"(A B C)", "(X Y)"}

    def test_engines_agree(self, planted):
        kw = dict(frequency_threshold=0.02, intervals=parse_interval_set("0-0.002,0.004-0.006"))
        a = mine(planted, "serial", MiningConfig(engine="waits", **kw))
        b = mine(planted, "serial", MiningConfig(engine="batch", **kw))
        assert a.all_frequent() == b.all_frequent()

    def test_workers_do_not_change_result(self, planted):
        kw = dict(frequency_threshold=0.01, expiry=0.02)
        one = mine(planted, "parallel", MiningConfig(workers=1, **kw))
        two = count_candidates([parallel(p) for p in ("AB", "AC", "BC", "XY", "DE")], planted,
                               0.02, workers=2)
        assert two == count_candidates([parallel(p) for p in ("AB", "AC", "BC", "XY", "DE")],
                                       planted, 0.02)
        assert one.all_frequent() == mine(planted, "parallel",
                                          MiningConfig(workers=3, **kw)).all_frequent()

    def test_levels_echo_thresholds(self, planted):
        rep = mine(planted, "parallel", MiningConfig(frequency_threshold=0.01, expiry=0.01))
        for lev in rep.levels:
            assert lev.threshold == level_threshold(len(planted), rep.config, lev.size)
            assert all(n >= lev.threshold for _, n in lev.episodes)

    def test_distinct_types_default(self, planted):
        rep = mine(planted, "serial", MiningConfig(
            frequency_threshold=0.0, min_count=3, max_size=3,
            intervals=parse_interval_set("0-5")))
        assert all(len(set(e.nodes)) == e.size for e, _ in rep.all_frequent())

    @pytest.mark.parametrize("kind,cfg,msg", [
        ("diagonal", MiningConfig(), "unknown episode kind"),
        ("serial", MiningConfig(), "intervals"),
    ])
    def test_errors(self, planted, kind, cfg, msg):
        with pytest.raises(ValueError, match=msg):
            mine(planted, kind, cfg)

    def test_empty_stream(self):
        with pytest.raises(ValueError, match="empty"):
            mine(EventSequence(), "parallel")


class TestReport:
    def test_json_round_trip(self, planted):
        rep = mine(planted, "serial", MiningConfig(
            frequency_threshold=0.05, intervals=parse_interval_set("0.004-0.006")))
        back = MiningReport.from_json(rep.to_json())
        assert back.all_frequent() == rep.all_frequent()
        assert back.config == rep.config
        assert [lev.threshold for lev in back.levels] == [lev.threshold for lev in rep.levels]

    def test_table_layout(self, planted):
        rep = mine(planted, "serial", MiningConfig(
            frequency_threshold=0.05, intervals=parse_interval_set("0.004-0.006")))
        table = rep.format_table()
        header, first = table.splitlines()[:2]
        assert header.split() == ["interval", "thresh", "time(s)", "size(no.)", "patterns"]
        assert "0.004-0.006" in first and "3(1)" in first and "A B C : 80" in first

    def test_table_when_empty(self, planted):
        rep = mine(planted, "serial", MiningConfig(
            frequency_threshold=0.05, intervals=parse_interval_set("0.002-0.004")))
        assert "no episodes of 2 or more nodes" in rep.format_table()
