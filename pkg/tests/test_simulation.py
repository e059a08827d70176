from __future__ import annotations

import math

import numpy as np
import pytest

from spikeepisodes.presets import PRESETS, example1_spec, example3_spec
from spikeepisodes.simulation import (
    LINEAR,
    NOISE_MODELS,
    SIGMOID,
    NetworkSpec,
    PatternSpec,
    RateModel,
    build_network,
    calibrate_weight,
    gen_noise,
    lambda_star,
    rate_linear,
    rate_sigmoid,
    seed_sequence,
    simulate,
    simulate_spec,
)


def _per_neuron(seq):
    out = {}
    for typ, t in zip(seq.types, seq.times):
        out.setdefault(typ, []).append(t)
    return {k: np.asarray(v) for k, v in out.items()}


class TestRateModels:
    def test_sigmoid_rest_and_midpoint(self):
        m = RateModel.sigmoid(20.0, 0.95, 0.001)
        assert m.rate(0.0) == pytest.approx(20.0)
        assert rate_sigmoid(m.d, m.lambda1, m.d) == pytest.approx(m.lambda1 / 2)
        assert m.rate(1e3) == pytest.approx(m.lambda1)

    def test_sigmoid_bounds(self):
        m = RateModel.sigmoid(20.0, 0.95, 0.001)
        r = m.rate(np.linspace(-50, 30, 200))
        assert np.all(r > 0) and np.all(r < m.lambda1)

    def test_linear_branches(self):
        m = RateModel.linear(20.0, 0.95, 0.001, a=10.0)
        assert m.rate(0.0) == pytest.approx(20.0)
        assert m.rate(-20.0 / 10.0) == pytest.approx(0.0)
        assert m.rate(-100.0) == 0.0
        assert m.rate(m.I1 + 1) == pytest.approx(m.lambda1)
        assert rate_linear(1.0, 20, 100, 10, 5) == pytest.approx(30)

    def test_linear_monotone_and_clamped(self):
        m = RateModel.linear(20.0, 0.8, 0.001)
        r = m.rate(np.linspace(-5, 400, 1000))
        assert np.all(np.diff(r) >= 0)
        assert r.min() >= 0 and r.max() <= m.lambda1

    def test_invalid(self):
        with pytest.raises(ValueError):
            RateModel("cubic", 1, 2)
        with pytest.raises(ValueError):
            RateModel(SIGMOID, 5, 1)


class TestCalibration:
    def test_lambda_star(self):
        assert lambda_star(0.95, 0.001) == pytest.approx(2995.732, abs=1e-3)

    def test_lambda_star_small(self):
        assert lambda_star(1e-9, 0.001) == pytest.approx(1e-6, rel=1e-3)

    @pytest.mark.parametrize("rho", [0.0, 1.0, -0.1])
    def test_rho_domain(self, rho):
        with pytest.raises(ValueError):
            lambda_star(rho, 0.001)

    @pytest.mark.parametrize("kind", [SIGMOID, LINEAR])
    def test_weight_reaches_target_rate(self, kind):
        m = (RateModel.sigmoid if kind == SIGMOID else RateModel.linear)(20.0, 0.95, 0.001)
        w = calibrate_weight(0.95, m, 0.001)
        assert m.rate(w) == pytest.approx(lambda_star(0.95, 0.001), rel=1e-9)

    def test_fan_in_splits_weight(self):
        m = RateModel.sigmoid(20.0, 0.95, 0.001)
        w3 = calibrate_weight(0.95, m, 0.001, fan_in=3)
        assert 3 * w3 == pytest.approx(calibrate_weight(0.95, m, 0.001))
        assert m.rate(w3) < m.rate(3 * w3)

    def test_monte_carlo_probability(self):
        rng = np.random.default_rng(0)
        fired = rng.poisson(lambda_star(0.95, 0.001) * 0.001, 10_000) > 0
        assert abs(fired.mean() - 0.95) <= 0.03


class TestSpecs:
    def test_pattern_validation(self):
        with pytest.raises(ValueError):
            PatternSpec("serial_chain", (("A", "B"), ("C",)), (5,))
        with pytest.raises(ValueError):
            PatternSpec.serial_chain("AB", delay=0)
        with pytest.raises(ValueError):
            PatternSpec.synfire_chain(["A", "AB"])

    def test_edges_with_fan_in(self):
        pat = PatternSpec.synfire_chain(["X", "ABC", "D"], delay=(5, 3))
        edges = list(pat.edges())
        assert ("X", "A", 5, 1) in edges
        assert ("B", "D", 3, 3) in edges
        assert len(edges) == 6

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            NetworkSpec(rho=1.0)
        with pytest.raises(ValueError):
            NetworkSpec(tau_r=-1)
        with pytest.raises(ValueError):
            NetworkSpec(delta_t=0)

    def test_example1_edges(self):
        net = build_network(example1_spec(), seed=0)
        for a, b in ["AB", "BC", "BE", "CD", "EF"]:
            w, h = net.synapse(a, b)
            assert h == 5 and w > 3
        assert len(net.embedded) == 5

    def test_example3_delays(self):
        net = build_network(example3_spec(), seed=0)
        assert net.synapse("X", "A")[1] == 5
        assert net.synapse("C", "D")[1] == 3
        assert net.synapse("D", "E")[1] == 7
        assert net.synapse("E", "F")[1] == 3

    def test_random_weights_in_range(self):
        net = build_network(NetworkSpec(), seed=1)
        assert np.all(np.abs(net.weight) <= 0.75)
        assert len(net.source) == 26 * 13
        assert np.all(net.source != net.target)

    def test_edgeless(self):
        net = build_network(NetworkSpec(random_fanout=0), seed=1)
        assert len(net.source) == 0

    def test_unknown_pattern_neuron(self):
        spec = NetworkSpec(n_neurons=4, random_fanout=1,
                           patterns=[PatternSpec.serial_chain("AZ")])
        with pytest.raises(ValueError, match="'Z'"):
            build_network(spec)

    def test_presets_build(self):
        for make in PRESETS.values():
            build_network(make(), seed=0)


class TestSimulate:
    def test_zero_weight_spike_count(self):
        seq, _ = simulate_spec(NetworkSpec(random_fanout=0, tau_r=0.0), 50.0, seed=3)
        assert abs(len(seq) - 26_000) <= 3 * math.sqrt(26_000)

    def test_dead_time_lowers_rate(self):
        # a dead time tau turns rate lam into lam / (1 + lam * tau)
        seq, _ = simulate_spec(NetworkSpec(random_fanout=0), 50.0, seed=3)
        expected = 26 * 50.0 * 20.0 / (1 + 20.0 * 0.001)
        assert abs(len(seq) - expected) <= 3 * math.sqrt(expected)

    def test_refractory(self):
        seq, _ = simulate_spec(example1_spec(), 20.0, seed=4)
        for times in _per_neuron(seq).values():
            assert np.all(np.diff(times) >= 0.001 - 1e-12)

    def test_zero_duration(self):
        seq, _ = simulate_spec(example1_spec(), 0.0, seed=1)
        assert len(seq) == 0

    def test_sorted_and_in_range(self):
        seq, _ = simulate_spec(example1_spec(), 5.0, seed=5)
        t = seq.times_array()
        assert np.all(np.diff(t) >= 0)
        assert t.min() >= 0 and t.max() < 5.0

    def test_deterministic(self):
        a, _ = simulate_spec(example1_spec(), 5.0, seed=11)
        b, _ = simulate_spec(example1_spec(), 5.0, seed=11)
        c, _ = simulate_spec(example1_spec(), 5.0, seed=12)
        assert a == b and a != c

    def test_accepts_seed_sequence(self):
        ss = np.random.SeedSequence([1, 2, 3])
        a, _ = simulate_spec(example1_spec(), 1.0, ss)
        b, _ = simulate_spec(example1_spec(), 1.0, seed_sequence(ss))
        assert a == b

    @pytest.mark.parametrize("kind", [SIGMOID, LINEAR])
    def test_conditional_probability(self, kind):
        spec = NetworkSpec(n_neurons=2, random_fanout=0, rate_model=kind,
                           patterns=[PatternSpec.serial_chain("AB", delay=5)])
        seq, net = simulate_spec(spec, 100.0, seed=6)
        spikes = _per_neuron(seq)
        a, b = spikes["A"], spikes["B"]
        h, dt = 5, net.delta_t
        # the spike of step m drives step m+h, so gaps fall in ((h-1)dt, (h+1)dt)
        lo = np.searchsorted(b, a + (h - 1) * dt, side="right")
        hi = np.searchsorted(b, a + (h + 1) * dt, side="right")
        frac = np.mean(hi > lo)
        assert len(a) >= 1000
        assert abs(frac - 0.95) <= 0.05

    def test_no_self_synapse_in_patterns(self):
        net = build_network(example3_spec(), seed=0)
        assert all(a != b for a, b, _, _ in net.embedded)

    def test_direct_network_simulation(self):
        net = build_network(NetworkSpec(n_neurons=3, random_fanout=0), seed=0)
        seq = simulate(net, 10.0, seed=0)
        assert seq.alphabet <= {"A", "B", "C"}


class TestNoise:
    def test_models_listed(self):
        assert sorted(NOISE_MODELS) == [1, 2, 3, 4, 5, 6]

    def test_unknown(self):
        with pytest.raises(ValueError):
            gen_noise(7, seed=0)

    def test_noise3_rates(self):
        seq, info = gen_noise(3, seed=1, duration=50.0, return_info=True)
        counts = seq.counts()
        for lab, rate in zip("ABCDEFGHIJKLMNOPQRSTUVWXYZ", info["rates"]):
            assert abs(counts.get(lab, 0) / 50.0 - rate) <= 0.1 * rate + 3 * math.sqrt(rate / 50)

    def test_noise5_groups(self):
        _, info = gen_noise(5, seed=2, duration=1.0, return_info=True)
        groups = info["groups"]
        assert len(groups) == 26
        assert sorted(set(groups.tolist())) == [0, 1, 2, 3, 4]
        for g in range(5):
            assert len(set(info["rates"][groups == g])) == 1

    @pytest.mark.parametrize("model", [1, 2, 3, 4, 5, 6])
    def test_deterministic_and_plausible(self, model):
        a = gen_noise(model, seed=9, duration=5.0)
        b = gen_noise(model, seed=9, duration=5.0)
        assert a == b
        # every model averages 10-30 Hz per neuron, give or take weak coupling
        assert 26 * 5 * 5 < len(a) < 26 * 5 * 40

    def test_noise1_weight_range(self):
        _, info = gen_noise(1, seed=0, duration=0.1, return_info=True)
        assert info["weight_range"] == (-0.75, 0.75)
