"""Spike trains from a network of interconnected inhomogeneous Poisson neurons.

Time advances in steps of ``delta_t``.  Step ``s`` covers
``[s*dt, (s+1)*dt)``; each neuron fires a Poisson number of spikes in it at
its current rate, placed uniformly inside the step, and spikes closer than
``tau_r`` to the neuron's previous kept spike are dropped.  The rate of
neuron ``j`` in step ``s`` is a function of its input

    I_j(s) = sum_i  O_i(s - h_ij) * w_ij

where ``O_i(m)`` is the number of spikes neuron ``i`` kept in step ``m`` and
``h_ij >= 1`` is the synaptic delay in steps.  A presynaptic spike therefore
shows up ``(h - 1) * dt`` to ``(h + 1) * dt`` before the spikes it causes.

Two input-to-rate maps are provided: a sigmoid and a clamped linear one.
Weights of embedded pattern synapses are calibrated from a conditional
probability ``rho``: a single presynaptic spike must raise the target's rate
to ``lambda* = -ln(1 - rho) / dt``, the rate at which the target fires at
least once in one step with probability ``rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from string import ascii_uppercase
from typing import Sequence

import numpy as np
from numba import njit

from .events import EventSequence

__all__ = [
    "SIGMOID",
    "LINEAR",
    "RateModel",
    "rate_sigmoid",
    "rate_linear",
    "lambda_star",
    "calibrate_weight",
    "weight_for_probability",
    "PatternSpec",
    "NetworkSpec",
    "Network",
    "build_network",
    "simulate",
    "simulate_spec",
    "simulate_rates",
    "gen_noise",
    "neuron_labels",
    "noise_groups",
    "seed_sequence",
    "NOISE_MODELS",
]

SIGMOID = "sigmoid"
LINEAR = "linear"

# sigmoid peak sits just above the calibrated rate so that rate is reachable
SIGMOID_HEADROOM = 0.999


def lambda_star(rho: float, delta_t: float) -> float:
    """Rate at which P(at least one spike in ``delta_t``) equals ``rho``."""
    if not 0 < rho < 1:
        raise ValueError(f"conditional probability must lie in (0, 1), got {rho}")
    return -math.log1p(-rho) / delta_t


def rate_sigmoid(I, lambda1: float, d: float):
    """``lambda1 / (1 + exp(-I + d))``; works on scalars and arrays."""
    return lambda1 / (1.0 + np.exp(-np.asarray(I, dtype=float) + d))


def rate_linear(I, lambda0: float, lambda1: float, a: float, I1: float):
    """``a*I + lambda0`` clamped below at 0, and ``lambda1`` once ``I > I1``."""
    I = np.asarray(I, dtype=float)
    mid = np.clip(a * I + lambda0, 0.0, None)
    return np.where(I > I1, lambda1, mid)


@dataclass(frozen=True)
class RateModel:
    """Input-to-rate map shared by the neurons of a network.

    ``lambda0`` is the rate at zero input.  The sigmoid uses ``lambda1`` and
    ``d``; the linear model uses ``a`` (Hz per unit input), ``lambda1`` and
    ``I1``.
    """

    kind: str
    lambda0: float
    lambda1: float
    d: float = 0.0
    a: float = 0.0
    I1: float = math.inf

    def __post_init__(self):
        if self.kind not in (SIGMOID, LINEAR):
            raise ValueError(f"unknown rate model {self.kind!r}")
        if not 0 < self.lambda0 < self.lambda1:
            raise ValueError("need 0 < lambda0 < lambda1")
        if self.kind == LINEAR and not self.a > 0:
            raise ValueError("linear model needs a positive slope a")

    @classmethod
    def sigmoid(cls, lambda0: float, rho: float, delta_t: float) -> RateModel:
        """Peak just above ``lambda_star(rho)``; ``d`` puts zero input at ``lambda0``."""
        lam1 = lambda_star(rho, delta_t) / SIGMOID_HEADROOM
        return cls(SIGMOID, lambda0, lam1, d=math.log(lam1 / lambda0 - 1.0))

    @classmethod
    def linear(cls, lambda0: float, rho: float, delta_t: float,
               a: float | None = None) -> RateModel:
        """Saturates at ``lambda_star(rho)``; slope defaults to ``lambda0`` per unit input."""
        lam1 = lambda_star(rho, delta_t)
        a = lambda0 if a is None else a
        return cls(LINEAR, lambda0, lam1, a=a, I1=(lam1 - lambda0) / a)

    def rate(self, I):
        if self.kind == SIGMOID:
            return rate_sigmoid(I, self.lambda1, self.d)
        return rate_linear(I, self.lambda0, self.lambda1, self.a, self.I1)


def weight_for_rate(rate: float, model: RateModel) -> float:
    """Total input that drives ``model`` to ``rate`` (inverse of ``model.rate``)."""
    if model.kind == SIGMOID:
        if not 0 < rate < model.lambda1:
            raise ValueError(f"sigmoid cannot reach {rate} Hz (peak {model.lambda1})")
        return model.d - math.log(model.lambda1 / rate - 1.0)
    if not 0 <= rate <= model.lambda1:
        raise ValueError(f"linear model cannot reach {rate} Hz (peak {model.lambda1})")
    return (rate - model.lambda0) / model.a


def weight_for_probability(p: float, model: RateModel, delta_t: float) -> float:
    """Single-spike weight making the target fire within one step with probability ``p``."""
    return weight_for_rate(lambda_star(p, delta_t), model)


def calibrate_weight(rho: float, model: RateModel, delta_t: float, fan_in: int = 1) -> float:
    """Weight of one embedded synapse.

    With ``fan_in`` converging inputs each synapse carries ``1/fan_in`` of the
    drive, so the target reaches ``lambda_star(rho)`` only when every input
    neuron has fired.
    """
    if fan_in < 1:
        raise ValueError("fan_in must be >= 1")
    return weight_for_probability(rho, model, delta_t) / fan_in


def neuron_labels(n: int) -> list[str]:
    """``A``..``Z`` for up to 26 neurons, ``N001``.. beyond that."""
    if n <= 26:
        return list(ascii_uppercase[:n])
    width = len(str(n))
    return [f"N{i + 1:0{width}d}" for i in range(n)]


SERIAL_CHAIN = "serial_chain"
SYNCHRONY_FANOUT = "synchrony_fanout"
SYNFIRE_CHAIN = "synfire_chain"
PATTERN_KINDS = (SERIAL_CHAIN, SYNCHRONY_FANOUT, SYNFIRE_CHAIN)


@dataclass(frozen=True)
class PatternSpec:
    """Connectivity to embed: groups of neurons wired stage to stage.

    Every neuron of stage ``i`` connects to every neuron of stage ``i + 1``
    with delay ``delays[i]`` steps.  ``rho`` overrides the network's
    conditional probability for these synapses.
    """

    kind: str
    stages: tuple[tuple[str, ...], ...]
    delays: tuple[int, ...]
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in PATTERN_KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if len(self.stages) < 2:
            raise ValueError("a pattern needs at least two stages")
        if any(not g for g in self.stages):
            raise ValueError("pattern stages must be non-empty")
        if len(self.delays) != len(self.stages) - 1:
            raise ValueError(f"{len(self.stages)} stages need {len(self.stages) - 1} delays")
        if any(int(h) != h or h < 1 for h in self.delays):
            raise ValueError("synaptic delays must be integers >= 1 (steps)")
        if self.kind == SERIAL_CHAIN and any(len(g) != 1 for g in self.stages):
            raise ValueError("serial chain stages hold a single neuron each")
        if self.kind == SYNCHRONY_FANOUT and (len(self.stages) != 2 or len(self.stages[0]) != 1):
            raise ValueError("synchrony fan-out is one source stage and one target group")
        if self.rho is not None and not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        names = [n for g in self.stages for n in g]
        if len(set(names)) != len(names):
            raise ValueError("a neuron appears in more than one stage of a pattern")

    @classmethod
    def serial_chain(cls, names: Sequence[str], delay: int | Sequence[int] = 5,
                     rho: float | None = None) -> PatternSpec:
        return cls(SERIAL_CHAIN, tuple((n,) for n in names),
                   _delays(delay, len(names) - 1), rho)

    @classmethod
    def synchrony_fanout(cls, source: str, targets: Sequence[str], delay: int = 5,
                         rho: float | None = None) -> PatternSpec:
        return cls(SYNCHRONY_FANOUT, ((source,), tuple(targets)), (int(delay),), rho)

    @classmethod
    def synfire_chain(cls, stages: Sequence[Sequence[str]], delay: int | Sequence[int] = 5,
                      rho: float | None = None) -> PatternSpec:
        return cls(SYNFIRE_CHAIN, tuple(tuple(g) for g in stages),
                   _delays(delay, len(stages) - 1), rho)

    def edges(self):
        """``(source, target, delay, fan_in)`` for each synapse of the pattern."""
        for (src, dst), h in zip(zip(self.stages, self.stages[1:]), self.delays):
            for b in dst:
                for a in src:
                    yield a, b, h, len(src)

    @property
    def neurons(self) -> tuple[str, ...]:
        return tuple(n for g in self.stages for n in g)


def _delays(delay, n):
    if isinstance(delay, (int, np.integer)):
        return (int(delay),) * n
    return tuple(int(h) for h in delay)


@dataclass
class NetworkSpec:
    """Everything needed to build a network; weights in input units, times in seconds.

    ``random_weight_range`` is ``(low, high)`` for the uniform random
    weights; ``None`` picks the range whose conditional probabilities span
    ``NOISE_PROBABILITY_RANGE``.
    """

    n_neurons: int = 26
    random_fanout: int = 13
    random_weight_range: tuple[float, float] | None = None
    delta_t: float = 0.001
    h: int = 5
    tau_r: float = 0.001
    rho: float = 0.95
    lambda0: float = 20.0
    rate_model: str = SIGMOID
    linear_slope: float | None = None
    patterns: list[PatternSpec] = field(default_factory=list)
    labels: list[str] | None = None

    def __post_init__(self):
        if self.n_neurons < 1:
            raise ValueError("need at least one neuron")
        if not 0 <= self.random_fanout < self.n_neurons:
            raise ValueError("random_fanout must lie in [0, n_neurons)")
        if not self.delta_t > 0:
            raise ValueError("delta_t must be positive")
        if int(self.h) != self.h or self.h < 1:
            raise ValueError("h must be an integer >= 1")
        if self.tau_r < 0:
            raise ValueError("tau_r must be >= 0")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if self.rate_model not in (SIGMOID, LINEAR):
            raise ValueError(f"unknown rate model {self.rate_model!r}")
        if self.labels is None:
            self.labels = neuron_labels(self.n_neurons)
        elif len(self.labels) != self.n_neurons or len(set(self.labels)) != self.n_neurons:
            raise ValueError("labels must be n_neurons distinct names")
        if self.random_weight_range is not None:
            lo, hi = self.random_weight_range
            if not lo <= hi:
                raise ValueError("random_weight_range needs low <= high")
            self.random_weight_range = (float(lo), float(hi))

    def model(self) -> RateModel:
        if self.rate_model == SIGMOID:
            return RateModel.sigmoid(self.lambda0, self.rho, self.delta_t)
        return RateModel.linear(self.lambda0, self.rho, self.delta_t, self.linear_slope)

    def weight_range(self) -> tuple[float, float]:
        if self.random_weight_range is not None:
            return self.random_weight_range
        if self.rate_model == SIGMOID:
            return NOISE1_WEIGHT_RANGE
        model = self.model()
        lo, hi = NOISE_PROBABILITY_RANGE
        return (weight_for_probability(lo, model, self.delta_t),
                weight_for_probability(hi, model, self.delta_t))


# conditional-probability span of the random synapses, and its sigmoid weights
NOISE_PROBABILITY_RANGE = (0.012, 0.032)
NOISE1_WEIGHT_RANGE = (-0.75, 0.75)


@dataclass
class Network:
    """Synapse arrays plus the rate model; ``delay`` is in steps."""

    labels: list[str]
    source: np.ndarray
    target: np.ndarray
    weight: np.ndarray
    delay: np.ndarray
    model: RateModel
    delta_t: float
    tau_r: float
    embedded: list[tuple[str, str, float, int]] = field(default_factory=list)

    @property
    def n_neurons(self) -> int:
        return len(self.labels)

    def synapse(self, a: str, b: str) -> tuple[float, int] | None:
        i, j = self.labels.index(a), self.labels.index(b)
        hit = np.flatnonzero((self.source == i) & (self.target == j))
        if not len(hit):
            return None
        return float(self.weight[hit[0]]), int(self.delay[hit[0]])

    def describe(self) -> dict:
        m = self.model
        return {
            "n_neurons": self.n_neurons,
            "n_synapses": int(len(self.source)),
            "rate_model": {"kind": m.kind, "lambda0": m.lambda0, "lambda1": m.lambda1,
                           "d": m.d, "a": m.a, "I1": m.I1},
            "delta_t": self.delta_t,
            "tau_r": self.tau_r,
            "embedded": [{"source": a, "target": b, "weight": w, "delay": h}
                         for a, b, w, h in self.embedded],
        }


def build_network(spec: NetworkSpec, seed=None) -> Network:
    """Random synapses (``random_fanout`` targets per neuron) plus the embedded patterns.

    Pattern synapses replace any random synapse between the same pair.

    Raises
    ------
    ValueError
        If a pattern names a neuron outside ``spec.labels``.
    """
    rng = np.random.default_rng(seed)
    model = spec.model()
    index = {lab: i for i, lab in enumerate(spec.labels)}
    n = spec.n_neurons
    lo, hi = spec.weight_range()
    syn: dict[tuple[int, int], tuple[float, int]] = {}
    for i in range(n):
        if spec.random_fanout == 0:
            break
        others = np.delete(np.arange(n), i)
        for j in rng.choice(others, size=spec.random_fanout, replace=False):
            syn[(i, int(j))] = (float(rng.uniform(lo, hi)), int(spec.h))
    embedded = []
    for pat in spec.patterns:
        rho = spec.rho if pat.rho is None else pat.rho
        for a, b, h, fan_in in pat.edges():
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise ValueError(f"pattern neuron {missing!r} is not one of the "
                                 f"{n} network neurons")
            w = calibrate_weight(rho, model, spec.delta_t, fan_in)
            syn[(index[a], index[b])] = (w, int(h))
            embedded.append((a, b, w, int(h)))
    keys = sorted(syn)
    return Network(
        labels=list(spec.labels),
        source=np.array([k[0] for k in keys], dtype=np.int64),
        target=np.array([k[1] for k in keys], dtype=np.int64),
        weight=np.array([syn[k][0] for k in keys], dtype=np.float64),
        delay=np.array([syn[k][1] for k in keys], dtype=np.int64),
        model=model,
        delta_t=spec.delta_t,
        tau_r=spec.tau_r,
        embedded=embedded,
    )


@njit(cache=True)
def _push(buf_t, buf_n, pos, t, j):
    if pos >= buf_t.size:
        new_t = np.empty(2 * buf_t.size, dtype=np.float64)
        new_n = np.empty(2 * buf_n.size, dtype=np.int64)
        new_t[:pos] = buf_t[:pos]
        new_n[:pos] = buf_n[:pos]
        buf_t, buf_n = new_t, new_n
    buf_t[pos] = t
    buf_n[pos] = j
    return buf_t, buf_n


@njit(cache=True)
def _emit(rng, rate, s, j, dt, tau_r, last, buf_t, buf_n, pos):
    """Poisson spikes of neuron ``j`` in step ``s``; returns kept count and buffers."""
    if rate <= 0.0:
        return 0, buf_t, buf_n, pos
    k = rng.poisson(rate * dt)
    if k == 0:
        return 0, buf_t, buf_n, pos
    u = np.sort(rng.random(k))
    kept = 0
    for q in range(k):
        # 1 ns resolution, applied before the refractory test
        t = np.round((s + u[q]) * dt * 1e9) / 1e9
        if t - last[j] < tau_r:
            continue
        last[j] = t
        buf_t, buf_n = _push(buf_t, buf_n, pos, t, j)
        pos += 1
        kept += 1
    return kept, buf_t, buf_n, pos


@njit(cache=True)
def _network_kernel(rng, n_steps, n, src, tgt, w, h, sigmoid, lam0, lam1, d, a, I1,
                    dt, tau_r, buf_t, buf_n):
    hmax = 1
    for e in range(h.size):
        if h[e] > hmax:
            hmax = h[e]
    ring = hmax + 1
    hist = np.zeros((ring, n), dtype=np.int64)
    last = np.full(n, -np.inf)
    inp = np.zeros(n)
    pos = 0
    for s in range(n_steps):
        inp[:] = 0.0
        for e in range(src.size):
            m = s - h[e]
            if m >= 0:
                inp[tgt[e]] += hist[m % ring, src[e]] * w[e]
        row = s % ring
        for j in range(n):
            x = inp[j]
            if sigmoid:
                rate = lam1 / (1.0 + np.exp(-x + d))
            elif x > I1:
                rate = lam1
            else:
                rate = max(a * x + lam0, 0.0)
            kept, buf_t, buf_n, pos = _emit(rng, rate, s, j, dt, tau_r, last, buf_t, buf_n, pos)
            hist[row, j] = kept
    return buf_t[:pos], buf_n[:pos]


@njit(cache=True)
def _rate_table_kernel(rng, rates, s0, dt, tau_r, last, buf_t, buf_n):
    pos = 0
    for r in range(rates.shape[0]):
        for j in range(rates.shape[1]):
            kept, buf_t, buf_n, pos = _emit(rng, rates[r, j], s0 + r, j, dt, tau_r, last,
                                            buf_t, buf_n, pos)
    return buf_t[:pos], buf_n[:pos]


def _to_sequence(times: np.ndarray, neurons: np.ndarray, labels: Sequence[str]) -> EventSequence:
    order = np.lexsort((neurons, times))
    return EventSequence.from_arrays((labels[i] for i in neurons[order]), times[order].tolist())


def seed_sequence(seed) -> np.random.SeedSequence:
    """Accept an int, ``None`` or an existing ``SeedSequence``."""
    if isinstance(seed, np.random.SeedSequence):
        # spawn() advances its argument, so work on a copy
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key,
                                      pool_size=seed.pool_size)
    return np.random.SeedSequence(seed)


def _n_steps(duration: float, dt: float) -> int:
    if duration < 0:
        raise ValueError("duration must be >= 0")
    return int(round(duration / dt))


def _capacity(n_steps: int, n: int) -> int:
    return max(1024, int(n_steps * n * 0.05))


def simulate(net: Network, duration: float, seed=None) -> EventSequence:
    """Run ``net`` for ``duration`` seconds; same seed, same stream."""
    steps = _n_steps(duration, net.delta_t)
    if steps == 0:
        return EventSequence()
    rng = np.random.default_rng(seed)
    m = net.model
    cap = _capacity(steps, net.n_neurons)
    times, neurons = _network_kernel(
        rng, steps, net.n_neurons, net.source, net.target, net.weight, net.delay,
        m.kind == SIGMOID, m.lambda0, m.lambda1, m.d, m.a, m.I1,
        net.delta_t, net.tau_r, np.empty(cap), np.empty(cap, dtype=np.int64))
    return _to_sequence(times, neurons, net.labels)


def simulate_spec(spec: NetworkSpec, duration: float, seed=None) -> tuple[EventSequence, Network]:
    """Build and run a network; one master seed feeds both stages."""
    net_seed, sim_seed = seed_sequence(seed).spawn(2)
    net = build_network(spec, net_seed)
    return simulate(net, duration, sim_seed), net


def simulate_rates(rate_fn, n_neurons: int, duration: float, seed=None, delta_t: float = 0.001,
                   tau_r: float = 0.001, labels: Sequence[str] | None = None,
                   chunk: int = 10_000) -> EventSequence:
    """Poisson spikes from externally given rates.

    ``rate_fn(rng, s0, n_steps)`` returns the ``(n_steps, n_neurons)`` rates
    (Hz) of steps ``s0 .. s0 + n_steps - 1``.  Spiking does not feed back.
    """
    labels = neuron_labels(n_neurons) if labels is None else list(labels)
    steps = _n_steps(duration, delta_t)
    rng = np.random.default_rng(seed)
    last = np.full(n_neurons, -np.inf)
    parts_t, parts_n = [], []
    for s0 in range(0, steps, chunk):
        k = min(chunk, steps - s0)
        rates = np.ascontiguousarray(rate_fn(rng, s0, k), dtype=np.float64)
        if rates.shape != (k, n_neurons):
            raise ValueError(f"rate_fn returned shape {rates.shape}, expected {(k, n_neurons)}")
        cap = _capacity(k, n_neurons)
        t, nn = _rate_table_kernel(rng, rates, s0, delta_t, tau_r, last,
                                   np.empty(cap), np.empty(cap, dtype=np.int64))
        parts_t.append(t)
        parts_n.append(nn)
    if not parts_t:
        return EventSequence()
    return _to_sequence(np.concatenate(parts_t), np.concatenate(parts_n), labels)


NOISE_MODELS = {
    1: "random network, sigmoid rate",
    2: "random network, linear rate",
    3: "independent Poisson, fixed rates",
    4: "independent Poisson, rates redrawn every step",
    5: "five groups sharing a fixed rate",
    6: "five groups sharing a rate redrawn every step",
}
NOISE_RATE_RANGE = (10.0, 30.0)
NOISE_GROUPS = 5


def noise_groups(n_neurons: int, rng, n_groups: int = NOISE_GROUPS) -> np.ndarray:
    """Random partition of the neurons into ``n_groups`` non-empty groups (group id per neuron)."""
    if n_neurons < n_groups:
        raise ValueError(f"cannot split {n_neurons} neurons into {n_groups} groups")
    groups = np.empty(n_neurons, dtype=np.int64)
    for g, members in enumerate(np.array_split(rng.permutation(n_neurons), n_groups)):
        groups[members] = g
    return groups


def gen_noise(model: int, seed=None, duration: float = 50.0, n_neurons: int = 26,
              delta_t: float = 0.001, tau_r: float = 0.001, return_info: bool = False):
    """Structure-free spike data from one of the six null models (see ``NOISE_MODELS``).

    With ``return_info`` the result is ``(sequence, info)`` where ``info``
    holds the drawn rates or groups, or the network for models 1 and 2.
    """
    if model not in NOISE_MODELS:
        raise ValueError(f"unknown noise model {model!r}; expected 1..6")
    setup_seed, spike_seed = seed_sequence(seed).spawn(2)
    setup = np.random.default_rng(setup_seed)
    lo, hi = NOISE_RATE_RANGE
    info: dict = {"model": model, "description": NOISE_MODELS[model]}
    if model in (1, 2):
        spec = NetworkSpec(n_neurons=n_neurons, random_fanout=n_neurons // 2,
                           delta_t=delta_t, tau_r=tau_r,
                           rate_model=SIGMOID if model == 1 else LINEAR)
        net = build_network(spec, setup_seed)
        seq = simulate(net, duration, spike_seed)
        info["network"] = net
        info["weight_range"] = spec.weight_range()
        return (seq, info) if return_info else seq

    if model == 3:
        fixed = setup.uniform(lo, hi, n_neurons)
        info["rates"] = fixed

        def rate_fn(rng, s0, k):
            return np.broadcast_to(fixed, (k, n_neurons))
    elif model == 4:
        def rate_fn(rng, s0, k):
            return rng.uniform(lo, hi, (k, n_neurons))
    else:
        groups = noise_groups(n_neurons, setup)
        info["groups"] = groups
        if model == 5:
            fixed = setup.uniform(lo, hi, NOISE_GROUPS)
            info["rates"] = fixed[groups]

            def rate_fn(rng, s0, k):
                return np.broadcast_to(fixed[groups], (k, n_neurons))
        else:
            def rate_fn(rng, s0, k):
                return rng.uniform(lo, hi, (k, NOISE_GROUPS))[:, groups]
    seq = simulate_rates(rate_fn, n_neurons, duration, spike_seed, delta_t, tau_r)
    return (seq, info) if return_info else seq
