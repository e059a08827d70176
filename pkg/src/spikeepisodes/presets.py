"""Ready-made network specifications for the demonstration scenarios.

All use 26 neurons named ``A``..``Z``, a 20 Hz quiescent rate, 1 ms steps, a
1 ms refractory period and ``rho = 0.95`` unless stated otherwise.
"""

from __future__ import annotations

from .simulation import SIGMOID, NetworkSpec, PatternSpec

__all__ = [
    "example1_spec",
    "example2_spec",
    "example3_spec",
    "synchrony10_spec",
    "serial10_spec",
    "PRESETS",
    "SYNCHRONY10_GROUP",
    "SERIAL10_CHAIN",
]


def _spec(rate_model: str, patterns, **kw) -> NetworkSpec:
    kw.setdefault("random_fanout", 13)
    return NetworkSpec(rate_model=rate_model, patterns=list(patterns), **kw)


def example1_spec(rate_model: str = SIGMOID, **kw) -> NetworkSpec:
    """A -> B, then B fans out to C and E; C -> D and E -> F; every delay 5 ms."""
    return _spec(rate_model, [
        PatternSpec.serial_chain("ABCD", delay=5),
        PatternSpec.serial_chain("BEF", delay=5),
    ], **kw)


def example2_spec(rate_model: str = SIGMOID, **kw) -> NetworkSpec:
    """Synfire chain A > (B C D) > E > (F G H I) > J > (K L), 5 ms per stage."""
    stages = ["A", "BCD", "E", "FGHI", "J", "KL"]
    return _spec(rate_model, [PatternSpec.synfire_chain(stages, delay=5)], **kw)


def example3_spec(rate_model: str = SIGMOID, **kw) -> NetworkSpec:
    """X > (A B C) > D > E > F with delays 5, 3, 7 and 3 ms."""
    stages = ["X", "ABC", "D", "E", "F"]
    return _spec(rate_model, [PatternSpec.synfire_chain(stages, delay=(5, 3, 7, 3))], **kw)


SYNCHRONY10_GROUP = tuple("BCDEFGHIJK")
SERIAL10_CHAIN = tuple("ABCDEFGHIJ")


def synchrony10_spec(rho: float = 0.8, rate_model: str = SIGMOID, **kw) -> NetworkSpec:
    """Neuron A drives the ten neurons B..K, which then fire together."""
    return _spec(rate_model, [PatternSpec.synchrony_fanout("A", SYNCHRONY10_GROUP, delay=5)],
                 rho=rho, **kw)


def serial10_spec(rho: float = 0.8, rate_model: str = SIGMOID, **kw) -> NetworkSpec:
    """Ordered firing A -> B -> ... -> J, 5 ms per link."""
    return _spec(rate_model, [PatternSpec.serial_chain(SERIAL10_CHAIN, delay=5)],
                 rho=rho, **kw)


PRESETS = {
    "example1": example1_spec,
    "example2": example2_spec,
    "example3": example3_spec,
    "synchrony10": synchrony10_spec,
    "serial10": serial10_spec,
}
