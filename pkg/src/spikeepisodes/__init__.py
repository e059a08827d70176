"""Frequent episode discovery in multi-neuron spike trains.

Counting of serial and parallel episodes under time constraints, level-wise
mining, a spiking network simulator with embedded connectivity patterns,
synfire-chain discovery, a significance harness and an episode-set
similarity score.
"""

from __future__ import annotations

from .counting import (
    ParallelExpiryCounter,
    SerialIntervalCounter,
    count_episodes,
    count_parallel_expiry,
    count_serial_intervals,
)
from .episodes import (
    PARALLEL,
    SERIAL,
    Episode,
    IntervalConstraint,
    is_subepisode,
    parallel,
    parse_episode,
    parse_interval,
    parse_interval_set,
    serial,
)
from .events import Event, EventFormatError, EventSequence, parse_events, read_events, save_events
from .mining import FrequentEpisodeSet, MiningConfig, MiningReport, mine
from .netconfig import ConfigError, format_network_config, load_network_config, parse_network_config
from .oracle import oracle_count
from .presets import PRESETS
from .significance import SignificanceConfig, SignificanceReport, significance_run
from .similarity import similarity, similarity_breakdown, similarity_matrix
from .simulation import (
    NetworkSpec,
    PatternSpec,
    RateModel,
    build_network,
    calibrate_weight,
    gen_noise,
    simulate,
    simulate_spec,
)
from .synfire import discover_synfire, rewrite_with_composites

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Episode",
    "Event",
    "EventFormatError",
    "EventSequence",
    "FrequentEpisodeSet",
    "IntervalConstraint",
    "MiningConfig",
    "MiningReport",
    "NetworkSpec",
    "PARALLEL",
    "PRESETS",
    "ParallelExpiryCounter",
    "PatternSpec",
    "RateModel",
    "SERIAL",
    "SerialIntervalCounter",
    "SignificanceConfig",
    "SignificanceReport",
    "build_network",
    "calibrate_weight",
    "count_episodes",
    "count_parallel_expiry",
    "count_serial_intervals",
    "discover_synfire",
    "format_network_config",
    "gen_noise",
    "is_subepisode",
    "load_network_config",
    "mine",
    "oracle_count",
    "parallel",
    "parse_episode",
    "parse_events",
    "parse_interval",
    "parse_interval_set",
    "parse_network_config",
    "read_events",
    "rewrite_with_composites",
    "save_events",
    "serial",
    "significance_run",
    "similarity",
    "similarity_breakdown",
    "similarity_matrix",
    "simulate",
    "simulate_spec",
]
