from __future__ import annotations

import pytest

from spikeepisodes.netconfig import (
    ConfigError,
    format_network_config,
    load_network_config,
    parse_network_config,
)
from spikeepisodes.presets import PRESETS
from spikeepisodes.simulation import LINEAR, PatternSpec

EXAMPLE = """\
# Example 3 style network
neurons = 26
fanout  = 13     # half the neurons
rho     = 0.95
model   = linear
slope   = 10

pattern synfire_chain X > A B C > D > E > F  delay=5,3,7,3
pattern synchrony_fanout G > H I J rho=0.8
"""


class TestParse:
    def test_example(self):
        spec = parse_network_config(EXAMPLE)
        assert spec.n_neurons == 26 and spec.random_fanout == 13
        assert spec.rate_model == LINEAR and spec.linear_slope == 10
        syn, fan = spec.patterns
        assert syn == PatternSpec.synfire_chain(["X", "ABC", "D", "E", "F"], delay=(5, 3, 7, 3))
        assert fan.kind == "synchrony_fanout" and fan.rho == 0.8 and fan.delays == (5,)

    def test_defaults(self):
        spec = parse_network_config("neurons = 8\n")
        assert spec.random_fanout == 4 and spec.h == 5 and spec.lambda0 == 20

    def test_labels(self):
        spec = parse_network_config("labels = n1 n2 n3\npattern serial_chain n1 > n3 delay=2\n")
        assert spec.n_neurons == 3 and spec.patterns[0].delays == (2,)

    def test_weights(self):
        spec = parse_network_config("weights = -0.5 0.5\n")
        assert spec.random_weight_range == (-0.5, 0.5)

    def test_default_delay_follows_h(self):
        spec = parse_network_config("h = 3\npattern serial_chain A > B > C\n")
        assert spec.patterns[0].delays == (3, 3)

    @pytest.mark.parametrize("text,line", [
        ("neurons = 26\nbogus = 1\n", 2),
        ("neurons = many\n", 1),
        ("\n\nneurons 26\n", 3),
        ("rho = 0.9\nrho = 0.8\n", 2),
        ("model = cubic\n", 1),
        ("pattern ring A > B\n", 1),
        ("neurons = 4\n# x\npattern serial_chain A > B > Q\n", 3),
        ("pattern serial_chain A > B delay=x\n", 1),
        ("pattern serial_chain A B > C\n", 1),
        ("pattern serial_chain A > B colour=red\n", 1),
        ("weights = 1\n", 1),
    ])
    def test_errors_have_line_numbers(self, text, line):
        with pytest.raises(ConfigError) as info:
            parse_network_config(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")

    def test_global_inconsistency(self):
        with pytest.raises(ConfigError, match="fanout"):
            parse_network_config("neurons = 4\nfanout = 4\n")


class TestRoundTrip:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    @pytest.mark.parametrize("model", ["sigmoid", "linear"])
    def test_presets(self, name, model):
        spec = PRESETS[name](rate_model=model)
        assert parse_network_config(format_network_config(spec)) == spec

    def test_file(self, tmp_path):
        path = tmp_path / "ex.net"
        path.write_text(EXAMPLE)
        assert load_network_config(path) == parse_network_config(EXAMPLE)
