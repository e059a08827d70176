"""Plain-text network description files.

One setting per line, ``#`` starts a comment, blank lines are ignored::

    # Example 1
    neurons  = 26            # or: labels = A B C ...
    fanout   = 13            # random synapses per neuron (default: half)
    weights  = -0.75 0.75    # optional uniform random weight range
    dt       = 0.001         # seconds
    h        = 5             # default synaptic delay in steps
    tau_r    = 0.001         # seconds
    rho      = 0.95
    lambda0  = 20            # Hz
    model    = sigmoid       # or: linear
    slope    = 20            # linear model only, Hz per unit input

    pattern serial_chain     A > B > C > D   delay=5
    pattern serial_chain     B > E > F
    pattern synchrony_fanout A > B C D E     delay=5 rho=0.8
    pattern synfire_chain    X > A B C > D   delay=5,3

Stages of a pattern are separated by ``>``; neurons in a stage by spaces.
``delay`` is one step count for every link or a comma list with one entry
per link and defaults to ``h``.
"""

from __future__ import annotations

from pathlib import Path

from .simulation import LINEAR, PATTERN_KINDS, SIGMOID, NetworkSpec, PatternSpec

__all__ = ["ConfigError", "parse_network_config", "load_network_config", "format_network_config"]


class ConfigError(ValueError):
    """Malformed network description; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_SCALARS = {
    "neurons": ("n_neurons", int),
    "fanout": ("random_fanout", int),
    "dt": ("delta_t", float),
    "h": ("h", int),
    "tau_r": ("tau_r", float),
    "rho": ("rho", float),
    "lambda0": ("lambda0", float),
    "slope": ("linear_slope", float),
}


def _parse_pattern(rest: str, lineno: int, default_h: int):
    words = rest.split()
    if not words:
        raise ConfigError("pattern needs a kind", lineno)
    kind, words = words[0], words[1:]
    if kind not in PATTERN_KINDS:
        raise ConfigError(f"unknown pattern kind {kind!r} (expected one of {', '.join(PATTERN_KINDS)})",
                          lineno)
    options = {}
    body = []
    for w in words:
        if "=" in w:
            key, _, val = w.partition("=")
            options[key] = val
        else:
            body.append(w)
    stages = [g.split() for g in " ".join(body).split(">")]
    unknown = set(options) - {"delay", "rho"}
    if unknown:
        raise ConfigError(f"unknown pattern option {sorted(unknown)[0]!r}", lineno)
    try:
        delays = [int(x) for x in options["delay"].split(",")] if "delay" in options else [default_h]
        rho = float(options["rho"]) if "rho" in options else None
    except ValueError as exc:
        raise ConfigError(f"bad pattern option: {exc}", lineno) from None
    if len(delays) == 1:
        delays = delays * max(len(stages) - 1, 1)
    try:
        return PatternSpec(kind, tuple(tuple(g) for g in stages), tuple(delays), rho)
    except ValueError as exc:
        raise ConfigError(str(exc), lineno) from None


def parse_network_config(text: str) -> NetworkSpec:
    """Build a :class:`NetworkSpec` from config text.

    Raises
    ------
    ConfigError
        With the offending line number, except for settings that are only
        inconsistent as a whole (for example a fanout of at least the
        neuron count).
    """
    kw: dict = {}
    pattern_lines = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.split()[0] == "pattern":
            pattern_lines.append((lineno, line[len("pattern"):].strip()))
            continue
        key, eq, value = (s.strip() for s in line.partition("="))
        if not eq:
            raise ConfigError(f"expected 'key = value' or 'pattern ...', got {line!r}", lineno)
        if key in seen:
            raise ConfigError(f"{key!r} already set on line {seen[key]}", lineno)
        seen[key] = lineno
        try:
            if key in _SCALARS:
                name, conv = _SCALARS[key]
                kw[name] = conv(value)
            elif key == "labels":
                kw["labels"] = value.split()
            elif key == "weights":
                lo, hi = (float(x) for x in value.split())
                kw["random_weight_range"] = (lo, hi)
            elif key == "model":
                if value not in (SIGMOID, LINEAR):
                    raise ValueError(f"model must be {SIGMOID} or {LINEAR}, got {value!r}")
                kw["rate_model"] = value
            else:
                raise ValueError(f"unknown setting {key!r}")
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
    if "labels" in kw:
        kw.setdefault("n_neurons", len(kw["labels"]))
    kw.setdefault("random_fanout", kw.get("n_neurons", 26) // 2)
    default_h = kw.get("h", 5)
    kw["patterns"] = [_parse_pattern(rest, ln, default_h) for ln, rest in pattern_lines]
    try:
        spec = NetworkSpec(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    known = set(spec.labels)
    for (ln, _), pat in zip(pattern_lines, spec.patterns):
        missing = [n for n in pat.neurons if n not in known]
        if missing:
            raise ConfigError(f"pattern names unknown neuron {missing[0]!r}", ln)
    return spec


def load_network_config(path) -> NetworkSpec:
    return parse_network_config(Path(path).read_text(encoding="utf-8"))


def format_network_config(spec: NetworkSpec) -> str:
    """Inverse of :func:`parse_network_config`."""
    lines = [
        f"labels = {' '.join(spec.labels)}",
        f"fanout = {spec.random_fanout}",
    ]
    if spec.random_weight_range is not None:
        lines.append("weights = {!r} {!r}".format(*spec.random_weight_range))
    lines += [
        f"dt = {spec.delta_t!r}",
        f"h = {spec.h}",
        f"tau_r = {spec.tau_r!r}",
        f"rho = {spec.rho!r}",
        f"lambda0 = {spec.lambda0!r}",
        f"model = {spec.rate_model}",
    ]
    if spec.linear_slope is not None:
        lines.append(f"slope = {spec.linear_slope!r}")
    for pat in spec.patterns:
        stages = " > ".join(" ".join(g) for g in pat.stages)
        opts = f"delay={','.join(str(h) for h in pat.delays)}"
        if pat.rho is not None:
            opts += f" rho={pat.rho!r}"
        lines.append(f"pattern {pat.kind} {stages} {opts}")
    return "\n".join(lines) + "\n"
