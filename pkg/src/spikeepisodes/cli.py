"""Command-line front end: ``spikeepisodes <command> ...``.

Every file written is accompanied by ``<file>.manifest.json`` recording the
command, the full argument echo, seeds, input checksums and timings.
Durations, expiry times and intervals are given in seconds.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .episodes import PARALLEL, SERIAL, Episode, parse_episode, parse_interval_set, parallel
from .events import EventFormatError, read_events, save_events
from .mining import MiningConfig, MiningReport, mine
from .netconfig import ConfigError, format_network_config, load_network_config
from .presets import PRESETS
from .significance import SignificanceConfig, significance_run
from .similarity import similarity_breakdown
from .simulation import NOISE_MODELS, LINEAR, SIGMOID, build_network, gen_noise, simulate
from .synfire import discover_synfire, rewrite_with_composites

__all__ = ["main", "build_parser", "UsageError", "DataError"]

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    """Bad flags or configuration (exit 1)."""


class DataError(Exception):
    """Unreadable or unusable input data (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _args_echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def write_manifest(output, args, inputs=(), seeds=None, config=None, timings=None) -> Path:
    """Write ``<output>.manifest.json`` and return its path."""
    output = Path(output)
    manifest = {
        "subcommand": args.command,
        "argv": sys.argv[1:],
        "arguments": _args_echo(args),
        "config": config,
        "seeds": seeds,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in inputs],
        "output": {"path": str(output), "sha256": _sha256(output)},
        "version": __version__,
        "python": platform.python_version(),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "timings": timings or {},
    }
    path = output.with_name(output.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def _read_stream(path):
    try:
        return read_events(path)
    except FileNotFoundError:
        raise DataError(f"spike file not found: {path}") from None
    except EventFormatError as exc:
        raise DataError(f"{path}: {exc}") from None


def _intervals(text):
    try:
        return parse_interval_set(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _non_negative(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _model_range(text):
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        try:
            out.extend(range(int(lo), int(hi or lo) + 1))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad noise model list {text!r}") from None
    if not out or any(m not in NOISE_MODELS for m in out):
        raise argparse.ArgumentTypeError(f"noise models are 1..{len(NOISE_MODELS)}, got {text!r}")
    return tuple(dict.fromkeys(out))


def _mining_config(args, kind) -> MiningConfig:
    try:
        return MiningConfig(
            frequency_threshold=args.threshold, level_decay=args.decay, max_size=args.max_size,
            expiry=args.expiry if kind == PARALLEL else None,
            intervals=_intervals(args.intervals) if kind == SERIAL else None,
            engine=args.engine, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


# -- commands ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    """Simulate a network (config file or preset) or a noise model to a spike file."""
    t0 = time.perf_counter()
    if args.noise is not None:
        spec_text = None
        seq = gen_noise(args.noise, args.seed, args.duration, args.neurons)
        config = {"noise_model": args.noise, "n_neurons": args.neurons}
    else:
        if args.config:
            try:
                spec = load_network_config(args.config)
            except FileNotFoundError:
                raise UsageError(f"config file not found: {args.config}") from None
            except ConfigError as exc:
                raise UsageError(f"{args.config}: {exc}") from None
        else:
            spec = PRESETS[args.preset](rate_model=args.model)
        net = build_network(spec, args.seed)
        seq = simulate(net, args.duration, args.seed)
        spec_text = format_network_config(spec)
        config = {"network": spec_text, "calibration": net.describe()}
    t_sim = time.perf_counter() - t0
    try:
        save_events(seq, args.out)
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}") from None
    inputs = [args.config] if args.config else []
    write_manifest(args.out, args, inputs, seeds={"seed": args.seed}, config=config,
                   timings={"simulate": t_sim})
    print(f"wrote {len(seq)} events over {args.duration:g} s to {args.out}")
    return EXIT_OK


def cmd_mine(args) -> int:
    seq = _read_stream(args.spikes)
    cfg = _mining_config(args, args.kind)
    if not len(seq):
        raise DataError(f"{args.spikes} holds no events")
    report = mine(seq, args.kind, cfg)
    print(report.format_table(args.rows))
    print("thresholds per size: " + ", ".join(f"{lev.size}:{lev.threshold}" for lev in report.levels))
    if args.json:
        _write_text(args.json, report.to_json(indent=2))
        write_manifest(args.json, args, [args.spikes], config=cfg.to_dict(),
                       timings={"mine": report.elapsed})
    return EXIT_OK


def _episode_list(text):
    eps = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            eps.append(parse_episode(part) if part.startswith("(") else parallel(part.split()))
    return eps


def cmd_rewrite(args) -> int:
    seq = _read_stream(args.spikes)
    if args.report:
        try:
            report = MiningReport.from_json(Path(args.report).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError) as exc:
            raise DataError(f"cannot read mining report {args.report}: {exc}") from None
        if report.kind != PARALLEL:
            raise UsageError("rewriting needs a parallel mining report")
        episodes = [ep for ep, _ in report.maximal() if ep.size >= 2]
        expiry = args.expiry if args.expiry is not None else report.config.expiry
    else:
        episodes = _episode_list(args.episodes)
        expiry = args.expiry
    t0 = time.perf_counter()
    try:
        out = rewrite_with_composites(seq, episodes, expiry)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        save_events(out, args.out)
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}") from None
    inputs = [args.spikes] + ([args.report] if args.report else [])
    write_manifest(args.out, args, inputs,
                   config={"episodes": [str(e) for e in episodes], "expiry": expiry},
                   timings={"rewrite": time.perf_counter() - t0})
    print(f"{len(seq)} events -> {len(out)} events using {len(episodes)} composite(s)")
    return EXIT_OK


def cmd_synfire(args) -> int:
    seq = _read_stream(args.spikes)
    if not len(seq):
        raise DataError(f"{args.spikes} holds no events")
    intervals = _intervals(args.intervals)
    try:
        res = discover_synfire(seq, args.expiry, intervals, args.threshold, args.decay,
                               args.max_size, engine=args.engine)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    print("parallel stage")
    print(res.parallel.format_table(args.rows))
    print("composites: " + (", ".join(str(e) for e in res.composites) or "none"))
    print("serial stage on rewritten stream")
    print(res.serial.format_table(args.rows))
    if args.json:
        doc = {"parallel": res.parallel.to_dict(), "composites": [e.to_dict() for e in res.composites],
               "serial": res.serial.to_dict()}
        _write_text(args.json, json.dumps(doc, indent=2))
        write_manifest(args.json, args, [args.spikes],
                       timings={"parallel": res.parallel.elapsed, "serial": res.serial.elapsed})
    if args.rewritten:
        save_events(res.rewritten, args.rewritten)
        write_manifest(args.rewritten, args, [args.spikes])
    return EXIT_OK


def cmd_significance(args) -> int:
    reps, duration = args.reps, args.duration
    kw = {}
    if args.smoke:
        kw["max_size"] = 6
    try:
        cfg = SignificanceConfig(replicates=reps, duration=duration, noise_models=args.noise,
                                 seed=args.seed, workers=args.workers, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    report = significance_run(cfg, progress)
    for kind in (PARALLEL, SERIAL):
        print(f"{kind}: mean noise max at size 3 = {report.noise_max(kind, 3):.3g}")
        for label, ratio in report.separation(kind, 3).items():
            print(f"  {label}: pattern min / noise max = {ratio:.3g}")
    prefix = Path(args.out)
    tsv, js = prefix.with_suffix(".tsv"), prefix.with_suffix(".json")
    _write_text(tsv, report.to_tsv())
    _write_text(js, report.to_json(indent=2))
    for path in (tsv, js):
        write_manifest(path, args, seeds={"seed": args.seed}, config=cfg.to_dict(),
                       timings={"total": report.elapsed})
    print(f"curves in {tsv}, summary in {js} ({report.elapsed:.1f} s)")
    return EXIT_OK


def _load_episode_set(path, size):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"episode file not found: {path}") from None
    except ValueError as exc:
        raise DataError(f"{path}: not JSON ({exc})") from None
    if isinstance(doc, dict) and "levels" in doc:
        report = MiningReport.from_dict(doc)
        return [ep for ep, _ in (report.frequent(size) if size else report.largest())]
    if isinstance(doc, dict) and "serial" in doc:
        report = MiningReport.from_dict(doc["serial"])
        return [ep for ep, _ in (report.frequent(size) if size else report.largest())]
    if isinstance(doc, list):
        out = []
        for item in doc:
            if isinstance(item, str):
                out.append(parse_episode(item))
            elif isinstance(item, dict):
                out.append(Episode.from_dict(item))
            else:
                out.append(tuple(item))
        return out
    raise DataError(f"{path}: expected a mining report or a list of episodes")


def cmd_similarity(args) -> int:
    a = _load_episode_set(args.set_a, args.size)
    b = _load_episode_set(args.set_b, args.size)
    try:
        res = similarity_breakdown(a, b)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    print(res.score)
    if args.verbose:
        for i, n in sorted(res.matched.items(), reverse=True):
            print(f"n_{i} = {n}", file=sys.stderr)
    return EXIT_OK


def cmd_config(args) -> int:
    """Print a preset as config text, a starting point for custom networks."""
    sys.stdout.write(format_network_config(PRESETS[args.preset](rate_model=args.model)))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _add_mining_flags(p):
    p.add_argument("--threshold", type=_non_negative, default=0.01,
                   help="frequency threshold as a fraction of the event count (default 0.01)")
    p.add_argument("--decay", type=_positive, default=0.9,
                   help="threshold factor applied per extra node (default 0.9)")
    p.add_argument("--max-size", type=int, default=10)
    p.add_argument("--engine", choices=("auto", "waits", "batch"), default="auto")
    p.add_argument("--rows", type=int, default=8, help="patterns shown in the table")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spikeepisodes", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="generate a spike file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="network config file")
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--noise", type=int, choices=sorted(NOISE_MODELS), help="noise model id")
    p.add_argument("--model", choices=(SIGMOID, LINEAR), default=SIGMOID,
                   help="rate model for --preset")
    p.add_argument("--neurons", type=int, default=26, help="neuron count for --noise")
    p.add_argument("--duration", type=_non_negative, default=50.0, help="seconds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mine", help="discover frequent episodes")
    p.add_argument("kind", choices=(PARALLEL, SERIAL))
    p.add_argument("spikes")
    p.add_argument("--expiry", type=_positive, default=None, help="parallel span limit (s)")
    p.add_argument("--intervals", help="serial gap intervals, e.g. 0.004-0.006,0.006-0.008")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", help="write the full report here")
    _add_mining_flags(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("rewrite", help="replace parallel-episode occurrences by composite events")
    p.add_argument("spikes")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--episodes", help="groups separated by ';', e.g. 'B C D; F G H I'")
    which.add_argument("--report", help="parallel mining report; its maximal episodes are used")
    p.add_argument("--expiry", type=_positive, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("synfire", help="parallel mining, rewriting, then serial mining")
    p.add_argument("spikes")
    p.add_argument("--expiry", type=_positive, required=True)
    p.add_argument("--intervals", required=True)
    p.add_argument("--json")
    p.add_argument("--rewritten", help="also save the rewritten stream")
    _add_mining_flags(p)
    p.set_defaults(func=cmd_synfire)

    p = sub.add_parser("significance", help="noise vs embedded-pattern frequency curves")
    p.add_argument("--noise", type=_model_range, default=(1, 2, 3, 4, 5, 6),
                   help="noise models, e.g. 1-6 or 1,3,5")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--duration", type=_positive, default=50.0)
    p.add_argument("--smoke", action="store_true", help="reduced run: sizes up to 6 only")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="significance", help="output prefix for .tsv and .json")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_significance)

    p = sub.add_parser("similarity", help="similarity score of two episode sets")
    p.add_argument("set_a")
    p.add_argument("set_b")
    p.add_argument("--size", type=int, default=None,
                   help="episode size to take from mining reports (default: largest)")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("config", help="print a preset network as config text")
    p.add_argument("preset", choices=sorted(PRESETS))
    p.add_argument("--model", choices=(SIGMOID, LINEAR), default=SIGMOID)
    p.set_defaults(func=cmd_config)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
