"""Command-line entry point and the `run` dispatcher.

Payloads are deterministic: the same configuration and version give the
same bytes whatever the worker count.  Wall time lives only in the envelope
metadata (stderr or ``--envelope``), never in the payload.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .cache import CacheKey, cache_load, cache_store
from .config import COMMANDS, PARAM_SCHEMA, RunConfig, parse_grid
from .dimension import CoveringTable, covering_table, estimate_from_table
from .errors import ConfigError, ExtractionImpossible, SpectraError, StageError
from .extraction import ExtractionParams, extract
from .geometry import measure_constants
from .invariants import run_invariants
from .potentials import markov_value_exact
from .realizer import find_maximizers, realize_samples
from .symbolic import PeriodicPoint, check_complete_subshift, periodic_words_canonical

log = logging.getLogger("spectra")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_IMPOSSIBLE = 2

CONSTANTS_DEPTH = 8


@dataclass
class ResultEnvelope:
    config_hash: str
    version: str
    command: str
    payload: str | dict
    format: str  # "csv" or "json"
    wall_time: float
    seed: int
    exit_code: int = EXIT_OK

    def payload_text(self) -> str:
        """The payload as emitted; byte-identical for identical configurations."""
        if self.format == "csv":
            return self.payload
        doc = {"config_hash": self.config_hash, "version": self.version, "command": self.command, "seed": self.seed,
               "payload": self.payload}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def to_json(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "version": self.version,
            "command": self.command,
            "seed": self.seed,
            "format": self.format,
            "wall_time": self.wall_time,
            "exit_code": self.exit_code,
            "payload": self.payload,
        }


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _csv(config: RunConfig, header: list[str], rows: list[list], comments: list[str] = ()) -> str:
    buf = io.StringIO()
    buf.write(f"# config_hash={config.config_hash()}\n")
    buf.write(f"# version={__version__} command={config.command}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


class _Tables:
    """Covering tables through the on-disk cache."""

    def __init__(self, config: RunConfig, use_cache: bool, cache_dir: Path | None):
        self.config = config
        self.use_cache = use_cache
        self.cache_dir = cache_dir
        self.ts, self.gm, self.pot = config.build()

    def get(self, t: float, r_max: int) -> CoveringTable:
        key = CacheKey(self.config.model_hash(), t, r_max, self.config.budget)
        if self.use_cache:
            table = cache_load(key, self.cache_dir)
            if table is not None:
                return table
        table = covering_table(
            t, r_max, self.ts, self.gm, self.pot, self.config.budget, self.config.workers,
            witness_depth=self.config.witness_depth,
        )
        if self.use_cache:
            try:
                cache_store(key, table, self.cache_dir)
            except OSError as exc:
                log.warning("cache store failed: %s", exc)
        return table


def _dimension_curve(config: RunConfig, tables: _Tables):
    p = config.params
    grid = parse_grid(p["t_grid"])
    r_min, r_max = p["r_min"], p["r_max"]
    if not 1 <= r_min <= r_max:
        raise ConfigError("params.r_min", "need 1 <= r_min <= r_max")
    constants = measure_constants(tables.ts, tables.gm, CONSTANTS_DEPTH)
    rows = []
    for t in grid:
        est = estimate_from_table(tables.get(t, r_max), r_min, r_max, len(tables.ts.alphabet), constants)
        rows.append([_fmt(t), _fmt(est.lower), _fmt(est.value), _fmt(est.upper), f"{r_min}-{r_max}"])
    header = ["t", "certified_lower", "estimate", "certified_upper", "r_used"]
    return _csv(config, header, rows), "csv"


def _extraction_params(config: RunConfig) -> ExtractionParams:
    p = config.params
    names = ("t", "eta", "tau", "r0", "k", "L", "spacing", "excellent_threshold", "allow_lower_threshold",
             "pool_cap", "du_r_max", "exhaustive_frame")
    try:
        return ExtractionParams(budget=config.budget, witness_depth=config.witness_depth, **{n: p[n] for n in names})
    except SpectraError as exc:
        raise ConfigError("params", str(exc)) from None


def _run_extract(config: RunConfig, tables: _Tables):
    params = _extraction_params(config)
    constants = measure_constants(tables.ts, tables.gm, CONSTANTS_DEPTH)
    table = tables.get(params.t, params.du_r_max)
    du = estimate_from_table(table, 1, params.du_r_max, len(tables.ts.alphabet), constants)
    return extract(params, tables.ts, tables.gm, tables.pot, config.workers, constants, du=du)


def _extract(config: RunConfig, tables: _Tables):
    return _run_extract(config, tables).to_json(), "json"


def _lagrange_sample(config: RunConfig, tables: _Tables):
    p = config.params
    ts, pot = tables.ts, tables.pot
    comments = []
    if p["alphabet"] is not None:
        try:
            B = check_complete_subshift([tuple(w) for w in p["alphabet"]], ts)
        except SpectraError as exc:
            raise ConfigError("params.alphabet", str(exc)) from None
        limit = None
        comments.append(f"alphabet={json.dumps([list(w) for w in B.words])}")
    else:
        result = _run_extract(config, tables)
        B = result.B
        limit = p["t"] - result.delta
        comments.append(f"t={_fmt(p['t'])} delta_certified_lower={_fmt(result.delta)} bound={_fmt(limit)}")
    header = ["index", "x_word", "n", "lagrange_value", "error", "error_bound_certified_upper"]
    rows = []
    if len(B.words) == 1:
        value = float(markov_value_exact(PeriodicPoint(B.words[0]), pot))
        rows = [[i, "", 0, _fmt(value), _fmt(0.0), _fmt(0.0)] for i in range(p["count"])]
        comments.append("single-word alphabet: its Markov value is the only Lagrange value")
    else:
        ms = _stage("maximizers", find_maximizers, B, p["m"], pot)
        comments.append(f"m={ms.m} eta_gap_certified_lower={_fmt(ms.eta_gap)} d_block={list(ms.d_block)}")
        specs = _stage("realize", realize_samples, ms, p["count"], pot, config.seed, p["depth"], p["max_blocks"])
        for i, s in enumerate(specs):
            rows.append([i, " ".join(map(str, s.x_word)), s.n, _fmt(s.lagrange), _fmt(s.error), _fmt(s.error_bound)])
    return _csv(config, header, rows, comments), "csv"


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except SpectraError as exc:
        raise StageError(name, exc) from exc


def _verify_invariants(config: RunConfig, tables: _Tables):
    p = config.params
    results = run_invariants(
        tables.ts, tables.gm, tables.pot, depth=p["depth"], r_max=p["r_max"], samples=p["samples"],
        t_values=p["t_values"], seed=config.seed, budget=config.budget, witness_depth=config.witness_depth,
        workers=config.workers,
    )
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skip")}
    report = {"checks": [r.to_json() for r in results], "counts": counts, "all_passed": counts["fail"] == 0}
    return report, "json"


def _spectrum_table(config: RunConfig, tables: _Tables):
    p = config.params
    rows = []
    for w in periodic_words_canonical(tables.ts, p["max_period"]):
        value = markov_value_exact(PeriodicPoint(w), tables.pot)
        if float(value) <= p["t_max"]:
            rows.append((float(value), w))
    rows.sort()
    out = [[_fmt(v), " ".join(map(str, w)), len(w)] for v, w in rows]
    header = ["markov_value", "period", "period_length"]
    return _csv(config, header, out, [f"primitive periods up to length {p['max_period']} with value <= {_fmt(p['t_max'])}"]), "csv"


_DISPATCH = {
    "dimension-curve": _dimension_curve,
    "extract": _extract,
    "lagrange-sample": _lagrange_sample,
    "verify-invariants": _verify_invariants,
    "spectrum-table": _spectrum_table,
}


def run(command: str, config: RunConfig, use_cache: bool = True, cache_dir: Path | None = None) -> ResultEnvelope:
    """Run `command` under `config`.

    Raises ConfigError on schema problems, ExtractionImpossible when the
    sublevel set is empty, and StageError for failures inside a stage.
    """
    if command != config.command:
        raise ConfigError("command", f"config is for {config.command!r}, not {command!r}")
    start = time.perf_counter()
    tables = _Tables(config, use_cache, cache_dir)
    payload, fmt = _DISPATCH[command](config, tables)
    exit_code = EXIT_OK
    if command == "verify-invariants" and not payload["all_passed"]:
        exit_code = EXIT_ERROR
    return ResultEnvelope(
        config.config_hash(), __version__, command, payload, fmt, time.perf_counter() - start, config.seed, exit_code
    )


def extraction_summary(payload: dict) -> str:
    dim = payload["dimension"]
    du = payload["du"]
    lines = [
        f"extracted {len(payload['words'])} words (framed by {payload['gamma1']} ... {payload['gamma2']})",
        f"certified delta >= {payload['delta']['certified_lower']:.6g}, sup f <= {payload['sup_f']['certified_upper']:.12g}",
        f"dimension of the subshift in [{dim['certified_lower']:.4f}, {dim['certified_upper']:.4f}] (estimate {dim['estimate']:.4f})",
        f"target dimension in [{du['certified_lower']:.4f}, {du['certified_upper']:.4f}] (estimate {du['estimate']:.4f})",
    ]
    lines += [f"warning: {w}" for w in payload["warnings"]]
    return "\n".join(lines)


# --------------------------------------------------------------------------
# argparse surface


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_param_flags(sub: argparse.ArgumentParser, command: str) -> None:
    for name, (kind, _default) in PARAM_SCHEMA[command].items():
        base = kind.rstrip("?")
        if base == "bool":
            sub.add_argument(_flag(name), dest=f"p_{name}", action=argparse.BooleanOptionalAction, default=None)
        elif base in ("floats", "words"):
            sub.add_argument(_flag(name), dest=f"p_{name}", type=json.loads, default=None,
                             help="JSON list" + (' (use "inf" for +infinity)' if base == "floats" else ""))
        else:
            conv = {"int": int, "float": float, "str": str}[base]
            sub.add_argument(_flag(name), dest=f"p_{name}", type=conv, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description="Dimension and spectrum computations for sublevel sets of dynamical Markov values.")
    parser.add_argument("--version", action="version", version=f"spectra {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub = subs.add_parser(command)
        sub.add_argument("--config", type=Path, help="JSON config file; flags override its fields")
        sub.add_argument("--workers", type=int, default=None)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--budget", type=int, default=None)
        sub.add_argument("--witness-depth", type=int, default=None)
        sub.add_argument("--system", type=json.loads, default=None, help="transition system as JSON")
        sub.add_argument("--geometry", type=json.loads, default=None, help="geometry as JSON")
        sub.add_argument("--potential", type=json.loads, default=None, help="potential as JSON")
        sub.add_argument("--out", type=Path, help="write the payload here instead of stdout")
        sub.add_argument("--envelope", type=Path, help="write the full result envelope (with wall time) as JSON")
        sub.add_argument("--no-cache", action="store_true", help="do not read or write the covering-table cache")
        sub.add_argument("-v", "--verbose", action="store_true")
        _add_param_flags(sub, command)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("--config", str(exc)) from None
        if not isinstance(data, dict):
            raise ConfigError("<root>", "expected an object")
        if data.get("command", args.command) != args.command:
            raise ConfigError("command", f"config file is for {data['command']!r}")
    data["command"] = args.command
    for name in ("workers", "seed", "budget", "witness_depth", "system", "geometry", "potential"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    params = dict(data.get("params") or {})
    for name in PARAM_SCHEMA[args.command]:
        value = getattr(args, f"p_{name}")
        if value is not None:
            params[name] = value
    data["params"] = params
    return RunConfig.from_json(data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        envelope = run(args.command, config, use_cache=not args.no_cache)
    except ConfigError as exc:
        print(f"spectra: configuration error at {exc.path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ExtractionImpossible as exc:
        print(f"spectra: extraction impossible: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except SpectraError as exc:
        stage = getattr(exc, "stage", "core")
        print(f"spectra: error in stage {stage}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = envelope.payload_text()
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if args.envelope is not None:
        args.envelope.write_text(json.dumps(envelope.to_json(), sort_keys=True, indent=2) + "\n")
    if envelope.command == "extract":
        print(extraction_summary(envelope.payload), file=sys.stderr)
    print(
        f"spectra {envelope.command}: config {envelope.config_hash[:12]} done in {envelope.wall_time:.2f}s",
        file=sys.stderr,
    )
    return envelope.exit_code


if __name__ == "__main__":
    sys.exit(main())
