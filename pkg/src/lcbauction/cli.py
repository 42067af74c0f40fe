"""Command-line front end: config parsing, orchestration, result emission.

Config files are flat ``key=value`` pairs, one per line, with ``#``
comments.  Results are written atomically (temp file + rename) as CSV or
JSON lines.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from .estimation import estimate_all_intervals
from .mechanism import tune_d, classify_and_estimate, allocate_vcg
from .simulation import (
    METHOD1,
    METHODS,
    ScenarioConfig,
    auto_d_grid,
    generate_world,
    prepare_method,
    run_at_d,
    sweep,
)
from .theory import allocation_table
from .winnowing import winnow

SIMULATE_COLUMNS = [
    "seed", "method", "d", "revenue", "regret", "kd", "refined_regret",
    "n", "m_star", "k", "prop_no_query", "conf_rate_paper", "conf_rate_theorem",
]


class ConfigError(ValueError):
    pass


_CONFIG_KEYS = {
    "m": "num_bidders",
    "N": "num_items",
    "n_ij": "history_size",
    "alpha": "alpha",
    "eta": "eta",
    "sampling_count": "sampling_count",
    "seed": "master_seed",
    "d_sweep": "d_sweep",
    "method": "method",
    "q": "accepted_loss",
}
_INT_KEYS = {"m", "N", "n_ij", "sampling_count", "seed"}
_FLOAT_KEYS = {"alpha", "eta", "q"}


def parse_config(text: str) -> ScenarioConfig:
    """Parse the flat key=value format into a ScenarioConfig."""
    raw: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                raw[key] = int(value)
            elif key in _FLOAT_KEYS:
                raw[key] = float(value)
            elif key == "d_sweep":
                raw[key] = value if value == "auto" else [float(v) for v in value.split(",")]
            else:
                raw[key] = value
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    for required in ("m", "N"):
        if required not in raw:
            raise ConfigError(f"missing required key {required!r}")
    kwargs = {_CONFIG_KEYS[k]: v for k, v in raw.items()}
    try:
        return ScenarioConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def serialize_config(config: ScenarioConfig) -> str:
    """Inverse of parse_config (round-trips exactly)."""
    d_sweep = config.d_sweep if isinstance(config.d_sweep, str) else ",".join(
        repr(v) for v in config.d_sweep
    )
    lines = [
        f"m={config.num_bidders}",
        f"N={config.num_items}",
        f"n_ij={config.history_size}",
        f"alpha={config.alpha!r}",
        f"eta={config.eta!r}",
        f"sampling_count={config.sampling_count}",
        f"seed={config.master_seed}",
        f"d_sweep={d_sweep}",
        f"method={config.method}",
        f"q={config.accepted_loss!r}",
    ]
    return "\n".join(lines) + "\n"


def write_rows_atomic(path: str, columns: list[str], rows: list[list], fmt: str) -> None:
    """Serialize rows and atomically replace ``path``."""
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)
    elif fmt == "jsonl":
        for row in rows:
            buf.write(json.dumps(dict(zip(columns, row))) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lcbauction-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _record_row(rec) -> list:
    return [
        rec.seed, rec.method, float(rec.d), float(rec.revenue), float(rec.regret),
        float(rec.kd), float(rec.refined_regret), rec.n, rec.m_star, rec.k,
        float(rec.prop_no_query), float(rec.conf_rate_paper), float(rec.conf_rate_theorem),
    ]


def cmd_estimate(config: ScenarioConfig, out: str, fmt: str) -> None:
    world = generate_world(config)
    intervals = estimate_all_intervals(
        world.history, config.alpha, config.sampling_count, master_seed=config.master_seed
    )
    rows = [
        [i, j, float(intervals.lower[i, j]), float(intervals.upper[i, j])]
        for i in range(intervals.num_bidders)
        for j in range(intervals.num_items)
    ]
    write_rows_atomic(out, ["bidder", "item", "lower", "upper"], rows, fmt)


def cmd_winnow(config: ScenarioConfig, out: str, fmt: str) -> None:
    world = generate_world(config)
    intervals = estimate_all_intervals(
        world.history, config.alpha, config.sampling_count, master_seed=config.master_seed
    )
    result = winnow(intervals)
    rows = [
        [
            j,
            int(result.leaders[j]),
            "|".join(str(i) for i in result.kept_sets[j]),
            int(result.kept_mask[:, j].sum()),
            result.neglected_count,
        ]
        for j in range(intervals.num_items)
    ]
    write_rows_atomic(out, ["item", "leader", "kept", "num_kept", "m_star"], rows, fmt)


def cmd_auction(config: ScenarioConfig, out: str, fmt: str) -> None:
    method = METHOD1 if config.method == "all" else config.method
    world = generate_world(config)
    state = prepare_method(world, method)
    d, _, _ = tune_d(state.intervals_zeroed, state.n_star, state.m_star, config.accepted_loss)
    rec = run_at_d(state, d)
    estimates = classify_and_estimate(
        state.intervals_zeroed, state.neglected_mask, d,
        lambda i, j: world.true_types[i, j],
    )
    outcome = allocate_vcg(estimates.values)
    rows = [
        [
            rec.seed, rec.method, float(rec.d), j,
            int(outcome.winners[j]), float(outcome.payments[j]),
            float(rec.revenue), float(rec.regret), float(rec.kd),
            float(rec.refined_regret), rec.n, rec.m_star, rec.k,
        ]
        for j in range(config.num_items)
    ]
    columns = [
        "seed", "method", "d", "item", "winner", "payment",
        "revenue", "regret", "kd", "refined_regret", "n", "m_star", "k",
    ]
    write_rows_atomic(out, columns, rows, fmt)


def cmd_simulate(config: ScenarioConfig, out: str, fmt: str, seeds: int) -> None:
    methods = METHODS if config.method == "all" else (config.method,)
    rows = []
    for seed in range(config.master_seed, config.master_seed + seeds):
        world = generate_world(config, master_seed=seed)
        shared = None  # Methods 1 and 2 share one estimation pass
        for method in methods:
            state = prepare_method(world, method, intervals=shared, master_seed=seed)
            if method in (METHOD1, "Method2") and shared is None:
                shared = state.intervals
            records = sweep(state, config.d_sweep)
            rows.extend(_record_row(rec) for rec in records)
    write_rows_atomic(out, SIMULATE_COLUMNS, rows, fmt)


def cmd_theory_table(max_items: int, out: str, fmt: str) -> None:
    rows = [[entry.num_items, entry.exact, entry.lower_bound] for entry in allocation_table(max_items)]
    write_rows_atomic(out, ["N", "exact", "lower_bound"], rows, fmt)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcbauction",
        description="KDE-interval VCG auction simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="path to a key=value config file")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    add_common(sub.add_parser("estimate", help="emit per-pair confidence intervals"))
    add_common(sub.add_parser("winnow", help="emit per-item surviving bidder sets"))
    add_common(sub.add_parser("auction", help="run one auction at the tuned threshold"))
    p_sim = sub.add_parser("simulate", help="run the method comparison sweep")
    add_common(p_sim)
    p_sim.add_argument("--seeds", type=int, default=1,
                       help="number of replicate seeds (master_seed..master_seed+K-1)")
    p_theory = sub.add_parser("theory-table", help="emit allocation counts and lower bounds")
    add_common(p_theory, needs_config=False)
    p_theory.add_argument("--n-max", type=int, default=14, help="largest item count tabulated")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "theory-table":
            if args.n_max < 1:
                raise ValueError("--n-max must be positive")
            cmd_theory_table(args.n_max, args.out, args.format)
            return 0
        with open(args.config) as fh:
            config = parse_config(fh.read())
        if args.command == "estimate":
            cmd_estimate(config, args.out, args.format)
        elif args.command == "winnow":
            cmd_winnow(config, args.out, args.format)
        elif args.command == "auction":
            cmd_auction(config, args.out, args.format)
        elif args.command == "simulate":
            if args.seeds < 1:
                raise ValueError("--seeds must be positive")
            cmd_simulate(config, args.out, args.format, args.seeds)
        return 0
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
