"""
Command-line surface: inspect, train, forecast, evaluate.

Exit codes: 0 success, 2 data error, 3 config error, 4 checkpoint/model error.
Every file is written atomically under the output directory.
"""
import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from datetime import timedelta
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from core.checkpoint import Checkpoint
from core.config import DEFAULT_CONFIG_PATH, TrainConfig, load_train_config, resolve_output_dir
from core.errors import ConfigError, DataError, EmptyTest, RecoverCastError, SeriesTooShort
from core.forecast import evaluate_holdout, forecast_horizon
from core.ingest import (
    CumulativeSeries,
    DeltaSeries,
    RegionSeriesTable,
    aggregate_global,
    load_jhu_csv,
    to_daily_deltas,
)
from core.scaling import fit, inverse_transform, transform
from core.training import train
from core.windowing import SplitSpec, make_windows, split_train_test
from ui.charts import ChartSeries, write_line_chart, write_panel_chart
from utils.utils import atomic_write_text

# --- Constants ---
TOOL_VERSION = "1.0.0"
DEFAULT_LOG_LEVEL = "INFO"
EXIT_OK = 0

CHECKPOINT_FILE = "checkpoint.json"
LOSS_HISTORY_FILE = "loss_history.csv"
MANIFEST_FILE = "manifest.json"
COUNTRY_TOTALS_FILE = "country_totals.csv"
DAILY_CHART_FILE = "daily_recoveries.svg"
CUMULATIVE_CHART_FILE = "cumulative_recoveries.svg"
COUNTRY_CHART_FILE = "country_recoveries.svg"
COUNTRY_PANELS = 3
FORECAST_FILE = "forecast.csv"
FORECAST_CHART_FILE = "forecast.svg"
EVALUATION_FILE = "evaluation.csv"
EVALUATION_CHART_FILE = "evaluation.svg"

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass
class RunManifest:
    input_path: str
    config: Dict[str, Any]
    checkpoint_path: str
    output_dir: str
    tool_version: str
    seed: int
    train_days: int
    test_days: int
    replay_args: List[str] = field(default_factory=list)

    def save(self, path: Path) -> None:
        atomic_write_text(path, json.dumps(asdict(self), indent=2) + "\n")


@dataclass
class PreparedSeries:
    cumulative: CumulativeSeries
    train_deltas: DeltaSeries
    test_deltas: Optional[DeltaSeries]
    anchor: float  # cumulative count on the last training day
    train_days: int
    test_days: int


# --- Pipeline helpers ---
def _load_table(path: str) -> RegionSeriesTable:
    try:
        return load_jhu_csv(path)
    except FileNotFoundError:
        raise DataError(f"input file not found: '{path}'") from None
    except UnicodeDecodeError as e:
        raise DataError(f"input file is not UTF-8: {e}") from None
    except IsADirectoryError:
        raise DataError(f"input path is a directory: '{path}'") from None
    except OSError as e:
        raise DataError(f"cannot read input '{path}': {e.strerror or e}") from None


def prepare_series(table: RegionSeriesTable, test_len: int, full_data: bool = False) -> PreparedSeries:
    """Aggregate, then split on the day axis and difference each side.

    The first test delta is taken against the last training day, so the test
    side has exactly ``test_len`` deltas.
    """
    cumulative = aggregate_global(table)
    if full_data:
        deltas = to_daily_deltas(cumulative)
        return PreparedSeries(cumulative, deltas, None, float(cumulative.values[-1]), len(cumulative), 0)

    train_values, test_values = split_train_test(cumulative.values, SplitSpec(test_len))
    cut = len(train_values)
    train_deltas = to_daily_deltas(CumulativeSeries(cumulative.dates[:cut], train_values))
    test_deltas = to_daily_deltas(
        CumulativeSeries(cumulative.dates[cut - 1:], np.concatenate(([train_values[-1]], test_values)))
    )
    logger.info(f"Split {len(cumulative)} days into {cut} training and {len(test_values)} test days.")
    return PreparedSeries(cumulative, train_deltas, test_deltas, float(train_values[-1]), cut, len(test_values))


def _iso(value) -> str:
    return value.isoformat() if hasattr(value, "isoformat") else str(value)


def _write_frame(path: Path, frame: pd.DataFrame) -> None:
    atomic_write_text(path, frame.to_csv(index=False))
    logger.info(f"Wrote {len(frame)} rows to '{path}'.")


def _replay_args(input_path: str, output_dir: Path, config: TrainConfig) -> List[str]:
    args = [
        "train", "--input", input_path, "--output-dir", str(output_dir),
        "--epochs", str(config.epochs), "--batch-size", str(config.batch_size),
        "--window-len", str(config.window_len), "--hidden-size", str(config.hidden_size),
        "--lr", repr(config.learning_rate), "--gradient-clip", repr(config.gradient_clip),
        "--test-len", str(config.test_len), "--seed", str(config.seed),
    ]
    if config.full_data:
        args.append("--full-data")
    return args


# --- Commands ---
def cmd_inspect(args: argparse.Namespace) -> int:
    table = _load_table(args.input)
    cumulative = aggregate_global(table)
    output_dir = resolve_output_dir(args.output_dir)

    totals = table.country_totals()
    print(f"regions: {len(table.regions)}")
    print(f"countries: {len(totals)}")
    print(f"date columns: {len(table.dates)}")
    print(f"date range: {table.dates[0].isoformat()} .. {table.dates[-1].isoformat()}")
    print(f"global total recovered: {cumulative.values[-1]:.0f}")
    for row in totals.head(args.top).itertuples(index=False):
        print(f"  {row.rank:>3}. {row.country}: {row.total_recovered}")

    _write_frame(output_dir / COUNTRY_TOTALS_FILE, totals)
    labels = [d.isoformat() for d in cumulative.dates]
    if len(cumulative) >= 2:
        deltas = to_daily_deltas(cumulative)
        write_line_chart(
            output_dir / DAILY_CHART_FILE,
            "Daily recovery cases across the globe",
            labels[1:],
            [ChartSeries("historical", range(len(deltas)), deltas.values)],
            y_label="persons / day",
        )
    write_line_chart(
        output_dir / CUMULATIVE_CHART_FILE,
        "Cumulative recovery cases across the globe",
        labels,
        [ChartSeries("cumulative", range(len(cumulative)), cumulative.values)],
        y_label="persons",
    )
    _write_country_chart(output_dir / COUNTRY_CHART_FILE, table, labels, args.country_panels)
    return EXIT_OK


def _write_country_chart(path: Path, table: RegionSeriesTable, labels: List[str], n_panels: int) -> None:
    """Per-country cumulative curves, alphabetical, split into ``n_panels`` consecutive groups."""
    if n_panels < 1:
        raise ConfigError(f"country_panels must be at least 1, got {n_panels}", field="country_panels")
    by_country = table.country_series()
    countries = list(by_country.index)
    panels = []
    for group in np.array_split(np.arange(len(countries)), min(n_panels, max(len(countries), 1))):
        if len(group) == 0:
            continue
        names = [countries[i] for i in group]
        series = [
            ChartSeries(name, range(len(labels)), by_country.loc[name].to_numpy(dtype=np.float64))
            for name in names
        ]
        panels.append((f"Recovery cases by country: {names[0]} to {names[-1]}", series))
    write_panel_chart(path, panels, labels, y_label="persons")


def _train_config_from_args(args: argparse.Namespace) -> TrainConfig:
    config = load_train_config(args.config).with_overrides(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        window_len=args.window_len,
        hidden_size=args.hidden_size,
        seed=args.seed,
        gradient_clip=args.gradient_clip,
        test_len=args.test_len,
        full_data=True if args.full_data else None,
    )
    return config.validate()


def cmd_train(args: argparse.Namespace) -> int:
    config = _train_config_from_args(args)
    table = _load_table(args.input)
    output_dir = resolve_output_dir(args.output_dir)

    if not config.full_data and config.test_len >= len(table.dates):
        raise ConfigError(
            f"test_len {config.test_len} leaves no training days out of {len(table.dates)}",
            field="test_len",
        )
    prepared = prepare_series(table, config.test_len, config.full_data)
    if config.window_len >= len(prepared.train_deltas):
        raise ConfigError(
            f"window_len {config.window_len} needs more than {len(prepared.train_deltas)} training deltas",
            field="window_len",
        )

    scaler = fit(prepared.train_deltas.values)
    scaled = transform(scaler, prepared.train_deltas.values)
    dataset = make_windows(scaled, config.window_len)
    params, report = train(config, dataset)

    checkpoint_path = output_dir / CHECKPOINT_FILE
    checkpoint = Checkpoint(
        params=params,
        scaler=scaler,
        window_len=config.window_len,
        anchor=prepared.anchor,
        test_len=0 if config.full_data else config.test_len,
        full_data=config.full_data,
        last_date=prepared.train_deltas.dates[-1],
        tail_window=[float(v) for v in scaled[-config.window_len:]],
        config=config.to_dict(),
    )
    checkpoint.save(checkpoint_path)
    report.checkpoint_path = str(checkpoint_path)

    losses = pd.DataFrame(
        {"epoch": np.arange(1, report.epochs_run + 1, dtype=np.int64), "mean_loss": report.epoch_losses}
    )
    _write_frame(output_dir / LOSS_HISTORY_FILE, losses)
    RunManifest(
        input_path=str(args.input),
        config=config.to_dict(),
        checkpoint_path=str(checkpoint_path),
        output_dir=str(output_dir),
        tool_version=TOOL_VERSION,
        seed=config.seed,
        train_days=prepared.train_days,
        test_days=prepared.test_days,
        replay_args=_replay_args(str(args.input), output_dir, config),
    ).save(output_dir / MANIFEST_FILE)

    print(f"train/test days: {prepared.train_days}/{prepared.test_days}")
    print(f"training windows: {len(dataset)}")
    if report.epoch_losses:
        print(f"final epoch loss: {report.epoch_losses[-1]:.6g}")
    print(f"checkpoint: {checkpoint_path}")
    return EXIT_OK


def _checkpoint_path(args: argparse.Namespace) -> Path:
    if args.checkpoint:
        return Path(args.checkpoint)
    return resolve_output_dir(args.output_dir) / CHECKPOINT_FILE


def cmd_forecast(args: argparse.Namespace) -> int:
    checkpoint = Checkpoint.load(_checkpoint_path(args))
    horizon = args.horizon if args.horizon is not None else load_train_config(args.config).horizon
    if horizon < 0:
        raise ConfigError(f"horizon must not be negative, got {horizon}", field="horizon")
    output_dir = resolve_output_dir(args.output_dir)
    window_len = checkpoint.window_len

    if args.input:
        cumulative = aggregate_global(_load_table(args.input))
        deltas = to_daily_deltas(cumulative)
        if len(deltas) < window_len:
            raise SeriesTooShort(f"{len(deltas)} deltas cannot seed a window of {window_len}")
        seed_window = transform(checkpoint.scaler, deltas.values)[-window_len:]
        anchor, last_date = float(cumulative.values[-1]), deltas.dates[-1]
        history_dates, history = list(deltas.dates), np.asarray(deltas.values)
    else:
        if not checkpoint.tail_window:
            raise ConfigError("checkpoint carries no tail window; pass --input", field="input")
        seed_window = np.asarray(checkpoint.tail_window)
        anchor, last_date = checkpoint.anchor, checkpoint.last_date
        history = inverse_transform(checkpoint.scaler, seed_window)
        history_dates = (
            [last_date - timedelta(days=window_len - 1 - i) for i in range(window_len)]
            if last_date else list(range(-window_len + 1, 1))
        )

    result = forecast_horizon(checkpoint.params, checkpoint.scaler, seed_window, horizon, anchor, last_date)
    frame = pd.DataFrame(
        {
            "date": [_iso(d) for d in result.dates],
            "predicted_daily": result.daily,
            "predicted_cumulative": result.cumulative,
        },
        columns=["date", "predicted_daily", "predicted_cumulative"],
    )
    _write_frame(output_dir / FORECAST_FILE, frame)

    n_hist = len(history)
    write_line_chart(
        output_dir / FORECAST_CHART_FILE,
        "Historical and predicted daily recovery cases",
        [_iso(d) for d in history_dates] + [_iso(d) for d in result.dates],
        [
            ChartSeries("historical", range(n_hist), history),
            ChartSeries("predicted", range(n_hist, n_hist + horizon), result.daily, dashed=True),
        ],
        y_label="persons / day",
    )
    print(f"forecast days: {horizon}")
    print(f"negative_days: {result.negative_days}")
    if horizon:
        print(f"final predicted cumulative: {result.cumulative[-1]:.0f}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    checkpoint = Checkpoint.load(_checkpoint_path(args))
    test_len = args.test_len if args.test_len is not None else checkpoint.test_len
    if test_len < 1:
        raise EmptyTest("checkpoint was trained on the full series; pass --test-len to evaluate")
    table = _load_table(args.input)
    output_dir = resolve_output_dir(args.output_dir)

    prepared = prepare_series(table, test_len)
    scaled_train = transform(checkpoint.scaler, prepared.train_deltas.values)
    if len(scaled_train) < checkpoint.window_len:
        raise SeriesTooShort(
            f"{len(scaled_train)} training deltas cannot seed a window of {checkpoint.window_len}"
        )
    evaluation = evaluate_holdout(
        checkpoint.params,
        checkpoint.scaler,
        scaled_train[-checkpoint.window_len:],
        prepared.test_deltas.values,
        teacher_forcing=args.teacher_forcing,
    )

    test_dates = [d.isoformat() for d in prepared.test_deltas.dates]
    frame = pd.DataFrame(
        {
            "date": test_dates,
            "observed": evaluation.observed,
            "predicted": evaluation.predicted,
            "error": evaluation.errors,
        }
    )
    _write_frame(output_dir / EVALUATION_FILE, frame)

    n_train = len(prepared.train_deltas)
    write_line_chart(
        output_dir / EVALUATION_CHART_FILE,
        "Historical, real and predicted daily recovery cases",
        [d.isoformat() for d in prepared.train_deltas.dates] + test_dates,
        [
            ChartSeries("historical", range(n_train), prepared.train_deltas.values),
            ChartSeries("observed", range(n_train, n_train + test_len), evaluation.observed),
            ChartSeries("predicted", range(n_train, n_train + test_len), evaluation.predicted, dashed=True),
        ],
        y_label="persons / day",
    )
    print(f"mode: {'teacher-forcing' if args.teacher_forcing else 'recursive'}")
    print(f"test days: {test_len}")
    print(f"rmse: {evaluation.rmse:.6g}")
    print(f"mae: {evaluation.mae:.6g}")
    return EXIT_OK


# --- Argument parsing ---
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recovercast",
        description="LSTM forecasting of global COVID-19 recoveries from JHU CSSE data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        type=str,
        default=DEFAULT_LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help=f"Logging level (default: {DEFAULT_LOG_LEVEL}).",
    )
    common.add_argument(
        "--config",
        type=str,
        default=DEFAULT_CONFIG_PATH,
        help="Training defaults JSON (default: data/default_config.json).",
    )
    common.add_argument(
        "--output-dir",
        type=str,
        default=None,
        help="Output directory (default: $RECOVERCAST_OUTPUT_DIR or ./output).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_inspect = sub.add_parser("inspect", parents=[common], help="Summarise a JHU recovered-cases CSV.")
    p_inspect.add_argument("--input", required=True, help="JHU CSSE recovered_global CSV.")
    p_inspect.add_argument("--top", type=int, default=10, help="Countries to list (default: 10).")
    p_inspect.add_argument(
        "--country-panels", type=int, default=COUNTRY_PANELS,
        help=f"Alphabetical groups in the per-country chart (default: {COUNTRY_PANELS}).",
    )
    p_inspect.set_defaults(handler=cmd_inspect)

    p_train = sub.add_parser("train", parents=[common], help="Train the LSTM and write a checkpoint.")
    p_train.add_argument("--input", required=True, help="JHU CSSE recovered_global CSV.")
    p_train.add_argument("--epochs", type=int, default=None, help="Training epochs (default: 60).")
    p_train.add_argument("--batch-size", type=int, default=None, help="Mini-batch size (default: 24).")
    p_train.add_argument("--window-len", type=int, default=None, help="Input window in days (default: 30).")
    p_train.add_argument("--hidden-size", type=int, default=None, help="LSTM hidden units (default: 32).")
    p_train.add_argument("--lr", type=float, default=None, help="Adam learning rate (default: 1e-3).")
    p_train.add_argument("--gradient-clip", type=float, default=None, help="Global gradient norm cap (default: 5.0).")
    p_train.add_argument("--test-len", type=int, default=None, help="Held-out tail in days (default: 24).")
    p_train.add_argument("--seed", type=int, default=None, help="Random seed (default: 0).")
    p_train.add_argument("--full-data", action="store_true", help="Train on every day; no held-out tail.")
    p_train.set_defaults(handler=cmd_train)

    p_forecast = sub.add_parser("forecast", parents=[common], help="Recursive multi-day forecast.")
    p_forecast.add_argument("--checkpoint", default=None, help="Checkpoint path (default: <output-dir>/checkpoint.json).")
    p_forecast.add_argument("--input", default=None, help="CSV to seed the forecast from its last days.")
    p_forecast.add_argument("--horizon", type=int, default=None, help="Days to forecast (default: 20).")
    p_forecast.set_defaults(handler=cmd_forecast)

    p_evaluate = sub.add_parser("evaluate", parents=[common], help="Score the held-out tail.")
    p_evaluate.add_argument("--checkpoint", default=None, help="Checkpoint path (default: <output-dir>/checkpoint.json).")
    p_evaluate.add_argument("--input", required=True, help="JHU CSSE recovered_global CSV.")
    p_evaluate.add_argument("--test-len", type=int, default=None, help="Override the checkpoint's test length.")
    p_evaluate.add_argument("--teacher-forcing", action="store_true", help="Refill the window with observed values.")
    p_evaluate.set_defaults(handler=cmd_evaluate)
    return parser


def _run_handler(args: argparse.Namespace) -> int:
    # inputs and checkpoints map their own OSErrors; what is left is an output write
    try:
        return args.handler(args)
    except OSError as e:
        output_dir = resolve_output_dir(args.output_dir)
        raise ConfigError(
            f"cannot write under output directory '{output_dir}': {e.strerror or e}",
            field="output_dir",
        ) from e


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    log_level_numeric = getattr(logging, args.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=log_level_numeric,
        format="%(asctime)s - %(levelname)s - %(name)s.%(funcName)s:%(lineno)d - %(message)s",
    )
    logging.getLogger().setLevel(log_level_numeric)

    try:
        return _run_handler(args)
    except RecoverCastError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
