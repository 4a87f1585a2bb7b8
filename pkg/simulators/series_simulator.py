"""
Synthetic recovery data for exercising the pipeline without the upstream files.
Produces sine series for convergence checks and JHU-format wide CSV files with
logistic recovery curves, noisy daily increments and occasional downward
corrections.
"""

import argparse
import csv
import io
import logging
from dataclasses import dataclass
from datetime import date, timedelta
from typing import List, Optional, Sequence

import numpy as np

from utils.utils import atomic_write_text

# --- Constants ---
DEFAULT_START_DATE = date(2020, 1, 22)
DEFAULT_DAYS = 403
DEFAULT_SEED = 7

# --- Logging Setup ---
logger = logging.getLogger(__name__)


def sine_series(n_points: int = 200, period: float = 25.0, amplitude: float = 1.0, offset: float = 0.0, phase: float = 0.0) -> np.ndarray:
    """Noise-free sine wave sampled once per step."""
    t = np.arange(n_points, dtype=np.float64)
    return offset + amplitude * np.sin(2.0 * np.pi * t / period + phase)


@dataclass(frozen=True)
class RegionSpec:
    country: str
    province: str = ""
    latitude: Optional[float] = None
    longitude: Optional[float] = None
    final_total: float = 100_000.0
    midpoint: float = 200.0  # day of steepest growth
    steepness: float = 0.03


DEFAULT_REGIONS = (
    RegionSpec("India", "", 20.5937, 78.9629, 10_700_000, 230, 0.030),
    RegionSpec("Brazil", "", -14.235, -51.9253, 9_000_000, 250, 0.022),
    RegionSpec("Russia", "", 61.524, 105.3188, 3_700_000, 260, 0.020),
    RegionSpec("Canada", "Ontario", 51.2538, -85.3232, 280_000, 280, 0.025),
    RegionSpec("Canada", "Quebec", 52.9399, -73.5491, 260_000, 270, 0.025),
    RegionSpec("Albania", "", 41.1533, 20.1683, 65_000, 300, 0.028),
    RegionSpec("Diamond Princess", "", None, None, 700, 40, 0.25),
)


class JhuFileSimulator:
    def __init__(self, start_date: date = DEFAULT_START_DATE, days: int = DEFAULT_DAYS, seed: int = DEFAULT_SEED):
        if days < 1:
            raise ValueError(f"days must be positive, got {days}")
        self.start_date = start_date
        self.days = days
        self.rng = np.random.default_rng(seed)

    @property
    def dates(self) -> List[date]:
        return [self.start_date + timedelta(days=i) for i in range(self.days)]

    def region_counts(self, spec: RegionSpec, correction_rate: float = 0.01) -> np.ndarray:
        """Cumulative integer counts following a noisy logistic curve."""
        t = np.arange(self.days, dtype=np.float64)
        curve = spec.final_total / (1.0 + np.exp(-spec.steepness * (t - spec.midpoint)))
        increments = np.diff(np.concatenate(([0.0], curve)))
        noisy = increments * self.rng.uniform(0.6, 1.4, size=self.days)
        counts = np.floor(np.cumsum(noisy)).astype(np.int64)
        # upstream data corrections: a day's cumulative count revised downward
        for day in np.flatnonzero(self.rng.random(self.days) < correction_rate):
            if day > 0 and counts[day] > 0:
                counts[day] = max(0, counts[day - 1] - int(self.rng.integers(1, 50)))
        return counts

    def to_csv_text(self, regions: Sequence[RegionSpec] = DEFAULT_REGIONS) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(
            ["Province/State", "Country/Region", "Lat", "Long"]
            + [f"{d.month}/{d.day}/{d.strftime('%y')}" for d in self.dates]
        )
        for spec in regions:
            lat = "" if spec.latitude is None else repr(spec.latitude)
            lon = "" if spec.longitude is None else repr(spec.longitude)
            writer.writerow([spec.province, spec.country, lat, lon] + [str(c) for c in self.region_counts(spec)])
        return buffer.getvalue()

    def write_csv(self, path, regions: Sequence[RegionSpec] = DEFAULT_REGIONS) -> None:
        atomic_write_text(path, self.to_csv_text(regions))
        logger.info(f"Wrote {len(regions)} synthetic regions over {self.days} days to '{path}'.")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Write a synthetic JHU-format recovered-cases CSV.")
    parser.add_argument("--output", required=True, help="Destination CSV path.")
    parser.add_argument("--days", type=int, default=DEFAULT_DAYS, help=f"Number of date columns (default: {DEFAULT_DAYS}).")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"Random seed (default: {DEFAULT_SEED}).")
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    JhuFileSimulator(days=args.days, seed=args.seed).write_csv(args.output)
