"""Vehicle-count traces and their conversion to CPU workload.

A trace is a sequence of 5-minute bins, each holding the number of vehicles
observed on the monitored road segment. Workload is measured in CPU units:
the count divided by how many vehicles one CPU can serve on time.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_BIN_SECONDS = 300
BINS_PER_DAY = 24 * 3600 // DEFAULT_BIN_SECONDS  # 288
DEFAULT_VEHICLES_PER_CPU = 8.0


class TraceParseError(ValueError):
    """A row of a trace file could not be parsed."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class TraceValidationError(ValueError):
    """A trace violates the series invariants (ordering, spacing, sign)."""


@dataclass(frozen=True)
class TracePoint:
    timestamp: int  # seconds since epoch, start of the bin
    vehicles: float


class TraceSeries:
    """Ordered vehicle counts on a fixed time grid.

    Timestamps are strictly increasing and consecutive points are exactly
    ``bin_seconds`` apart; counts are non-negative.
    """

    def __init__(self, timestamps, vehicles, bin_seconds: int = DEFAULT_BIN_SECONDS,
                 name: str = "trace"):
        self.timestamps = np.asarray(timestamps, dtype=np.int64)
        self.vehicles = np.asarray(vehicles, dtype=np.float64)
        self.bin_seconds = int(bin_seconds)
        self.name = name
        self._validate()

    def _validate(self):
        if self.bin_seconds <= 0:
            raise TraceValidationError("bin_seconds must be positive")
        if self.timestamps.ndim != 1 or self.timestamps.shape != self.vehicles.shape:
            raise TraceValidationError("timestamps and vehicles must be 1-d and equally long")
        if len(self.timestamps) == 0:
            raise TraceValidationError("trace must be non-empty")
        if np.any(self.vehicles < 0):
            raise TraceValidationError("vehicle counts must be non-negative")
        if not np.all(np.isfinite(self.vehicles)):
            raise TraceValidationError("vehicle counts must be finite")
        deltas = np.diff(self.timestamps)
        if np.any(deltas <= 0):
            bad = int(np.argmax(deltas <= 0))
            raise TraceValidationError(
                f"timestamps not strictly increasing at index {bad + 1}")
        if np.any(deltas != self.bin_seconds):
            bad = int(np.argmax(deltas != self.bin_seconds))
            raise TraceValidationError(
                f"gap of {int(deltas[bad])} s at index {bad + 1}, expected {self.bin_seconds} s")

    def __len__(self) -> int:
        return len(self.timestamps)

    def __getitem__(self, i: int) -> TracePoint:
        return TracePoint(int(self.timestamps[i]), float(self.vehicles[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TraceSeries):
            return NotImplemented
        return (self.bin_seconds == other.bin_seconds
                and np.array_equal(self.timestamps, other.timestamps)
                and np.array_equal(self.vehicles, other.vehicles))


@dataclass
class WorkloadSeries:
    """Per-bin workload in CPU units, derived from a TraceSeries."""

    values: np.ndarray
    source: str = "unknown"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise TraceValidationError("workload series must be 1-d and non-empty")
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise TraceValidationError("workload values must be finite and non-negative")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])


@dataclass(frozen=True)
class TraceFormat:
    """Column mapping for trace files; defaults match the canonical CSV."""

    timestamp_col: str = "timestamp"
    vehicles_col: str = "vehicles"
    delimiter: str = ","


@dataclass(frozen=True)
class SyntheticProfile:
    """Shape parameters for the synthetic road-traffic generator.

    Defaults are calibrated so the daily peak workload is roughly 25 CPUs
    at 8 vehicles per CPU (peak count ~200 vehicles/bin).
    """

    base: float = 40.0
    amplitude: float = 160.0
    weekly_frac: float = 0.05   # weekly swing as a fraction of amplitude
    noise_frac: float = 0.10    # Gaussian sigma as a fraction of the local mean
    start_timestamp: int = 0


def load_trace(path, fmt: TraceFormat = TraceFormat(), gap_fill: str | None = None,
               bin_seconds: int = DEFAULT_BIN_SECONDS) -> TraceSeries:
    """Read a trace from a CSV file.

    ``gap_fill=None`` rejects series with missing bins; ``gap_fill='linear'``
    inserts linearly interpolated counts on the missing grid points.
    """
    timestamps: list[int] = []
    vehicles: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=fmt.delimiter)
        if reader.fieldnames is None:
            raise TraceParseError(path, 1, "missing header row")
        for col in (fmt.timestamp_col, fmt.vehicles_col):
            if col not in reader.fieldnames:
                raise TraceParseError(path, 1, f"missing column {col!r}")
        for row in reader:
            line_no = reader.line_num
            try:
                ts = int(row[fmt.timestamp_col])
                count = float(row[fmt.vehicles_col])
            except (TypeError, ValueError) as exc:
                raise TraceParseError(path, line_no, f"malformed row: {exc}") from exc
            if not math.isfinite(count) or count < 0:
                raise TraceParseError(path, line_no,
                                      f"vehicle count must be finite and >= 0, got {count}")
            timestamps.append(ts)
            vehicles.append(count)
    if not timestamps:
        raise TraceValidationError(f"{path}: trace must be non-empty")

    ts_arr = np.asarray(timestamps, dtype=np.int64)
    v_arr = np.asarray(vehicles, dtype=np.float64)
    if np.any(np.diff(ts_arr) <= 0):
        raise TraceValidationError(f"{path}: timestamps not strictly increasing")
    if gap_fill is not None:
        ts_arr, v_arr = _fill_gaps(ts_arr, v_arr, bin_seconds, gap_fill)
    return TraceSeries(ts_arr, v_arr, bin_seconds=bin_seconds, name=str(path))


def _fill_gaps(ts, vehicles, bin_seconds: int, mode: str):
    if mode != "linear":
        raise ValueError(f"unknown gap_fill mode {mode!r}")
    offsets = ts - ts[0]
    if np.any(offsets % bin_seconds != 0):
        raise TraceValidationError("timestamps are not aligned to the bin grid")
    full_ts = np.arange(ts[0], ts[-1] + 1, bin_seconds, dtype=np.int64)
    full_v = np.interp(full_ts, ts, vehicles)
    return full_ts, full_v


def write_trace(series: TraceSeries, path, fmt: TraceFormat = TraceFormat()) -> None:
    """Write the canonical CSV form: header row, shortest-repr floats."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=fmt.delimiter)
        writer.writerow([fmt.timestamp_col, fmt.vehicles_col])
        for i in range(len(series)):
            writer.writerow([int(series.timestamps[i]), repr(float(series.vehicles[i]))])


def daily_shape(frac_of_day: np.ndarray) -> np.ndarray:
    """Two-peak commuter profile in [0, 1]: morning and evening rush."""
    morning = np.exp(-0.5 * ((frac_of_day - 8.0 / 24.0) / (1.6 / 24.0)) ** 2)
    evening = np.exp(-0.5 * ((frac_of_day - 18.0 / 24.0) / (2.0 / 24.0)) ** 2)
    return np.maximum(morning, evening)


def generate_synthetic(days: int, seed: int,
                       profile: SyntheticProfile = SyntheticProfile()) -> TraceSeries:
    """Generate ``days`` of synthetic counts on the 5-minute grid.

    vehicles(t) = max(0, base + amplitude*daily(t) + weekly(t) + noise(t)),
    a pure function of (days, seed, profile).
    """
    if days < 1:
        raise ValueError("days must be >= 1")
    n = days * BINS_PER_DAY
    rng = np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF,
                                                        0x74726163]))
    t = np.arange(n, dtype=np.float64) * DEFAULT_BIN_SECONDS
    frac_of_day = (t % 86400.0) / 86400.0
    frac_of_week = (t % (7 * 86400.0)) / (7 * 86400.0)
    mean = (profile.base
            + profile.amplitude * daily_shape(frac_of_day)
            + profile.weekly_frac * profile.amplitude * np.sin(2.0 * np.pi * frac_of_week))
    noise = rng.standard_normal(n) * profile.noise_frac * np.abs(mean)
    vehicles = np.maximum(0.0, mean + noise)
    timestamps = profile.start_timestamp + np.arange(n, dtype=np.int64) * DEFAULT_BIN_SECONDS
    return TraceSeries(timestamps, vehicles, name=f"synthetic(days={days},seed={seed})")


def to_workload(series: TraceSeries,
                vehicles_per_cpu: float = DEFAULT_VEHICLES_PER_CPU) -> WorkloadSeries:
    """Convert counts to CPU workload: one CPU serves ``vehicles_per_cpu`` vehicles."""
    if vehicles_per_cpu <= 0:
        raise ValueError("vehicles_per_cpu must be positive")
    return WorkloadSeries(series.vehicles / float(vehicles_per_cpu), source=series.name)


def split(series: WorkloadSeries, train_fraction: float = 0.8
          ) -> tuple[WorkloadSeries, WorkloadSeries]:
    """Contiguous prefix/suffix split at floor(len * train_fraction)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    cut = math.floor(len(series) * train_fraction)
    if cut == 0 or cut == len(series):
        raise ValueError(f"split at {cut} would leave an empty partition")
    return (WorkloadSeries(series.values[:cut], source=f"{series.source}[train]"),
            WorkloadSeries(series.values[cut:], source=f"{series.source}[test]"))
