"""Runtime scaling measurements and the least-squares linearity analysis.

Timings of ``classify_batch`` at several batch sizes are fitted with a line
``t = a * n + b``; the fit from small batches is then used to predict the
runtime of larger ones and the prediction errors are tabulated.
"""

from __future__ import annotations

import csv
import json
import math
import time
import warnings
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .batch import BBox, PointBatch, bbox_of, classify_batch
from .errors import DegenerateFit, MissingFit, ParseError
from .geometry import CrossingMode, Polygon

FLAT_HEADER = ("n", "algorithm", "actual_s", "predicted_s")

# linearly spaced small grid and the large grid of the published projection tables
PUBLISHED_SMALL_SIZES = (10, 1120, 2230, 3340, 4450, 5560, 6670, 7780, 8890, 10000)
PUBLISHED_LARGE_SIZES = (1908647, 3807294, 5705941, 7604588, 9503235,
                     11401882, 13300529, 15199176, 17097823)


@dataclass(frozen=True)
class TimingSample:
    n_points: int
    algorithm: str
    elapsed_seconds: float

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError(f"n_points must be >= 1, got {self.n_points}")
        if not self.elapsed_seconds >= 0:
            raise ValueError(f"elapsed_seconds must be >= 0, got {self.elapsed_seconds}")


@dataclass(frozen=True)
class FitCoefficients:
    slope: float      # seconds per point
    intercept: float  # seconds


@dataclass(frozen=True)
class ErrorRow:
    n_points: int
    algorithm: str
    predicted_s: float
    actual_s: float
    abs_error: float
    rel_error: float | None  # undefined when actual_s == 0


@dataclass
class ErrorReport:
    rows: list[ErrorRow] = field(default_factory=list)

    def cell(self, n_points: int, algorithm: str) -> ErrorRow:
        for row in self.rows:
            if row.n_points == n_points and row.algorithm == algorithm:
                return row
        raise KeyError((n_points, algorithm))

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def random_points(box: BBox, n: int, seed: int) -> np.ndarray:
    """``n`` uniform points over ``box``; a function of ``(seed, n)`` only."""
    rng = np.random.default_rng([seed, n])
    lo = np.array([box.min_x, box.min_y])
    hi = np.array([box.max_x, box.max_y])
    return rng.uniform(lo, hi, size=(n, 2))


def run_scaling_bench(poly: Polygon, sizes: Sequence[int],
                      mode: CrossingMode | str = CrossingMode.ROBUST,
                      parallelism="auto", repetitions: int = 3, seed: int = 0,
                      label: str | None = None, inflate: float = 0.10) -> list[TimingSample]:
    """Time ``classify_batch`` for each batch size.

    Points are drawn uniformly over the polygon's bounding box grown by
    ``inflate`` (so some fall outside it).  Each size gets one untimed
    warm-up call, then the ``repetitions`` timed rounds visit every size in
    turn so slow drift in machine load affects all sizes alike; the minimum
    wall clock time per size is recorded.  Point generation is excluded
    from timing.  All batches are held in memory at once.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(s < 1 for s in sizes) or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be positive and strictly ascending, got {sizes}")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    mode = CrossingMode.parse(mode)
    label = label or mode.value
    box = bbox_of(poly).inflated(inflate)
    batches = [PointBatch(random_points(box, n, seed)) for n in sizes]
    for batch in batches:
        classify_batch(batch, poly, mode, parallelism)
    best = [math.inf] * len(sizes)
    for _ in range(repetitions):
        for i, batch in enumerate(batches):
            t0 = time.perf_counter()
            classify_batch(batch, poly, mode, parallelism)
            best[i] = min(best[i], time.perf_counter() - t0)
    return [TimingSample(n, label, t) for n, t in zip(sizes, best)]


def least_squares_fit(samples: Iterable[TimingSample]) -> FitCoefficients:
    """Fit ``elapsed = slope * n + intercept`` minimising squared residuals.

    Solved through the normal equations on mean-centred data, which equals
    the direct ``[n | 1] [a b]^T = t`` least-squares solution but stays
    well conditioned for n in the tens of millions.
    """
    samples = list(samples)
    n = np.array([s.n_points for s in samples], dtype=np.float64)
    t = np.array([s.elapsed_seconds for s in samples], dtype=np.float64)
    if len(samples) < 2 or np.all(n == n[0]):
        raise DegenerateFit("need at least two samples with distinct point counts")
    n_mean, t_mean = n.mean(), t.mean()
    dn = n - n_mean
    slope = float(np.dot(dn, t - t_mean) / np.dot(dn, dn))
    intercept = float(t_mean - slope * n_mean)
    if slope < 0:
        warnings.warn(f"negative slope {slope:g} s/point; timings are not increasing with n",
                      RuntimeWarning, stacklevel=2)
    return FitCoefficients(slope, intercept)


def fit_by_algorithm(samples: Iterable[TimingSample]) -> dict[str, FitCoefficients]:
    return {alg: least_squares_fit(group) for alg, group in group_samples(samples).items()}


def group_samples(samples: Iterable[TimingSample]) -> dict[str, list[TimingSample]]:
    groups: dict[str, list[TimingSample]] = defaultdict(list)
    for s in samples:
        groups[s.algorithm].append(s)
    return dict(groups)


def predict(fit: FitCoefficients, n_points) -> float:
    return fit.slope * n_points + fit.intercept


def r_squared(fit: FitCoefficients, samples: Iterable[TimingSample]) -> float:
    """Coefficient of determination of ``fit`` over ``samples``."""
    samples = list(samples)
    t = np.array([s.elapsed_seconds for s in samples])
    pred = np.array([predict(fit, s.n_points) for s in samples])
    ss_res = float(np.sum((t - pred) ** 2))
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return 1.0 - ss_res / ss_tot


def error_report(fits: Mapping[str, FitCoefficients],
                 actual: Iterable[TimingSample]) -> ErrorReport:
    rows = []
    for s in actual:
        if s.algorithm not in fits:
            raise MissingFit(s.algorithm)
        pred = predict(fits[s.algorithm], s.n_points)
        err = abs(pred - s.elapsed_seconds)
        rel = err / s.elapsed_seconds if s.elapsed_seconds > 0 else None
        rows.append(ErrorRow(s.n_points, s.algorithm, pred, s.elapsed_seconds, err, rel))
    return ErrorReport(rows)


# -- report serialisation --------------------------------------------------

def _fit_entry(alg, fit, samples):
    entry = {"algorithm": alg, "slope": fit.slope, "intercept": fit.intercept}
    own = [s for s in samples if s.algorithm == alg]
    if len({s.n_points for s in own}) >= 2:
        entry["r_squared"] = r_squared(fit, own)
    return entry


def emit_report(samples: Sequence[TimingSample], fits: Mapping[str, FitCoefficients],
                errors: ErrorReport | None, path, predict_sizes: Sequence[int] = (),
                figure: bool = True, notes: Sequence[str] = ()) -> dict[str, Path]:
    """Write the JSON report at ``path`` plus a flat CSV and a PNG beside it.

    The JSON document has ``samples``, ``fits``, ``errors`` and
    ``predictions`` arrays.  The flat CSV (``n,algorithm,actual_s,
    predicted_s``) has one row per sample and one per error-table cell,
    then predicted-only rows for ``predict_sizes``; missing values are left
    empty.
    """
    path = Path(path)
    samples = list(samples)
    errors = errors or ErrorReport()
    predictions = [{"n_points": int(n), "algorithm": alg, "predicted_s": predict(fit, n)}
                   for alg, fit in fits.items() for n in predict_sizes]
    doc = {
        "samples": [asdict(s) for s in samples],
        "fits": [_fit_entry(alg, fit, samples) for alg, fit in fits.items()],
        "errors": [asdict(r) for r in errors],
        "predictions": predictions,
    }
    if notes:
        doc["notes"] = list(notes)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")

    flat_path = path.with_suffix(".csv")
    with flat_path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(FLAT_HEADER)
        for s in samples:
            fit = fits.get(s.algorithm)
            w.writerow([s.n_points, s.algorithm, repr(s.elapsed_seconds),
                        "" if fit is None else repr(predict(fit, s.n_points))])
        for r in errors:
            w.writerow([r.n_points, r.algorithm, repr(r.actual_s), repr(r.predicted_s)])
        for p in predictions:
            w.writerow([p["n_points"], p["algorithm"], "", repr(p["predicted_s"])])
    written = {"report": path, "table": flat_path}
    if figure and (samples or len(errors)):
        from .plotting import plot_scaling
        written["figure"] = plot_scaling(samples, fits, path.with_suffix(".png"), errors=errors)
    return written


def load_report(path) -> tuple[list[TimingSample], dict[str, FitCoefficients], ErrorReport]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    samples = [TimingSample(**s) for s in doc["samples"]]
    fits = {f["algorithm"]: FitCoefficients(f["slope"], f["intercept"]) for f in doc["fits"]}
    errors = ErrorReport([ErrorRow(**r) for r in doc["errors"]])
    return samples, fits, errors


def read_timings_csv(path) -> list[TimingSample]:
    """Read long-format timings: columns ``n``, ``algorithm`` and ``seconds``
    (``actual_s`` is accepted for the seconds column; rows with an empty
    seconds cell are ignored, so a flat report table can be fed back)."""
    path = Path(path)
    out = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip() for f in reader.fieldnames or []]
        reader.fieldnames = fields
        sec_col = "seconds" if "seconds" in fields else "actual_s" if "actual_s" in fields else None
        if "n" not in fields or "algorithm" not in fields or sec_col is None:
            raise ParseError(1, "header", "expected columns n, algorithm, seconds", path)
        for row in reader:
            if not row[sec_col].strip():
                continue
            try:
                n = int(float(row["n"]))
                t = float(row[sec_col])
            except ValueError as exc:
                raise ParseError(reader.line_num, sec_col, str(exc), path) from None
            out.append(TimingSample(n, row["algorithm"].strip(), t))
    return out


def write_timings_csv(samples: Iterable[TimingSample], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "algorithm", "seconds"])
        for s in samples:
            w.writerow([s.n_points, s.algorithm, repr(s.elapsed_seconds)])
