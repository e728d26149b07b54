"""Algorithm registry, timing runs and power-law fits."""
from __future__ import annotations

import csv
import enum
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from oddsieve import atkin, oracle, trial_division, wheel
from oddsieve.result import PrimeList

log = logging.getLogger(__name__)

CSV_HEADER = ("algorithm", "n_max", "elapsed_ns", "modulo_ops", "prime_count")


class AlgorithmId(str, enum.Enum):
    TRIAL = "trial"
    INDEX_TRIAL = "index-trial"
    ATKIN = "atkin"
    INDEX_ATKIN = "index-atkin"
    ATKIN_TABLED = "atkin-tabled"
    WHEEL = "wheel"
    INDEX_WHEEL = "index-wheel"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Algorithm:
    """How to call one enumerator.

    ``inclusive`` algorithms return primes ``<= n``, the Atkin family primes
    ``< n``.  ``minimum`` is the smallest admissible limit.
    """

    id: AlgorithmId
    run: Callable[[int], PrimeList]
    inclusive: bool
    odd_only: bool
    minimum: int
    counts_modulo_ops: bool = False


ALGORITHMS: dict[AlgorithmId, Algorithm] = {
    a.id: a
    for a in (
        Algorithm(AlgorithmId.TRIAL, trial_division.prime_enumeration, True, True, 7, True),
        Algorithm(AlgorithmId.INDEX_TRIAL, trial_division.index_prime_enumeration, True, True, 7, True),
        Algorithm(AlgorithmId.ATKIN, atkin.sieve_of_atkin, False, False, 4),
        Algorithm(AlgorithmId.INDEX_ATKIN, atkin.index_sieve_of_atkin, False, True, 5),
        Algorithm(AlgorithmId.ATKIN_TABLED, atkin.sieve_of_atkin_tabled, False, False, 4),
        Algorithm(AlgorithmId.WHEEL, wheel.wheel_sieve_reference, True, False, 10),
        Algorithm(AlgorithmId.INDEX_WHEEL, wheel.index_wheel_sieve, True, True, 11),
        Algorithm(AlgorithmId.ORACLE, oracle.eratosthenes, True, False, 2),
    )
}

MAIN_ALGORITHMS = (
    AlgorithmId.TRIAL,
    AlgorithmId.INDEX_TRIAL,
    AlgorithmId.ATKIN,
    AlgorithmId.INDEX_ATKIN,
    AlgorithmId.WHEEL,
    AlgorithmId.INDEX_WHEEL,
)


def parse_ids(text: str) -> list[AlgorithmId]:
    ids = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [AlgorithmId(t) for t in ids]
    except ValueError as exc:
        raise ValueError(f"unknown algorithm in {text!r}") from exc


def native_limit(algo: AlgorithmId, n: int) -> int:
    """Limit to pass so that ``algo`` covers the same primes as requested.

    Odd-only algorithms get an even ``n`` moved to an adjacent odd limit that
    leaves the prime set unchanged: down for inclusive bounds, up for
    exclusive ones.  Raises ``ValueError`` if the result is out of domain.
    """
    entry = ALGORITHMS[algo]
    native = n
    if entry.odd_only and n % 2 == 0:
        native = n - 1 if entry.inclusive else n + 1
        log.warning("%s: limit %d adjusted to odd limit %d", algo.value, n, native)
    if native < entry.minimum:
        raise ValueError(f"{algo.value}: limit {n} is below the admissible minimum {entry.minimum}")
    return native


def run(algo: AlgorithmId, n: int) -> PrimeList:
    return ALGORITHMS[algo].run(native_limit(algo, n))


def expected(algo: AlgorithmId, native: int) -> np.ndarray:
    """Oracle primes over the range ``algo`` covers at limit ``native``."""
    if ALGORITHMS[algo].inclusive:
        return oracle.eratosthenes(native).primes
    return oracle.primes_below(native).primes


def first_divergence(got: np.ndarray, want: np.ndarray) -> tuple[int, int | None, int | None] | None:
    """``(position, got, expected)`` of the first mismatch, or None if identical."""
    n = min(len(got), len(want))
    diff = np.flatnonzero(got[:n] != want[:n])
    if len(diff):
        i = int(diff[0])
        return i, int(got[i]), int(want[i])
    if len(got) != len(want):
        longer = got if len(got) > len(want) else want
        return n, (int(longer[n]) if longer is got else None), (int(longer[n]) if longer is want else None)
    return None


@dataclass(frozen=True)
class BenchRecord:
    algorithm: AlgorithmId
    n_max: int
    elapsed_ns: int
    modulo_ops: int | None
    prime_count: int

    def to_row(self) -> list[str]:
        ops = "" if self.modulo_ops is None else str(self.modulo_ops)
        return [self.algorithm.value, str(self.n_max), str(self.elapsed_ns), ops, str(self.prime_count)]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "BenchRecord":
        ops = row["modulo_ops"]
        return cls(
            algorithm=AlgorithmId(row["algorithm"]),
            n_max=int(row["n_max"]),
            elapsed_ns=int(row["elapsed_ns"]),
            modulo_ops=int(ops) if ops else None,
            prime_count=int(row["prime_count"]),
        )


def write_csv(records: Iterable[BenchRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.to_row())


def read_csv(path: str | Path) -> list[BenchRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [BenchRecord.from_row(row) for row in reader]


def warm_up(algo: AlgorithmId) -> None:
    """Trigger JIT compilation so it is not charged to the first timing."""
    run(algo, 1001)


def time_one(algo: AlgorithmId, n: int, repetitions: int = 1, verify: bool = False) -> BenchRecord:
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    native = native_limit(algo, n)
    fn = ALGORITHMS[algo].run
    best = None
    result = None
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        result = fn(native)
        elapsed = time.perf_counter_ns() - t0
        best = elapsed if best is None else min(best, elapsed)
    if verify:
        want = expected(algo, native)
        if not np.array_equal(result.primes, want):
            raise AssertionError(f"{algo.value} disagrees with the oracle at {native}")
    return BenchRecord(
        algorithm=algo,
        n_max=native,
        elapsed_ns=max(1, best),
        modulo_ops=result.modulo_ops if ALGORITHMS[algo].counts_modulo_ops else None,
        prime_count=result.count,
    )


def bench(
    algos: Sequence[AlgorithmId],
    limits: Sequence[int],
    repetitions: int = 1,
    verify: bool = False,
) -> list[BenchRecord]:
    """One record per (algorithm, limit), keeping the fastest of ``repetitions`` runs."""
    if not algos:
        raise ValueError("no algorithms given")
    if not limits:
        raise ValueError("no limits given")
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    records = []
    for algo in algos:
        warm_up(algo)
        for n in limits:
            rec = time_one(algo, n, repetitions, verify)
            log.info("%s n_max=%d %.6fs", algo.value, rec.n_max, rec.elapsed_ns / 1e9)
            records.append(rec)
    return records


class Model(str, enum.Enum):
    POWB = "powb"
    POWB_LN = "powb-ln"
    QUAD = "quad"


@dataclass(frozen=True)
class PowerFit:
    """Least-squares fit of one model family.

    ``coefficients`` is ``(a, b)`` for ``a * n**b`` and ``a * n**b / ln n``,
    and ``(a, b)`` for ``a * n**2 + b * n``.
    """

    model: Model
    coefficients: tuple[float, ...]
    correlation: float

    def predict(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        a, b = self.coefficients
        if self.model is Model.POWB:
            return a * n**b
        if self.model is Model.POWB_LN:
            return a * n**b / np.log(n)
        return a * n * n + b * n


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    sx = np.std(x)
    sy = np.std(y)
    if sx == 0 or sy == 0:
        return 0.0
    r = float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))
    return max(-1.0, min(1.0, r))


def fit(n, y, model: Model | str) -> PowerFit:
    """Fit ``y(n)``; power models are solved linearly in log space."""
    model = Model(model)
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(n) != len(y):
        raise ValueError("n and y differ in length")
    if len(n) < 3:
        raise ValueError(f"need at least 3 points to fit, got {len(n)}")
    if model is Model.QUAD:
        design = np.column_stack((n * n, n))
        (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
        return PowerFit(model, (float(a), float(b)), _pearson(design @ np.array([a, b]), y))
    if np.any(n <= 1) or np.any(y <= 0):
        raise ValueError("power-law fits need n > 1 and positive y")
    target = np.log(y)
    if model is Model.POWB_LN:
        target = target + np.log(np.log(n))
    x = np.log(n)
    b, log_a = np.polyfit(x, target, 1)
    return PowerFit(model, (float(math.exp(log_a)), float(b)), _pearson(x, target))


def fit_records(records: Sequence[BenchRecord], model: Model | str) -> dict[AlgorithmId, PowerFit]:
    """Fit elapsed time (seconds) against ``n_max`` separately for each algorithm."""
    grouped: dict[AlgorithmId, list[BenchRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.algorithm, []).append(rec)
    if not grouped:
        raise ValueError("no benchmark records")
    fits = {}
    for algo, recs in grouped.items():
        if len(recs) < 3:
            raise ValueError(f"{algo.value}: need at least 3 rows to fit, got {len(recs)}")
        n = [r.n_max for r in recs]
        y = [r.elapsed_ns / 1e9 for r in recs]
        fits[algo] = fit(n, y, model)
    return fits
