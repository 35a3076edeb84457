"""
Experiments over arithmetic factors of omega_q.

Handles:
- Longest-progression verification grids against the closed-form maximum
- Arithmetic index tables with upper and lower bounds
- The alternating-word probe for the hardest word to find
- Deterministic CSV/JSON export
- An experiment runner tying configuration, cache and export together
"""

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .cache import ResultCache
from .config import ExperimentConfig, ExportFormat
from .constructive import (
    EmbeddingResult,
    bounds_row,
    construct_embedding,
    lemma2_witness,
    lower_bound_index,
    lower_bound_tm,
    theorem_max_run,
    upper_bound_index,
)
from .core import GtmSequence, InvalidInputError, Word, alternating_word, format_word
from .search import (
    IndexReport,
    Occurrence,
    RunReport,
    factor_complexity,
    max_index_for_length,
    max_run_length,
    min_difference,
)

logger = logging.getLogger(__name__)


class ExportError(OSError):
    """Writing a report failed."""


# =============================================================================
# Reports
# =============================================================================

@dataclass
class TheoremReport:
    """Observed max of L(d) over d < q^n against the closed-form value."""
    q: int
    n: int
    expected: int
    observed_max: int
    argmax_differences: List[int]
    per_d: List[RunReport] = field(default_factory=list)
    off_diagonal_max: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.observed_max == self.expected and (self.q ** self.n - 1) in self.argmax_differences

    @property
    def off_diagonal_ok(self) -> bool:
        """Every d other than q^n - 1 stays within q^n."""
        return self.off_diagonal_max is None or self.off_diagonal_max <= self.q ** self.n

    def summary(self) -> str:
        argmax = ",".join(str(d) for d in self.argmax_differences)
        status = "PASS" if self.passed else "FAIL"
        return f"expected={self.expected} observed={self.observed_max} argmax=[{argmax}] {status}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "n": self.n,
            "expected": self.expected,
            "observed_max": self.observed_max,
            "argmax_differences": list(self.argmax_differences),
            "off_diagonal_max": self.off_diagonal_max,
            "off_diagonal_ok": self.off_diagonal_ok,
            "passed": self.passed,
            "per_d": [r.to_dict() for r in self.per_d],
        }


@dataclass
class IndexRow:
    n: int
    I: int
    lower: int
    upper: int
    extremal_count: int
    alternating_is_extremal: bool

    @property
    def within_bounds(self) -> bool:
        return max(0, self.lower) <= self.I <= self.upper

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "I": self.I,
            "lower": self.lower,
            "upper": self.upper,
            "extremal_count": self.extremal_count,
            "alternating_is_extremal": self.alternating_is_extremal,
        }


@dataclass
class IndexTable:
    """I(n) for n = 1..n_max with the bounds that sandwich it."""
    q: int
    C: int
    rows: List[IndexRow] = field(default_factory=list)

    @property
    def all_within_bounds(self) -> bool:
        return all(row.within_bounds for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.q, "C": self.C, "rows": [r.to_dict() for r in self.rows]}


@dataclass
class ConjectureReport:
    """Indices of period-2 words compared with the maximal index I(n)."""
    q: int
    n: int
    probes: List[IndexReport]
    I: int
    extremal_words: List[Word]
    alternating_is_extremal: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "n": self.n,
            "I": self.I,
            "alternating_is_extremal": self.alternating_is_extremal,
            "probes": [p.to_dict(self.q) for p in self.probes],
            "extremal_words": [
                format_word(u, GtmSequence.of(self.q).base) for u in self.extremal_words
            ],
        }


Report = Union[TheoremReport, IndexTable, ConjectureReport]


# =============================================================================
# Experiments
# =============================================================================

def verify_theorem(
    seq: GtmSequence,
    n: int,
    *,
    workers: int = 1,
    window_power: int = 1,
) -> TheoremReport:
    """Compute L(d) for every d in [1, q^n) and compare the maximum with the closed form."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    q = seq.q
    differences = range(1, q ** n)

    def run(d: int) -> RunReport:
        report = max_run_length(seq, d, window_power=window_power)
        logger.debug(f"q={q} d={d}: L={report.length} at c={report.witness_c}")
        return report

    if workers <= 1:
        per_d = [run(d) for d in differences]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            per_d = list(executor.map(run, differences))

    observed = max(r.length for r in per_d)
    off_diagonal = [r.length for r in per_d if r.d != q ** n - 1]
    report = TheoremReport(
        q=q,
        n=n,
        expected=theorem_max_run(seq.base, n),
        observed_max=observed,
        argmax_differences=sorted(r.d for r in per_d if r.length == observed),
        per_d=per_d,
        off_diagonal_max=max(off_diagonal) if off_diagonal else None,
    )
    logger.info(f"q={q} n={n}: {report.summary()}")
    return report


def estimate_complexity_constant(seq: GtmSequence, m_max: int = 32) -> int:
    """max over m <= m_max of ceil(p(m) / m)."""
    return max(math.ceil(factor_complexity(seq, m) / m) for m in range(1, m_max + 1))


def complexity_constant(seq: GtmSequence) -> int:
    """C with p(m) <= C*m: 4 for q = 2, measured otherwise."""
    if seq.q == 2:
        return 4
    return estimate_complexity_constant(seq)


def index_table(
    seq: GtmSequence,
    n_max: int,
    *,
    workers: int = 1,
    cache: Optional[ResultCache] = None,
    window_power: int = 1,
    C: Optional[int] = None,
) -> IndexTable:
    """One row per n <= n_max: I(n), its bounds and whether 0101... is extremal."""
    if n_max < 1:
        raise InvalidInputError(f"n_max must be positive, got {n_max}")
    constant = C if C is not None else complexity_constant(seq)
    table = IndexTable(q=seq.q, C=constant)
    for n in range(1, n_max + 1):
        row = max_index_for_length(
            seq, n, workers=workers, cache=cache, window_power=window_power
        )
        table.rows.append(IndexRow(
            n=n,
            I=row.I,
            lower=lower_bound_index(seq.base, n, constant),
            upper=upper_bound_index(seq.base, n),
            extremal_count=len(row.extremal_words),
            alternating_is_extremal=alternating_word(n, seq.base) in row.extremal_words,
        ))
        logger.info(f"q={seq.q} n={n}: I={row.I}, {len(row.extremal_words)} extremal words")
    return table


def period_two_words(seq: GtmSequence, n: int) -> List[Word]:
    """abab... of length n for every a != b; for q = 2 that is 0101... and 1010..."""
    return [
        alternating_word(n, seq.base, a, b)
        for a in seq.base.alphabet
        for b in seq.base.alphabet
        if a != b
    ]


def conjecture_probe(
    seq: GtmSequence,
    n: int,
    *,
    workers: int = 1,
    cache: Optional[ResultCache] = None,
    window_power: int = 1,
) -> ConjectureReport:
    """Compare the index of the alternating word with I(n)."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    row = max_index_for_length(seq, n, workers=workers, cache=cache, window_power=window_power)
    by_word = {r.u: r for r in row.reports}
    probes = [by_word[u] for u in period_two_words(seq, n)]
    return ConjectureReport(
        q=seq.q,
        n=n,
        probes=probes,
        I=row.I,
        extremal_words=list(row.extremal_words),
        alternating_is_extremal=alternating_word(n, seq.base) in row.extremal_words,
    )


# =============================================================================
# Export
# =============================================================================

def _rows(report: Report):
    if isinstance(report, TheoremReport):
        yield ["q", "n", "d", "L", "witness_c"]
        for r in sorted(report.per_d, key=lambda r: r.d):
            yield [report.q, report.n, r.d, r.length, r.witness_c]
    elif isinstance(report, IndexTable):
        yield ["q", "n", "I", "lower", "upper", "extremal_count", "alt_extremal"]
        for row in sorted(report.rows, key=lambda r: r.n):
            yield [
                report.q, row.n, row.I, row.lower, row.upper, row.extremal_count,
                str(row.alternating_is_extremal).lower(),
            ]
    elif isinstance(report, ConjectureReport):
        base = GtmSequence.of(report.q).base
        yield ["q", "n", "word", "d_min", "c", "index", "I", "is_extremal"]
        extremal = set(report.extremal_words)
        for p in report.probes:
            yield [
                report.q, report.n, format_word(p.u, base), p.d_min, p.occurrence.c,
                p.index, report.I, str(p.u in extremal).lower(),
            ]
    else:
        raise TypeError(f"cannot export {type(report).__name__}")


def render(report: Report, fmt: ExportFormat) -> str:
    """The exact text export() writes."""
    if fmt == ExportFormat.JSON:
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(_rows(report))
    if isinstance(report, TheoremReport):
        buffer.write(f"# {report.summary()}\n")
    return buffer.getvalue()


def export(report: Report, fmt: ExportFormat, path: Path) -> Path:
    """Write the report; the bytes depend only on the report contents."""
    path = Path(path)
    text = render(report, fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise ExportError(e.errno, f"cannot write {path}: {e.strerror or e}") from e
    logger.info(f"Exported {type(report).__name__} to {path}")
    return path


# =============================================================================
# Runner
# =============================================================================

class ExperimentRunner:
    """
    Runs experiments for one alphabet size under an ExperimentConfig.

    Owns the sequence and the optional result cache; the cache is saved once
    per experiment, after all workers are done.
    """

    def __init__(self, config: Optional[ExperimentConfig] = None):
        self.config = config or ExperimentConfig()
        self.seq = GtmSequence.of(self.config.q)
        self.cache = ResultCache(self.config.cache_path) if self.config.cache_path else None

    @property
    def _search(self):
        return self.config.search

    def _finish(self):
        if self.cache is not None:
            self.cache.save()

    def theorem(self, n: int) -> TheoremReport:
        return verify_theorem(
            self.seq, n,
            workers=self._search.workers,
            window_power=self._search.window_power,
        )

    def maximal_run_witness(self, n: int) -> Optional[Occurrence]:
        """The explicit longest run for d = q^n - 1, when q divides n."""
        if n % self.seq.q:
            return None
        return lemma2_witness(self.seq.base, n, z_cap=self._search.z_cap)

    def index(self, u: Word) -> IndexReport:
        try:
            return min_difference(
                self.seq, u, cache=self.cache, window_power=self._search.window_power
            )
        finally:
            self._finish()

    def index_table(self, n_max: int) -> IndexTable:
        try:
            return index_table(
                self.seq, n_max,
                workers=self._search.workers,
                cache=self.cache,
                window_power=self._search.window_power,
            )
        finally:
            self._finish()

    def conjecture(self, n: int) -> ConjectureReport:
        try:
            return conjecture_probe(
                self.seq, n,
                workers=self._search.workers,
                cache=self.cache,
                window_power=self._search.window_power,
            )
        finally:
            self._finish()

    def embed(self, u: Word) -> EmbeddingResult:
        return construct_embedding(self.seq, u, z_cap=self._search.z_cap)

    def bounds(self, n: int) -> List[Dict[str, Any]]:
        C = complexity_constant(self.seq)
        rows = []
        for m in range(1, n + 1):
            row = bounds_row(self.seq.base, m, C).to_dict()
            if self.seq.q == 2:
                row["lower_tm_ceil"] = max(0, math.ceil(lower_bound_tm(m)))
            rows.append(row)
        return rows

    def export(self, report: Report, path: Optional[Path] = None) -> Optional[Path]:
        if path is None:
            return None
        return export(report, self.config.output_format, path)
