"""
Decision procedures over arithmetic factors of omega_q.

Handles:
- Complete occurrence search for a word with a fixed difference (two-scale reduction)
- Brute-force prefix oracle used to validate the complete search
- Run lengths L(c, d) and exact maximal run lengths L(d)
- Minimal differences and arithmetic indices of words
- Maximal index I(n), arithmetical complexity and factor complexity

Every occurrence at c = z*Q + r (Q a power of q above the span of the word)
reduces, through w_{z*Q + r} = s_q(z) + w_r, to a window of the prefix of
length Q: either the whole factor sits inside one block, or it crosses exactly
one block boundary and the two halves are shifted by s_q(z) and s_q(z+1).
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import (
    GtmSequence,
    InvalidInputError,
    PrimeBase,
    Word,
    ceil_log,
    expansion_length,
    format_word,
)

logger = logging.getLogger(__name__)


class SearchInconsistencyError(RuntimeError):
    """A search produced a result that contradicts a verified property."""


@dataclass(frozen=True)
class Occurrence:
    """Witness that a word occurs as the arithmetic factor starting at c with difference d."""
    c: int
    d: int

    def to_dict(self) -> Dict[str, Any]:
        return {"c": str(self.c), "d": str(self.d)}


@dataclass(frozen=True)
class RunReport:
    """L(d) together with the least start of a run of zeros of that length."""
    d: int
    length: int
    witness_c: int

    def to_dict(self) -> Dict[str, Any]:
        return {"d": self.d, "length": self.length, "witness_c": str(self.witness_c)}


@dataclass(frozen=True)
class IndexReport:
    """Minimal difference of a word and its arithmetic index |S_q(d_min)|."""
    u: Word
    d_min: int
    occurrence: Occurrence
    index: int

    def to_dict(self, q: int) -> Dict[str, Any]:
        return {
            "word": format_word(self.u, PrimeBase(q)),
            "d_min": self.d_min,
            "c": str(self.occurrence.c),
            "index": self.index,
        }


@dataclass
class MaxIndexRow:
    """I(n) over all words of length n, with the words attaining it."""
    n: int
    I: int
    extremal_words: Tuple[Word, ...]
    reports: List[IndexReport] = field(default_factory=list)


# =============================================================================
# Block-shift bookkeeping
# =============================================================================

def least_z_with_jump(q: int, a: int, delta: int) -> int:
    """
    Least z with s_q(z) = a and s_q(z+1) - s_q(z) = delta (mod q).

    z must end in exactly tau = (delta - 1) mod q digits q-1, preceded by a
    prefix v whose last digit is not q-1 and whose digit sum is a + tau.
    """
    tau = (delta - 1) % q
    target = (a + tau) % q
    v = target if target < q - 1 else 2 * q - 2
    return v * q ** tau + q ** tau - 1


@lru_cache(maxsize=None)
def jump_table(q: int) -> np.ndarray:
    """table[a, delta] = least_z_with_jump(q, a, delta), as an object array (big ints)."""
    table = np.empty((q, q), dtype=object)
    for a in range(q):
        for delta in range(q):
            table[a, delta] = least_z_with_jump(q, a, delta)
    table.flags.writeable = False
    return table


def window_size(q: int, m: int, d: int, window_power: int = 1) -> int:
    """Q = q^(window_power * t) with t minimal such that q^t >= m*d."""
    if window_power < 1:
        raise InvalidInputError(f"window_power must be >= 1, got {window_power}")
    t = ceil_log(m * d, q)
    return q ** (t * window_power)


def _check_word(seq: GtmSequence, u: Sequence[int]) -> Word:
    if len(u) == 0:
        raise InvalidInputError("word must not be empty")
    return seq.base.check_word(u)


def _check_difference(d: int) -> None:
    if d < 1:
        raise InvalidInputError(f"difference must be positive, got {d}")


def _least_candidate(zs: np.ndarray, rs: np.ndarray, Q: int) -> int:
    z_min = min(zs.tolist())
    r_min = int(rs[np.array([z == z_min for z in zs.tolist()], dtype=bool)].min())
    return int(z_min) * Q + r_min


def _crossing_layout(W: np.ndarray, q: int, Q: int, d: int, m: int):
    """Positions, block masks and symbols for starts r in [Q - (m-1)d, Q)."""
    span = (m - 1) * d
    r = np.arange(Q - span, Q, dtype=np.int64)
    p = r[:, None] + d * np.arange(m, dtype=np.int64)[None, :]
    lower = p < Q
    sym = W[np.where(lower, p, p - Q)]
    return r, lower, sym


# =============================================================================
# Occurrence search
# =============================================================================

def occurs_with_difference(
    seq: GtmSequence,
    u: Sequence[int],
    d: int,
    *,
    window_power: int = 1,
) -> Optional[Occurrence]:
    """
    Decide whether u is an arithmetic factor with difference d.

    Exhaustive over every c >= 0. Returns the occurrence with the least c, or None.
    """
    u = _check_word(seq, u)
    _check_difference(d)
    q = seq.q
    m = len(u)
    span = (m - 1) * d
    Q = window_size(q, m, d, window_power)
    W = seq.prefix(Q)
    table = jump_table(q)
    best: Optional[int] = None

    # Non-crossing: u = (w_r ... w_{r+span}) ⊕ a, realised with z = a.
    R = Q - span
    shift = (u[0] - W[:R]) % q
    ok = np.ones(R, dtype=bool)
    for k in range(1, m):
        ok &= ((u[k] - W[k * d:k * d + R]) % q) == shift
    if ok.any():
        rs = np.flatnonzero(ok)
        best = _least_candidate(shift[rs].astype(object), rs, Q)

    # Crossing: the head is shifted by a = s_q(z), the tail by a + delta.
    if span > 0:
        r, lower, sym = _crossing_layout(W, q, Q, d, m)
        k0 = lower.sum(axis=1)
        u_arr = np.asarray(u, dtype=np.int64)
        head = (u_arr[0] - sym[:, 0]) % q
        tail = (u_arr[k0] - sym[np.arange(len(r)), k0]) % q
        target = np.where(lower, head[:, None], tail[:, None])
        ok = (((u_arr[None, :] - sym) % q) == target).all(axis=1)
        if ok.any():
            idx = np.flatnonzero(ok)
            zs = table[head[idx], (tail[idx] - head[idx]) % q]
            c = _least_candidate(zs, r[idx], Q)
            best = c if best is None else min(best, c)

    if best is None:
        logger.debug(f"{format_word(u, seq.base)} does not occur with d={d} (Q={Q})")
        return None

    occurrence = Occurrence(c=best, d=d)
    if seq.arithmetic_slice(occurrence.c, d, m) != u:
        raise SearchInconsistencyError(
            f"witness c={occurrence.c}, d={d} does not reproduce {format_word(u, seq.base)}"
        )
    return occurrence


def occurs_prefix_oracle(
    seq: GtmSequence,
    u: Sequence[int],
    d: int,
    scan_limit: int,
) -> Optional[Occurrence]:
    """Scan c = 0 ... scan_limit and return the first occurrence. Sound, not complete."""
    u = _check_word(seq, u)
    _check_difference(d)
    if scan_limit < 0:
        raise InvalidInputError(f"scan_limit must be non-negative, got {scan_limit}")
    m = len(u)
    N = scan_limit + 1
    W = seq.prefix(N + (m - 1) * d)
    ok = np.ones(N, dtype=bool)
    for k in range(m):
        ok &= W[k * d:k * d + N] == u[k]
    hits = np.flatnonzero(ok)
    if len(hits) == 0:
        return None
    return Occurrence(c=int(hits[0]), d=d)


# =============================================================================
# Runs
# =============================================================================

def run_length_at(seq: GtmSequence, c: int, d: int) -> int:
    """Largest k >= 1 with w_c = w_{c+d} = ... = w_{c+(k-1)d}."""
    _check_difference(d)
    first = seq.symbol_at(c)
    k = 1
    while seq.symbol_at(c + k * d) == first:
        k += 1
    return k


def _run_ceiling(q: int, d: int) -> int:
    # d < q^n with n = |S_q(d)|, so no run is longer than q^n + 2q.
    n = expansion_length(d, PrimeBase(q))
    return q ** n + 2 * q


def max_run_length(seq: GtmSequence, d: int, *, window_power: int = 1) -> RunReport:
    """Exact L(d) over all starts, by doubling then bisecting on constant words 0^L."""
    _check_difference(d)
    ceiling = _run_ceiling(seq.q, d)

    def probe(length: int) -> Optional[Occurrence]:
        return occurs_with_difference(seq, (0,) * length, d, window_power=window_power)

    lo, best = 1, probe(1)
    hi = None
    while hi is None:
        if lo > ceiling:
            raise SearchInconsistencyError(f"run with d={d} exceeds the bound {ceiling}")
        candidate = probe(2 * lo)
        if candidate is None:
            hi = 2 * lo
        else:
            lo, best = 2 * lo, candidate
    while hi - lo > 1:
        mid = (lo + hi) // 2
        candidate = probe(mid)
        if candidate is None:
            hi = mid
        else:
            lo, best = mid, candidate

    if run_length_at(seq, best.c, d) != lo:
        raise SearchInconsistencyError(f"witness c={best.c} for d={d} is not a maximal run")
    logger.debug(f"L({d}) = {lo} at c={best.c}")
    return RunReport(d=d, length=lo, witness_c=best.c)


# =============================================================================
# Arithmetic index
# =============================================================================

def difference_cap(q: int, m: int) -> int:
    """Every word of length m occurs with some d below q^(upper bound on the index)."""
    from .constructive import upper_bound_index
    return q ** upper_bound_index(PrimeBase(q), m)


def min_difference(
    seq: GtmSequence,
    u: Sequence[int],
    *,
    cache=None,
    window_power: int = 1,
) -> IndexReport:
    """Least d with u in A(d), skipping multiples of q (they are never minimal)."""
    u = _check_word(seq, u)
    q = seq.q
    if cache is not None:
        hit = cache.get(q, u)
        if hit is not None:
            d_min, c = hit
            return IndexReport(
                u=u, d_min=d_min, occurrence=Occurrence(c, d_min),
                index=expansion_length(d_min, seq.base),
            )

    cap = difference_cap(q, len(u))
    d = 1
    while d < cap:
        if d % q:
            occurrence = occurs_with_difference(seq, u, d, window_power=window_power)
            if occurrence is not None:
                report = IndexReport(
                    u=u, d_min=d, occurrence=occurrence,
                    index=expansion_length(d, seq.base),
                )
                if cache is not None:
                    cache.put(q, u, d, occurrence.c)
                return report
        d += 1
    raise SearchInconsistencyError(
        f"{format_word(u, seq.base)} has no occurrence below the constructive cap {cap}"
    )


def all_words(q: int, n: int):
    """Sigma_q^n in lexicographic order."""
    return itertools.product(range(q), repeat=n)


def _index_reports(seq, n, workers, cache, window_power) -> List[IndexReport]:
    words = list(all_words(seq.q, n))
    if workers <= 1:
        return [min_difference(seq, u, cache=cache, window_power=window_power) for u in words]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(
            lambda u: min_difference(seq, u, cache=cache, window_power=window_power),
            words,
        ))


def max_index_for_length(
    seq: GtmSequence,
    n: int,
    *,
    workers: int = 1,
    cache=None,
    window_power: int = 1,
) -> MaxIndexRow:
    """I(n) and the full set of words attaining it."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    reports = _index_reports(seq, n, workers, cache, window_power)
    top = max(r.index for r in reports)
    extremal = tuple(r.u for r in reports if r.index == top)
    logger.info(f"I({n}) = {top} for q={seq.q}, {len(extremal)} extremal words")
    return MaxIndexRow(n=n, I=top, extremal_words=extremal, reports=reports)


def arithmetical_complexity(
    seq: GtmSequence,
    n: int,
    *,
    workers: int = 1,
    cache=None,
    window_power: int = 1,
) -> int:
    """
    Number of words of length n that occur as arithmetic factors.

    Every word is located explicitly; a failed re-verification propagates.
    """
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")

    def occurs(u: Word) -> bool:
        min_difference(seq, u, cache=cache, window_power=window_power)
        return True

    words = list(all_words(seq.q, n))
    if workers <= 1:
        return sum(occurs(u) for u in words)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return sum(executor.map(occurs, words))


# =============================================================================
# Complexity counts
# =============================================================================

def _count_distinct_rows(rows: np.ndarray) -> int:
    if rows.shape[0] == 0:
        return 0
    return int(np.unique(rows, axis=0).shape[0])


def factor_complexity(seq: GtmSequence, m: int, *, max_length: int = 1 << 24) -> int:
    """p(m): distinct factors of length m, counted on doubling prefixes until stable."""
    if m < 1:
        raise InvalidInputError(f"m must be positive, got {m}")
    length = seq.q * m
    counts: List[int] = []
    while True:
        windows = sliding_window_view(seq.prefix(length), m)
        counts.append(_count_distinct_rows(windows))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            return counts[-1]
        if length >= max_length:
            logger.warning(f"p({m}) not stable below prefix length {max_length}")
            return counts[-1]
        length *= 2


def arithmetic_factor_set(
    seq: GtmSequence,
    d: int,
    m: int,
    *,
    window_power: int = 1,
) -> FrozenSet[Word]:
    """The exact set A(d) ∩ Sigma_q^m, enumerated through the two-scale reduction."""
    _check_difference(d)
    if m < 1:
        raise InvalidInputError(f"m must be positive, got {m}")
    q = seq.q
    span = (m - 1) * d
    Q = window_size(q, m, d, window_power)
    W = seq.prefix(Q).astype(np.int64)

    # Rows are normalised so the first symbol is 0; the shifts are added back at the end.
    R = Q - span
    idx = np.arange(R, dtype=np.int64)[:, None] + d * np.arange(m, dtype=np.int64)[None, :]
    rows = W[idx]
    blocks = [(rows - rows[:, :1]) % q]
    if span > 0:
        _, lower, sym = _crossing_layout(W, q, Q, d, m)
        head = (sym - sym[:, :1]) % q
        for e in range(q):
            blocks.append(np.where(lower, head, (sym + e) % q))
    canonical = np.unique(np.concatenate(blocks, axis=0), axis=0)
    return frozenset(
        tuple(int((s + a) % q) for s in row)
        for row in canonical
        for a in range(q)
    )


def arithmetic_factor_count(seq: GtmSequence, d: int, m: int, *, window_power: int = 1) -> int:
    """A(d, m) = |A(d) ∩ Sigma_q^m|."""
    return len(arithmetic_factor_set(seq, d, m, window_power=window_power))
