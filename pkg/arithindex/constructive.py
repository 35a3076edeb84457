"""
Closed-form values and explicit constructions for arithmetic factors of omega_q.

Handles:
- Theorem values for the longest monochromatic progression
- Long-run witnesses at d = q^n - 1 (both the maximal run and the x-parametrised family)
- Zero runs followed by a nonzero symbol, and the triangular basis they span
- Embedding of an arbitrary word as a concatenation of basis witnesses
- Upper and lower bounds on the arithmetic index
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .core import (
    GtmSequence,
    InvalidInputError,
    PrimeBase,
    Word,
    base_q_expansion,
    ceil_log,
    expansion_length,
    format_word,
    from_digits,
)
from .search import Occurrence, RunReport, run_length_at

logger = logging.getLogger(__name__)


class ConstructionError(RuntimeError):
    """A bounded witness search ran out of candidates."""


class EmbeddingVerificationError(ConstructionError):
    """The assembled (c_u, d_u) does not reproduce the word, even after widening the blocks."""


def default_z_cap(q: int) -> int:
    return q ** (q + 2)


# =============================================================================
# Data Classes
# =============================================================================

@dataclass(frozen=True)
class WitnessDecomposition:
    """c = z*q^(2n) + y*q^n + x, with x, y < q^n."""
    z: int
    y: int
    x: int
    n: int

    def value(self, q: int) -> int:
        scale = q ** self.n
        if not (0 <= self.x < scale and 0 <= self.y < scale):
            raise InvalidInputError(f"x={self.x}, y={self.y} must lie in [0, {scale})")
        return self.z * scale * scale + self.y * scale + self.x


@dataclass(frozen=True)
class Basis:
    """Triangular factors b_i = 0^(m-i) beta_1 ... beta_i read at c_i = c_1 + (i-1)d."""
    n: int
    d: int
    run: Occurrence
    run_length: int
    starts: Tuple[int, ...]
    vectors: Tuple[Word, ...]
    betas: Word


@dataclass
class EmbeddingResult:
    """An explicit occurrence (c_u, d_u) of u built from the basis."""
    q: int
    u: Word
    n: int
    d: int
    base_c: int
    betas: Word
    basis: List[Word]
    alphas: List[int]
    c_u: int
    d_u: int
    block_length: int = 0
    verified: bool = False

    @property
    def index(self) -> int:
        return expansion_length(self.d_u, PrimeBase(self.q))

    def to_dict(self) -> Dict[str, Any]:
        base = PrimeBase(self.q)
        return {
            "q": self.q,
            "word": format_word(self.u, base),
            "n": self.n,
            "d": self.d,
            "base_c": str(self.base_c),
            "betas": format_word(self.betas, base),
            "alphas": list(self.alphas),
            "block_length": self.block_length,
            "c_u": str(self.c_u),
            "d_u": str(self.d_u),
            "c_u_digits": str(base_q_expansion(self.c_u, base)),
            "d_u_digits": str(base_q_expansion(self.d_u, base)),
            "index": self.index,
            "upper_bound": upper_bound_index(base, len(self.u)),
            "verified": self.verified,
        }


@dataclass(frozen=True)
class BoundsRow:
    """Index bounds for words of length m."""
    m: int
    upper: int
    lower: int
    C: int
    lower_tm: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "upper": self.upper,
            "lower": self.lower,
            "C": self.C,
            "lower_tm": None if self.lower_tm is None else str(self.lower_tm),
        }


# =============================================================================
# Theorem values and run witnesses
# =============================================================================

def theorem_max_run(q: PrimeBase, n: int) -> int:
    """Longest monochromatic progression over all d < q^n."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    if n % q.q == 0:
        return q.q ** n + 2 * q.q
    return q.q ** n


def lemma2_witness(q: PrimeBase, n: int, *, z_cap: Optional[int] = None) -> Occurrence:
    """
    A run of length q^n + 2q with d = q^n - 1, which exists exactly when q | n.

    c = z*q^(2n) + (q^n - (q-1))*q^n + (q-1) for the least z that realises it.
    """
    qq = q.q
    if n < 1 or n % qq:
        raise InvalidInputError(f"n must be a positive multiple of q={qq}, got {n}")
    seq = GtmSequence(q)
    d = qq ** n - 1
    target = theorem_max_run(q, n)
    cap = z_cap if z_cap is not None else default_z_cap(qq)
    for z in range(cap):
        c = WitnessDecomposition(z=z, y=qq ** n - (qq - 1), x=qq - 1, n=n).value(qq)
        if run_length_at(seq, c, d) == target:
            logger.debug(f"maximal run for q={qq}, n={n} at z={z}")
            return Occurrence(c=c, d=d)
    raise ConstructionError(f"no run of length {target} for q={qq}, n={n} with z < {cap}")


def decomposed_run_length(q: PrimeBase, n: int, x: int) -> int:
    """Best run over z for c = z*q^(2n) + y*q^n + x with x + y = q^n - 1."""
    if not 0 <= x < q.q ** n:
        raise InvalidInputError(f"x must lie in [0, {q.q ** n}), got {x}")
    if n % q.q == 0:
        return x + q.q + 1
    return x + 1


def decomposed_run_witness(
    seq: GtmSequence,
    n: int,
    x: int,
    *,
    z_cap: Optional[int] = None,
) -> RunReport:
    """Longest run among starts z*q^(2n) + (q^n - 1 - x)*q^n + x, z < z_cap."""
    q = seq.q
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    if not 0 <= x < q ** n:
        raise InvalidInputError(f"x must lie in [0, {q ** n}), got {x}")
    d = q ** n - 1
    cap = z_cap if z_cap is not None else default_z_cap(q)
    best: Optional[RunReport] = None
    for z in range(cap):
        c = WitnessDecomposition(z=z, y=d - x, x=x, n=n).value(q)
        length = run_length_at(seq, c, d)
        if best is None or length > best.length:
            best = RunReport(d=d, length=length, witness_c=c)
    if best is None:
        raise ConstructionError(f"z_cap must be positive, got {cap}")
    return best


def base_zero_run(seq: GtmSequence, n: int, *, z_cap: Optional[int] = None) -> Occurrence:
    """
    Start of a run of at least q^n zeros with d = q^n - 1, ended by a nonzero symbol.

    Candidates are c = z*q^(2n) + (q^n - 1), scanned upward in z.
    """
    q = seq.q
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    d = q ** n - 1
    cap = z_cap if z_cap is not None else default_z_cap(q)
    for z in range(cap):
        c = WitnessDecomposition(z=z, y=0, x=d, n=n).value(q)
        if seq.symbol_at(c) != 0:
            continue
        if run_length_at(seq, c, d) >= q ** n:
            return Occurrence(c=c, d=d)
    raise ConstructionError(f"no zero run of length {q ** n} for q={q}, n={n} with z < {cap}")


def embedding_exponent(q: int, m: int) -> int:
    """n with q^(n-1) < m <= q^n, never below 1."""
    return max(1, ceil_log(m, q))


def build_basis(seq: GtmSequence, m: int, *, z_cap: Optional[int] = None) -> Basis:
    """Read the triangular basis off the tail of a zero run."""
    if m < 1:
        raise InvalidInputError(f"m must be positive, got {m}")
    q = seq.q
    n = embedding_exponent(q, m)
    run = base_zero_run(seq, n, z_cap=z_cap)
    d = run.d
    length = run_length_at(seq, run.c, d)
    c_1 = run.c + (length - (m - 1)) * d
    starts = tuple(c_1 + i * d for i in range(m))
    vectors = tuple(seq.arithmetic_slice(c, d, m) for c in starts)
    betas = vectors[-1]

    for i, b in enumerate(vectors, start=1):
        if b != (0,) * (m - i) + betas[:i]:
            raise ConstructionError(f"basis vector b_{i}={b} is not triangular")
    if betas[0] == 0:
        raise ConstructionError("zero run is not followed by a nonzero symbol")
    return Basis(
        n=n, d=d, run=run, run_length=length,
        starts=starts, vectors=vectors, betas=betas,
    )


def solve_coefficients(
    u: Sequence[int],
    basis: Sequence[Sequence[int]],
    betas: Sequence[int],
    q: PrimeBase,
) -> List[int]:
    """
    Unique alpha with u = sum_i alpha_i * b_i (mod q).

    Row k involves alpha_(m-k+1) * beta_1 plus already-known higher coefficients.
    """
    u = q.check_word(u)
    m = len(u)
    if len(basis) != m or len(betas) != m:
        raise InvalidInputError(f"basis of size {len(basis)} does not match word length {m}")
    if betas[0] % q.q == 0:
        raise InvalidInputError("basis is degenerate: beta_1 = 0")
    inverse = pow(betas[0], -1, q.q)
    alphas = [0] * (m + 1)  # 1-indexed
    for k in range(1, m + 1):
        known = sum(alphas[i] * betas[k - m + i - 1] for i in range(m - k + 2, m + 1))
        alphas[m - k + 1] = ((u[k - 1] - known) * inverse) % q.q
    alphas = alphas[1:]

    combined = tuple(
        sum(a * b[k] for a, b in zip(alphas, basis)) % q.q for k in range(m)
    )
    if combined != u:
        raise ConstructionError(f"coefficients {alphas} do not reproduce {format_word(u, q)}")
    return alphas


def _assemble(starts: Sequence[int], alphas: Sequence[int], d: int, width: int, q: PrimeBase):
    c_digits: List[int] = []
    d_digits: List[int] = []
    d_block = base_q_expansion(d, q).padded(width)
    for c_i, alpha in zip(starts, alphas):
        block = base_q_expansion(c_i, q).padded(width)
        for _ in range(alpha):
            c_digits.extend(block)
            d_digits.extend(d_block)
    return from_digits(c_digits, q), from_digits(d_digits, q)


def construct_embedding(
    seq: GtmSequence,
    u: Sequence[int],
    *,
    z_cap: Optional[int] = None,
) -> EmbeddingResult:
    """Build and verify (c_u, d_u) with arithmetic_slice(c_u, d_u, |u|) = u."""
    base = seq.base
    u = base.check_word(u)
    if not u:
        raise InvalidInputError("word must not be empty")
    q = seq.q
    m = len(u)
    basis = build_basis(seq, m, z_cap=z_cap)
    n, d = basis.n, basis.d

    def result(alphas, c_u, d_u, width) -> EmbeddingResult:
        return EmbeddingResult(
            q=q, u=u, n=n, d=d, base_c=basis.starts[0], betas=basis.betas,
            basis=list(basis.vectors), alphas=list(alphas),
            c_u=c_u, d_u=d_u, block_length=width, verified=True,
        )

    if not any(u):
        # The zero run itself is an occurrence.
        if seq.arithmetic_slice(basis.run.c, d, m) != u:
            raise EmbeddingVerificationError(f"zero run at c={basis.run.c} is shorter than {m}")
        return result([0] * m, basis.run.c, d, 0)

    alphas = solve_coefficients(u, basis.vectors, basis.betas, base)
    top = basis.starts[-1] + (m - 1) * d
    width = max(2 * n + q, expansion_length(top, base))
    for attempt in (width, width + n):
        c_u, d_u = _assemble(basis.starts, alphas, d, attempt, base)
        if seq.arithmetic_slice(c_u, d_u, m) == u:
            logger.debug(f"embedded {format_word(u, base)} with block length {attempt}")
            return result(alphas, c_u, d_u, attempt)
        logger.warning(f"carry leak embedding {format_word(u, base)} at block length {attempt}")
    raise EmbeddingVerificationError(
        f"embedding of {format_word(u, base)} failed verification at block lengths "
        f"{width} and {width + n}"
    )


# =============================================================================
# Bounds
# =============================================================================

def upper_bound_index(q: PrimeBase, m: int) -> int:
    """(2*ceil(log_q m) + q) * (q - 1) * m."""
    if m < 1:
        raise InvalidInputError(f"m must be positive, got {m}")
    return (2 * ceil_log(m, q.q) + q.q) * (q.q - 1) * m


def _lower_holds(q: int, m: int, C: int, k: int) -> bool:
    # q^(2k) * C * m >= 2 * q^m, evaluated in integers for either sign of k.
    if k >= 0:
        return q ** (2 * k) * C * m >= 2 * q ** m
    return C * m >= 2 * q ** m * q ** (-2 * k)


def lower_bound_index(q: PrimeBase, m: int, C: int) -> int:
    """ceil(log_q(2*q^m / (C*m)) / 2), the least integer k with q^(2k) >= 2q^m / (Cm)."""
    if m < 1 or C < 1:
        raise InvalidInputError(f"m and C must be positive, got m={m}, C={C}")
    k = 0
    if _lower_holds(q.q, m, C, k):
        while _lower_holds(q.q, m, C, k - 1):
            k -= 1
    else:
        while not _lower_holds(q.q, m, C, k):
            k += 1
    return k


def lower_bound_tm(m: int) -> Fraction:
    """(m - log_2 m - 1) / 2 with log_2 m rounded up."""
    if m < 1:
        raise InvalidInputError(f"m must be positive, got {m}")
    return Fraction(m - ceil_log(m, 2) - 1, 2)


def bounds_row(q: PrimeBase, m: int, C: int) -> BoundsRow:
    return BoundsRow(
        m=m,
        upper=upper_bound_index(q, m),
        lower=lower_bound_index(q, m, C),
        C=C,
        lower_tm=lower_bound_tm(m) if q.q == 2 else None,
    )
