"""
Core arithmetic for the generalized Thue-Morse word.

Handles:
- Prime alphabet sizes and symbol validation
- Base-q expansions of arbitrarily large integers
- Lazy, index-addressable evaluation of omega_q by digit sums
- Morphic prefix materialisation (numpy) for scanning code
- Word parsing, formatting and constant shifts
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


# A word is an immutable tuple of symbols in [0, q).
Word = Tuple[int, ...]


class InvalidInputError(ValueError):
    """Raised for a non-prime base, an out-of-range symbol, d = 0 or an empty word."""


def is_prime(q: int) -> bool:
    """Deterministic trial division; q is tiny in every planned experiment."""
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeBase:
    """Alphabet size q of omega_q; the alphabet is {0, ..., q-1}."""
    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise InvalidInputError(f"q must be a prime number, got {self.q!r}")

    @property
    def alphabet(self) -> range:
        return range(self.q)

    def check_symbol(self, value: int) -> int:
        if not 0 <= value < self.q:
            raise InvalidInputError(f"symbol {value} is outside [0, {self.q})")
        return value

    def check_word(self, symbols: Iterable[int]) -> Word:
        return tuple(self.check_symbol(int(s)) for s in symbols)


@dataclass(frozen=True)
class DigitString:
    """Base-q digits, most significant first. "0" is the only string with a leading zero."""
    digits: Tuple[int, ...]
    base: PrimeBase

    def __post_init__(self):
        if not self.digits:
            raise InvalidInputError("a digit string needs at least one digit")
        if len(self.digits) > 1 and self.digits[0] == 0:
            raise InvalidInputError("digit string has a leading zero")
        for digit in self.digits:
            self.base.check_symbol(digit)

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return format_word(self.digits, self.base)

    def padded(self, width: int) -> Tuple[int, ...]:
        """Digits left-padded with zeros to `width` (never truncated)."""
        return (0,) * max(0, width - len(self.digits)) + self.digits

    def to_int(self) -> int:
        return from_digits(self, self.base)


def digit_sum(x: int, base: PrimeBase) -> int:
    """s_q(x): sum of the base-q digits of x, modulo q."""
    if x < 0:
        raise InvalidInputError(f"x must be non-negative, got {x}")
    q = base.q
    total = 0
    while x:
        x, r = divmod(x, q)
        total += r
    return total % q


def base_q_expansion(x: int, base: PrimeBase) -> DigitString:
    """S_q(x) as a DigitString; works for integers of any size."""
    if x < 0:
        raise InvalidInputError(f"x must be non-negative, got {x}")
    if x == 0:
        return DigitString((0,), base)
    q = base.q
    digits: List[int] = []
    while x:
        x, r = divmod(x, q)
        digits.append(r)
    digits.reverse()
    return DigitString(tuple(digits), base)


def from_digits(d: "DigitString | Sequence[int]", base: PrimeBase) -> int:
    """Inverse of base_q_expansion. Accepts a DigitString or a plain digit sequence."""
    digits = d.digits if isinstance(d, DigitString) else tuple(d)
    value = 0
    q = base.q
    for digit in digits:
        base.check_symbol(digit)
        value = value * q + digit
    return value


def expansion_length(x: int, base: PrimeBase) -> int:
    """|S_q(x)|, i.e. floor(log_q x) + 1 for x >= 1."""
    if x <= 0:
        return 1
    length = 0
    while x:
        x //= base.q
        length += 1
    return length


def ceil_log(m: int, q: int) -> int:
    """Exact ceil(log_q m) for m >= 1, with ceil(log_q 1) = 0."""
    if m < 1:
        raise InvalidInputError(f"m must be positive, got {m}")
    k, power = 0, 1
    while power < m:
        power *= q
        k += 1
    return k


# =============================================================================
# Words
# =============================================================================

def parse_word(text: str, base: PrimeBase) -> Word:
    """Parse a contiguous digit string such as "0121"."""
    text = text.strip()
    if not text:
        raise InvalidInputError("word must not be empty")
    if not text.isdigit():
        raise InvalidInputError(f"word {text!r} must consist of decimal digits")
    return base.check_word(int(ch) for ch in text)


def parse_word_csv(text: str, base: PrimeBase) -> Word:
    """Parse comma-separated symbols such as "10,0,12" (needed once q >= 11)."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise InvalidInputError("word must not be empty")
    try:
        return base.check_word(int(p) for p in parts)
    except ValueError as e:
        if isinstance(e, InvalidInputError):
            raise
        raise InvalidInputError(f"bad symbol list {text!r}: {e}") from e


def format_word(word: Sequence[int], base: PrimeBase) -> str:
    if base.q <= 10:
        return "".join(str(s) for s in word)
    return ",".join(str(s) for s in word)


def shift_word(u: Sequence[int], a: int, base: PrimeBase) -> Word:
    """u ⊕ a: add the constant a to every symbol modulo q."""
    return tuple((s + a) % base.q for s in u)


def morphic_image(word: Sequence[int], base: PrimeBase) -> Word:
    """Apply the substitution a -> a, a+1, ..., a+q-1 (mod q) once."""
    q = base.q
    return tuple((s + j) % q for s in word for j in range(q))


def alternating_word(n: int, base: PrimeBase, a: int = 0, b: int = 1) -> Word:
    """The period-2 word abab... of length n."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    base.check_symbol(a)
    base.check_symbol(b)
    return tuple(a if i % 2 == 0 else b for i in range(n))


# =============================================================================
# The generalized Thue-Morse word
# =============================================================================

def _symbol_dtype(q: int):
    return np.int16 if q < 2 ** 14 else np.int64


@lru_cache(maxsize=64)
def _morphic_prefix(q: int, k: int) -> np.ndarray:
    """Prefix of omega_q of length q**k, as a read-only array."""
    if k == 0:
        prefix = np.zeros(1, dtype=_symbol_dtype(q))
    else:
        block = _morphic_prefix(q, k - 1)
        prefix = np.concatenate([(block + j) % q for j in range(q)]).astype(block.dtype)
    prefix.flags.writeable = False
    return prefix


@dataclass(frozen=True)
class GtmSequence:
    """
    The infinite word omega_q = w_0 w_1 w_2 ... with w_i = s_q(i).

    Symbols are computed on demand from digit sums; nothing is stored except
    memoised prefixes requested explicitly through `prefix()`.
    """
    base: PrimeBase

    @classmethod
    def of(cls, q: int) -> "GtmSequence":
        return cls(PrimeBase(q))

    @property
    def q(self) -> int:
        return self.base.q

    def symbol_at(self, i: int) -> int:
        if i < 0:
            raise InvalidInputError(f"index must be non-negative, got {i}")
        return digit_sum(i, self.base)

    def arithmetic_slice(self, c: int, d: int, m: int) -> Word:
        """w_c w_{c+d} ... w_{c+(m-1)d}."""
        if d < 1:
            raise InvalidInputError(f"difference must be positive, got {d}")
        if m < 1:
            raise InvalidInputError(f"length must be positive, got {m}")
        if c < 0:
            raise InvalidInputError(f"initial number must be non-negative, got {c}")
        return tuple(digit_sum(c + k * d, self.base) for k in range(m))

    def prefix(self, length: int) -> np.ndarray:
        """First `length` symbols as a read-only numpy array."""
        if length < 0:
            raise InvalidInputError(f"length must be non-negative, got {length}")
        k = ceil_log(max(length, 1), self.q)
        return _morphic_prefix(self.q, k)[:length]

    def prefix_word(self, length: int) -> Word:
        return tuple(int(s) for s in self.prefix(length))
