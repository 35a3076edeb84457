"""
Persistent cache of minimal differences.

Handles:
- Loading a tab-separated cache file and re-verifying every entry
- Thread-safe lookups and inserts during parallel sweeps
- Batched, sorted, atomic writes
- Cache statistics
"""

import logging
import os
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .core import (
    GtmSequence,
    InvalidInputError,
    PrimeBase,
    Word,
    format_word,
    parse_word,
    parse_word_csv,
)

logger = logging.getLogger(__name__)


class CacheError(RuntimeError):
    """Malformed or non-verifying cache file."""


@dataclass(frozen=True)
class CacheEntry:
    """One cached minimal difference: u occurs at c with difference d_min."""
    q: int
    word: Word
    d_min: int
    c: int

    def to_line(self) -> str:
        return f"{self.q}\t{format_word(self.word, PrimeBase(self.q))}\t{self.d_min}\t{self.c}\n"

    @classmethod
    def from_line(cls, line: str) -> "CacheEntry":
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 4:
            raise ValueError(f"expected 4 tab-separated fields, got {len(fields)}")
        q = int(fields[0])
        base = PrimeBase(q)
        word = parse_word_csv(fields[1], base) if q > 10 else parse_word(fields[1], base)
        return cls(q=q, word=word, d_min=int(fields[2]), c=int(fields[3]))


class ResultCache:
    """
    (q, word) -> (d_min, c), backed by a flat text file.

    Entries are only ever added by min_difference, so a hit returns exactly what a
    cold computation would. Nothing is written until save().
    """

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else None
        self._entries: Dict[Tuple[int, Word], CacheEntry] = {}
        self._lock = threading.Lock()
        self._dirty = False
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        try:
            lines = self.path.read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise CacheError(f"cannot read cache {self.path}: {e}") from e

        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                entry = CacheEntry.from_line(line)
            except ValueError as e:
                raise CacheError(f"{self.path}:{lineno}: malformed entry: {e}") from e
            seq = GtmSequence.of(entry.q)
            try:
                ok = entry.d_min >= 1 and seq.arithmetic_slice(entry.c, entry.d_min, len(entry.word)) == entry.word
            except InvalidInputError:
                ok = False
            if not ok:
                raise CacheError(
                    f"{self.path}:{lineno}: entry {entry.word} does not occur at "
                    f"c={entry.c}, d={entry.d_min}"
                )
            self._entries[(entry.q, entry.word)] = entry
        logger.info(f"Loaded {len(self._entries)} cache entries from {self.path}")

    def get(self, q: int, word: Sequence[int]) -> Optional[Tuple[int, int]]:
        with self._lock:
            entry = self._entries.get((q, tuple(word)))
            if entry is None:
                self.misses += 1
                return None
            self.hits += 1
            return entry.d_min, entry.c

    def put(self, q: int, word: Sequence[int], d_min: int, c: int):
        with self._lock:
            self._entries[(q, tuple(word))] = CacheEntry(q=q, word=tuple(word), d_min=d_min, c=c)
            self._dirty = True

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> List[CacheEntry]:
        with self._lock:
            return sorted(self._entries.values(), key=lambda e: (e.q, len(e.word), e.word))

    def save(self) -> bool:
        """Write all entries, sorted, replacing the file atomically."""
        if self.path is None or not self._dirty:
            return False
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=f".{self.path.name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                for entry in self.entries():
                    f.write(entry.to_line())
            os.replace(tmp, self.path)
        except OSError as e:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise CacheError(f"cannot write cache {self.path}: {e}") from e
        self._dirty = False
        logger.info(f"Saved {len(self._entries)} cache entries to {self.path}")
        return True

    def stats(self) -> Dict[str, Any]:
        """Entry counts per q and per word length, plus hit/miss counters."""
        by_q: Dict[int, Dict[str, Any]] = {}
        for entry in self.entries():
            bucket = by_q.setdefault(entry.q, {"count": 0, "by_length": {}, "max_d_min": 0})
            bucket["count"] += 1
            length = len(entry.word)
            bucket["by_length"][length] = bucket["by_length"].get(length, 0) + 1
            bucket["max_d_min"] = max(bucket["max_d_min"], entry.d_min)
        return {
            "path": str(self.path) if self.path else None,
            "total_entries": len(self._entries),
            "hits": self.hits,
            "misses": self.misses,
            "by_q": by_q,
        }
