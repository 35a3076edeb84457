"""
Configuration management for arithmetic index experiments.

Handles:
- Search tuning (window scale, witness search caps, oracle scan limit, workers)
- Experiment-wide settings (alphabet size, cache location, export format)
- Validated CLI parameters
- YAML persistence
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from .core import InvalidInputError, PrimeBase, parse_word, parse_word_csv


class ExportFormat(Enum):
    """Output formats for experiment reports."""
    CSV = "csv"
    JSON = "json"


def _check_prime(q: int) -> int:
    try:
        PrimeBase(q)
    except InvalidInputError as e:
        raise ValueError(str(e)) from e
    return q


class SearchSettings(BaseModel):
    """Knobs for the occurrence search and the witness constructions."""
    window_power: int = Field(
        default=1, ge=1,
        description="Window Q = q^(window_power * t) with q^t >= |u| * d",
    )
    z_cap: Optional[int] = Field(
        default=None, ge=1,
        description="Upper limit for z in run and basis witness searches (default q^(q+2))",
    )
    scan_limit: int = Field(
        default=10 ** 6, ge=0,
        description="Largest start the prefix oracle checks when cross-checking `index` results",
    )
    workers: int = Field(default=1, ge=1, description="Thread pool size for sweeps")


class ExperimentConfig(BaseModel):
    """Everything an ExperimentRunner needs besides the experiment parameters."""
    q: int = Field(default=2, description="Alphabet size (prime)")
    search: SearchSettings = Field(default_factory=SearchSettings)
    cache_path: Optional[Path] = Field(default=None, description="ResultCache file")
    output_format: ExportFormat = Field(default=ExportFormat.CSV)

    @field_validator("q")
    @classmethod
    def q_is_prime(cls, v: int) -> int:
        return _check_prime(v)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "search": self.search.model_dump(),
            "cache_path": str(self.cache_path) if self.cache_path else None,
            "output_format": self.output_format.value,
        }

    def save(self, path: Path):
        """Save configuration to YAML file."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False)

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """Load configuration from YAML file."""
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        return cls.model_validate(data)


class CliConfig(BaseModel):
    """Parameters of one CLI invocation, validated before any work or output happens."""
    q: int
    n: Optional[int] = Field(default=None, ge=1)
    n_max: Optional[int] = Field(default=None, ge=1)
    length: Optional[int] = Field(default=None, ge=1)
    word: Optional[str] = None
    word_csv: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    out: Optional[Path] = None
    format: ExportFormat = ExportFormat.CSV
    cache: Optional[Path] = None
    c_budget: Optional[int] = Field(default=None, ge=0)
    z_cap: Optional[int] = Field(default=None, ge=1)

    @field_validator("q")
    @classmethod
    def q_is_prime(cls, v: int) -> int:
        return _check_prime(v)

    @model_validator(mode="after")
    def word_over_alphabet(self) -> "CliConfig":
        base = PrimeBase(self.q)
        try:
            if self.word is not None:
                parse_word(self.word, base)
            if self.word_csv is not None:
                parse_word_csv(self.word_csv, base)
        except InvalidInputError as e:
            raise ValueError(str(e)) from e
        return self

    def parsed_word(self):
        base = PrimeBase(self.q)
        if self.word_csv is not None:
            return parse_word_csv(self.word_csv, base)
        if self.word is not None:
            return parse_word(self.word, base)
        raise InvalidInputError("one of --word or --word-csv is required")
