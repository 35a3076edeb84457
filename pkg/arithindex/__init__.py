"""
Arithmetic Index Toolkit
========================

Arithmetic factors, runs and arithmetic indices of the generalized
Thue-Morse word omega_q (w_i = digit sum of i in base q, mod q).

Features:
- Exact, complete occurrence search for words along arithmetic progressions
- Longest monochromatic progressions and their closed-form maximum
- Minimal differences, arithmetic index tables and the alternating-word probe
- Explicit embeddings (c_u, d_u) of arbitrary words with index bounds
- Reproducible CSV/JSON exports and a persistent result cache

License: MIT
"""

__version__ = "1.0.0"

from .cache import ResultCache
from .config import ExperimentConfig, ExportFormat, SearchSettings
from .constructive import (
    construct_embedding,
    lemma2_witness,
    lower_bound_index,
    theorem_max_run,
    upper_bound_index,
)
from .core import GtmSequence, InvalidInputError, PrimeBase
from .experiments import ExperimentRunner, conjecture_probe, index_table, verify_theorem
from .search import (
    max_run_length,
    min_difference,
    occurs_prefix_oracle,
    occurs_with_difference,
)

__all__ = [
    "GtmSequence",
    "PrimeBase",
    "InvalidInputError",
    "occurs_with_difference",
    "occurs_prefix_oracle",
    "max_run_length",
    "min_difference",
    "theorem_max_run",
    "lemma2_witness",
    "construct_embedding",
    "upper_bound_index",
    "lower_bound_index",
    "verify_theorem",
    "index_table",
    "conjecture_probe",
    "ExperimentRunner",
    "ExperimentConfig",
    "SearchSettings",
    "ExportFormat",
    "ResultCache",
]
