"""Evolving binary linear codes with rank-preserving evolutionary strategies."""

__version__ = "0.1.0"

from .codes import (
    LinearCode,
    ProblemInstance,
    fitness,
    min_distance_bruteforce,
    optimal_fitness,
    validate_instance,
    weight_enumerator,
)
from .es import EsConfig, RunResult, run
from .gf2 import BinMatrix, GeneratorMatrix, gaussian_binomial, random_full_rank, span, subspace_distance

__all__ = [
    "BinMatrix",
    "EsConfig",
    "GeneratorMatrix",
    "LinearCode",
    "ProblemInstance",
    "RunResult",
    "fitness",
    "gaussian_binomial",
    "min_distance_bruteforce",
    "optimal_fitness",
    "random_full_rank",
    "run",
    "span",
    "subspace_distance",
    "validate_instance",
    "weight_enumerator",
]
