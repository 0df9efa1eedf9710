"""The algorithm roster. Importing this package registers every algorithm."""
from natcomp.algorithms import attraction, baselines, clustered, evolutionary, movers, samplers  # noqa: F401
from natcomp.algorithms.base import (
    REGISTRY,
    ROSTER,
    Algorithm,
    AlgorithmState,
    Params,
    algorithm_class,
    default_params,
    make_algorithm,
    step,
)

missing = set(ROSTER) - set(REGISTRY)
assert not missing, f"unregistered roster ids: {sorted(missing)}"
del missing

__all__ = ["REGISTRY", "ROSTER", "Algorithm", "AlgorithmState", "Params", "algorithm_class",
           "default_params", "make_algorithm", "step"]
