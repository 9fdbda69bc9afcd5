"""Exact intersection density of transitive permutation groups."""
from .cliquesolver import CliqueResult, max_clique
from .constructions import build
from .density import DensityReport, intersection_density, is_intersecting
from .permgroup import FiniteGroup, compose, enumerate_group, inverse

__all__ = [
    "CliqueResult",
    "DensityReport",
    "FiniteGroup",
    "build",
    "compose",
    "enumerate_group",
    "intersection_density",
    "inverse",
    "is_intersecting",
    "max_clique",
]
